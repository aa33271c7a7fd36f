"""Decide whether the spectral radius of a real matrix is a simple, dominant eigenvalue."""

from .coxeter import (
    CoxeterDatum,
    CoxeterReport,
    analyze_element,
    bilinear_form,
    evaluate_word,
    form_signature,
    generator_matrix,
    parse_word,
)
from .criterion import (
    AnalysisConfig,
    PositivityStatus,
    Verdict,
    VerdictKind,
    analyze,
    build_conjugate,
    condition_vi_check,
    conjugate_matrix,
    eventual_positivity,
    stochastic_check,
)
from .fileio import load_datum, load_matrix, render_report
from .matrix import Signature, exact, floating, mat_pow
from .spectral import (
    ProbeStatus,
    char_poly,
    dominant_eigenpair,
    normalize_pair,
    semisimplicity_probe,
    verify_eigendata,
)

__version__ = "0.1.0"
