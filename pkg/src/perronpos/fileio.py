"""JSON file formats and report rendering.

Matrix file::

    {"n": 2, "mode": "exact",
     "entries": [["-11", "14"], ["-26", "29"]],
     "eigendata": {"lambda": "15", "v": ["7/20", "13/20"], "u": ["-10/3", "10/3"]}}

Coxeter datum file (``"inf"`` marks an infinite bond, ``c`` may be omitted
for the classical form)::

    {"n": 3,
     "m": [[1, "inf", "inf"], ["inf", 1, "inf"], ["inf", "inf", 1]],
     "c": [[null, "2", "2"], ["2", null, "2"], ["2", "2", null]]}

Rationals are written as strings ``"p/q"``; floats are rounded to 12
significant digits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import matrix as mx
from .coxeter import CoxeterDatum, CoxeterReport, DatumError
from .criterion import Verdict, VerdictKind
from .spectral import verify_eigendata

SCHEMA_VERSION = "1.0"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NEGATIVE = 2
EXIT_INCONCLUSIVE = 3

EXIT_CODES = {
    VerdictKind.SIMPLE_DOMINANT: EXIT_OK,
    VerdictKind.NOT_SIMPLE_DOMINANT_CERTIFIED: EXIT_NEGATIVE,
    VerdictKind.MULTIPLICITY_AT_LEAST_TWO: EXIT_NEGATIVE,
    VerdictKind.SEMISIMPLE_DOMINANT: EXIT_NEGATIVE,
    VerdictKind.WEAK_PERRON: EXIT_INCONCLUSIVE,
    VerdictKind.NO_REAL_DOMINANT_CANDIDATE: EXIT_INCONCLUSIVE,
    VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class InputError(ValueError):
    pass


def exit_code(kind: VerdictKind) -> int:
    return EXIT_CODES[kind]


# --- parsing ----------------------------------------------------------------

@dataclass
class MatrixFile:
    a: np.ndarray
    mode: str
    eigendata: tuple | None = None


def _load_json(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{source} is not valid JSON: {exc}") from exc


def parse_scalar(x, exact: bool):
    try:
        if exact:
            if isinstance(x, float):
                # a JSON number in exact mode is read as the decimal it spells
                return Fraction(repr(x))
            return mx.to_fraction(x)
        if isinstance(x, str):
            return float(mx.to_fraction(x))
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise TypeError
        return float(x)
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid matrix entry {x!r}") from exc


def _matrix_from(rows, exact: bool) -> np.ndarray:
    values = [[parse_scalar(x, exact) for x in row] for row in rows]
    return mx.exact(values) if exact else np.array(values, dtype=float)


def load_matrix(source, mode: str | None = None, tol: float = 1e-9) -> MatrixFile:
    """Read a matrix file; ``mode`` overrides the file's own declaration.

    An exact file may be run in float mode, not the other way round.
    """
    data = _load_json(source)
    declared = data.get("mode", "exact")
    if declared not in ("exact", "float"):
        raise InputError(f"unknown mode {declared!r}")
    mode = mode or declared
    if mode == "exact" and declared == "float":
        raise InputError("a float matrix file cannot be analysed in exact mode")
    entries = data.get("entries")
    if not isinstance(entries, list) or not entries:
        raise InputError("'entries' must be a nonempty list of rows")
    n = data.get("n", len(entries))
    if len(entries) != n or any(not isinstance(r, list) or len(r) != n for r in entries):
        raise InputError(f"'entries' is not an {n}x{n} matrix")
    exact = mode == "exact"
    a = _matrix_from(entries, exact)

    eig = data.get("eigendata")
    eigendata = None
    if eig is not None:
        try:
            lam = parse_scalar(eig["lambda"], exact)
            v = _matrix_from([eig["v"]], exact).T
            u = _matrix_from([eig["u"]], exact) if eig.get("u") is not None else None
        except (KeyError, TypeError) as exc:
            raise InputError("eigendata needs 'lambda' and 'v'") from exc
        if v.shape != (n, 1) or (u is not None and u.shape != (1, n)):
            raise InputError("eigenvector length does not match n")
        try:
            verify_eigendata(a, lam, v, u, tol=tol)
        except ValueError as exc:
            raise InputError(f"eigendata rejected: {exc}") from exc
        eigendata = (lam, v, u)
    return MatrixFile(a=a, mode=mode, eigendata=eigendata)


def load_datum(source) -> CoxeterDatum:
    data = _load_json(source)
    try:
        m = data["m"]
        d = CoxeterDatum(tuple(tuple(row) for row in m),
                         None if data.get("c") is None else tuple(tuple(r) for r in data["c"]))
    except KeyError as exc:
        raise InputError("datum needs an 'm' matrix") from exc
    except (DatumError, TypeError) as exc:
        raise InputError(f"invalid Coxeter datum: {exc}") from exc
    if "n" in data and data["n"] != d.n:
        raise InputError(f"'n' is {data['n']} but m has size {d.n}")
    return d


# --- serialization ----------------------------------------------------------

def scalar_json(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


def matrix_json(a: np.ndarray | None):
    if a is None:
        return None
    if a.shape[1] == 1 or a.shape[0] == 1:
        return [scalar_json(x) for x in a.flat]
    return [[scalar_json(x) for x in row] for row in a]


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, str) or obj is None:
        return obj
    return scalar_json(obj)


def verdict_dict(v: Verdict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": v.kind.value,
        "regime": v.regime,
        "lambda": scalar_json(v.lam),
        "v": matrix_json(v.v),
        "u": matrix_json(v.u),
        "signature": list(v.signature.signs) if v.signature is not None else None,
        "z": matrix_json(v.z),
        "k_positive": v.k_positive,
        "limit": matrix_json(v.limit),
        "multiplicity_estimate": scalar_json(v.multiplicity_estimate),
        "certificate": _plain(v.certificate),
        "k_max_reached": v.k_max_reached,
        "diagnostics": list(v.diagnostics),
        "exit_code": exit_code(v.kind),
    }


def _exponent_json(x):
    return "inf" if x == math.inf else x


def coxeter_dict(r: CoxeterReport) -> dict:
    d = r.datum
    return {
        "schema_version": SCHEMA_VERSION,
        "datum": {
            "n": d.n,
            "m": [[_exponent_json(x) for x in row] for row in d.m],
            "c": [[scalar_json(x) for x in row] for row in d.c],
        },
        "word": list(r.word),
        "word_order": "left-to-right",
        "bilinear_form": matrix_json(r.form),
        "form_signature": list(r.signature),
        "element": matrix_json(r.element),
        "sanity": {"form_invariant": r.form_invariant, "column_signs": r.column_signs},
        "spectral_radius": scalar_json(r.spectral_radius),
        "lehmer": _plain(r.lehmer),
        "notes": list(r.notes),
        "verdict": verdict_dict(r.verdict),
    }


def render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _fmt_matrix(a: np.ndarray, indent: str = "    ") -> list[str]:
    cells = mx.rows_of(a)
    width = max(len(c) for row in cells for c in row)
    return [indent + "  ".join(c.rjust(width) for c in row) for row in cells]


def verdict_text(v: Verdict) -> list[str]:
    lines = [f"verdict: {v.kind.value}  (regime: {v.regime})"]
    if v.lam is not None:
        lines.append(f"lambda: {mx.format_entry(v.lam)}")
    if v.v is not None:
        lines.append("v: " + ", ".join(mx.format_entry(x) for x in v.v.flat))
    if v.u is not None:
        lines.append("u: " + ", ".join(mx.format_entry(x) for x in v.u.flat))
    if v.signature is not None and not v.signature.is_identity:
        lines.append(f"signature: {v.signature.signs}")
    if v.k_positive is not None:
        lines.append(f"Z^k and Z^(k+1) positive at k = {v.k_positive}")
    if v.z is not None:
        lines.append("Z:")
        lines.extend(_fmt_matrix(v.z))
    if v.limit is not None:
        lines.append("normalised power limit:")
        lines.extend(_fmt_matrix(v.limit))
    if v.multiplicity_estimate is not None:
        lines.append(f"multiplicity estimate (trace of limit): {v.multiplicity_estimate:.12g}")
    if v.certificate:
        cert = ", ".join(f"{k}={_plain(val)}" for k, val in v.certificate.items())
        lines.append(f"certificate: {cert}")
    if v.k_max_reached:
        lines.append("k_max reached")
    lines.extend(f"note: {d}" for d in v.diagnostics)
    return lines


def render_report(obj, fmt: str = "text") -> str:
    """Serialize a :class:`Verdict` or :class:`CoxeterReport` as ``"text"`` or ``"json"``."""
    if fmt not in ("text", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, CoxeterReport):
        if fmt == "json":
            return render_json(coxeter_dict(obj))
        lines = [f"word: {' '.join(f's{i}' for i in obj.word) or '(empty)'}",
                 "bilinear form B:", *_fmt_matrix(obj.form),
                 f"signature of B: {tuple(obj.signature)}",
                 "phi(w):", *_fmt_matrix(obj.element),
                 f"form invariant: {obj.form_invariant}; column signs: {obj.column_signs}",
                 f"spectral radius: {obj.spectral_radius:.12g}"]
        if obj.lehmer is not None:
            lines.append(f"Lehmer check: rho = 1: {obj.lehmer['rho_is_one']}, "
                         f"rho >= Lehmer's number: {obj.lehmer['at_least_lehmer']}")
        lines.extend(f"note: {n}" for n in obj.notes)
        lines.extend(verdict_text(obj.verdict))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return render_json(verdict_dict(obj))
    return "\n".join(verdict_text(obj)) + "\n"
