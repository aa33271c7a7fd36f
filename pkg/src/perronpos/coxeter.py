"""Geometric representations of Coxeter systems.

Generators act on column coordinate vectors in the basis of simple roots.
With ``B(alpha_i, alpha_i) = 1`` the reflection in ``alpha_i`` is the matrix
``I - 2 e_i b_i`` where ``b_i`` is row ``i`` of the bilinear form.  A word
``s_{i1} s_{i2} ... s_{ik}`` maps to the product of generator matrices in the
same left-to-right order (checked against known matrices in the test suite).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import matrix as mx
from .criterion import AnalysisConfig, Verdict, VerdictKind, analyze
from .spectral import char_poly

INF = math.inf
LEHMER = 1.1762808182599175
WORD_ORDER = "left-to-right"

# m_ij values whose cosine is rational: -cos(pi/m)
_RATIONAL_COSINES = {1: Fraction(1), 2: Fraction(0), 3: Fraction(-1, 2)}


class DatumError(ValueError):
    pass


class SanityGateError(RuntimeError):
    """A group element failed a property every representation matrix must have."""


@dataclass(frozen=True)
class CoxeterDatum:
    """Coxeter exponents ``m`` (``math.inf`` for infinite bonds) and weights ``c``.

    ``c[i][j]`` is only read where ``m[i][j]`` is infinite.  Leaving ``c`` out
    gives the classical form with every weight equal to 1.
    """

    m: tuple[tuple, ...]
    c: tuple[tuple, ...] | None = None

    def __post_init__(self):
        n = len(self.m)
        if n < 1 or any(len(row) != n for row in self.m):
            raise DatumError("m must be a nonempty square matrix")
        m = tuple(tuple(_exponent(x) for x in row) for row in self.m)
        for i in range(n):
            if m[i][i] != 1:
                raise DatumError(f"m[{i + 1}][{i + 1}] must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise DatumError(f"m is not symmetric at ({i + 1},{j + 1})")
                if i != j and m[i][j] < 2:
                    raise DatumError(f"m[{i + 1}][{j + 1}] must be at least 2 or inf")
        if self.c is None:
            c = tuple(tuple(Fraction(1) if m[i][j] == INF else None for j in range(n))
                      for i in range(n))
        else:
            if len(self.c) != n or any(len(row) != n for row in self.c):
                raise DatumError("c must have the same shape as m")
            c = tuple(tuple(_weight(self.c[i][j], i, j) if m[i][j] == INF else None
                            for j in range(n)) for i in range(n))
            for i in range(n):
                for j in range(n):
                    if m[i][j] == INF and c[i][j] != c[j][i]:
                        raise DatumError(f"c is not symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def exact(self) -> bool:
        finite_ok = all(x in _RATIONAL_COSINES for row in self.m for x in row if x != INF)
        weights_ok = all(isinstance(x, Fraction) for row in self.c for x in row if x is not None)
        return finite_ok and weights_ok

    @property
    def classical(self) -> bool:
        return all(x == 1 for row in self.c for x in row if x is not None)


def _exponent(x):
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    try:
        value = float(x)
    except (TypeError, ValueError):
        raise DatumError(f"invalid Coxeter exponent {x!r}") from None
    if value == INF:
        return INF
    if isinstance(x, bool) or not value.is_integer():
        raise DatumError(f"invalid Coxeter exponent {x!r}")
    return int(value)


def _weight(x, i, j):
    if x is None:
        raise DatumError(f"missing weight c for the infinite bond ({i + 1},{j + 1})")
    try:
        w = Fraction(x.strip()) if isinstance(x, str) else x
    except (ValueError, ZeroDivisionError) as exc:
        raise DatumError(f"invalid weight {x!r}") from exc
    if isinstance(w, int):
        w = Fraction(w)
    if w < 1:
        raise DatumError(f"weight c[{i + 1}][{j + 1}] = {x} is below 1")
    return w


def parse_word(text: str, n: int | None = None) -> tuple[int, ...]:
    """Parse ``"1,2,3,2"``, ``"s1 s2 s3 s2"`` or ``"s1s2s3s2"`` into 1-based letters."""
    if not re.fullmatch(r"[\s,sS\d]*", text):
        raise ValueError(f"cannot parse word {text!r}")
    letters = tuple(int(tok) for tok in re.findall(r"\d+", text))
    if any(letter < 1 for letter in letters):
        raise ValueError("generator indices start at 1")
    if n is not None:
        check_word(letters, n)
    return letters


def check_word(word, n: int) -> None:
    for letter in word:
        if not 1 <= letter <= n:
            raise ValueError(f"generator index {letter} out of range 1..{n}")


def bilinear_form(d: CoxeterDatum, exact: bool | None = None) -> np.ndarray:
    """Symmetric form with ``-cos(pi/m_ij)`` on finite bonds and ``-c_ij`` on infinite ones."""
    if exact is None:
        exact = d.exact
    elif exact and not d.exact:
        raise ValueError("this datum has irrational form entries")
    n = d.n
    b = mx.zeros((n, n), exact)
    for i in range(n):
        for j in range(n):
            m = d.m[i][j]
            if m == INF:
                val = -d.c[i][j]
            elif exact:
                val = _RATIONAL_COSINES[m]
            else:
                val = -math.cos(math.pi / m)
            b[i, j] = val if exact else float(val)
    return b


def generator_matrix(d: CoxeterDatum, i: int, exact: bool | None = None) -> np.ndarray:
    """Matrix of the simple reflection ``s_i`` (``i`` is 1-based)."""
    check_word((i,), d.n)
    b = bilinear_form(d, exact)
    return _generators(b)[i - 1]


def _generators(b: np.ndarray) -> list[np.ndarray]:
    n = b.shape[0]
    gens = []
    for i in range(n):
        g = mx.identity(n, mx.is_exact(b))
        g[i, :] = g[i, :] - 2 * b[i, :]
        gens.append(g)
    return gens


def evaluate_word(d: CoxeterDatum, word, exact: bool | None = None) -> np.ndarray:
    check_word(word, d.n)
    b = bilinear_form(d, exact)
    gens = _generators(b)
    out = mx.identity(d.n, mx.is_exact(b))
    for letter in word:
        out = out @ gens[letter - 1]
    return out


def check_form_invariance(m: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """``m^T B m == B`` (exactly, or within ``tol`` relative to the entries involved)."""
    if m.shape != b.shape:
        raise mx.DimensionError("matrix and form differ in size")
    if mx.is_exact(m) and mx.is_exact(b):
        return mx.equal(m.T @ b @ m, b)
    mf, bf = mx.to_float(m), mx.to_float(b)
    lhs = mf.T @ bf @ mf
    scale = max(1.0, mx.max_abs(mf) ** 2 * mx.max_abs(bf))
    return bool(np.max(np.abs(lhs - bf)) <= tol * scale)


def column_sign_check(m: np.ndarray, tol: float = 0.0) -> bool:
    """Every column is entrywise nonnegative or entrywise nonpositive."""
    cutoff = tol * mx.max_abs(m) if tol else 0
    for j in range(m.shape[1]):
        col = m[:, j]
        if any(x > cutoff for x in col) and any(x < -cutoff for x in col):
            return False
    return True


@dataclass(frozen=True)
class FormSignature:
    p: int
    q: int
    r: int

    def __iter__(self):
        return iter((self.p, self.q, self.r))


def form_signature(b: np.ndarray, tol: float = 1e-9) -> FormSignature:
    """Inertia of a symmetric form.

    Exact forms use the characteristic polynomial: its roots are all real, so
    Descartes' rule of signs counts positive and negative eigenvalues with
    multiplicity.  Floating forms use a symmetric eigensolver and treat
    ``|eigenvalue| < tol * scale`` as zero.
    """
    n = b.shape[0]
    if mx.is_exact(b):
        if not mx.equal(b, b.T):
            raise ValueError("form is not symmetric")
        coeffs = list(char_poly(b).coefficients)
        r = 0
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
            r += 1
        p = _sign_changes(coeffs)
        flipped = [c if (len(coeffs) - 1 - k) % 2 == 0 else -c for k, c in enumerate(coeffs)]
        q = _sign_changes(flipped)
        return FormSignature(p, q, r)
    bf = mx.to_float(b)
    if not np.allclose(bf, bf.T, rtol=0, atol=tol * max(1.0, mx.max_abs(bf))):
        raise ValueError("form is not symmetric")
    ev = np.linalg.eigvalsh(bf)
    cutoff = tol * max(1.0, float(np.max(np.abs(ev))))
    p = int(np.sum(ev > cutoff))
    q = int(np.sum(ev < -cutoff))
    return FormSignature(p, q, n - p - q)


def _sign_changes(coeffs) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


@dataclass
class CoxeterReport:
    datum: CoxeterDatum
    word: tuple[int, ...]
    form: np.ndarray
    signature: FormSignature
    element: np.ndarray
    form_invariant: bool
    column_signs: bool
    verdict: Verdict
    spectral_radius: float
    lehmer: dict | None = None
    notes: list[str] = field(default_factory=list)


def lehmer_flag(rho: float, tol: float = 1e-4) -> dict:
    """Spectral radius classification for the classical representation.

    ``tol`` is loose because eigenvalues of defective matrices (common at
    spectral radius 1) are only computable to about the cube root of machine
    precision.
    """
    is_one = abs(rho - 1.0) <= tol
    at_least = rho >= LEHMER - tol
    return {"spectral_radius": rho, "rho_is_one": is_one, "at_least_lehmer": at_least,
            "consistent": is_one or at_least}


def analyze_element(d: CoxeterDatum, word, config: AnalysisConfig | None = None,
                    exact: bool | None = None) -> CoxeterReport:
    """Evaluate ``phi(word)``, run the sanity gates, then the dominance test."""
    check_word(word, d.n)
    b = bilinear_form(d, exact)
    h = evaluate_word(d, word, mx.is_exact(b))
    invariant = check_form_invariance(h, b)
    signs = column_sign_check(h, 0.0 if mx.is_exact(h) else 1e-12)
    if not invariant:
        raise SanityGateError(f"phi({word}) does not preserve the bilinear form")
    if not signs:
        raise SanityGateError(f"phi({word}) has a column with mixed signs")
    verdict = analyze(h, config)
    rho = float(np.max(np.abs(np.linalg.eigvals(mx.to_float(h)))))
    notes = []
    if verdict.kind is VerdictKind.SIMPLE_DOMINANT and verdict.k_positive == 1:
        notes.append("conjugate matrix Z is already positive")
    lehmer = lehmer_flag(rho) if d.classical else None
    return CoxeterReport(datum=d, word=tuple(word), form=b, signature=form_signature(b),
                         element=h, form_invariant=invariant, column_signs=signs,
                         verdict=verdict, spectral_radius=rho, lehmer=lehmer, notes=notes)
