"""Candidate dominant eigendata, characteristic polynomials and power limits."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import matrix as mx

MAX_DENOMINATOR = 10**6


class NoRealDominantCandidate(Exception):
    """Power iteration found no real eigenvalue of largest modulus."""


class MultiplicityAtLeastTwo(Exception):
    """The candidate eigenvalue is not simple.

    ``uv`` holds the left/right product that vanished, or ``None`` when the
    eigenspace itself has dimension two or more (``geometric_multiplicity``).
    """

    def __init__(self, message: str, uv=None, geometric_multiplicity: int = 1):
        super().__init__(message)
        self.uv = uv
        self.geometric_multiplicity = geometric_multiplicity


class VHasZeroEntry(Exception):
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


# --- characteristic polynomial ----------------------------------------------

@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial, coefficients from the leading ``x**n`` term down."""

    coefficients: tuple
    accuracy_warning: bool = False

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coefficients)

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def scale(self) -> float:
        return float(max(abs(c) for c in self.coefficients))

    def __str__(self) -> str:
        terms = []
        n = self.degree
        for power, c in zip(range(n, -1, -1), self.coefficients):
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                body = mx.format_entry(mag)
            else:
                body = "" if mag == 1 else mx.format_entry(mag) + "*"
                body += "x" if power == 1 else f"x^{power}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def char_poly(a: np.ndarray) -> CharPoly:
    """Coefficients of ``det(xI - A)`` by the Faddeev-LeVerrier recurrence.

    Only divisions by the integers 1..n occur, so exact input stays exact.
    Float coefficients lose accuracy quickly with n; past n = 30 the result
    carries ``accuracy_warning``.
    """
    n = a.shape[0]
    exact = mx.is_exact(a)
    eye = mx.identity(n, exact)
    m = mx.zeros((n, n), exact)
    coeffs = [Fraction(1) if exact else 1.0]
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * eye
        t = mx.trace(a @ m)
        coeffs.append(-t / k)
    return CharPoly(tuple(coeffs), accuracy_warning=(not exact and n > 30))


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    quot = []
    while len(num) >= len(den):
        factor = num[0] / den[0]
        quot.append(factor)
        for i in range(len(den)):
            num[i] -= factor * den[i]
        num.pop(0)
    while num and num[0] == 0:
        num.pop(0)
    return quot, num


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _sturm_chain(p: list) -> list[list]:
    n = len(p) - 1
    deriv = [c * (n - i) for i, c in enumerate(p[:-1])]
    chain = [p, deriv]
    while len(chain[-1]) > 1:
        _, rem = _poly_divmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def _evaluate(p: list, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def _changes_at(chain, x) -> int:
    return _sign_changes([_evaluate(q, x) for q in chain])


def _changes_at_infinity(chain, positive: bool) -> int:
    vals = []
    for q in chain:
        deg = len(q) - 1
        s = q[0] if (positive or deg % 2 == 0) else -q[0]
        vals.append(s)
    return _sign_changes(vals)


def real_root_obstruction(cp: CharPoly, lam: Fraction) -> str | None:
    """Exact reason why ``lam`` cannot be a simple dominant root of ``cp``.

    Looks for a repeated root at ``lam`` or a real root of modulus at least
    ``lam``.  Complex roots are not examined, so ``None`` proves nothing.
    """
    if not cp.exact or lam <= 0:
        return None
    p = list(cp.coefficients)
    mult = 0
    while len(p) > 1 and _evaluate(p, lam) == 0:
        p, _ = _poly_divmod(p, [Fraction(1), -lam])
        mult += 1
    if mult == 0:
        return None
    if mult >= 2:
        return f"{lam} is a root of multiplicity {mult}"
    if len(p) == 1:
        return None
    if _evaluate(p, -lam) == 0:
        return f"{-lam} is also a root"
    chain = _sturm_chain(p)
    above = _changes_at(chain, lam) - _changes_at_infinity(chain, True)
    below = _changes_at_infinity(chain, False) - _changes_at(chain, -lam)
    if above or below:
        return f"{above + below} other real root(s) of modulus greater than {lam}"
    return None


# --- dominant eigendata -----------------------------------------------------

@dataclass(frozen=True)
class EigenPair:
    """Candidate eigenvalue with right column ``v`` and left row ``u``."""

    lam: object
    v: np.ndarray
    u: np.ndarray
    residual_right: float
    residual_left: float
    normalized: bool = False
    geometric_multiplicity: int = 1

    @property
    def exact(self) -> bool:
        return mx.is_exact(self.v)

    @property
    def uv(self):
        return (self.u @ self.v)[0, 0]


def _inf_norm(a: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(a), axis=1)))


def _residual(a: np.ndarray, lam: float, x: np.ndarray, norm_a: float) -> float:
    scale = norm_a * float(np.max(np.abs(x)))
    if scale == 0:
        return 0.0 if not np.any(a @ x) else np.inf
    return float(np.max(np.abs(a @ x - lam * x))) / scale


def _power_iterate(a: np.ndarray, x: np.ndarray, tol: float, max_iter: int, block: int = 16):
    """Power iteration on ``a`` from ``x``; returns ``(lam, v, residual)`` or None.

    Steps are taken with a normalised ``a**block`` so the Python loop runs
    ``block`` times less often; convergence is always judged against ``a``.
    """
    norm_a = _inf_norm(a)
    if norm_a == 0:
        return 0.0, x / np.max(np.abs(x)), 0.0
    step = mx.mat_pow(a / norm_a, block)
    x = x / np.max(np.abs(x))
    done = 0
    blocks = 0
    while True:
        # residual checks thin out once the easy cases have had their chance
        if blocks < 8 or blocks % 8 == 0 or done >= max_iter:
            x = x * np.sign(x[np.argmax(np.abs(x))])
            lam = float((x.T @ a @ x)[0, 0] / (x.T @ x)[0, 0])
            res = _residual(a, lam, x, norm_a)
            if res <= tol:
                return lam, x, res
            if done >= max_iter:
                return None
        y = step @ x
        done += block
        blocks += 1
        top = np.abs(y).max()
        if top == 0:
            # x dies under a**block: walk the chain down to a kernel vector
            y = x
            while np.any(a @ y):
                y = a @ y
            return 0.0, y / np.max(np.abs(y)), 0.0
        x = y / top


def dominant_eigenpair(a: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000,
                       seed: int = 0, null_rtol: float = 1e-8) -> EigenPair:
    """Largest-modulus real eigenvalue with right and left eigenvectors.

    Power iteration runs from the all-ones vector and from three seeded
    random vectors; the converged run with the largest ``|lam|`` wins.  The
    all-ones start alone is not trusted because it may itself be an
    eigenvector of a smaller eigenvalue.  The left vector and the dimension
    of the eigenspace come from an SVD of ``A - lam I``.

    Exact input whose eigenvalue turns out rational is returned as exact
    eigendata; otherwise the pair is floating.

    Power iteration stalls when eigenvalues tie in modulus (``1`` and
    ``-1``) or when the top eigenvalue is defective.  In that case a dense
    eigensolver supplies the candidate if some real eigenvalue attains the
    spectral radius; the positive one is preferred.

    Raises :class:`NoRealDominantCandidate` when neither route yields a real
    eigenvalue of largest modulus.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    af = mx.to_float(a)
    n = af.shape[0]
    rng = np.random.default_rng(seed)
    starts = [np.ones((n, 1))] + [rng.standard_normal((n, 1)) for _ in range(3)]
    best = None
    for x0 in starts:
        found = _power_iterate(af, x0, tol, max_iter)
        if found is None:
            continue
        if best is None or abs(found[0]) > abs(best[0]) * (1 + 1e-9) + 1e-300:
            best = found
    if best is None:
        best = _dense_candidate(af)
    if best is None:
        raise NoRealDominantCandidate(
            f"power iteration did not converge within {max_iter} steps from any start "
            "and no real eigenvalue attains the spectral radius")
    lam, v, res_right = best

    if mx.is_exact(a):
        pair = _exact_pair(a, lam, v)
        if pair is not None:
            return pair

    shifted = af - lam * np.eye(n)
    left, sv, right = np.linalg.svd(shifted)
    cutoff = null_rtol * max(sv[0], _inf_norm(af), np.finfo(float).tiny)
    nullity = max(1, int(np.sum(sv <= cutoff)))
    u = left[:, -1].reshape(1, -1)
    norm_a = _inf_norm(af)
    res_left = _residual(af.T, lam, u.T, norm_a) if norm_a else 0.0
    return EigenPair(lam, v, u, res_right, res_left, geometric_multiplicity=nullity)


def _dense_candidate(af: np.ndarray, rtol: float = 1e-6):
    """Real eigenvalue of largest modulus from ``numpy.linalg.eig``, or None.

    ``rtol`` is loose because defective eigenvalues are only computed to
    about the square root of machine precision.
    """
    eigs, vecs = np.linalg.eig(af)
    rho = float(np.max(np.abs(eigs)))
    scale = max(rho, 1.0)
    real = [i for i in range(len(eigs))
            if abs(eigs[i].imag) <= rtol * scale and abs(abs(eigs[i]) - rho) <= rtol * scale]
    if not real:
        return None
    i = max(real, key=lambda k: eigs[k].real)
    lam = float(eigs[i].real)
    v = vecs[:, [i]].real
    v = v / np.max(np.abs(v))
    v = v * np.sign(v[np.argmax(np.abs(v))])
    return lam, v, _residual(af, lam, v, _inf_norm(af) or 1.0)


def _exact_pair(a: np.ndarray, lam_float: float, v_float: np.ndarray) -> EigenPair | None:
    """Upgrade a float eigenvalue of an exact matrix to exact eigendata if it is rational."""
    lam = Fraction(lam_float).limit_denominator(MAX_DENOMINATOR)
    if abs(float(lam) - lam_float) > 1e-9 * max(1.0, abs(lam_float)):
        return None
    shifted = a - lam * mx.identity(a.shape[0])
    right = mx.nullspace(shifted)
    if not right:
        return None
    left = mx.nullspace(shifted.T)
    v = right[0]
    if len(right) > 1:
        # keep the float direction's sign pattern visible in the report
        v = max(right, key=lambda b: abs(float((mx.to_float(b).T @ v_float)[0, 0])))
    return EigenPair(lam, v, left[0].T, 0.0, 0.0, geometric_multiplicity=len(right))


def verify_eigendata(a: np.ndarray, lam, v: np.ndarray, u: np.ndarray | None = None,
                     tol: float = 1e-9) -> EigenPair:
    """Check user-supplied eigendata and wrap it as an :class:`EigenPair`.

    Exact data must satisfy ``A v = lam v`` (and ``u A = lam u``) exactly.
    A missing ``u`` is computed from the left kernel of ``A - lam I``.
    """
    n = a.shape[0]
    v = v.reshape(n, 1)
    if mx.is_exact(a):
        mx.same_regime(a, v)
        if all(x == 0 for x in v.flat):
            raise ValueError("eigenvector must be nonzero")
        shifted = a - lam * mx.identity(n)
        if not mx.equal(shifted @ v, mx.zeros((n, 1))):
            raise ValueError("supplied v is not a right eigenvector for lambda")
        if u is None:
            left = mx.nullspace(shifted.T)
            u = left[0].T
        u = u.reshape(1, n)
        if not mx.equal(u @ shifted, mx.zeros((1, n))):
            raise ValueError("supplied u is not a left eigenvector for lambda")
        if all(x == 0 for x in u.flat):
            raise ValueError("eigenvector must be nonzero")
        nullity = len(mx.nullspace(shifted))
        return EigenPair(lam, v, u, 0.0, 0.0, geometric_multiplicity=nullity)

    af = mx.to_float(a)
    v = mx.to_float(v)
    lam = float(lam)
    norm_a = _inf_norm(af) or 1.0
    res_right = _residual(af, lam, v, norm_a)
    if res_right > tol:
        raise ValueError(f"supplied v has relative residual {res_right:.3g} > {tol:g}")
    shifted = af - lam * np.eye(n)
    left, sv, _ = np.linalg.svd(shifted)
    if u is None:
        u = left[:, -1].reshape(1, n)
    u = mx.to_float(u).reshape(1, n)
    res_left = _residual(af.T, lam, u.T, norm_a)
    if res_left > tol:
        raise ValueError(f"supplied u has relative residual {res_left:.3g} > {tol:g}")
    nullity = max(1, int(np.sum(sv <= 1e-8 * max(sv[0], norm_a))))
    return EigenPair(lam, v, u, res_right, res_left, geometric_multiplicity=nullity)


def normalize_pair(p: EigenPair, tol_orth: float = 1e-9, tol_zero: float = 1e-9) -> EigenPair:
    """Scale so that ``sum |v_i| = 1`` and ``u v = 1``.

    Raises :class:`MultiplicityAtLeastTwo` when ``u`` and ``v`` are
    orthogonal (relative to their lengths in the float regime), and
    :class:`VHasZeroEntry` when ``v`` has an entry that no signature can make
    positive.
    """
    v, u = p.v, p.u
    if p.geometric_multiplicity >= 2:
        raise MultiplicityAtLeastTwo(
            f"eigenspace has dimension {p.geometric_multiplicity}",
            geometric_multiplicity=p.geometric_multiplicity)
    uv = (u @ v)[0, 0]
    if p.exact:
        orthogonal = uv == 0
    else:
        lengths = float(np.linalg.norm(u) * np.linalg.norm(v))
        orthogonal = lengths == 0 or abs(uv) / lengths < tol_orth
    if orthogonal:
        raise MultiplicityAtLeastTwo(
            "left and right eigenvectors are orthogonal", uv=uv,
            geometric_multiplicity=p.geometric_multiplicity)

    top = mx.max_abs(v)
    for i, x in enumerate(v.flat):
        if (x == 0) if p.exact else abs(x) < tol_zero * top:
            raise VHasZeroEntry(f"entry {i} of the right eigenvector vanishes", i)

    total = sum(abs(x) for x in v.flat)
    v = v / total
    u = u / (u @ v)[0, 0]
    return replace(p, v=v, u=u, normalized=True)


# --- normalized power limits ------------------------------------------------

class ProbeStatus(enum.Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ProbeResult:
    status: ProbeStatus
    steps: int
    limit: np.ndarray | None = None
    multiplicity_estimate: float | None = None

    @property
    def converged(self) -> bool:
        return self.status is ProbeStatus.CONVERGED


def semisimplicity_probe(a: np.ndarray, rho, k_max: int = 10_000, conv_tol: float = 1e-12,
                         growth_factor: float = 10.0, window: int = 10) -> ProbeResult:
    """Iterate ``M <- (A / rho) M`` from the identity.

    Convergence means ``rho`` is a semisimple dominant eigenvalue and the
    trace of the limit is its multiplicity.  Divergence is declared once the
    max-norm has risen for ``window`` consecutive steps and exceeds
    ``growth_factor`` times the smallest norm seen.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    step = mx.to_float(a) / float(rho)
    m = np.eye(step.shape[0])
    norms = [1.0]
    rising = 0
    for k in range(1, k_max + 1):
        nxt = step @ m
        diff = float(np.max(np.abs(nxt - m)))
        m = nxt
        norm = float(np.max(np.abs(m)))
        rising = rising + 1 if norm > norms[-1] else 0
        norms.append(norm)
        if diff < conv_tol * max(1.0, norm):
            # polish down to the rounding floor before reporting
            for _ in range(200):
                nxt = step @ m
                new_diff = float(np.max(np.abs(nxt - m)))
                if new_diff >= diff:
                    break
                m, diff = nxt, new_diff
            return ProbeResult(ProbeStatus.CONVERGED, k, m, float(np.trace(m)))
        if not np.isfinite(norm):
            return ProbeResult(ProbeStatus.DIVERGED, k)
        if rising >= window and norm > growth_factor * min(norms):
            return ProbeResult(ProbeStatus.DIVERGED, k)
    return ProbeResult(ProbeStatus.UNDETERMINED, k_max)

