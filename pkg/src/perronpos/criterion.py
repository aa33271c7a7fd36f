"""Decide whether a real eigenvalue is simple and dominant.

The test conjugates ``A`` to

    Z = lam v u' + (I - v u') A

which fixes the right eigenvector ``v`` and swaps the left eigenvector ``u``
for ``u'``.  With ``v`` positive, ``sum(v) = 1`` and ``u' = 1^T``, the
eigenvalue ``lam`` is positive, simple and dominant exactly when ``Z`` is
eventually positive, and eventual positivity is witnessed by two consecutive
positive powers.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import matrix as mx
from .spectral import (
    EigenPair,
    MultiplicityAtLeastTwo,
    NoRealDominantCandidate,
    VHasZeroEntry,
    char_poly,
    dominant_eigenpair,
    normalize_pair,
    real_root_obstruction,
    semisimplicity_probe,
    verify_eigendata,
)

# a floating limit entry counts as negative below this multiple of eps
NEGATIVE_LIMIT_FACTOR = 10.0
MAX_CYCLE = 4


class RowSumsNotOne(ValueError):
    pass


class NormalizationError(ValueError):
    """``u v = 1`` or ``u' v = 1`` does not hold."""


@dataclass
class AnalysisConfig:
    tol: float = 1e-12
    tol_orth: float = 1e-9
    tol_zero: float = 1e-9
    eps_pos: float = mx.DEFAULT_EPS
    k_max: int = 256
    max_iter: int = 100_000
    seed: int = 0
    conv_tol: float = 1e-12
    probe_k_max: int = 10_000
    # residual accepted for user-supplied floating eigendata
    eigendata_tol: float = 1e-9


# --- the conjugate matrix ---------------------------------------------------

@dataclass(frozen=True)
class ConjugateWitness:
    z: np.ndarray
    q: np.ndarray
    q_inv: np.ndarray
    u_prime: np.ndarray
    lam: object
    v: np.ndarray


def _ones_row(n: int, exact: bool) -> np.ndarray:
    return mx.ones_column(n, exact).T


def _is_one(x, exact: bool, tol: float) -> bool:
    return x == 1 if exact else abs(float(x) - 1.0) <= tol


def conjugate_matrix(a: np.ndarray, lam, v: np.ndarray, u_prime: np.ndarray | None = None) -> np.ndarray:
    """``lam v u' + (I - v u') A``; ``u'`` defaults to the all-ones row."""
    n = a.shape[0]
    exact = mx.is_exact(a)
    if u_prime is None:
        u_prime = _ones_row(n, exact)
    mx.same_regime(a, v, u_prime)
    vu = v @ u_prime
    return lam * vu + (mx.identity(n, exact) - vu) @ a


def build_conjugate(a: np.ndarray, lam, v: np.ndarray, u: np.ndarray,
                    u_prime: np.ndarray | None = None, tol: float = 1e-9) -> ConjugateWitness:
    """Conjugate ``Z = Q^-1 A Q`` with ``Q = I + v (u' - u)`` in closed form.

    Requires ``u v = 1`` and ``u' v = 1``; then ``X = v (u' - u)`` squares to
    zero and ``Q^-1 = I - X``.
    """
    n = a.shape[0]
    exact = mx.is_exact(a)
    if u_prime is None:
        u_prime = _ones_row(n, exact)
    mx.same_regime(a, v, u, u_prime)
    v = v.reshape(n, 1)
    u = u.reshape(1, n)
    u_prime = u_prime.reshape(1, n)
    for name, row in (("u v", u), ("u' v", u_prime)):
        prod = (row @ v)[0, 0]
        if not _is_one(prod, exact, tol):
            raise NormalizationError(f"{name} = {mx.format_entry(prod)}, expected 1")
    eye = mx.identity(n, exact)
    x = v @ (u_prime - u)
    z = conjugate_matrix(a, lam, v, u_prime)
    return ConjugateWitness(z=z, q=eye + x, q_inv=eye - x, u_prime=u_prime, lam=lam, v=v)


def power_identity_check(w: ConjugateWitness, a: np.ndarray, k: int, tol: float = 1e-9) -> bool:
    """Check ``Z^k == lam^k v u' + (I - v u') A^k``."""
    n = a.shape[0]
    exact = mx.is_exact(a)
    vu = w.v @ w.u_prime
    rhs = w.lam ** k * vu + (mx.identity(n, exact) - vu) @ mx.mat_pow(a, k)
    lhs = mx.mat_pow(w.z, k)
    if exact:
        return mx.equal(lhs, rhs)
    scale = max(mx.max_abs(lhs), mx.max_abs(rhs), 1.0)
    return bool(np.max(np.abs(lhs - rhs)) <= tol * scale)


# --- eventual positivity ----------------------------------------------------

class PositivityStatus(enum.Enum):
    POSITIVE = "positive"
    CERTIFIED_NEVER = "certified_never"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PositivityResult:
    status: PositivityStatus
    k: int | None = None
    certificate: dict | None = None
    steps: int = 0

    @property
    def positive(self) -> bool:
        return self.status is PositivityStatus.POSITIVE


def _normalized(m: np.ndarray) -> np.ndarray | None:
    top = mx.max_abs(m)
    if top == 0:
        return None
    return m / top


def eventual_positivity(z: np.ndarray, k_max: int = 256, eps: float = mx.DEFAULT_EPS,
                        lam=None, conv_tol: float = 1e-12) -> PositivityResult:
    """First ``k`` with ``Z^k > 0`` and ``Z^(k+1) > 0``, or a proof that none exists.

    Powers are rescaled by their largest absolute entry as they are formed;
    positivity does not care about positive scaling and the rescaling keeps
    floating powers finite.

    Certificates of "never":

    * ``power_cycle`` (exact): a rescaled power repeats with period at most 4,
      so the sign patterns already scanned recur forever;
    * ``negative_limit``: the rescaled powers converge (or settle into a short
      cycle) and some limit entry is clearly negative;
    * ``spectral_obstruction`` (exact, needs ``lam``): the characteristic
      polynomial shows that ``lam`` is a repeated root or that another real
      root has modulus at least ``lam``.  Only sound when ``lam`` is the
      eigenvalue of a positive eigenvector of ``z``.
    * ``nilpotent``: some power vanishes.

    Anything else after ``k_max`` powers is inconclusive.
    """
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    exact = mx.is_exact(z)
    if exact and lam is not None:
        reason = real_root_obstruction(char_poly(z), Fraction(lam))
        if reason is not None:
            return PositivityResult(PositivityStatus.CERTIFIED_NEVER,
                                    certificate={"type": "spectral_obstruction", "reason": reason})

    def positive(m):
        return mx.is_strictly_positive(m, eps)

    current = _normalized(z)
    if current is None:
        return PositivityResult(PositivityStatus.CERTIFIED_NEVER, certificate={"type": "nilpotent", "k": 1})
    history: deque = deque(maxlen=MAX_CYCLE)
    history.append(current)
    prev_positive = positive(current)
    threshold = -NEGATIVE_LIMIT_FACTOR * eps
    for k in range(2, k_max + 2):
        nxt = _normalized(z @ current)
        if nxt is None:
            return PositivityResult(PositivityStatus.CERTIFIED_NEVER,
                                    certificate={"type": "nilpotent", "k": k}, steps=k)
        now_positive = positive(nxt)
        if prev_positive and now_positive:
            return PositivityResult(PositivityStatus.POSITIVE, k=k - 1, steps=k)
        for period, old in enumerate(reversed(history), start=1):
            if exact and mx.equal(nxt, old):
                return PositivityResult(
                    PositivityStatus.CERTIFIED_NEVER, steps=k,
                    certificate={"type": "power_cycle", "k": k - period, "period": period})
            fdiff = float(np.max(np.abs(mx.to_float(nxt) - mx.to_float(old))))
            if fdiff < conv_tol:
                cycle = list(history)[-period + 1:] if period > 1 else []
                cycle.append(nxt)
                for m in cycle:
                    fm = mx.to_float(m)
                    if fm.min() < threshold:
                        i, j = np.unravel_index(np.argmin(fm), fm.shape)
                        return PositivityResult(
                            PositivityStatus.CERTIFIED_NEVER, steps=k,
                            certificate={"type": "negative_limit", "k": k, "period": period,
                                         "entry": [int(i), int(j)], "value": float(fm[i, j])})
        history.append(nxt)
        current = nxt
        prev_positive = now_positive
    return PositivityResult(PositivityStatus.INCONCLUSIVE, steps=k_max + 1)


# --- column-sum condition ---------------------------------------------------

class ConditionStatus(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of the column-sum inequality test.

    ``i`` and ``j`` are 0-based and name the first failing entry at step ``k``.
    """

    status: ConditionStatus
    k: int
    i: int | None = None
    j: int | None = None


def condition_vi_check(a: np.ndarray, lam, v: np.ndarray, k_max: int = 256,
                       eps: float = mx.DEFAULT_EPS) -> ConditionResult:
    """Find the first ``k`` with ``A^k[i, j] > v_i (colsum_j(A^k) - lam^k)`` for all i, j.

    ``FAILS`` reports the first violated entry at ``k_max`` in column-major
    order.  In the float
    regime a violation within ``eps`` of equality is not trusted, and if every
    violation is of that kind the result is ``INCONCLUSIVE``.
    """
    n = a.shape[0]
    exact = mx.is_exact(a)
    mx.same_regime(a, v)
    v = v.reshape(n, 1)
    ones = _ones_row(n, exact)
    power = mx.identity(n, exact)
    lam_power = Fraction(1) if exact else 1.0
    for k in range(1, k_max + 1):
        power = a @ power
        lam_power = lam_power * lam
        if not exact:
            # shared positive rescaling leaves every inequality intact
            s = max(mx.max_abs(power), abs(lam_power), np.finfo(float).tiny)
            power = power / s
            lam_power = lam_power / s
        gap = power - v @ (ones @ power - lam_power * ones)
        # the inequality is stated per column, so scan column by column
        entries = [(i, j) for j in range(n) for i in range(n)]
        if exact:
            bad = [(i, j) for (i, j) in entries if gap[i, j] <= 0]
            clear = bad
        else:
            band = eps * max(mx.max_abs(power), abs(lam_power))
            bad = [(i, j) for (i, j) in entries if gap[i, j] <= band]
            clear = [(i, j) for (i, j) in bad if gap[i, j] < -band]
        if not bad:
            return ConditionResult(ConditionStatus.HOLDS, k)
        if k == k_max:
            if clear:
                i, j = clear[0]
                return ConditionResult(ConditionStatus.FAILS, k, int(i), int(j))
            return ConditionResult(ConditionStatus.INCONCLUSIVE, k)
    raise ValueError("k_max must be at least 1")


# --- verdicts ---------------------------------------------------------------

class VerdictKind(enum.Enum):
    SIMPLE_DOMINANT = "simple_dominant"
    MULTIPLICITY_AT_LEAST_TWO = "multiplicity_at_least_two"
    NOT_SIMPLE_DOMINANT_CERTIFIED = "not_simple_dominant_certified"
    WEAK_PERRON = "weak_perron"
    SEMISIMPLE_DOMINANT = "semisimple_dominant"
    NO_REAL_DOMINANT_CANDIDATE = "no_real_dominant_candidate"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    kind: VerdictKind
    lam: object = None
    v: np.ndarray | None = None
    u: np.ndarray | None = None
    z: np.ndarray | None = None
    k_positive: int | None = None
    signature: mx.Signature | None = None
    limit: np.ndarray | None = None
    multiplicity_estimate: float | None = None
    certificate: dict | None = None
    k_max_reached: bool = False
    regime: str = "exact"
    diagnostics: list[str] = field(default_factory=list)


def nonnegative_proposition(a: np.ndarray, lam, v: np.ndarray,
                            eps: float = mx.DEFAULT_EPS) -> Verdict | None:
    """Weak Perron conclusion when ``Z`` is merely nonnegative.

    Returns ``None`` when ``Z`` has a negative entry (the test does not apply).
    """
    n = a.shape[0]
    exact = mx.is_exact(a)
    v = v.reshape(n, 1)
    if not all(x > 0 for x in v.flat):
        raise ValueError("v must be positive")
    if not _is_one(sum(v.flat), exact, 1e-9):
        raise ValueError("entries of v must sum to 1")
    z = conjugate_matrix(a, lam, v)
    if not mx.is_nonnegative(z, eps):
        return None
    return Verdict(
        VerdictKind.WEAK_PERRON, lam=lam, v=v, z=z, regime=mx.regime(a),
        diagnostics=["Z is nonnegative: the spectral radius is an eigenvalue at least the modulus "
                     "of every other eigenvalue (simplicity and dominance not established)"])


def stochastic_check(a: np.ndarray, k_max: int = 256, eps: float = mx.DEFAULT_EPS,
                     tol: float = 1e-12) -> Verdict:
    """Specialisation to rows summing to one: ``v = 1/n``, ``lam = 1``."""
    n = a.shape[0]
    exact = mx.is_exact(a)
    ones = mx.ones_column(n, exact)
    sums = a @ ones
    if exact:
        ok = mx.equal(sums, ones)
    else:
        ok = bool(np.max(np.abs(sums - 1.0)) <= tol * max(1.0, mx.max_abs(a)))
    if not ok:
        raise RowSumsNotOne("row sums of A are not all 1")
    lam = Fraction(1) if exact else 1.0
    v = ones / n
    z = conjugate_matrix(a, lam, v)
    cond = condition_vi_check(a, lam, v, k_max, eps)
    notes = [f"column-average condition: {cond.status.value} at k={cond.k}"
             + (f" (entry {cond.i + 1},{cond.j + 1})" if cond.i is not None else "")]
    pos = eventual_positivity(z, k_max, eps, lam=lam if exact else None)
    common = dict(lam=lam, v=v, z=z, regime=mx.regime(a), diagnostics=notes)
    if pos.positive:
        return Verdict(VerdictKind.SIMPLE_DOMINANT, k_positive=pos.k, **common)
    if pos.status is PositivityStatus.CERTIFIED_NEVER:
        return Verdict(VerdictKind.NOT_SIMPLE_DOMINANT_CERTIFIED, certificate=pos.certificate, **common)
    return Verdict(VerdictKind.INCONCLUSIVE, k_max_reached=True, **common)


def analyze(a: np.ndarray, config: AnalysisConfig | None = None, eigendata=None) -> Verdict:
    """Run the full test on ``A``.

    ``eigendata`` is an optional ``(lam, v, u)`` triple (``u`` may be None)
    that replaces the eigenvector search; it is verified first.

    Pipeline: find the dominant real eigenpair; rule out multiplicity two
    (orthogonal ``u``, ``v`` or a multi-dimensional eigenspace); require
    ``lam > 0``; flip signs so that ``S v > 0``; conjugate ``S A S`` and scan
    for eventual positivity.  When the scan is inconclusive the weak
    nonnegative test and the normalised power limit give partial answers.
    """
    cfg = config or AnalysisConfig()
    notes: list[str] = []
    try:
        if eigendata is not None:
            pair = verify_eigendata(a, *eigendata, tol=cfg.eigendata_tol)
        else:
            pair = dominant_eigenpair(a, cfg.tol, cfg.max_iter, cfg.seed)
    except NoRealDominantCandidate as exc:
        return Verdict(VerdictKind.NO_REAL_DOMINANT_CANDIDATE, regime=mx.regime(a),
                       diagnostics=[str(exc), "the dominant eigenvalues are complex or tied in modulus"])

    work = a
    if mx.is_exact(a) and not pair.exact:
        work = mx.to_float(a)
        notes.append("dominant eigenvalue is irrational; continuing in floating point")
    regime = mx.regime(work)
    lam = pair.lam

    try:
        pair = normalize_pair(pair, cfg.tol_orth, cfg.tol_zero)
    except MultiplicityAtLeastTwo as exc:
        return _not_simple(work, pair, exc, cfg, notes)
    except VHasZeroEntry as exc:
        notes.append(f"{exc}; no signature makes v positive")
        if lam > 0:
            return _fallback(work, pair, None, cfg, notes)

    if lam <= 0:
        return Verdict(VerdictKind.NO_REAL_DOMINANT_CANDIDATE, lam=lam, v=pair.v, u=pair.u,
                       regime=regime,
                       diagnostics=notes + ["largest real eigenvalue in modulus is not positive"])

    s = mx.Signature.of_vector(pair.v)
    if not s.is_identity:
        notes.append(f"right eigenvector has mixed signs; testing S A S with S = diag{s.signs}")
    b = mx.apply_signature(s, work)
    sv = mx.flip_rows(s, pair.v)
    us = mx.flip_cols(s, pair.u)
    witness = build_conjugate(b, lam, sv, us, tol=max(cfg.tol_orth, 1e-9))
    pos = eventual_positivity(witness.z, cfg.k_max, cfg.eps_pos,
                              lam=lam if mx.is_exact(b) else None, conv_tol=cfg.conv_tol)
    common = dict(lam=lam, v=pair.v, u=pair.u, z=witness.z, signature=s, regime=regime)
    if pos.positive:
        return Verdict(VerdictKind.SIMPLE_DOMINANT, k_positive=pos.k, diagnostics=notes, **common)
    if pos.status is PositivityStatus.CERTIFIED_NEVER:
        if mx.is_nonnegative(witness.z, cfg.eps_pos):
            notes.append("Z is nonnegative, so the spectral radius is at least as large as every "
                         "other eigenvalue in modulus")
        return Verdict(VerdictKind.NOT_SIMPLE_DOMINANT_CERTIFIED, certificate=pos.certificate,
                       diagnostics=notes, **common)
    notes.append(f"no positive consecutive powers of Z up to k = {cfg.k_max}")
    return _fallback(work, pair, witness.z, cfg, notes, signature=s)


def _probe(work: np.ndarray, lam, cfg: AnalysisConfig):
    if not lam > 0:
        return None
    return semisimplicity_probe(work, lam, cfg.probe_k_max, cfg.conv_tol)


def _not_simple(work, pair: EigenPair, exc: MultiplicityAtLeastTwo, cfg, notes) -> Verdict:
    if exc.geometric_multiplicity >= 2:
        cert = {"type": "eigenspace_dimension", "dimension": exc.geometric_multiplicity}
    else:
        cert = {"type": "orthogonal_eigenvectors", "uv": exc.uv}
    common = dict(lam=pair.lam, v=pair.v, u=pair.u, certificate=cert, regime=mx.regime(work))
    probe = _probe(work, pair.lam, cfg)
    if probe is not None and probe.converged and probe.multiplicity_estimate > 1.5:
        return Verdict(VerdictKind.SEMISIMPLE_DOMINANT, limit=probe.limit,
                       multiplicity_estimate=probe.multiplicity_estimate,
                       diagnostics=notes + [str(exc),
                                            f"normalised powers converge after {probe.steps} steps"],
                       **common)
    if probe is not None:
        notes = notes + [f"normalised power limit: {probe.status.value}"]
    return Verdict(VerdictKind.MULTIPLICITY_AT_LEAST_TWO, diagnostics=notes + [str(exc)], **common)


def _fallback(work, pair: EigenPair, z, cfg, notes, signature=None) -> Verdict:
    lam = pair.lam
    common = dict(lam=lam, v=pair.v, u=pair.u, z=z, signature=signature, regime=mx.regime(work),
                  k_max_reached=z is not None)
    if z is not None and mx.is_nonnegative(z, cfg.eps_pos):
        return Verdict(VerdictKind.WEAK_PERRON, diagnostics=notes + [
            "Z is nonnegative: the spectral radius is an eigenvalue at least the modulus of every "
            "other eigenvalue (simplicity and dominance not established)"], **common)
    probe = _probe(work, lam, cfg)
    if probe is not None and probe.converged:
        if probe.multiplicity_estimate > 1.5:
            return Verdict(VerdictKind.SEMISIMPLE_DOMINANT, limit=probe.limit,
                           multiplicity_estimate=probe.multiplicity_estimate,
                           diagnostics=notes, **common)
        notes = notes + [f"normalised powers converge with trace {probe.multiplicity_estimate:.6g}"]
        return Verdict(VerdictKind.INCONCLUSIVE, limit=probe.limit,
                       multiplicity_estimate=probe.multiplicity_estimate, diagnostics=notes, **common)
    if probe is not None:
        notes = notes + [f"normalised power limit: {probe.status.value}"]
    return Verdict(VerdictKind.INCONCLUSIVE, diagnostics=notes, **common)
