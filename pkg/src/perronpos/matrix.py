"""Dense matrices over two scalar regimes.

Exact matrices are numpy object arrays holding :class:`fractions.Fraction`
entries; floating matrices are plain ``float64`` arrays.  The regime is read
off the dtype, so every function here works on ordinary ndarrays.  Vectors are
thin 2-D arrays (``n x 1`` columns, ``1 x n`` rows) and go through the same
code paths as square matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_EPS = 1e-12


class RegimeError(TypeError):
    """Exact and floating operands were mixed."""


class DimensionError(ValueError):
    pass


def exact(rows) -> np.ndarray:
    """Build an exact matrix; entries may be ints, Fractions or strings like ``"-7/20"``."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_fraction(x)
    return out


def floating(rows) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return np.array([[float(to_fraction(x)) if isinstance(x, str) else float(x) for x in row]
                     for row in arr], dtype=float)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        # Fraction("1/0") raises ZeroDivisionError; normalise to ValueError
        try:
            return Fraction(x.strip())
        except ZeroDivisionError as exc:
            raise ValueError(f"zero denominator in {x!r}") from exc
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def is_exact(a: np.ndarray) -> bool:
    return a.dtype == object


def regime(a: np.ndarray) -> str:
    return "exact" if is_exact(a) else "float"


def same_regime(*arrays: np.ndarray) -> bool:
    """Raise :class:`RegimeError` unless all arrays share one regime."""
    kinds = {is_exact(a) for a in arrays}
    if len(kinds) > 1:
        raise RegimeError("cannot mix exact and floating matrices")
    return kinds.pop() if kinds else True


def to_float(a: np.ndarray) -> np.ndarray:
    if is_exact(a):
        return np.array([[float(x) for x in row] for row in a], dtype=float)
    return np.asarray(a, dtype=float)


def like(a: np.ndarray, rows) -> np.ndarray:
    """Build a matrix from ``rows`` in the regime of ``a``."""
    return exact(rows) if is_exact(a) else np.array(rows, dtype=float)


def identity(n: int, exact_regime: bool = True) -> np.ndarray:
    if exact_regime:
        out = np.full((n, n), Fraction(0), dtype=object)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n)


def zeros(shape, exact_regime: bool = True) -> np.ndarray:
    if exact_regime:
        return np.full(shape, Fraction(0), dtype=object)
    return np.zeros(shape)


def ones_column(n: int, exact_regime: bool = True) -> np.ndarray:
    if exact_regime:
        return np.full((n, 1), Fraction(1), dtype=object)
    return np.ones((n, 1))


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    same_regime(a, b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def mat_pow(a: np.ndarray, k: int) -> np.ndarray:
    """``a**k`` by repeated squaring; ``a**0`` is the identity."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    _check_square(a)
    result = identity(a.shape[0], is_exact(a))
    base = a
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def max_abs(a: np.ndarray):
    if a.size == 0:
        return 0
    if is_exact(a):
        return max(abs(x) for x in a.flat)
    return float(np.max(np.abs(a)))


def is_strictly_positive(a: np.ndarray, eps: float = DEFAULT_EPS) -> bool:
    """Every entry is positive.

    In the float regime "positive" means larger than ``eps`` times the
    largest absolute entry, since powers scale geometrically and an absolute
    cutoff would be meaningless.
    """
    if is_exact(a):
        return all(x > 0 for x in a.flat)
    scale = max_abs(a)
    return bool(scale > 0 and np.all(a > eps * scale))


def is_nonnegative(a: np.ndarray, eps: float = DEFAULT_EPS) -> bool:
    if is_exact(a):
        return all(x >= 0 for x in a.flat)
    return bool(np.all(a >= -eps * max_abs(a)))


@dataclass(frozen=True)
class Signature:
    """Diagonal +-1 matrix stored as its sign vector."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signature entries must be +1 or -1, got {self.signs}")

    @classmethod
    def of_vector(cls, v: np.ndarray) -> "Signature":
        """Signature flipping ``v`` to be nonnegative (zero entries keep +1)."""
        return cls(tuple(-1 if x < 0 else 1 for x in np.asarray(v).flat))

    @classmethod
    def identity(cls, n: int) -> "Signature":
        return cls((1,) * n)

    def __len__(self) -> int:
        return len(self.signs)

    @property
    def is_identity(self) -> bool:
        return all(s == 1 for s in self.signs)

    def matrix(self, exact_regime: bool = True) -> np.ndarray:
        m = zeros((len(self), len(self)), exact_regime)
        for i, s in enumerate(self.signs):
            m[i, i] = Fraction(s) if exact_regime else float(s)
        return m


def apply_signature(s: Signature, a: np.ndarray) -> np.ndarray:
    """Compute ``S A S``; entry (i, j) becomes ``s_i s_j a_ij``."""
    n = len(s)
    if a.shape != (n, n):
        raise DimensionError(f"signature of length {n} does not fit {a.shape}")
    signs = np.array(s.signs, dtype=object if is_exact(a) else float)
    return a * np.outer(signs, signs)


def flip_rows(s: Signature, v: np.ndarray) -> np.ndarray:
    """``S v`` for a column (or any array with n rows)."""
    signs = np.array(s.signs, dtype=object if is_exact(v) else float).reshape(-1, 1)
    return v * signs


def flip_cols(s: Signature, u: np.ndarray) -> np.ndarray:
    """``u S`` for a row vector."""
    signs = np.array(s.signs, dtype=object if is_exact(u) else float).reshape(1, -1)
    return u * signs


def trace(a: np.ndarray):
    _check_square(a)
    total = Fraction(0) if is_exact(a) else 0.0
    for i in range(a.shape[0]):
        total += a[i, i]
    return total


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    """Exact entrywise equality (use numpy.allclose for the float regime)."""
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"expected a nonempty square matrix, got shape {a.shape}")


# --- exact elimination -----------------------------------------------------

def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    m = a.copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(a: np.ndarray) -> list[np.ndarray]:
    """Basis of the right kernel as columns (exact input only)."""
    if not is_exact(a):
        raise RegimeError("exact nullspace needs an exact matrix")
    reduced, pivots = rref(a)
    n = a.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = zeros((n, 1))
        vec[f, 0] = Fraction(1)
        for row, p in enumerate(pivots):
            vec[p, 0] = -reduced[row, f]
        basis.append(vec)
    return basis


def rank(a: np.ndarray) -> int:
    return len(rref(a)[1])


def inverse(a: np.ndarray) -> np.ndarray:
    """Exact inverse by Gauss-Jordan; raises ZeroDivisionError when singular."""
    _check_square(a)
    n = a.shape[0]
    reduced, pivots = rref(np.hstack([a, identity(n)]))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return reduced[:, n:]


def float_nullspace(a: np.ndarray, rtol: float) -> list[np.ndarray]:
    """Right-singular vectors whose singular values fall below ``rtol * sigma_max``."""
    _, sv, vh = np.linalg.svd(to_float(a))
    cutoff = rtol * max(sv[0], np.finfo(float).tiny)
    return [vh[i].reshape(-1, 1) for i in range(len(sv)) if sv[i] <= cutoff]


def format_entry(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return f"{float(x):.12g}"


def rows_of(a: np.ndarray) -> list[list[str]]:
    return [[format_entry(x) for x in row] for row in a]
