from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import golden as g
from perronpos import matrix as mx

small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def exact_square(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n))
    return mx.exact(rows)


def test_exact_parses_strings_and_ints():
    a = mx.exact([["-7/20", 3], [Fraction(1, 2), "4"]])
    assert a[0, 0] == Fraction(-7, 20) and a[1, 1] == 4
    assert mx.is_exact(a) and mx.regime(a) == "exact"


@pytest.mark.parametrize("bad", ["1/0", "abc", True, None])
def test_to_fraction_rejects(bad):
    with pytest.raises((ValueError, TypeError)):
        mx.to_fraction(bad)


def test_floating_regime():
    a = mx.floating([["1/2", 2], [3, 4]])
    assert a.dtype == float and a[0, 0] == 0.5 and mx.regime(a) == "float"


def test_mixed_regimes_rejected():
    with pytest.raises(mx.RegimeError):
        mx.mat_mul(g.LAMBDA15, mx.to_float(g.LAMBDA15))


def test_dimension_mismatch():
    with pytest.raises(mx.DimensionError):
        mx.mat_mul(mx.exact([[1, 2]]), mx.exact([[1, 2]]))


def test_mat_mul_examples():
    assert mx.equal(mx.mat_mul(g.SQUARE_POSITIVE, g.SQUARE_POSITIVE), mx.exact([[527, 290], [140, 407]]))
    assert mx.equal(mx.mat_mul(mx.identity(2), g.LAMBDA15), g.LAMBDA15)
    assert mx.equal(mx.mat_mul(g.DEFECTIVE, g.DEFECTIVE),
                    mx.exact([[-3, 2, 2], [-4, 3, 2], [-4, 2, 3]]))


def test_mat_pow_examples():
    assert mx.equal(mx.mat_pow(g.DEFECTIVE, 5), mx.exact([[-9, 5, 5], [-10, 6, 5], [-10, 5, 6]]))
    assert mx.equal(mx.mat_pow(g.LAMBDA15, 0), mx.identity(2))
    assert mx.equal(mx.mat_pow(g.SQUARE_POSITIVE, 2), mx.exact([[527, 290], [140, 407]]))
    with pytest.raises(ValueError):
        mx.mat_pow(g.LAMBDA15, -1)


def test_mat_pow_closed_form_for_defective_example():
    for k in range(8):
        expected = mx.exact([[1 - 2 * k, k, k], [-2 * k, k + 1, k], [-2 * k, k, k + 1]])
        assert mx.equal(mx.mat_pow(g.DEFECTIVE, k), expected)


@settings(max_examples=200, derandomize=True, deadline=None)
@given(exact_square(), st.integers(0, 5), st.integers(0, 5))
def test_mat_pow_additive(a, j, k):
    assert mx.equal(mx.mat_pow(a, j + k), mx.mat_pow(a, j) @ mx.mat_pow(a, k))


def test_positivity_predicates():
    assert mx.is_strictly_positive(mx.exact([[527, 290], [140, 407]]))
    assert not mx.is_strictly_positive(mx.identity(2))
    assert not mx.is_strictly_positive(g.NONEXAMPLE_Z)
    assert mx.is_nonnegative(g.WEAK_Z)
    assert not mx.is_nonnegative(g.NONEXAMPLE_Z)
    assert mx.is_nonnegative(mx.zeros((2, 2)))


def test_float_positivity_is_relative():
    a = np.array([[1e300, 1e280], [1e270, 1e300]])
    assert not mx.is_strictly_positive(a, eps=1e-12)
    assert mx.is_strictly_positive(a, eps=1e-40)
    assert mx.is_nonnegative(np.array([[1.0, -1e-15]]))


def test_apply_signature_examples():
    s = mx.Signature((1, -1))
    assert mx.equal(mx.apply_signature(s, g.LAMBDA15), mx.exact([[-11, -14], [26, 29]]))
    assert mx.equal(mx.apply_signature(mx.Signature.identity(2), g.LAMBDA15), g.LAMBDA15)
    assert mx.equal(mx.apply_signature(mx.Signature((-1, -1)), g.LAMBDA15), g.LAMBDA15)
    with pytest.raises(mx.DimensionError):
        mx.apply_signature(mx.Signature((1, 1, 1)), g.LAMBDA15)


def test_signature_validation_and_matrix():
    with pytest.raises(ValueError):
        mx.Signature((1, 0))
    s = mx.Signature.of_vector(np.array([[0.5], [-2.0], [0.0]]))
    assert s.signs == (1, -1, 1)
    assert mx.equal(s.matrix() @ s.matrix(), mx.identity(3))


@settings(max_examples=200, derandomize=True, deadline=None)
@given(exact_square(4), st.data())
def test_signature_conjugation_is_involution(a, data):
    n = a.shape[0]
    s = mx.Signature(tuple(data.draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))))
    assert mx.equal(mx.apply_signature(s, mx.apply_signature(s, a)), a)
    assert mx.equal(mx.apply_signature(s, a), s.matrix() @ a @ s.matrix())


def test_exact_elimination():
    assert mx.rank(g.MULT2 - mx.identity(3)) == 2
    (basis,) = mx.nullspace(g.MULT2 - mx.identity(3))
    assert mx.equal((g.MULT2 - mx.identity(3)) @ basis, mx.zeros((3, 1)))
    inv = mx.inverse(g.LAMBDA15)
    assert mx.equal(inv @ g.LAMBDA15, mx.identity(2))
    with pytest.raises(ZeroDivisionError):
        mx.inverse(mx.exact([[1, 2], [2, 4]]))


def test_trace_and_formatting():
    assert mx.trace(g.SEMISIMPLE_LIMIT) == 2
    assert mx.format_entry(Fraction(-7, 20)) == "-7/20"
    assert mx.format_entry(397.99748742132) == "397.997487421"
    assert mx.rows_of(mx.exact([[1, "1/2"]])) == [["1", "1/2"]]
