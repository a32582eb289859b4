from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qint.laurent import TRIANGLE_RATIO, LaurentPoly

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.dictionaries(st.integers(-6, 6), coeffs, max_size=5).map(LaurentPoly)


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == LaurentPoly.zero()


@given(polys)
def test_pairs_round_trip(p):
    assert LaurentPoly.from_pairs(p.to_pairs()) == p


@given(polys, st.floats(0.05, 0.6))
def test_evaluation_is_a_homomorphism(p, theta):
    import cmath

    z = cmath.exp(0.5j * cmath.pi * theta)
    q = p * TRIANGLE_RATIO
    assert abs(q.evaluate(z) - p.evaluate(z) * TRIANGLE_RATIO.evaluate(z)) < 1e-9 * (1 + abs(q.evaluate(z)))


def test_rendering():
    assert str(LaurentPoly({4: 1, 0: -2, -4: 1})) == "z^4 - 2 + z^-4"
    assert str(LaurentPoly()) == "0"
    assert str(LaurentPoly({1: Fraction(-1, 2)})) == "-1/2*z"
    assert LaurentPoly({2: 1}).to_pairs() == [[2, "1"]]


def test_powers_and_shift():
    assert TRIANGLE_RATIO ** 0 == LaurentPoly.one()
    assert TRIANGLE_RATIO ** 2 == LaurentPoly({4: 1, 2: 2, 0: 3, -2: 2, -4: 1})
    assert LaurentPoly({3: 2}) ** -1 == LaurentPoly({-3: Fraction(1, 2)})
    assert LaurentPoly({0: 1}).shift(5) == LaurentPoly({5: 1})
    with pytest.raises(ValueError):
        TRIANGLE_RATIO ** -1


def test_degrees_and_floats_rejected():
    p = LaurentPoly({-3: 1, 5: -2})
    assert (p.degree(), p.low_degree(), p.leading_coefficient()) == (5, -3, -2)
    with pytest.raises(ValueError):
        LaurentPoly().degree()
    with pytest.raises(TypeError):
        LaurentPoly({0: 0.5})
