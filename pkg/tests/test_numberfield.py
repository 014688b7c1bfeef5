"""Exact quadratic-field arithmetic, sign decisions, and linear solving."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from vers import FieldError, FieldScalar, invert_matrix, scalar, solve_linear

rationals = st.fractions(
    min_value=-30, max_value=30, max_denominator=12
)


def quadratics(d: int = 3):
    return st.builds(lambda a, b: FieldScalar(a, b, d), rationals, rationals)


# ----- construction ----------------------------------------------------------------


def test_constructor_coercions():
    assert FieldScalar(2) == FieldScalar(Fraction(2)) == FieldScalar("2")
    assert scalar("3/4") == FieldScalar(Fraction(3, 4))
    assert FieldScalar(1, 2, 3).d == 3


def test_perfect_square_discriminant_folds():
    assert FieldScalar(0, 2, 9) == FieldScalar(6)
    assert FieldScalar(1, 1, 4) == FieldScalar(3)
    assert FieldScalar(5, 7, 0) == FieldScalar(5)
    assert FieldScalar(0, 2, 9).d == 0


def test_zero_irrational_part_drops_discriminant():
    x = FieldScalar(2, 1, 3) - FieldScalar(0, 1, 3)
    assert x.d == 0
    assert x == 2


def test_negative_discriminant_rejected():
    with pytest.raises(FieldError):
        FieldScalar(1, 1, -2)


def test_mixing_distinct_fields_rejected():
    with pytest.raises(FieldError):
        FieldScalar(0, 1, 2) + FieldScalar(0, 1, 3)
    # rational operands mix with anything
    assert FieldScalar(1) + FieldScalar(0, 1, 2) == FieldScalar(1, 1, 2)


# ----- arithmetic against the Fraction oracle ------------------------------------------


@given(rationals, rationals)
def test_rational_arithmetic_matches_fraction(p, q):
    x, y = FieldScalar(p), FieldScalar(q)
    assert (x + y).a == p + q
    assert (x - y).a == p - q
    assert (x * y).a == p * q
    if q != 0:
        assert (x / y).a == p / q


@given(quadratics(), quadratics(), quadratics())
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(quadratics())
def test_additive_and_multiplicative_inverses(x):
    assert x + (-x) == 0
    if not x.is_zero():
        assert x * x.inverse() == 1
        assert (1 / x) * x == 1


@given(quadratics(), rationals)
def test_mixed_operand_coercion(x, q):
    assert x + q == x + FieldScalar(q)
    assert q + x == x + q
    assert x * q == FieldScalar(q) * x
    if q != 0:
        assert (x / q) * q == x


# ----- exact sign against a floating-point oracle --------------------------------------


@given(st.sampled_from([2, 3, 5, 7]), rationals, rationals)
def test_sign_matches_float_oracle(d, a, b):
    x = FieldScalar(a, b, d)
    approx = float(a) + float(b) * math.sqrt(d)
    assume(abs(approx) > 1e-9)
    assert x.sign() == (1 if approx > 0 else -1)


def test_sign_of_zero_and_near_cancellations():
    assert FieldScalar(0).sign() == 0
    # 7/4 - sqrt(3) > 0 but 12/7 - sqrt(3) < 0
    assert FieldScalar(Fraction(7, 4), -1, 3).sign() == 1
    assert FieldScalar(Fraction(12, 7), -1, 3).sign() == -1
    assert FieldScalar(-2, 1, 3).sign() == -1
    assert FieldScalar(-1, 1, 3).sign() == 1


@given(quadratics(), quadratics())
def test_comparisons_follow_sign_of_difference(x, y):
    assert (x < y) == ((x - y).sign() == -1)
    assert (x >= y) == ((x - y).sign() >= 0)
    if x == y:
        assert hash(x) == hash(y)


def test_division_by_zero_raises():
    with pytest.raises(FieldError):
        FieldScalar(1) / FieldScalar(0)
    with pytest.raises(FieldError):
        FieldScalar(0, 0, 3).inverse()


# ----- linear algebra ---------------------------------------------------------------


def _mat(rows):
    return tuple(tuple(FieldScalar(x) if not isinstance(x, FieldScalar) else x for x in row) for row in rows)


def test_solve_linear_hand_example():
    # 2x + y = 5, x - y = 1  =>  x = 2, y = 1
    sol = solve_linear(_mat([[2, 1], [1, -1]]), (FieldScalar(5), FieldScalar(1)))
    assert sol == (FieldScalar(2), FieldScalar(1))


def test_solve_linear_quadratic_entries():
    r3 = FieldScalar(0, 1, 3)
    sol = solve_linear(_mat([[r3, 0], [0, 2]]), (FieldScalar(3), FieldScalar(1)))
    assert sol == (r3, FieldScalar(Fraction(1, 2)))


def test_solve_linear_singular_raises():
    with pytest.raises(FieldError, match="singular"):
        solve_linear(_mat([[1, 2], [2, 4]]), (FieldScalar(1), FieldScalar(2)))


def test_solve_linear_requires_square_system():
    with pytest.raises(FieldError):
        solve_linear(_mat([[1, 2]]), (FieldScalar(1), FieldScalar(2)))


@given(st.lists(rationals, min_size=4, max_size=4), st.lists(rationals, min_size=2, max_size=2))
def test_solve_linear_reconstructs_rhs(entries, rhs_entries):
    a = _mat([[entries[0], entries[1]], [entries[2], entries[3]]])
    det = entries[0] * entries[3] - entries[1] * entries[2]
    assume(det != 0)
    rhs = tuple(FieldScalar(x) for x in rhs_entries)
    x = solve_linear(a, rhs)
    for i in range(2):
        assert sum((x[j] * a[i][j] for j in range(2)), FieldScalar(0)) == rhs[i]


def test_invert_matrix_roundtrip():
    a = _mat([[1, 2], [3, 5]])
    inv = invert_matrix(a)
    assert inv == _mat([[-5, 2], [3, -1]])
    ident = _mat([[1, 0], [0, 1]])
    product = tuple(
        tuple(sum((a[i][k] * inv[k][j] for k in range(2)), FieldScalar(0)) for j in range(2))
        for i in range(2)
    )
    assert product == ident


def test_invert_singular_matrix_raises():
    with pytest.raises(FieldError):
        invert_matrix(_mat([[1, 1], [1, 1]]))
