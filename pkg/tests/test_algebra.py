import random
from fractions import Fraction

import pytest

from procsym.core.algebra import (
    Basis,
    dot,
    extend_basis,
    format_rational,
    parse_rational,
    poly_add,
    poly_diff,
    poly_eval,
    poly_from_terms,
    poly_mul,
    poly_terms,
    polynomial_fraction_field,
    vec_mat_mul,
)
from procsym.core.exceptions import DimensionMismatchError, VariableCountError

F = Fraction


def test_vec_mat_mul_is_exact():
    v = (F(1, 3), F(2, 3))
    m = ((F(1, 4), F(3, 4)), (F(1), F(0)))
    assert vec_mat_mul(v, m) == (F(3, 4), F(1, 4))


def test_vec_mat_mul_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        vec_mat_mul((F(1),), ((F(1), F(0)), (F(0), F(1))))


def test_dot():
    assert dot((F(1, 2), F(1, 2)), (F(1), F(0))) == F(1, 2)
    with pytest.raises(DimensionMismatchError):
        dot((F(1),), (F(1), F(1)))


@pytest.mark.parametrize(
    "text, expected",
    [("3/4", F(3, 4)), ("1", F(1)), (" 2 / 6 ", F(1, 3)), ("0", F(0)), ("-1/2", F(-1, 2))],
)
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["0.5", "1e3", "", "a/b", "1/"])
def test_parse_rational_rejects_non_rationals(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_parse_rational_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


def test_format_rational():
    assert format_rational(F(3, 4)) == "3/4"
    assert format_rational(F(2)) == "2"


def test_extend_basis_skips_dependent_vectors():
    b = Basis(3)
    b, added = extend_basis(b, (F(1), F(2), F(0)), (1,))
    assert added
    b, added = extend_basis(b, (F(0), F(1), F(1)), (2,))
    assert added
    b, added = extend_basis(b, (F(2), F(5), F(1)), (1, 2))
    assert not added
    assert len(b) == 2
    assert set(b.words) == {(1,), (2,)}
    assert not b.full


def test_extend_basis_fills_up():
    b = Basis(2)
    for word, v in (((0,), (F(0), F(3))), ((1,), (F(1), F(1)))):
        b, _ = extend_basis(b, v, word)
    assert b.full
    assert b.pivots == (0, 1)


def test_extend_basis_dimension_check():
    with pytest.raises(DimensionMismatchError):
        extend_basis(Basis(2), (F(1),), (0,))


def test_polynomial_square():
    p = poly_from_terms(1, {(1,): F(1, 2), (0,): F(1, 2)})
    assert poly_terms(poly_mul(p, p)) == {(2,): F(1, 4), (1,): F(1, 2), (0,): F(1, 4)}


def test_polynomial_eval_and_diff():
    p = poly_from_terms(2, {(1, 1): F(1, 3), (0, 2): F(2, 3)})
    assert poly_eval(p, (F(3), F(1, 2))) == F(1, 2) + F(1, 6)
    assert poly_terms(poly_diff(p, 2)) == {(1, 0): F(1, 3), (0, 1): F(4, 3)}
    # coefficients of a distribution polynomial sum to one at the all-ones point
    assert poly_eval(p, (1, 1)) == 1


def test_polynomials_over_different_variable_counts():
    p = poly_from_terms(1, {(1,): 1})
    q = poly_from_terms(2, {(1, 0): 1})
    with pytest.raises(VariableCountError):
        poly_add(p, q)
    with pytest.raises(VariableCountError):
        poly_eval(q, (1,))
    with pytest.raises(VariableCountError):
        poly_from_terms(2, {(1,): 1})


def test_fraction_field_spans():
    fld, (y1, y2) = polynomial_fraction_field(2)
    half = fld.convert(F(1, 2))
    b = Basis(2)
    b, added = extend_basis(b, (y1 * half, fld.one), (0,))
    assert added
    b, added = extend_basis(b, (y1, 2 * fld.one), (1,))
    assert not added
    b, added = extend_basis(b, (y2, fld.one), (0, 1))
    assert added and b.full


def _rationals(rng, n):
    return [F(rng.randint(-40, 40), rng.randint(1, 25)) for _ in range(n)]


def _random_poly(rng, k):
    terms = {}
    for _ in range(4):
        terms[tuple(rng.randint(0, 3) for _ in range(k))] = F(rng.randint(-9, 9), rng.randint(1, 6))
    return poly_from_terms(k, terms)


@pytest.mark.parametrize("seed", range(20))
def test_rational_arithmetic_laws(seed):
    a, b, c = _rationals(random.Random(seed), 3)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert parse_rational(format_rational(a)) == a
    assert dot((a, b), (c, F(1))) == a * c + b


@pytest.mark.parametrize("seed", range(10))
def test_poly_eval_respects_sum_and_product(seed):
    rng = random.Random(seed)
    p, q = _random_poly(rng, 2), _random_poly(rng, 2)
    for _ in range(3):
        point = tuple(F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(2))
        assert poly_eval(poly_add(p, q), point) == poly_eval(p, point) + poly_eval(q, point)
        assert poly_eval(poly_mul(p, q), point) == poly_eval(p, point) * poly_eval(q, point)


@pytest.mark.parametrize("seed", range(10))
def test_basis_never_outgrows_its_dimension(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    b = Basis(n)
    for step in range(3 * n):
        b, _ = extend_basis(b, tuple(_rationals(rng, n)), (step,))
        assert len(b) <= n
    # combinations of basis rows add nothing
    weights = _rationals(rng, len(b))
    combo = tuple(sum((c * row[j] for c, row in zip(weights, b.vectors)), F(0)) for j in range(n))
    again, added = extend_basis(b, combo, (99,))
    assert not added
    assert again == b
