import random
from fractions import Fraction

import pytest

from chiralg.poly import (
    Polynomial,
    format_scalar,
    parse_scalar,
    poly_compose_affine,
    poly_partial,
)


def rand_poly(rng, nvars, max_degree=6, nterms=4):
    terms = {}
    for _ in range(nterms):
        exp = tuple(rng.randint(0, max_degree // max(1, nvars)) for _ in range(nvars))
        terms[exp] = terms.get(exp, Fraction(0)) + Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return Polynomial(nvars, {e: c for e, c in terms.items() if c})


def test_scalar_roundtrip():
    for text in ("3/2", "-7", "0", "22/7"):
        assert format_scalar(parse_scalar(text)) == str(Fraction(text))
    with pytest.raises(ValueError):
        parse_scalar("1.5x")


def test_scalar_field_axioms_randomized():
    rng = random.Random(11)
    for _ in range(200):
        a = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        b = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        c = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * (1 / a) == 1


def test_partial_power_rule():
    x = Polynomial.variable(1, 1)
    assert poly_partial(x * x, 1) == x.scale(2)


def test_partial_mixed_term():
    x = Polynomial.variable(2, 1)
    y = Polynomial.variable(2, 2)
    assert poly_partial(x * y, 2) == x


def test_partial_constant():
    assert poly_partial(Polynomial.const(1, 3), 1).is_zero()


def test_partial_index_out_of_range():
    with pytest.raises(IndexError):
        poly_partial(Polynomial.variable(2, 1), 3)


def test_partials_commute():
    rng = random.Random(5)
    for _ in range(30):
        f = rand_poly(rng, 3)
        for i in range(1, 4):
            for j in range(1, 4):
                assert poly_partial(poly_partial(f, i), j) == poly_partial(
                    poly_partial(f, j), i
                )


def test_compose_affine_identity():
    x = Polynomial.variable(1, 1)
    assert poly_compose_affine(x, [[Fraction(1)]], [Fraction(0)]) == x


def test_compose_affine_substitution():
    x = Polynomial.variable(1, 1)
    out = poly_compose_affine(x, [[Fraction(2)]], [Fraction(3)])
    assert out == x.scale(2) + Polynomial.const(1, 3)


def test_compose_affine_binomial():
    x = Polynomial.variable(1, 1)
    out = poly_compose_affine(x * x, [[Fraction(1)]], [Fraction(1)])
    assert out == x * x + x.scale(2) + Polynomial.const(1, 1)


def test_compose_affine_inverse_roundtrip():
    rng = random.Random(7)
    t = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    tinv = [[Fraction(1), Fraction(-1)], [Fraction(-1), Fraction(2)]]
    v = [Fraction(3), Fraction(-1)]
    minus_tinv_v = [
        -(tinv[0][0] * v[0] + tinv[0][1] * v[1]),
        -(tinv[1][0] * v[0] + tinv[1][1] * v[1]),
    ]
    for _ in range(20):
        f = rand_poly(rng, 2, max_degree=4)
        once = poly_compose_affine(f, t, v)
        back = poly_compose_affine(once, tinv, minus_tinv_v)
        assert back == f


def test_polynomial_hash_and_eq():
    x = Polynomial.variable(2, 1)
    y = Polynomial.variable(2, 2)
    assert hash(x * y) == hash(y * x)
    assert x * y == y * x
    assert x != y


def test_homogeneous_parts():
    x = Polynomial.variable(1, 1)
    f = x * x + x.scale(3) + Polynomial.const(1, 5)
    parts = f.homogeneous_parts()
    assert sorted(parts) == [0, 1, 2]
    total = Polynomial.zero(1)
    for p in parts.values():
        assert p.is_homogeneous()
        total = total + p
    assert total == f
