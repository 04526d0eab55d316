import random
from fractions import Fraction

import pytest

from chiralg.gamma import f_mode_action, translation_operator
from chiralg.modes import Model, State, apply_mode, grade_of, word_weight


def weights_of(state):
    return {word_weight(w) for w in state.terms}
from chiralg.ope import nth_product
from chiralg.poly import Polynomial, poly_partial


def model1():
    return Model.gamma_chiral(1, 0)


def x_poly():
    return Polynomial.variable(1, 1)


def test_base_case_multiplication():
    m = model1()
    x = x_poly()
    out = f_mode_action(x * x, -1, State.vacuum(m, x))
    assert out == State.vacuum(m, x * x * x)


def test_base_case_k_nonnegative_kills_vacuum():
    m = model1()
    for k in range(0, 4):
        assert f_mode_action(x_poly(), k, State.vacuum(m)).is_zero()


def test_constant_deep_mode_vanishes():
    m = model1()
    one = Polynomial.const(1, 1)
    assert f_mode_action(one, -3, State.vacuum(m)).is_zero()


def test_x_deep_modes_are_gamma_creations():
    # x^i(z) = gamma^i(z): x_(-2) = gamma_{-1}, x_(-3) = gamma_{-2}
    m = model1()
    for k, level in ((-2, -1), (-3, -2), (-4, -3)):
        out = f_mode_action(x_poly(), k, State.vacuum(m))
        expected = State.basis(m, (m.mode(0, "gamma", 1, level),))
        assert out == expected, k


def test_beta_case_derivative_correction():
    m = model1()
    x = x_poly()
    s = State.basis(m, (m.mode(0, "beta", 1, -1),))
    # x_(0)(beta_{-1} 1) = beta_{-1} x_(0) 1 - (1)_{(-1)} 1 = -1
    out = f_mode_action(x, 0, s)
    assert out == State.vacuum(m).scale(-1)


def test_recursion_qsum_out_of_range_terms_vanish():
    m = model1()
    x = x_poly()
    f = x * x * x
    g = State.vacuum(m, x)
    for k in range(-4, -1):
        for q in range(k - 4, k + 1):  # q < k+1 is outside the stated support
            inner = f_mode_action(poly_partial(f, 1), k - q, g)
            assert inner.is_zero()


def test_translation_examples():
    m = model1()
    x = x_poly()
    assert translation_operator(State.vacuum(m)).is_zero()
    assert translation_operator(State.vacuum(m, x)) == State.basis(
        m, (m.mode(0, "gamma", 1, -1),)
    )


def test_translation_on_bc_factor():
    m = Model.gamma_chiral(1, 1)
    c_state = State.basis(m, (m.mode(0, "c", 1, 0),))
    out = translation_operator(c_state)
    assert out == State.basis(m, (m.mode(0, "c", 1, -1),))
    b_state = State.basis(m, (m.mode(0, "b", 1, -1),))
    assert translation_operator(b_state) == State.basis(m, (m.mode(0, "b", 1, -2),))


def test_translation_raises_weight_by_one():
    rng = random.Random(3)
    m = Model.gamma_chiral(2, 1)
    x1 = Polynomial.variable(2, 1)
    states = [
        State.vacuum(m, x1 * x1),
        State.basis(m, (m.mode(0, "gamma", 2, -1),), x1),
        State.basis(m, (m.mode(0, "beta", 1, -2), m.mode(0, "c", 1, 0))),
    ]
    for s in states:
        out = translation_operator(s)
        if out.is_zero():
            continue
        assert weights_of(out) == {w + 1 for w in weights_of(s)}


def test_translation_axiom_commutator():
    m = model1()
    x = x_poly()
    f = x * x
    s = State.basis(m, (m.mode(0, "beta", 1, -1),), x)
    for k in range(-4, 4):
        lhs = translation_operator(f_mode_action(f, k, s)) - f_mode_action(
            f, k, translation_operator(s)
        )
        assert lhs == f_mode_action(f, k - 1, s).scale(-k)


def test_f_mode_locality_not_just_on_vacuum():
    m = model1()
    x = x_poly()
    f, g = x * x, x
    states = [
        State.basis(m, (m.mode(0, "beta", 1, -1),), x),
        State.basis(m, (m.mode(0, "beta", 1, -2), m.mode(0, "gamma", 1, -1))),
    ]
    for s in states:
        for k in range(-3, 2):
            for l in range(-3, 2):
                comm = f_mode_action(f, k, f_mode_action(g, l, s)) - f_mode_action(
                    g, l, f_mode_action(f, k, s)
                )
                assert comm.is_zero()


def test_weight_shift_contract():
    m = model1()
    x = x_poly()
    s = State.basis(m, (m.mode(0, "gamma", 1, -1),), x)
    w0 = grade_of(s)[0]
    for k in range(-4, 2):
        out = f_mode_action(x * x, k, s)
        if out.is_zero():
            continue
        assert weights_of(out) == {w0 - k - 1}


def test_linearity_in_f_and_state():
    m = model1()
    x = x_poly()
    f, g = x * x, x
    s1 = State.vacuum(m, x)
    s2 = State.basis(m, (m.mode(0, "gamma", 1, -1),))
    for k in range(-3, 2):
        combo = f.scale(2) + g.scale(-3)
        assert f_mode_action(combo, k, s1) == f_mode_action(f, k, s1).scale(2) + \
            f_mode_action(g, k, s1).scale(-3)
        assert f_mode_action(f, k, s1 + s2.scale(5)) == f_mode_action(f, k, s1) + \
            f_mode_action(f, k, s2).scale(5)


def test_f_requires_polynomial_sector():
    w = Model.weil(1)
    with pytest.raises(ValueError):
        f_mode_action(Polynomial.variable(1, 1), -1, State.vacuum(w))


def test_tf_state_matches_mode_shift():
    # (Tf)_(k) = -k f_(k-1) with Tf expanded independently via nth products
    m = model1()
    x = x_poly()
    f = x * x
    tf = translation_operator(State.vacuum(m, f))
    s = State.basis(m, (m.mode(0, "beta", 1, -1),), x)
    for k in range(-3, 3):
        assert nth_product(tf, k, s) == f_mode_action(f, k - 1, s).scale(-k)
