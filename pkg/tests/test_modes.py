import itertools
import random
from fractions import Fraction

import pytest

from chiralg.modes import (
    B,
    BETA,
    C,
    GAMMA,
    Mode,
    Model,
    State,
    apply_mode,
    grade_of,
    mode_supercommutator,
)
from chiralg.poly import Polynomial


def weil2():
    return Model.weil(2)


def gamma11():
    return Model.gamma_chiral(1, 1)


def build(model, *modes, coeff=1):
    s = State.vacuum(model, coeff)
    for m in reversed(modes):
        s = apply_mode(m, s)
    return s


def test_supercommutator_examples():
    w = weil2()
    assert mode_supercommutator(w, w.mode(0, "beta", 1, 2), w.mode(0, "gamma", 1, -2)) == 1
    assert mode_supercommutator(w, w.mode(0, "b", 1, 3), w.mode(0, "c", 1, -3)) == 1
    assert mode_supercommutator(w, w.mode(0, "beta", 1, 2), w.mode(0, "beta", 2, -2)) == 0
    # antisymmetric for the even pair, symmetric for the odd pair
    assert mode_supercommutator(w, w.mode(0, "gamma", 1, -2), w.mode(0, "beta", 1, 2)) == -1
    assert mode_supercommutator(w, w.mode(0, "c", 1, -3), w.mode(0, "b", 1, 3)) == 1


def test_supercommutator_rejects_invalid_modes():
    w = weil2()
    bad = Mode(0, BETA, 5, 1)
    with pytest.raises(ValueError):
        mode_supercommutator(w, bad, w.mode(0, "gamma", 1, -1))
    with pytest.raises(ValueError):
        mode_supercommutator(w, Mode(1, BETA, 1, 1), w.mode(0, "gamma", 1, -1))


def test_apply_beta0_differentiates():
    g = gamma11()
    x = Polynomial.variable(1, 1)
    s = State.vacuum(g, x * x)
    out = apply_mode(g.mode(0, "beta", 1, 0), s)
    assert out == State.vacuum(g, x.scale(2))


def test_apply_gamma0_multiplies():
    g = gamma11()
    x = Polynomial.variable(1, 1)
    out = apply_mode(g.mode(0, "gamma", 1, 0), State.vacuum(g))
    assert out == State.vacuum(g, x)


def test_bc_pairing():
    g = gamma11()
    c_state = build(g, g.mode(0, "c", 1, -1))
    out = apply_mode(g.mode(0, "b", 1, 1), c_state)
    assert out == State.vacuum(g)


def test_creation_reorders_canonically():
    g = gamma11()
    a = build(g, g.mode(0, "gamma", 1, -1), g.mode(0, "beta", 1, -1))
    bstate = build(g, g.mode(0, "beta", 1, -1), g.mode(0, "gamma", 1, -1))
    assert a == bstate
    word = next(iter(a.terms))
    assert word[0].species == BETA and word[1].species == GAMMA


def test_odd_square_zero():
    w = weil2()
    for species in ("b", "c"):
        mode = w.mode(0, species, 1, -1 if species == "b" else 0)
        assert apply_mode(mode, apply_mode(mode, State.vacuum(w))).is_zero()


def test_koszul_sign_on_odd_swap():
    w = weil2()
    c1 = w.mode(0, "c", 1, 0)
    c2 = w.mode(0, "c", 2, 0)
    s12 = build(w, c1, c2)
    s21 = build(w, c2, c1)
    assert s12 == s21.scale(-1)


def _all_modes(model, max_level):
    modes = []
    for sector in range(len(model.sectors)):
        sec = model.sectors[sector]
        for species, limit in ((BETA, sec.n_even), (GAMMA, sec.n_even), (B, sec.n_odd), (C, sec.n_odd)):
            for index in range(1, limit + 1):
                for level in range(-max_level, max_level + 1):
                    modes.append(Mode(sector, species, index, level))
    return modes


def test_supercommutator_action_exhaustive_small():
    """[a, b] acts as the central scalar, |levels| <= 3, weight <= 4."""
    w = Model.weil(1)
    modes = _all_modes(w, 3)
    states = [
        State.vacuum(w),
        build(w, w.mode(0, "c", 1, 0)),
        build(w, w.mode(0, "gamma", 1, 0), w.mode(0, "b", 1, -1)),
        build(w, w.mode(0, "beta", 1, -2), w.mode(0, "c", 1, -2)),
        build(w, w.mode(0, "gamma", 1, -3), w.mode(0, "c", 1, -1)),
    ]
    for a, b in itertools.product(modes, repeat=2):
        sign = -1 if (a.odd and b.odd) else 1
        value = mode_supercommutator(w, a, b)
        for s in states:
            lhs = apply_mode(a, apply_mode(b, s)) - apply_mode(b, apply_mode(a, s)).scale(sign)
            assert lhs == s.scale(value), (a, b, s)


def test_canonical_form_unique_under_insertion_order():
    rng = random.Random(17)
    g = Model.gamma_chiral(2, 2)
    creation = [m for m in _all_modes(g, 3) if g.is_creation(m)]
    for _ in range(60):
        word = [rng.choice(creation) for _ in range(3)]
        s1 = build(g, *word)
        # insertion in a different order, tracking the Koszul sign by
        # comparing against adjacent-transposition swaps
        for i in range(2):
            swapped = word[:i] + [word[i + 1], word[i]] + word[i + 2 :]
            s2 = build(g, *swapped)
            sign = -1 if (word[i].odd and word[i + 1].odd) else 1
            assert s1 == s2.scale(sign)


def test_grade_of_examples():
    w = weil2()
    assert grade_of(State.vacuum(w)) == (0, 0, 0)
    assert grade_of(build(w, w.mode(0, "b", 1, -1))) == (1, -1, 0)
    g = gamma11()
    x = Polynomial.variable(1, 1)
    assert grade_of(build(g, g.mode(0, "beta", 1, -1), coeff=x)) == (1, 0, 1)
    # weil degree conventions
    assert grade_of(build(w, w.mode(0, "beta", 1, -1))) == (1, -2, 0)
    assert grade_of(build(w, w.mode(0, "gamma", 1, 0))) == (0, 2, 0)
    # inhomogeneous states report None
    mixed = State.vacuum(g, Polynomial.variable(1, 1) + Polynomial.const(1, 1))
    assert grade_of(mixed) is None


def test_grade_additive_under_apply():
    g = gamma11()
    s = build(g, g.mode(0, "gamma", 1, -2))
    for level in (-3, -1):
        mode = g.mode(0, "beta", 1, level)
        out = apply_mode(mode, s)
        if not out.is_zero():
            assert grade_of(out)[0] == grade_of(s)[0] + mode.weight


def test_tensor_model_sectors_commute():
    t = Model.tensor(Model.weil(1), Model.gamma_chiral(1, 1))
    c_left = t.mode(0, "c", 1, 0)
    c_right = t.mode(1, "c", 1, 0)
    assert mode_supercommutator(t, c_left, c_right) == 0
    s12 = build(t, c_left, c_right)
    s21 = build(t, c_right, c_left)
    assert s12 == s21.scale(-1)  # odd modes in different sectors anticommute
