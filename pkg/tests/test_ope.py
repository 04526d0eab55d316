import random
from fractions import Fraction

from chiralg.blocks import block_basis
from chiralg.lie import LieData
from chiralg.modes import Model, State, apply_mode
from chiralg.ope import (
    CheckReport,
    Operator,
    borcherds_commutator,
    check_intertwines_on_generators,
    check_square_zero_via_generators,
    commutant_subspace,
    general_binomial,
    nth_product,
)
from chiralg.poly import Polynomial
from chiralg.weil import WeilComplex


def test_general_binomial():
    assert general_binomial(4, 2) == 6
    assert general_binomial(-1, 3) == -1
    assert general_binomial(-2, 2) == 3
    assert general_binomial(1, 3) == 0


def test_vacuum_axiom():
    m = Model.gamma_chiral(1, 1)
    s = State.basis(m, (m.mode(0, "gamma", 1, -1),))
    vac = State.vacuum(m)
    for n in range(-3, 3):
        expected = s if n == -1 else State.zero(m)
        assert nth_product(vac, n, s) == expected


def test_creation_product_no_contraction():
    m = Model.gamma_chiral(1, 0)
    beta_gen = State.basis(m, (m.mode(0, "beta", 1, -1),))
    gamma_state = State.basis(m, (m.mode(0, "gamma", 1, -1),))
    out = nth_product(beta_gen, -1, gamma_state)
    expected = State.basis(m, (m.mode(0, "beta", 1, -1), m.mode(0, "gamma", 1, -1)))
    assert out == expected


def test_beta_zero_mode_contraction():
    m = Model.gamma_chiral(1, 0)
    beta_gen = State.basis(m, (m.mode(0, "beta", 1, -1),))
    x = Polynomial.variable(1, 1)
    assert nth_product(beta_gen, 0, State.vacuum(m, x)) == State.vacuum(m)


def test_nth_product_weight_contract():
    from chiralg.modes import grade_of

    w = Model.weil(2)
    a = State.basis(w, (w.mode(0, "beta", 1, -1), w.mode(0, "c", 2, 0)))
    b = State.basis(w, (w.mode(0, "gamma", 1, -1), w.mode(0, "b", 2, -1)))
    wa, wb = grade_of(a)[0], grade_of(b)[0]
    for n in range(-3, 3):
        out = nth_product(a, n, b)
        if out.is_zero():
            continue
        assert grade_of(out)[0] == wa + wb - n - 1


def test_borcherds_formula_vs_direct_composition():
    rng = random.Random(9)
    w = Model.weil(2)

    def st(*specs):
        s = State.vacuum(w)
        for name, idx, lvl in reversed(specs):
            s = apply_mode(w.mode(0, name, idx, lvl), s)
        return s

    samples = [
        st(("c", 1, 0)),
        st(("c", 1, 0), ("gamma", 2, 0)),
        st(("b", 1, -1), ("c", 2, -1)),
        st(("beta", 1, -1), ("gamma", 1, -1)),
    ]
    a = st(("beta", 1, -1), ("c", 2, 0))
    b = st(("gamma", 1, -1), ("b", 2, -1))
    for m in (-2, -1, 0, 1, 2):
        for k in (-2, -1, 0, 1):
            op_b = Operator.field_mode(b, k)
            formula = borcherds_commutator(a, m, op_b)
            op_a = Operator.field_mode(a, m)
            sign = -1 if (op_a.parity() and op_b.parity()) else 1
            direct = op_a.compose(op_b) - op_b.compose(op_a).scale(sign)
            for s in samples:
                assert formula.apply(s) == direct.apply(s)


def test_derivation_propagation():
    """If D is a derivation on generators, D(A_(n)B) = (DA)_(n)B +- A_(n)(DB)."""
    weil = WeilComplex(LieData.nonabelian_2d())
    d = weil.d_op
    rng = random.Random(4)
    gens = weil.generators()
    for _ in range(12):
        a = rng.choice(gens)
        b = rng.choice(gens)
        prod_ab = nth_product(a, rng.randint(-2, 1), b)
        for n in (-2, -1, 0, 1):
            lhs = d.apply(nth_product(a, n, b))
            sign = -1 if a.parity() else 1
            rhs = nth_product(d.apply(a), n, b) + nth_product(a, n, d.apply(b)).scale(sign)
            assert lhs == rhs


def test_square_zero_checker_zero_operator():
    w = Model.weil(1)
    report = CheckReport("sq", [])
    check_square_zero_via_generators(
        Operator.zero(w).scale(0) + Operator.zero(w), [State.vacuum(w)], [], report
    )
    # a zero operator is even, so the parity check fails: use the weil d
    weil = WeilComplex(LieData.abelian(1))
    report = CheckReport("sq", [])
    states = [State.vacuum(weil.model), weil.c_state(1), weil.gamma_state(1)]
    check_square_zero_via_generators(weil.d_op, weil.generators(), states, report)
    assert report.passed


def test_square_zero_checker_weil_abelian_block_sweep():
    weil = WeilComplex(LieData.abelian(1))
    from chiralg.suites import sweep_states

    states = sweep_states(weil.model, 3, 1)
    report = CheckReport("sq", [])
    check_square_zero_via_generators(weil.d_op, weil.generators(), states, report)
    assert report.passed


def test_intertwines_identity_and_negative():
    weil = WeilComplex(LieData.abelian(1))
    gens = weil.generators()
    states = [weil.c_state(1), weil.gamma_state(1)]
    report = CheckReport("ok", [])
    check_intertwines_on_generators(
        lambda s: s, weil.d_op, weil.d_op, gens, states, report
    )
    assert report.passed
    # mismatched operators fail with a witness
    report = CheckReport("bad", [])
    other = Operator.field_mode(weil.theta_state([Fraction(1)]) + weil.d_state, 0)
    check_intertwines_on_generators(
        lambda s: s, weil.d_op, Operator.zero(weil.model), gens, states, report
    )
    assert not report.passed
    assert report.failures[0].witness is not None


def test_commutant_empty_family_is_whole_block():
    w = Model.weil(1)
    basis = block_basis(w, 1, 1, 2)
    vectors = commutant_subspace([], basis, [])
    assert len(vectors) == basis.dim


def test_commutant_b_modes_on_weil():
    """Kernel of all b_n, n >= 0, at weight 0: the c-free states."""
    weil = WeilComplex(LieData.abelian(1))
    for degree in (0, 1, 2, 3):
        basis = block_basis(weil.model, 0, degree, 4)
        ops = []
        codomains = []
        for n in (0, 1):
            ops.append(weil.iota_op(1, n))
            codomains.append(block_basis(weil.model, -n, degree - 1, 4))
        vectors = commutant_subspace(ops, basis, codomains)
        expected = [
            el for el in basis.elements if all(mo.species != 3 for mo in el[0])
        ]
        assert len(vectors) == len(expected)


def test_commutant_beta_modes_on_gamma_model():
    """Kernel of beta_k, k >= 0, weight 0: constants (kernel of d/dx)."""
    m = Model.gamma_chiral(1, 0)
    basis = block_basis(m, 0, 0, 2)  # 1, x, x^2
    assert basis.dim == 3
    ops = [Operator.raw_mode(m, m.mode(0, "beta", 1, 0))]
    codomains = [block_basis(m, 0, 0, 2)]
    vectors = commutant_subspace(ops, basis, codomains)
    assert len(vectors) == 1
    assert vectors[0] == State.vacuum(m)
