"""sg[t]-modules, chiral W*-structures, the Phi conjugation, and Cartan models.

An SgtModule bundles a carrier model with its differential and the
operator families L_{xi,(n)}, iota_{eta,(n)}.  A WStarModule adds the
<c, gamma>-module structure (c- and gamma-field modes).  Tensor products
lift both structures to the concatenated model with diagonal actions;
Phi = exp(sum_i sum_{n>=0} c^{xi*_i,A}_(-n-1) (x) iota^B_{xi_i,(n)}) is
locally nilpotent on weight-bounded states, and the three conjugation
identities of the chiral Cartan model are verified exactly on block
bases.  All "for all n >= 0" families truncate at the weight cap: modes
of weight below -N annihilate every in-cap state (noted in reports).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .algebroid import AlgebroidData, ChiralAlgebroid, GlobalSection
from .blocks import (
    ALL_SPECIES,
    GAMMA_C,
    BlockBasis,
    CapOverflow,
    Restriction,
    block_basis,
    full_restriction,
    intersect_kernels,
    operator_matrix,
)
from .lie import LieData
from .modes import GAMMA, Mode, Model, State, Word
from .ope import FieldMode, Operator
from .poly import Polynomial
from .weil import WeilComplex


# ---------------------------------------------------------------------------
# Retagging states and operators into tensor models


def retag_state(state: State, offset: int, target: Model) -> State:
    terms = {}
    for word, poly in state.terms.items():
        new_word = tuple(
            Mode(m.sector + offset, m.species, m.index, m.level) for m in word
        )
        if poly.nvars != target.nvars:
            assert poly.is_constant(), "cannot retag non-constant coefficients"
            poly = Polynomial.const(target.nvars, poly.constant_value())
        terms[new_word] = poly
    return State(target, terms)


def retag_operator(op: Operator, offset: int, target: Model) -> Operator:
    terms = []
    for coeff, op_word in op.terms:
        new_word = tuple(
            FieldMode(retag_state(fm.state, offset, target), fm.n) for fm in op_word
        )
        terms.append((coeff, new_word))
    return Operator(target, terms)


def tensor_state(left: State, right: State, target: Model, offset: int) -> State:
    """left (x) right in the concatenated model (left sectors come first)."""
    out_terms = {}
    for wl, pl in left.terms.items():
        assert pl.is_constant(), "left tensor factors carry scalar coefficients"
        scalar = pl.constant_value()
        for wr, pr in right.terms.items():
            word = wl + tuple(
                Mode(m.sector + offset, m.species, m.index, m.level) for m in wr
            )
            poly = pr if pr.nvars == target.nvars else Polynomial.const(
                target.nvars, pr.constant_value()
            )
            acc = out_terms.get(word)
            total = poly.scale(scalar) if acc is None else acc + poly.scale(scalar)
            out_terms[word] = total
    return State(target, out_terms)


# ---------------------------------------------------------------------------
# Module structures


@dataclass
class SgtModule:
    """A differential sg[t]-module at desk scale."""

    label: str
    model: Model
    lie: LieData
    differential: Operator
    restriction: Restriction
    L_factory: Callable[[int, int], Operator]
    iota_factory: Callable[[int, int], Operator]
    weil_charge_cap: int | None = None

    def L_op(self, i: int, n: int) -> Operator:
        return self.L_factory(i, n)

    def iota_op(self, i: int, n: int) -> Operator:
        return self.iota_factory(i, n)

    def iota_vector_op(self, xi: list[Fraction], n: int) -> Operator:
        out = Operator.zero(self.model)
        for i, coeff in enumerate(xi, start=1):
            if coeff:
                out = out + self.iota_op(i, n).scale(coeff)
        return out

    def L_vector_op(self, xi: list[Fraction], n: int) -> Operator:
        out = Operator.zero(self.model)
        for i, coeff in enumerate(xi, start=1):
            if coeff:
                out = out + self.L_op(i, n).scale(coeff)
        return out

    def block(self, weight: int, degree: int, max_charge: int) -> BlockBasis:
        return block_basis(
            self.model, weight, degree, max_charge, self.restriction,
            weil_charge_cap=self.weil_charge_cap,
        )


@dataclass
class WStarModule(SgtModule):
    """An sg[t]-module with a compatible <c, gamma>-module structure."""

    c_states: list[State] = field(default_factory=list)
    gamma_factory: Callable[[int, int], Operator] | None = None

    def c_op(self, i: int, n: int) -> Operator:
        return Operator.field_mode(self.c_states[i - 1], n)

    def gamma_op(self, i: int, n: int) -> Operator:
        assert self.gamma_factory is not None
        return self.gamma_factory(i, n)

    def cc_state(self, i: int, k: int) -> State:
        """The state whose module field is :c^{xi*_i}(z) c^{xi*_k}(z): ."""
        from .ope import nth_product

        return nth_product(self.c_states[i - 1], -1, self.c_states[k - 1])


def weil_sgt_module(weil: WeilComplex) -> WStarModule:
    """W(g) with L = Theta_(n), iota = b_(n), native c and gamma fields."""
    model = weil.model

    def gamma_native(i: int, n: int) -> Operator:
        return Operator.field_mode(weil.gamma_state(i), n)

    return WStarModule(
        label=f"weil(dim={weil.lie.dim})",
        model=model,
        lie=weil.lie,
        differential=weil.d_op,
        restriction=full_restriction(model),
        L_factory=weil.L_op,
        iota_factory=weil.iota_op,
        c_states=[weil.c_state(i) for i in range(1, weil.lie.dim + 1)],
        gamma_factory=gamma_native,
    )


def wprime_sgt_module(weil: WeilComplex) -> SgtModule:
    """The subcomplex W' = <c, gamma> as an sg[t]-submodule."""
    return SgtModule(
        label=f"wprime(dim={weil.lie.dim})",
        model=weil.model,
        lie=weil.lie,
        differential=weil.d_op,
        restriction=weil.wprime_restriction(),
        L_factory=weil.L_op,
        iota_factory=weil.iota_op,
    )


def algebroid_sections(lie: LieData, data: AlgebroidData) -> list[GlobalSection]:
    """The g-map xi_i -> e^i of a transformation algebroid, validated."""
    if lie.dim != data.r:
        raise ValueError("Lie algebra dimension must match the algebroid rank")
    sections = [data.basis_section(i) for i in range(1, data.r + 1)]
    for i in range(1, lie.dim + 1):
        for j in range(1, lie.dim + 1):
            expected = [Polynomial.zero(data.m) for _ in range(data.r)]
            for k in range(1, lie.dim + 1):
                coeff = lie.c(i, j, k)
                if coeff:
                    expected = [
                        p + q.scale(coeff)
                        for p, q in zip(expected, sections[k - 1])
                    ]
            actual = data.section_bracket(sections[i - 1], sections[j - 1])
            if actual != expected:
                raise ValueError(
                    f"g-map is not a Lie morphism at ({i},{j}): "
                    "algebroid structure functions disagree with the Lie bracket"
                )
    return sections


def algebroid_sgt_module(
    chiral: ChiralAlgebroid, lie: LieData, sections: list[GlobalSection] | None = None
) -> SgtModule:
    """Gamma-c sections of a chiral algebroid as a differential sg[t]-module."""
    sections = sections if sections is not None else algebroid_sections(lie, chiral.data)

    def iota(i: int, n: int) -> Operator:
        return chiral.iota_op(sections[i - 1], n)

    def L(i: int, n: int) -> Operator:
        return chiral.lie_derivative_op(sections[i - 1], n)

    return SgtModule(
        label=f"algebroid(m={chiral.data.m}, r={chiral.data.r})",
        model=chiral.model,
        lie=lie,
        differential=chiral.d_op,
        restriction=chiral.gamma_c_restriction(),
        L_factory=L,
        iota_factory=iota,
    )


def constructed_gamma_factory(
    module: SgtModule, c_states: list[State], lie: LieData
) -> Callable[[int, int], Operator]:
    """gamma^{xi*_j,A}(z) := [d_A, c^{xi*_j,A}(z)] + 1/2 sum Gamma^j_{ik} :c^i c^k:."""
    from .ope import nth_product

    def gamma_op(j: int, n: int) -> Operator:
        c_field = Operator.field_mode(c_states[j - 1], n)
        out = module.differential.supercommutator(c_field)
        for i in range(1, lie.dim + 1):
            for k in range(1, lie.dim + 1):
                coeff = lie.c(i, k, j)
                if coeff:
                    cc = nth_product(c_states[i - 1], -1, c_states[k - 1])
                    out = out + Operator.field_mode(cc, n).scale(coeff / 2)
        return out

    return gamma_op


def transformation_wstar_module(
    chiral: ChiralAlgebroid, lie: LieData
) -> WStarModule:
    """The chiral W*-structure on a transformation algebroid's sections.

    The <c>-action is left multiplication by the native c-field of the
    rank-(dim g) chiral model; the gamma-action is the constructed one
    (which the wstar suite verifies to vanish identically).
    """
    base = algebroid_sgt_module(chiral, lie)
    c_states = [
        State.basis(chiral.model, (chiral.mode("c", i, 0),))
        for i in range(1, lie.dim + 1)
    ]
    module = WStarModule(
        label=base.label + "+wstar",
        model=base.model,
        lie=lie,
        differential=base.differential,
        restriction=base.restriction,
        L_factory=base.L_factory,
        iota_factory=base.iota_factory,
        c_states=c_states,
    )
    module.gamma_factory = constructed_gamma_factory(module, c_states, lie)
    return module


# ---------------------------------------------------------------------------
# Tensor modules and Phi


class TensorSgt:
    """W(g) (x) B (or any A (x) B with A a W*-module) with diagonal action."""

    def __init__(self, left: WStarModule, right: SgtModule):
        assert left.lie.dim == right.lie.dim
        self.left = left
        self.right = right
        self.lie = left.lie
        self.model = Model.tensor(left.model, right.model)
        self.offset = len(left.model.sectors)
        self.restriction = dict(left.restriction)
        for s, allowed in right.restriction.items():
            self.restriction[s + self.offset] = allowed
        self.differential = retag_operator(left.differential, 0, self.model) + \
            retag_operator(right.differential, self.offset, self.model)

    def lift_left(self, op: Operator) -> Operator:
        return retag_operator(op, 0, self.model)

    def lift_right(self, op: Operator) -> Operator:
        return retag_operator(op, self.offset, self.model)

    def L_op(self, i: int, n: int) -> Operator:
        return self.lift_left(self.left.L_op(i, n)) + self.lift_right(
            self.right.L_op(i, n)
        )

    def iota_op(self, i: int, n: int) -> Operator:
        return self.lift_left(self.left.iota_op(i, n)) + self.lift_right(
            self.right.iota_op(i, n)
        )

    def as_sgt_module(self) -> SgtModule:
        return SgtModule(
            label=f"{self.left.label} (x) {self.right.label}",
            model=self.model,
            lie=self.lie,
            differential=self.differential,
            restriction=self.restriction,
            L_factory=self.L_op,
            iota_factory=self.iota_op,
        )

    def block(self, weight: int, degree: int, max_charge: int) -> BlockBasis:
        return block_basis(
            self.model, weight, degree, max_charge, self.restriction,
            weil_charge_cap=self.weil_charge_cap,
        )

    def phi_exponent(self, n_max: int) -> Operator:
        """phi(0)_{>=0} truncated at n_max (exact on weight <= n_max states)."""
        out = Operator.zero(self.model)
        for i in range(1, self.lie.dim + 1):
            for n in range(0, n_max + 1):
                c_part = self.lift_left(self.left.c_op(i, -n - 1))
                iota_part = self.lift_right(self.right.iota_op(i, n))
                out = out + c_part.compose(iota_part)
        return out


def phi_apply(exponent: Operator, s: State, invert: bool = False) -> State:
    """exp(+-phi) s; the series is finite on weight-bounded states.

    Aborts with diagnostics if nilpotency fails within the grading bound
    (which would indicate a grading bug).
    """
    bound = s.max_weight() + sum(
        sec.n_odd for sec in exponent.model.sectors
    ) + 2
    result = State.zero(s.model)
    term = s
    k = 0
    while not term.is_zero():
        result = result + term
        k += 1
        if k > bound:
            raise AssertionError(
                f"Phi series failed to terminate within {bound} steps; "
                "grading bug suspected"
            )
        term = exponent.apply(term).scale(Fraction(-1 if invert else 1, k))
    return result


def phi_conjugate(
    exponent: Operator, op: Callable[[State], State], s: State
) -> State:
    """(Phi o op o Phi^{-1})(s)."""
    return phi_apply(exponent, op(phi_apply(exponent, s, invert=True)))


# ---------------------------------------------------------------------------
# Horizontal / invariant / basic subspaces


def horizontal_operators(
    module: SgtModule, weight: int, degree: int, max_charge: int, n_cap: int
) -> list[tuple[Callable[[State], State], BlockBasis]]:
    ops = []
    for i in range(1, module.lie.dim + 1):
        for n in range(0, min(n_cap, weight) + 1):
            dst = module.block(weight - n, degree - 1, max_charge)
            ops.append((module.iota_op(i, n).apply, dst))
    return ops


def invariant_operators(
    module: SgtModule, weight: int, degree: int, max_charge: int, n_cap: int
) -> list[tuple[Callable[[State], State], BlockBasis]]:
    ops = []
    for i in range(1, module.lie.dim + 1):
        for n in range(0, min(n_cap, weight) + 1):
            dst = module.block(weight - n, degree, max_charge)
            ops.append((module.L_op(i, n).apply, dst))
    return ops


def basic_subspace(
    module: SgtModule,
    weight: int,
    degree: int,
    max_charge: int,
    which: str = "basic",
) -> list[State]:
    """Exact basis of the horizontal/invariant/basic part of a block.

    The n >= 0 kernel intersections truncate at n = weight: iota_{(n)} and
    L_{(n)} lower weight by n and the model is non-negatively graded, so
    deeper modes annihilate the whole block.
    """
    basis = module.block(weight, degree, max_charge)
    if basis.dim == 0:
        return []
    ops: list[tuple[Callable[[State], State], BlockBasis]] = []
    if which in ("horizontal", "basic"):
        ops.extend(horizontal_operators(module, weight, degree, max_charge, weight))
    if which in ("invariant", "basic"):
        ops.extend(invariant_operators(module, weight, degree, max_charge, weight))
    return intersect_kernels(basis, ops)


# ---------------------------------------------------------------------------
# Cohomology of subcomplexes spanned by computed vectors


def _span_columns(vectors: Sequence[State], ambient: BlockBasis) -> linalg.Matrix:
    cols = [ambient.coords(v) for v in vectors]
    return [[cols[j][i] for j in range(len(vectors))] for i in range(ambient.dim)]


def subcomplex_matrix(
    apply_d: Callable[[State], State],
    src_vectors: Sequence[State],
    dst_vectors: Sequence[State],
    dst_ambient: BlockBasis,
) -> linalg.Matrix:
    """Matrix of d between computed subspace bases; errors if d leaves the span."""
    if not src_vectors:
        return []
    span = _span_columns(dst_vectors, dst_ambient)
    rows = len(dst_vectors)
    out = [[Fraction(0)] * len(src_vectors) for _ in range(rows)]
    for j, v in enumerate(src_vectors):
        image = apply_d(v)
        target = dst_ambient.coords(image)
        solution = linalg.solve_in_span(span, target)
        if solution is None:
            raise AssertionError(
                "differential image left the subcomplex span "
                f"(block weight={dst_ambient.weight}, degree={dst_ambient.degree})"
            )
        for i in range(rows):
            out[i][j] = solution[i]
    return out


def subcomplex_cohomology(
    apply_d: Callable[[State], State],
    vectors_by_degree: dict[int, list[State]],
    ambients_by_degree: dict[int, BlockBasis],
    degrees: Sequence[int],
) -> dict[int, int]:
    """Blockwise dim H for a subcomplex given per-degree spanning vectors.

    `degrees` lists the interior degrees to report; vectors and ambients
    must also be present for each degree +-1.
    """
    matrices: dict[int, linalg.Matrix] = {}
    for d in sorted(set(degrees)):
        for dd in (d - 1, d):
            if dd in matrices:
                continue
            src = vectors_by_degree.get(dd, [])
            dst = vectors_by_degree.get(dd + 1, [])
            if not src:
                matrices[dd] = []
                continue
            ambient = ambients_by_degree[dd + 1]
            matrices[dd] = subcomplex_matrix(apply_d, src, dst, ambient)
    dims: dict[int, int] = {}
    for d in degrees:
        n_d = len(vectors_by_degree.get(d, []))
        out = matrices.get(d, [])
        ker = n_d - linalg.rank(out) if out else n_d
        inc = matrices.get(d - 1, [])
        im = linalg.rank(inc) if inc else 0
        dims[d] = ker - im
    return dims
