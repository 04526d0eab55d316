"""The semi-infinite Weil complex W(g) with differential and Theta operators.

D = J + K with

  J = - sum_{ijk} Gamma^k_{ij} ( beta^k_{-1} gamma^{j*}_0 c^{i*}_0 1
                                 + 1/2 c^{i*}_0 c^{j*}_0 b^k_{-1} 1 ),
  K = sum_i gamma^{i*}_0 b^i_{-1} 1,

and d_W = D_(0).  Theta_W^xi = Theta_E^xi + Theta_S^xi with

  Theta_E^{xi_j} =  sum_{ik} Gamma^k_{ji} b^k_{-1} c^{i*}_0 1,
  Theta_S^{xi_j} = -sum_{ik} Gamma^k_{ji} beta^k_{-1} gamma^{i*}_0 1.

Together with b^eta_(n) these realize the sg[t]-module structure; the
subcomplex W' = <c, gamma> restricts d_W.
"""

from __future__ import annotations

from fractions import Fraction

from .blocks import GAMMA_C, BlockBasis, CapOverflow, Restriction, block_basis, operator_matrix
from .lie import LieData
from .modes import Mode, Model, State, apply_mode
from .ope import Operator
from . import linalg


class WeilComplex:
    """W(g) for a LieData, with its differential and operator families."""

    def __init__(self, lie: LieData):
        self.lie = lie
        self.model = Model.weil(lie.dim)
        self.d_state = self._build_d()
        self.d_op = Operator.field_mode(self.d_state, 0)
        self._theta_states = [self._build_theta(j) for j in range(1, lie.dim + 1)]

    # -- state builders ----------------------------------------------------

    def mode(self, species: str, index: int, level: int) -> Mode:
        return self.model.mode(0, species, index, level)

    def word_state(self, *modes: Mode) -> State:
        s = State.vacuum(self.model)
        for m in reversed(modes):
            s = apply_mode(m, s)
        return s

    def _build_d(self) -> State:
        dim = self.lie.dim
        d = State.zero(self.model)
        for (i, j, k), const in sorted(self.lie.gamma.items()):
            d = d + self.word_state(
                self.mode("beta", k, -1), self.mode("gamma", j, 0), self.mode("c", i, 0)
            ).scale(-const)
            d = d + self.word_state(
                self.mode("c", i, 0), self.mode("c", j, 0), self.mode("b", k, -1)
            ).scale(-const / 2)
        for i in range(1, dim + 1):
            d = d + self.word_state(self.mode("gamma", i, 0), self.mode("b", i, -1))
        return d

    def _build_theta(self, j: int) -> State:
        theta = State.zero(self.model)
        for i in range(1, self.lie.dim + 1):
            for k in range(1, self.lie.dim + 1):
                const = self.lie.c(j, i, k)
                if not const:
                    continue
                theta = theta + self.word_state(
                    self.mode("b", k, -1), self.mode("c", i, 0)
                ).scale(const)
                theta = theta - self.word_state(
                    self.mode("beta", k, -1), self.mode("gamma", i, 0)
                ).scale(const)
        return theta

    def theta_state(self, xi: list[Fraction] | int) -> State:
        """Theta_W^xi for a basis index (1-based) or coefficient vector."""
        if isinstance(xi, int):
            return self._theta_states[xi - 1]
        out = State.zero(self.model)
        for idx, coeff in enumerate(xi):
            if coeff:
                out = out + self._theta_states[idx].scale(coeff)
        return out

    def c_state(self, i: int) -> State:
        return self.word_state(self.mode("c", i, 0))

    def gamma_state(self, i: int) -> State:
        return self.word_state(self.mode("gamma", i, 0))

    def b_state(self, i: int) -> State:
        return self.word_state(self.mode("b", i, -1))

    def beta_state(self, i: int) -> State:
        return self.word_state(self.mode("beta", i, -1))

    def generators(self) -> list[State]:
        out = []
        for i in range(1, self.lie.dim + 1):
            out.extend([self.beta_state(i), self.gamma_state(i), self.b_state(i), self.c_state(i)])
        return out

    # -- operations ----------------------------------------------------------

    def weil_differential(self, s: State) -> State:
        """d_W = D_(0); degree +1, weight 0."""
        return self.d_op.apply(s)

    def theta_action(self, xi: list[Fraction] | int, n: int, s: State) -> State:
        """(Theta_W^xi)_(n) applied to s."""
        assert n >= 0
        return Operator.field_mode(self.theta_state(xi), n).apply(s)

    def iota_op(self, i: int, n: int) -> Operator:
        """iota_{xi_i,(n)} = b^{xi_i}_(n) = b^{xi_i}_n."""
        return Operator.raw_mode(self.model, self.mode("b", i, n))

    def L_op(self, i: int, n: int) -> Operator:
        return Operator.field_mode(self.theta_state(i), n)

    def wprime_restriction(self) -> Restriction:
        return {0: GAMMA_C}

    def wprime_subcomplex(
        self, weight: int, degree: int, max_charge: int
    ) -> tuple[BlockBasis, linalg.Matrix]:
        """The (weight, degree) block of W' = <c, gamma> and d restricted to it.

        Raises CapOverflow if the d-image of a W' basis state had a
        component outside W' (it never does; d-stability is also checked
        separately by the suite).
        """
        restriction = self.wprime_restriction()
        src = block_basis(self.model, weight, degree, max_charge, restriction)
        dst = block_basis(self.model, weight, degree + 1, max_charge, restriction)
        matrix = operator_matrix(self.weil_differential, src, dst)
        return src, matrix
