"""Finite atlases with affine transitions and gamma-c gluing.

A chart carries global polynomial coordinates; a transition between
charts lambda and mu is an affine base map x_lambda = T x_mu + v
together with an invertible bundle matrix f^E_{lambda mu} (e^j_mu =
sum_j' f^{E,j'j}_{lambda mu} e^{j'}_lambda).  The induced vertex-algebra
morphism theta' is determined on generators by

  phi* f~   = f~ composed with the base map,
  phi* b~^j = sum_j' f^{E,j'j}_{lambda mu} b^{j'}_{-1} 1,
  phi* c~^j = sum_j' f^{E,jj'}_{mu lambda} c^{j'}_0 1,

and extended to PBW states through n-th products.  Cocycle identities,
the generator OPE checks, D_Lie-intertwining, and the global-section
equalizer are all exact block computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebroid import AlgebroidData, ChiralAlgebroid
from .blocks import BlockBasis, block_basis
from .modes import B, C, GAMMA, Mode, Model, State, Word
from .ope import Operator, nth_product
from .poly import Polynomial, poly_compose_affine


class AtlasError(ValueError):
    pass


@dataclass
class Transition:
    """Data of theta'_{lambda mu}: Omega(mu-chart) -> Omega(lambda-chart).

    The base map expresses mu-coordinates in lambda-coordinates,
    x_mu = matrix . x_lambda + shift, so that the pullback of a mu-chart
    function f~ is f~(matrix . x + shift).  Both bundle matrices are
    written in lambda coordinates: bundle = f^E_{lambda mu} and
    bundle_inv = f^E_{mu lambda} (their product is the identity).
    """

    matrix: list[list[Fraction]]
    shift: list[Fraction]
    bundle: list[list[Polynomial]]
    bundle_inv: list[list[Polynomial]]


@dataclass
class Chart:
    chart_id: str
    algebroid: AlgebroidData


class Atlas:
    """Finite chart list with pairwise transitions (full-chart overlaps)."""

    def __init__(
        self,
        charts: list[Chart],
        transitions: dict[tuple[int, int], Transition],
    ):
        self.charts = charts
        self.m = charts[0].algebroid.m
        self.r = charts[0].algebroid.r
        for chart in charts:
            if chart.algebroid.m != self.m or chart.algebroid.r != self.r:
                raise AtlasError("charts disagree on (m, r)")
        self.transitions = transitions
        self.chirals = [ChiralAlgebroid(c.algebroid) for c in charts]
        self.model = self.chirals[0].model
        self._validate()

    def _validate(self) -> None:
        for (lam, mu), tr in self.transitions.items():
            if len(tr.matrix) != self.m or len(tr.shift) != self.m:
                raise AtlasError(f"transition {lam},{mu}: base map has wrong shape")
            det = _det(tr.matrix)
            if det == 0:
                raise AtlasError(f"transition {lam},{mu}: singular base matrix")
            prod = _poly_mat_mul(tr.bundle, tr.bundle_inv, self.m)
            if not _is_poly_identity(prod, self.m):
                raise AtlasError(
                    f"transition {lam},{mu}: bundle matrix times inverse != id"
                )

    def transition(self, lam: int, mu: int) -> Transition:
        if lam == mu:
            return _identity_transition(self.m, self.r)
        try:
            return self.transitions[(lam, mu)]
        except KeyError:
            raise AtlasError(f"no transition data for chart pair ({lam}, {mu})")

    # -- generator pullbacks ------------------------------------------------

    def pullback_function(self, lam: int, mu: int, f: Polynomial) -> Polynomial:
        """phi* f~: the mu-chart function in lambda coordinates."""
        tr = self.transition(lam, mu)
        return poly_compose_affine(f, tr.matrix, tr.shift)

    def pullback_b(self, lam: int, mu: int, j: int) -> State:
        tr = self.transition(lam, mu)
        out = State.zero(self.model)
        for jp in range(1, self.r + 1):
            coeff = tr.bundle[jp - 1][j - 1]
            if not coeff.is_zero():
                word = (Mode(0, B, jp, -1),)
                out = out + State.basis(self.model, word, coeff)
        return out

    def pullback_c(self, lam: int, mu: int, j: int) -> State:
        tr = self.transition(lam, mu)
        out = State.zero(self.model)
        for jp in range(1, self.r + 1):
            coeff = tr.bundle_inv[j - 1][jp - 1]
            if not coeff.is_zero():
                word = (Mode(0, C, jp, 0),)
                out = out + State.basis(self.model, word, coeff)
        return out

    # -- the vertex-algebra morphism on gamma-c states -----------------------

    def transition_map(self, lam: int, mu: int, s: State) -> State:
        """theta'_{lam mu} on gamma-c states of the mu chart."""
        out = State.zero(self.model)
        for word, poly in s.terms.items():
            out = out + self._transition_word(lam, mu, word, poly)
        return out

    def _transition_word(self, lam: int, mu: int, word: Word, poly: Polynomial) -> State:
        if not word:
            return State.vacuum(self.model, self.pullback_function(lam, mu, poly))
        head, rest = word[0], word[1:]
        rest_image = self._transition_word(lam, mu, rest, poly)
        if head.species == GAMMA:
            x_i = Polynomial.variable(self.m, head.index)
            gen_image = State.vacuum(self.model, self.pullback_function(lam, mu, x_i))
            return nth_product(gen_image, head.level - 1, rest_image)
        if head.species == C:
            gen_image = self.pullback_c(lam, mu, head.index)
            return nth_product(gen_image, head.level - 1, rest_image)
        raise AtlasError(f"transition morphism is defined on gamma-c states only: {head}")

    def transition_matrix(
        self, lam: int, mu: int, src: BlockBasis, dst: BlockBasis
    ) -> linalg.Matrix:
        from .blocks import operator_matrix

        return operator_matrix(lambda s: self.transition_map(lam, mu, s), src, dst)

    # -- global sections -------------------------------------------------------

    def gamma_c_block(self, weight: int, degree: int, max_charge: int) -> BlockBasis:
        restriction = self.chirals[0].gamma_c_restriction()
        return block_basis(self.model, weight, degree, max_charge, restriction)

    def global_sections(
        self, weight: int, degree: int, max_charge: int
    ) -> list[list[State]]:
        """Exact basis of tuples (s_lambda) with theta'_{lm}(s_mu) = s_lambda.

        Realized as the nullspace of the stacked equalizer system over the
        product of per-chart blocks.
        """
        n = len(self.charts)
        block = self.gamma_c_block(weight, degree, max_charge)
        dim = block.dim
        if dim == 0:
            return []
        rows: linalg.Matrix = []
        for lam in range(n):
            for mu in range(n):
                if lam == mu:
                    continue
                theta = self.transition_matrix(lam, mu, block, block)
                for i in range(dim):
                    row = [Fraction(0)] * (n * dim)
                    row[lam * dim + i] = Fraction(1)
                    for j in range(dim):
                        row[mu * dim + j] -= theta[i][j]
                    rows.append(row)
        vectors = linalg.nullspace(rows, cols=n * dim)
        out = []
        for vec in vectors:
            tup = []
            for lam in range(n):
                s = State.zero(self.model)
                for i in range(dim):
                    coeff = vec[lam * dim + i]
                    if coeff:
                        s = s + block.state(i).scale(coeff)
                tup.append(s)
            out.append(tup)
        return out


def invert_transition(tr: Transition, m: int) -> Transition:
    """The reverse-direction transition with entries re-expressed.

    If tr carries the (lambda, mu) data -- base map x_mu = T x_lambda + v,
    bundles in lambda coordinates -- the result carries the (mu, lambda)
    data: inverse base map, bundle matrices swapped and rewritten in mu
    coordinates via x_lambda = T^{-1} x_mu - T^{-1} v.
    """
    inv_matrix = _invert_matrix(tr.matrix)
    inv_shift = [
        -sum(inv_matrix[i][j] * tr.shift[j] for j in range(m)) for i in range(m)
    ]

    def to_mu(p: Polynomial) -> Polynomial:
        return poly_compose_affine(p, inv_matrix, inv_shift)

    bundle = [[to_mu(p) for p in row] for row in tr.bundle_inv]
    bundle_inv = [[to_mu(p) for p in row] for row in tr.bundle]
    return Transition(inv_matrix, inv_shift, bundle, bundle_inv)


def _invert_matrix(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(matrix)]
    reduced, pivots = linalg.rref(aug)
    if pivots != list(range(n)):
        raise AtlasError("singular base matrix")
    return [row[n:] for row in reduced]


def _identity_transition(m: int, r: int) -> Transition:
    eye = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
    zero = [Fraction(0)] * m
    bundle = [
        [Polynomial.const(m, 1 if i == j else 0) for j in range(r)] for i in range(r)
    ]
    return Transition(eye, zero, bundle, [row[:] for row in bundle])


def _det(matrix: list[list[Fraction]]) -> Fraction:
    n = len(matrix)
    m = [row[:] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        pivot = None
        for r in range(c, n):
            if m[r][c]:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                factor = m[r][c] * inv
                m[r] = [x - factor * y for x, y in zip(m[r], m[c])]
    return det


def _poly_mat_mul(
    a: list[list[Polynomial]], b: list[list[Polynomial]], m: int
) -> list[list[Polynomial]]:
    n = len(a)
    out = [[Polynomial.zero(m) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = Polynomial.zero(m)
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def _is_poly_identity(mat: list[list[Polynomial]], m: int) -> bool:
    for i, row in enumerate(mat):
        for j, p in enumerate(row):
            expected = Polynomial.const(m, 1 if i == j else 0)
            if p != expected:
                return False
    return True
