"""Finite-dimensional blocks of graded state spaces and exact cohomology.

A block collects the PBW basis elements of a model at a fixed (weight,
degree), with the polynomial-coefficient sector capped by gamma-charge
(coefficient degree + #gamma - #beta gamma-sector word modes) <= P.  Weil
sectors need no cap: their (weight, degree) pieces are intrinsically
finite-dimensional, with gamma_0 powers pinned by the degree equation.

Caps are never used to truncate a state.  When an operator image leaves
the enumerated span, matrix assembly raises CapOverflow instead of
dropping terms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import linalg
from .modes import B, BETA, C, GAMMA, Mode, Model, State, Word, word_weight
from .poly import Polynomial

ALL_SPECIES = frozenset((BETA, GAMMA, B, C))
GAMMA_C = frozenset((GAMMA, C))
GAMMA_BC = frozenset((GAMMA, B, C))


class CapOverflow(Exception):
    """An operator image left the capped block span."""


Restriction = dict[int, frozenset[int]]


def full_restriction(model: Model) -> Restriction:
    return {i: ALL_SPECIES for i in range(len(model.sectors))}


BasisElement = tuple[Word, tuple[int, ...]]  # (PBW word, coefficient exponent)


@dataclass(frozen=True)
class BlockBasis:
    model: Model
    weight: int
    degree: int
    elements: tuple[BasisElement, ...]
    index: dict[BasisElement, int] = field(compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def state(self, position: int) -> State:
        word, exp = self.elements[position]
        poly = Polynomial(self.model.nvars, {exp: Fraction(1)})
        return State(self.model, {word: poly})

    def states(self) -> list[State]:
        return [self.state(i) for i in range(self.dim)]

    def coords(self, state: State) -> list[Fraction]:
        """Coordinates of a state in this basis; CapOverflow if it leaves it."""
        vec = [Fraction(0)] * self.dim
        for word, poly in state.terms.items():
            for exp, coeff in poly.terms.items():
                pos = self.index.get((word, exp))
                if pos is None:
                    raise CapOverflow(
                        f"term {word} * x^{exp} outside block "
                        f"(weight={self.weight}, degree={self.degree})"
                    )
                vec[pos] += coeff
        return vec


def _mode_sort_key(element: BasisElement) -> tuple:
    word, exp = element
    return (tuple(m.key() for m in word), exp)


def _sector_core_words(
    model: Model, sector: int, max_weight: int, allowed: frozenset[int]
) -> list[Word]:
    """All creation words in one sector, excluding weil gamma_0 modes.

    Levels run from each species' creation maximum down to -max_weight;
    weil gamma_0 powers are appended analytically by the degree equation.
    """
    sec = model.sectors[sector]
    candidates: list[Mode] = []
    for species in sorted(allowed):
        n_idx = sec.n_even if species in (BETA, GAMMA) else sec.n_odd
        top = sec.creation_max_level(species)
        if sec.kind == "weil" and species == GAMMA:
            top = -1  # gamma_0 handled by the degree equation
        for level in range(top, -max_weight - 1, -1):
            for index in range(1, n_idx + 1):
                candidates.append(Mode(sector, species, index, level))
    candidates.sort(key=Mode.key)

    words: list[Word] = []

    def extend(prefix: list[Mode], start: int, budget: int) -> None:
        words.append(tuple(prefix))
        for pos in range(start, len(candidates)):
            mode = candidates[pos]
            w = mode.weight
            if w > budget:
                continue
            if mode.odd and prefix and prefix[-1] == mode:
                continue
            prefix.append(mode)
            # odd modes may not repeat: advance past them
            extend(prefix, pos + (1 if mode.odd else 0), budget - w)
            prefix.pop()

    extend([], 0, max_weight)
    return words


def _weil_gamma0_completions(
    model: Model, sector: int, count: int, allowed: frozenset[int]
) -> list[Word]:
    """All gamma_0 words of a given total count in a weil sector."""
    if count == 0:
        return [()]
    if GAMMA not in allowed:
        return []
    n = model.sectors[sector].n_even
    out = []
    for combo in itertools.combinations_with_replacement(range(1, n + 1), count):
        out.append(tuple(Mode(sector, GAMMA, i, 0) for i in combo))
    return out


def _merge_canonical(parts: Sequence[Word]) -> Word:
    modes = [m for part in parts for m in part]
    modes.sort(key=Mode.key)
    return tuple(modes)


def _monomials(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    if nvars == 0:
        return [()] if max_degree >= 0 else []
    out = []
    for total in range(max_degree + 1):
        for cuts in itertools.combinations_with_replacement(range(nvars), total):
            exp = [0] * nvars
            for c in cuts:
                exp[c] += 1
            out.append(tuple(exp))
    return sorted(out)


def _word_degree(model: Model, word: Word) -> int:
    return sum(model.degree_of_mode(m) for m in word)


def _gamma_sector_counts(model: Model, word: Word) -> tuple[int, int]:
    gs = model.gamma_sector
    n_gamma = sum(1 for m in word if m.sector == gs and m.species == GAMMA)
    n_beta = sum(1 for m in word if m.sector == gs and m.species == BETA)
    return n_gamma, n_beta


def enumerate_elements(
    model: Model,
    max_weight: int,
    max_charge: int,
    restriction: Restriction | None = None,
) -> list[BasisElement]:
    """Every basis element of weight <= max_weight under the charge caps.

    The gamma sector is capped by gamma-charge <= max_charge; each weil
    sector is capped by (#gamma - #beta) <= max_charge so that gamma_0
    powers stay finite.  Used for verification sweeps, where states are
    never re-expressed in a basis.
    """
    restriction = restriction or full_restriction(model)
    per_sector: list[list[Word]] = []
    for s in range(len(model.sectors)):
        allowed = restriction.get(s, ALL_SPECIES)
        core = _sector_core_words(model, s, max_weight, allowed)
        if model.sectors[s].kind == "weil":
            expanded = []
            for word in core:
                n_gamma = sum(1 for m in word if m.species == GAMMA)
                n_beta = sum(1 for m in word if m.species == BETA)
                limit = max_charge - n_gamma + n_beta
                for k in range(limit + 1):
                    for g0 in _weil_gamma0_completions(model, s, k, allowed):
                        expanded.append(_merge_canonical((word, g0)))
            per_sector.append(expanded)
        else:
            per_sector.append(core)

    elements: list[BasisElement] = []
    for combo in itertools.product(*per_sector):
        word = _merge_canonical(combo)
        if word_weight(word) > max_weight:
            continue
        n_gamma, n_beta = _gamma_sector_counts(model, word)
        max_deg = max_charge - n_gamma + n_beta
        if model.gamma_sector >= 0 and max_deg < 0:
            continue
        for exp in _monomials(model.nvars, max_deg if model.nvars else 0):
            elements.append((word, exp))
    elements.sort(key=_mode_sort_key)
    return elements


def block_basis(
    model: Model,
    weight: int,
    degree: int,
    max_charge: int,
    restriction: Restriction | None = None,
    weil_charge_cap: int | None = None,
) -> BlockBasis:
    """The exact (weight, degree) block, gamma sector capped by charge.

    Weil sectors are intrinsically finite per block; weil_charge_cap
    optionally bounds their (#gamma - #beta) as in sweep enumeration, for
    checks that operate inside the charge-capped window (the operators
    involved must be weil-charge-filtered, which iota, L and Phi are).
    """
    restriction = restriction or full_restriction(model)
    weil_sectors = [i for i, s in enumerate(model.sectors) if s.kind == "weil"]

    per_sector: list[list[Word]] = []
    for s in range(len(model.sectors)):
        allowed = restriction.get(s, ALL_SPECIES)
        per_sector.append(_sector_core_words(model, s, weight, allowed))

    elements: list[BasisElement] = []
    for combo in itertools.product(*per_sector):
        base_word = _merge_canonical(combo)
        if word_weight(base_word) != weight:
            continue
        residual = degree - _word_degree(model, base_word)
        # distribute weil gamma_0 powers to hit the degree exactly
        if weil_sectors:
            if residual < 0 or residual % 2 != 0:
                continue
            splits = _compositions(residual // 2, len(weil_sectors))
        else:
            if residual != 0:
                continue
            splits = [()]
        for split in splits:
            if weil_charge_cap is not None:
                over = False
                for ws, k in zip(weil_sectors, split):
                    n_gamma = sum(
                        1 for mo in base_word
                        if mo.sector == ws and mo.species == GAMMA
                    )
                    n_beta = sum(
                        1 for mo in base_word
                        if mo.sector == ws and mo.species == BETA
                    )
                    if n_gamma + k - n_beta > weil_charge_cap:
                        over = True
                        break
                if over:
                    continue
            g0_choices = [
                _weil_gamma0_completions(
                    model, ws, k, restriction.get(ws, ALL_SPECIES)
                )
                for ws, k in zip(weil_sectors, split)
            ]
            for g0_combo in itertools.product(*g0_choices):
                word = _merge_canonical((base_word,) + g0_combo)
                n_gamma, n_beta = _gamma_sector_counts(model, word)
                max_deg = max_charge - n_gamma + n_beta
                if model.gamma_sector >= 0 and max_deg < 0:
                    continue
                for exp in _monomials(model.nvars, max_deg if model.nvars else 0):
                    elements.append((word, exp))

    elements = sorted(set(elements), key=_mode_sort_key)
    index = {el: i for i, el in enumerate(elements)}
    return BlockBasis(model, weight, degree, tuple(elements), index)


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def operator_matrix(
    apply_op: Callable[[State], State], src: BlockBasis, dst: BlockBasis
) -> linalg.Matrix:
    """Matrix of an operator between blocks (columns act on src basis)."""
    cols = []
    for i in range(src.dim):
        image = apply_op(src.state(i))
        cols.append(dst.coords(image))
    # transpose to rows-of-dst convention
    rows = [[cols[j][i] for j in range(src.dim)] for i in range(dst.dim)]
    return rows


@dataclass
class GradedComplex:
    """Blocks indexed by (weight, degree) with degree +1 differentials."""

    blocks: dict[tuple[int, int], BlockBasis]
    differentials: dict[tuple[int, int], linalg.Matrix]  # d: (w,d) -> (w,d+1)

    def verify_d_squared(self) -> None:
        for (w, d), mat in sorted(self.differentials.items()):
            nxt = self.differentials.get((w, d + 1))
            if nxt is None:
                continue
            prod = linalg.mat_mul(nxt, mat)
            if not linalg.is_zero_matrix(prod):
                raise AssertionError(f"d^2 != 0 on block (weight={w}, degree={d})")

    def cohomology_dimensions(self) -> dict[tuple[int, int], int]:
        """dim ker d - rank of the incoming d, per block, exactly.

        Only interior blocks are reported: both degree neighbours must be
        present in the grid, so callers pad the degree range by one on
        each side of the region of interest.
        """
        dims: dict[tuple[int, int], int] = {}
        for (w, d), basis in sorted(self.blocks.items()):
            if (w, d + 1) not in self.blocks or (w, d - 1) not in self.blocks:
                continue
            if basis.dim == 0:
                dims[(w, d)] = 0
                continue
            out = self.differentials.get((w, d))
            if out is None or not out:
                ker = basis.dim
            else:
                ker = basis.dim - linalg.rank(out)
            inc = self.differentials.get((w, d - 1))
            im = linalg.rank(inc) if inc else 0
            dims[(w, d)] = ker - im
        return dims


def build_complex(
    model: Model,
    apply_d: Callable[[State], State],
    weights: Iterable[int],
    degrees: Iterable[int],
    max_charge: int,
    restriction: Restriction | None = None,
) -> GradedComplex:
    """Assemble blocks and differential matrices over a (w, d) grid.

    The degree grid must cover d+1 for every block whose cohomology is
    wanted; rank of the incoming differential uses the d-1 entry when
    present.  CapOverflow propagates if d leaves a capped block.
    """
    weights = sorted(set(weights))
    degrees = sorted(set(degrees))
    blocks = {
        (w, d): block_basis(model, w, d, max_charge, restriction)
        for w in weights
        for d in degrees
    }
    differentials: dict[tuple[int, int], linalg.Matrix] = {}
    for w in weights:
        for d in degrees:
            if (w, d + 1) not in blocks:
                continue
            src, dst = blocks[(w, d)], blocks[(w, d + 1)]
            if src.dim == 0:
                continue
            differentials[(w, d)] = operator_matrix(apply_d, src, dst)
    return GradedComplex(blocks, differentials)


def intersect_kernels(
    basis: BlockBasis,
    operators: Sequence[tuple[Callable[[State], State], BlockBasis]],
) -> list[State]:
    """Exact basis of the joint kernel of operators on a block.

    Each operator comes with its codomain block; stacking all matrices
    and taking the nullspace gives the intersection.
    """
    if basis.dim == 0:
        return []
    stacked: linalg.Matrix = []
    for apply_op, dst in operators:
        stacked.extend(operator_matrix(apply_op, basis, dst))
    if not stacked:
        return basis.states()
    vectors = linalg.nullspace(stacked, cols=basis.dim)
    out = []
    for vec in vectors:
        state = State.zero(basis.model)
        for pos, coeff in enumerate(vec):
            if coeff:
                state = state + basis.state(pos).scale(coeff)
        out.append(state)
    return out
