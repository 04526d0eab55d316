"""Mode algebras and PBW state spaces for bc-beta-gamma systems.

A model is a list of sectors, each a free-field system:

* a "weil" sector carries beta/gamma and b/c modes indexed by a Lie
  algebra basis, with degrees (-2, +2, -1, +1) and scalar coefficients;
* a "gamma" sector carries beta/gamma modes indexed by base coordinates
  x^1..x^m with polynomial coefficients, plus a rank-r b/c system, with
  degrees (0, 0, -1, +1).

Tensor products concatenate sectors.  States are linear combinations of
PBW words of creation modes applied to a coefficient polynomial; words
are kept in a fixed canonical order (sector, then beta < gamma < b < c,
then descending |level|, then ascending index) with Koszul signs
absorbed into coefficients, so equal states have equal term maps.

Creation levels are n <= -1 for beta/b and n <= 0 for gamma/c, except in
gamma sectors where gamma_0 acts on the coefficient as multiplication by
x^i and beta_0 as d/dx^i.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .poly import Polynomial, poly_partial

BETA, GAMMA, B, C = 0, 1, 2, 3
SPECIES_NAMES = ("beta", "gamma", "b", "c")
SPECIES_BY_NAME = {name: i for i, name in enumerate(SPECIES_NAMES)}

_ODD = (False, False, True, True)

WEIL_DEGREES = (-2, 2, -1, 1)
GAMMA_DEGREES = (0, 0, -1, 1)


class Mode(NamedTuple):
    sector: int
    species: int
    index: int  # 1-based
    level: int  # the plain subscript of beta^i_n, gamma^i_n, b^j_n, c^j_n

    @property
    def weight(self) -> int:
        return -self.level

    @property
    def odd(self) -> bool:
        return _ODD[self.species]

    def key(self) -> tuple[int, int, int, int]:
        """Canonical PBW position: sector, beta < gamma < b < c, then
        descending |level| (creation levels ascend), then ascending index."""
        return (self.sector, self.species, self.level, self.index)

    def __repr__(self) -> str:
        return f"{SPECIES_NAMES[self.species]}[s{self.sector}]^{self.index}_{self.level}"


Word = tuple[Mode, ...]


class Sector(NamedTuple):
    kind: str  # "weil" | "gamma"
    n_even: int  # beta/gamma index range (dim g, or m)
    n_odd: int  # b/c index range (dim g, or r)

    @property
    def degrees(self) -> tuple[int, int, int, int]:
        return WEIL_DEGREES if self.kind == "weil" else GAMMA_DEGREES

    def creation_max_level(self, species: int) -> int:
        """Largest level stored in PBW words for this species."""
        if species in (BETA, B):
            return -1
        if self.kind == "gamma" and species == GAMMA:
            return -1  # gamma_0 acts on the coefficient
        return 0  # weil gamma_0, and c_0 everywhere, create


class Model:
    """A finite tensor product of free-field sectors."""

    __slots__ = ("sectors", "nvars", "gamma_sector")

    def __init__(self, sectors: tuple[Sector, ...]):
        gamma_sectors = [i for i, s in enumerate(sectors) if s.kind == "gamma"]
        if len(gamma_sectors) > 1:
            raise ValueError("at most one polynomial-coefficient sector is supported")
        self.sectors = sectors
        self.gamma_sector = gamma_sectors[0] if gamma_sectors else -1
        self.nvars = sectors[self.gamma_sector].n_even if gamma_sectors else 0

    @staticmethod
    def weil(dim: int) -> "Model":
        return Model((Sector("weil", dim, dim),))

    @staticmethod
    def gamma_chiral(m: int, r: int) -> "Model":
        return Model((Sector("gamma", m, r),))

    @staticmethod
    def tensor(left: "Model", right: "Model") -> "Model":
        return Model(left.sectors + right.sectors)

    def mode(self, sector: int, species: int | str, index: int, level: int) -> Mode:
        if isinstance(species, str):
            species = SPECIES_BY_NAME[species]
        mode = Mode(sector, species, index, level)
        self.validate_mode(mode)
        return mode

    def validate_mode(self, mode: Mode) -> None:
        if not 0 <= mode.sector < len(self.sectors):
            raise ValueError(f"mode {mode}: no sector {mode.sector} in this model")
        sec = self.sectors[mode.sector]
        limit = sec.n_even if mode.species in (BETA, GAMMA) else sec.n_odd
        if not 1 <= mode.index <= limit:
            raise ValueError(f"mode {mode}: index out of range 1..{limit}")

    def degree_of_mode(self, mode: Mode) -> int:
        return self.sectors[mode.sector].degrees[mode.species]

    def is_creation(self, mode: Mode) -> bool:
        sec = self.sectors[mode.sector]
        return mode.level <= sec.creation_max_level(mode.species)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Model) and self.sectors == other.sectors

    def __hash__(self) -> int:
        return hash(self.sectors)

    def __repr__(self) -> str:
        return f"Model{self.sectors!r}"


def word_weight(word: Word) -> int:
    return sum(-m.level for m in word)


def word_parity(word: Word) -> int:
    return sum(1 for m in word if m.odd) & 1


class State:
    """A finite linear combination of PBW words with polynomial coefficients."""

    __slots__ = ("model", "terms")

    def __init__(self, model: Model, terms: dict[Word, Polynomial] | None = None):
        self.model = model
        self.terms: dict[Word, Polynomial] = {}
        if terms:
            for word, poly in terms.items():
                if not poly.is_zero():
                    self.terms[word] = poly

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(model: Model) -> "State":
        return State(model)

    @staticmethod
    def vacuum(model: Model, coeff: Polynomial | Fraction | int = 1) -> "State":
        poly = coeff if isinstance(coeff, Polynomial) else Polynomial.const(model.nvars, coeff)
        return State(model, {(): poly})

    @staticmethod
    def basis(model: Model, word: Word, coeff: Polynomial | Fraction | int = 1) -> "State":
        """A single already-canonical PBW word (asserted) over a coefficient."""
        for mode in word:
            model.validate_mode(mode)
            assert model.is_creation(mode), f"{mode} is not a creation mode"
        assert list(word) == sorted(word, key=Mode.key), f"word {word} not canonical"
        poly = coeff if isinstance(coeff, Polynomial) else Polynomial.const(model.nvars, coeff)
        return State(model, {word: poly})

    # -- linear structure -----------------------------------------------

    def __add__(self, other: "State") -> "State":
        assert self.model == other.model
        terms = dict(self.terms)
        for word, poly in other.terms.items():
            acc = terms.get(word)
            total = poly if acc is None else acc + poly
            if total.is_zero():
                terms.pop(word, None)
            else:
                terms[word] = total
        return State(self.model, terms)

    def __sub__(self, other: "State") -> "State":
        return self + other.scale(-1)

    def scale(self, factor: Fraction | int) -> "State":
        if factor == 0:
            return State(self.model)
        return State(self.model, {w: p.scale(factor) for w, p in self.terms.items()})

    def mul_poly(self, poly: Polynomial) -> "State":
        return State(self.model, {w: p * poly for w, p in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, State)
            and self.model == other.model
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.model, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def __repr__(self) -> str:
        if not self.terms:
            return "State(0)"
        parts = [f"({p.format()})*{list(w)}" for w, p in sorted(self.terms.items())]
        return "State(" + " + ".join(parts) + ")"

    # -- grading ----------------------------------------------------------

    def max_weight(self) -> int:
        """Largest word weight among terms (coefficients have weight 0)."""
        if not self.terms:
            return -1
        return max(word_weight(w) for w in self.terms)

    def parity(self) -> int | None:
        """0/1 if parity-homogeneous, else None."""
        parities = {word_parity(w) for w in self.terms}
        if not parities:
            return 0
        return parities.pop() if len(parities) == 1 else None


def grade_of(state: State) -> tuple[int, int, int] | None:
    """(weight, degree, poly-degree) of a homogeneous state, else None.

    poly-degree is the total degree of the coefficient; the zero state
    grades as (0, 0, 0).
    """
    model = state.model
    grades = set()
    for word, poly in state.terms.items():
        w = word_weight(word)
        d = sum(model.degree_of_mode(m) for m in word)
        for deg, _ in poly.homogeneous_parts().items():
            grades.add((w, d, deg))
    if not grades:
        return (0, 0, 0)
    if len(grades) > 1:
        return None
    return grades.pop()


def gamma_charge(model: Model, word: Word, poly_degree: int) -> int:
    """Coefficient degree + #gamma - #beta word modes in the gamma sector.

    This is the grading the --max-poly-degree cap bounds: every
    differential and action used on blocks shifts it by <= 0, so capped
    blocks are closed (checked, not assumed, at matrix-assembly time).
    """
    if model.gamma_sector < 0:
        return 0
    charge = poly_degree
    for mode in word:
        if mode.sector == model.gamma_sector:
            if mode.species == GAMMA:
                charge += 1
            elif mode.species == BETA:
                charge -= 1
    return charge


def mode_supercommutator(model: Model, a: Mode, b: Mode) -> Fraction:
    """Central value of the supercommutator [a, b] in the given model.

    [beta^i_p, gamma^i'_q] = delta_{i,i'} delta_{p+q,0},
    {b^j_p, c^j'_q} = delta_{j,j'} delta_{p+q,0}; all other pairs vanish.
    Modes from different sectors always supercommute.
    """
    model.validate_mode(a)
    model.validate_mode(b)
    if a.sector != b.sector or a.index != b.index or a.level + b.level != 0:
        return Fraction(0)
    pair = (a.species, b.species)
    if pair == (BETA, GAMMA):
        return Fraction(1)
    if pair == (GAMMA, BETA):
        return Fraction(-1)
    if pair in ((B, C), (C, B)):
        return Fraction(1)
    return Fraction(0)


def _coefficient_action(model: Model, mode: Mode, poly: Polynomial) -> Polynomial | None:
    """Action of a non-creation mode on the coefficient line; None kills it."""
    if mode.sector == model.gamma_sector and mode.level == 0:
        if mode.species == BETA:
            out = poly_partial(poly, mode.index)
            return out if not out.is_zero() else None
        if mode.species == GAMMA:
            return poly * Polynomial.variable(model.nvars, mode.index)
    return None


def _insert_creation(mode: Mode, word: Word) -> tuple[Word, int] | None:
    """Canonical insertion of a creation mode; None if an odd mode repeats."""
    pos = 0
    sign_flips = 0
    mode_key = mode.key()
    for m in word:
        if m.key() < mode_key:
            pos += 1
            if m.odd and mode.odd:
                sign_flips += 1
        else:
            break
    if mode.odd and pos < len(word) and word[pos] == mode:
        return None
    return word[:pos] + (mode,) + word[pos:], (-1) ** sign_flips


def apply_mode(mode: Mode, state: State) -> State:
    """Apply a single mode operator to a state.

    Creation modes insert into the PBW word with Koszul signs; other
    modes super-commute rightward through the word, contracting via the
    central supercommutator, and finally act on the coefficient
    (gamma-sector beta_0 as d/dx^i, gamma_0 as x^i, everything else
    annihilating).
    """
    model = state.model
    model.validate_mode(mode)
    out: dict[Word, Polynomial] = {}

    def emit(word: Word, poly: Polynomial) -> None:
        if poly.is_zero():
            return
        acc = out.get(word)
        total = poly if acc is None else acc + poly
        if total.is_zero():
            out.pop(word, None)
        else:
            out[word] = total

    creation = model.is_creation(mode)
    for word, poly in state.terms.items():
        if creation:
            placed = _insert_creation(mode, word)
            if placed is None:
                continue
            new_word, sign = placed
            emit(new_word, poly.scale(sign))
        else:
            sign = 1
            for j, m in enumerate(word):
                contraction = mode_supercommutator(model, mode, m)
                if contraction:
                    emit(word[:j] + word[j + 1 :], poly.scale(sign * contraction))
                if mode.odd and m.odd:
                    sign = -sign
            acted = _coefficient_action(model, mode, poly)
            if acted is not None:
                emit(word, acted.scale(sign))
    return State(model, out)
