"""n-th products, composite operators, and Borcherds commutator calculus.

nth_product computes A_(n)B for any PBW state A by structural recursion
on the word of A: peeling the leftmost creation mode a off A = a_(j)A'
(j <= -1) and expanding the normally ordered reconstruction

  (a_(-1-k)A')_(n) = sum_{i<=-1} (-1)^k C(i,k) a_(i-k) A'_(n-1-i)
                   + (-1)^{|a||A'|} sum_{i>=0} (-1)^k C(i,k) A'_(n-1-i) a_(i-k),

both sums truncated exactly by the non-negative weight grading.  The
base case is the coefficient state, whose modes are the f_(k) recursion
(polynomial sectors) or the vacuum delta (scalar coefficients).

Operator wraps finite sums of words of field modes A_(n); commutators
use the Borcherds formula [A_(m), B_(k)] = sum_i C(m,i) (A_(i)B)_(m+k-i),
which stays inside this class of operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .gamma import f_mode_action
from .modes import (
    B,
    BETA,
    C,
    GAMMA,
    Mode,
    Model,
    State,
    Word,
    apply_mode,
    word_parity,
    word_weight,
)
from .poly import Polynomial


def general_binomial(n: int, k: int) -> Fraction:
    """C(n, k) for any integer n and k >= 0."""
    assert k >= 0
    num = 1
    for t in range(k):
        num *= n - t
    den = 1
    for t in range(2, k + 1):
        den *= t
    return Fraction(num, den)


def _generator_shift(species: int) -> int:
    """Plain mode level of the generator field at (n)-index l is l + shift."""
    return 0 if species in (BETA, B) else 1


def _apply_generator_mode(model: Model, head: Mode, l: int, state: State) -> State:
    """Apply the (l)-th mode of the generator field of a word mode."""
    level = l + _generator_shift(head.species)
    return apply_mode(Mode(head.sector, head.species, head.index, level), state)


_NTH_CACHE: dict[tuple, State] = {}


def nth_product(a_state: State, n: int, b_state: State) -> State:
    """The n-th product A_(n)B, exact, for PBW states in one model.

    Term-level results are memoized (states are immutable), which makes
    repeated operator sweeps over block bases cheap.
    """
    model = a_state.model
    assert model == b_state.model
    result = State.zero(model)
    for word, poly in a_state.terms.items():
        result = result + _cached_products(model, word, poly, n, b_state)
    return result


def _cached_products(
    model: Model, word: Word, poly: Polynomial, n: int, b_state: State
) -> State:
    result = State.zero(model)
    for b_word, b_poly in b_state.terms.items():
        key = (model, word, poly, n, b_word, b_poly)
        cached = _NTH_CACHE.get(key)
        if cached is None:
            b_term = State(model, {b_word: b_poly})
            cached = _nth_product_term(model, word, poly, n, b_term)
            _NTH_CACHE[key] = cached
        result = result + cached
    return result


def _nth_product_term(
    model: Model, word: Word, poly: Polynomial, n: int, b_term: State
) -> State:
    if not word:
        if model.gamma_sector >= 0:
            return f_mode_action(poly, n, b_term)
        if n == -1:
            return b_term.scale(poly.constant_value())
        return State.zero(model)

    if len(word) == 1 and poly.is_constant():
        # Y(a_(-1-k) 1, z) = d^(k)a(z): a single scaled generator mode
        head = word[0]
        j = head.level - _generator_shift(head.species)
        k = -1 - j
        coeff = poly.constant_value() * (-1) ** k * general_binomial(n, k)
        if not coeff:
            return State.zero(model)
        return _apply_generator_mode(model, head, n - k, b_term).scale(coeff)

    head, rest = word[0], word[1:]
    j = head.level - _generator_shift(head.species)
    assert j <= -1
    k = -1 - j
    rest_parity = word_parity(rest)  # coefficient polynomials are even
    eps = -1 if (head.odd and rest_parity) else 1
    wt_rest = word_weight(rest)
    wt_b = b_term.max_weight()

    out = State.zero(model)
    # creation part of the k-th derivative field of the generator
    for i in range(-1, n - wt_rest - wt_b - 1, -1):
        inner = _cached_products(model, rest, poly, n - 1 - i, b_term)
        if inner.is_zero():
            continue
        coeff = general_binomial(i, k) * (-1) ** k
        if coeff:
            out = out + _apply_generator_mode(model, head, i - k, inner).scale(coeff)
    # annihilation part, applied to B first (binom(i, k) = 0 below i = k)
    for i in range(k, k + wt_b + 2):
        coeff = general_binomial(i, k) * (-1) ** k * eps
        if not coeff:
            continue
        moved = _apply_generator_mode(model, head, i - k, b_term)
        if moved.is_zero():
            continue
        out = out + _cached_products(model, rest, poly, n - 1 - i, moved).scale(coeff)
    return out


# ---------------------------------------------------------------------------
# Operators


@dataclass(frozen=True)
class FieldMode:
    """The operator A_(n) for a PBW state A."""

    state: State
    n: int

    @property
    def parity(self) -> int:
        p = self.state.parity()
        assert p is not None, "field modes need parity-homogeneous states"
        return p

    def apply(self, s: State) -> State:
        return nth_product(self.state, self.n, s)

    def __repr__(self) -> str:
        return f"FieldMode(n={self.n}, {self.state!r})"


OpWord = tuple[FieldMode, ...]


class Operator:
    """A finite sum of scaled words of field modes, applied right to left."""

    __slots__ = ("model", "terms")

    def __init__(self, model: Model, terms: Iterable[tuple[Fraction, OpWord]] = ()):
        self.model = model
        collected: dict[OpWord, Fraction] = {}
        for coeff, op_word in terms:
            if not coeff:
                continue
            collected[op_word] = collected.get(op_word, Fraction(0)) + coeff
        self.terms: tuple[tuple[Fraction, OpWord], ...] = tuple(
            (c, w) for w, c in collected.items() if c
        )

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(model: Model) -> "Operator":
        return Operator(model)

    @staticmethod
    def field_mode(state: State, n: int) -> "Operator":
        return Operator(state.model, [(Fraction(1), (FieldMode(state, n),))])

    @staticmethod
    def raw_mode(model: Model, mode: Mode) -> "Operator":
        """A single mode X_level as the matching field mode of its generator."""
        shift = _generator_shift(mode.species)
        gen_level = -1 if mode.species in (BETA, B) else 0
        gen = State.basis(model, (Mode(mode.sector, mode.species, mode.index, gen_level),))
        return Operator.field_mode(gen, mode.level - shift)

    @staticmethod
    def f_mode(model: Model, f: Polynomial, k: int) -> "Operator":
        return Operator.field_mode(State.vacuum(model, f), k)

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "Operator") -> "Operator":
        assert self.model == other.model
        return Operator(self.model, self.terms + other.terms)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + other.scale(-1)

    def scale(self, factor: Fraction | int) -> "Operator":
        return Operator(self.model, [(c * factor, w) for c, w in self.terms])

    def compose(self, other: "Operator") -> "Operator":
        """self after other (right operator acts first)."""
        assert self.model == other.model
        terms = []
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                terms.append((c1 * c2, w1 + w2))
        return Operator(self.model, terms)

    def parity(self) -> int:
        parities = {sum(fm.parity for fm in w) & 1 for _, w in self.terms}
        assert len(parities) <= 1, "operator parity is not homogeneous"
        return parities.pop() if parities else 0

    def is_structurally_zero(self) -> bool:
        return not self.terms

    # -- action ------------------------------------------------------------

    def apply(self, s: State) -> State:
        out = State.zero(self.model)
        for coeff, op_word in self.terms:
            current = s
            for fm in reversed(op_word):
                current = fm.apply(current)
                if current.is_zero():
                    break
            if not current.is_zero():
                out = out + current.scale(coeff)
        return out

    def __repr__(self) -> str:
        return f"Operator({len(self.terms)} terms)"

    # -- commutators ---------------------------------------------------------

    def supercommutator(self, other: "Operator") -> "Operator":
        """[self, other] = self other - (-1)^{|self||other|} other self."""
        assert self.model == other.model
        out = Operator.zero(self.model)
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                out = out + _word_commutator(self.model, w1, w2).scale(c1 * c2)
        return out


def _atom_parity(word: OpWord) -> int:
    return sum(fm.parity for fm in word) & 1


def _single_commutator(model: Model, a: FieldMode, b: FieldMode) -> Operator:
    """Borcherds: [A_(m), B_(k)] = sum_{i>=0} C(m,i) (A_(i)B)_(m+k-i)."""
    wt = a.state.max_weight() + b.state.max_weight()
    terms: list[tuple[Fraction, OpWord]] = []
    for i in range(0, wt + 1):
        coeff = general_binomial(a.n, i)
        if not coeff:
            continue
        product = nth_product(a.state, i, b.state)
        if product.is_zero():
            continue
        terms.append((coeff, (FieldMode(product, a.n + b.n - i),)))
    return Operator(model, terms)


def _word_commutator(model: Model, w1: OpWord, w2: OpWord) -> Operator:
    """[w1, w2] for words of field modes, by the graded Leibniz rule."""
    if not w1:
        return Operator.zero(model)
    if len(w1) == 1:
        x = w1[0]
        out = Operator.zero(model)
        sign = 1
        for pos, y in enumerate(w2):
            inner = _single_commutator(model, x, y)
            if not inner.is_structurally_zero():
                prefix, suffix = w2[:pos], w2[pos + 1 :]
                for c, mid in inner.terms:
                    out = out + Operator(
                        model, [(c * sign, prefix + mid + suffix)]
                    )
            if x.parity and y.parity:
                sign = -sign
        return out
    # [AB, C] = A[B, C] + (-1)^{|B||C|} [A, C] B
    head, tail = w1[:1], w1[1:]
    left = _prepend(model, head, _word_commutator(model, tail, w2))
    sign = -1 if (_atom_parity(tail) and _atom_parity(w2)) else 1
    right = _append(model, _word_commutator(model, head, w2), tail).scale(sign)
    return left + right


def _prepend(model: Model, prefix: OpWord, op: Operator) -> Operator:
    return Operator(model, [(c, prefix + w) for c, w in op.terms])


def _append(model: Model, op: Operator, suffix: OpWord) -> Operator:
    return Operator(model, [(c, w + suffix) for c, w in op.terms])


def borcherds_commutator(a_state: State, m: int, op: Operator) -> Operator:
    """[A_(m), op] as an Operator, by the commutator formula."""
    return Operator.field_mode(a_state, m).supercommutator(op)


# ---------------------------------------------------------------------------
# Generator-reduction checks


@dataclass
class CheckFailure:
    check: str
    detail: str
    witness: str | None = None


@dataclass
class CheckReport:
    name: str
    failures: list[CheckFailure]
    checks_run: int = 0
    notes: list[str] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.notes is None:
            self.notes = []

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, check: str, detail: str, witness: str | None = None):
        self.checks_run += 1
        if not ok:
            self.failures.append(CheckFailure(check, detail, witness))


def check_derivation_on_pairs(
    op: Operator,
    generators: Sequence[State],
    n_window: range,
    report: CheckReport,
    label: str = "derivation",
) -> None:
    """D(g_(n)h) = (Dg)_(n)h +- g_(n)(Dh) on generator pairs."""
    parity = op.parity()
    for gi, g in enumerate(generators):
        dg = op.apply(g)
        g_par = g.parity()
        for hi, h in enumerate(generators):
            dh = op.apply(h)
            for n in n_window:
                lhs = op.apply(nth_product(g, n, h))
                sign = -1 if (parity and g_par) else 1
                rhs = nth_product(dg, n, h) + nth_product(g, n, dh).scale(sign)
                report.record(
                    lhs == rhs,
                    label,
                    f"generators #{gi},#{hi}, n={n}",
                    witness=None if lhs == rhs else repr(lhs - rhs),
                )


def check_square_zero_via_generators(
    op: Operator,
    generators: Sequence[State],
    basis_states: Iterable[State],
    report: CheckReport,
    n_window: range = range(-2, 3),
) -> None:
    """Square-zero of an odd derivation: on generators, then all basis states.

    The generator route realizes the reduction lemma ([D,D] = 2D^2 is a
    derivation); the basis sweep is the belt-and-braces direct check.
    """
    report.record(op.parity() == 1, "parity", "differential must be odd")
    check_derivation_on_pairs(op, generators, n_window, report)
    for gi, g in enumerate(generators):
        image = op.apply(op.apply(g))
        report.record(
            image.is_zero(),
            "square-zero-generator",
            f"generator #{gi}",
            witness=None if image.is_zero() else repr(image),
        )
    for s in basis_states:
        image = op.apply(op.apply(s))
        report.record(
            image.is_zero(),
            "square-zero-basis",
            "basis sweep",
            witness=None if image.is_zero() else repr(s),
        )


def check_commutation_hypothesis(
    op: Operator,
    op_state: State | None,
    m: int,
    generators: Sequence[State],
    samples: Sequence[State],
    k_window: range,
    report: CheckReport,
    label: str,
) -> None:
    """[A_(m), v_(k)] = sum_i C(m,i) (A_(i)v)_(m+k-i) on generators v.

    op must be the field mode A_(m) of op_state; both sides are evaluated
    on sample states.
    """
    assert op_state is not None
    for vi, v in enumerate(generators):
        v_par = v.parity()
        for k in k_window:
            vk = Operator.field_mode(v, k)
            direct = op.compose(vk) - vk.compose(op).scale(
                -1 if (op.parity() and v_par) else 1
            )
            formula = borcherds_commutator(op_state, m, vk)
            for s in samples:
                lhs = direct.apply(s)
                rhs = formula.apply(s)
                report.record(
                    lhs == rhs,
                    label,
                    f"generator #{vi}, k={k}",
                    witness=None if lhs == rhs else repr(s),
                )


def check_intertwines_on_generators(
    f_map: Callable[[State], State],
    a_op: Operator,
    b_op: Operator,
    generators: Sequence[State],
    basis_states: Iterable[State],
    report: CheckReport,
    label: str = "intertwine",
) -> None:
    """F o A = B o F, first on generators, then on all supplied basis states."""
    for gi, g in enumerate(generators):
        lhs = f_map(a_op.apply(g))
        rhs = b_op.apply(f_map(g))
        report.record(
            lhs == rhs,
            label + "-generator",
            f"generator #{gi}",
            witness=None if lhs == rhs else repr(lhs - rhs),
        )
    for s in basis_states:
        lhs = f_map(a_op.apply(s))
        rhs = b_op.apply(f_map(s))
        report.record(
            lhs == rhs,
            label + "-basis",
            "basis sweep",
            witness=None if lhs == rhs else repr(s),
        )


def commutant_subspace(
    operators: Sequence[Operator],
    basis,
    codomains: Sequence,
) -> list[State]:
    """Exact basis of the joint kernel of a family of operators on a block."""
    from .blocks import intersect_kernels

    pairs = [(op.apply, dst) for op, dst in zip(operators, codomains)]
    return intersect_kernels(basis, pairs)
