"""Polynomial-coefficient chiral models: the f_(k) mode action and translation.

The mode f_(k) of a coefficient polynomial f acts on PBW states by the
four-case recursion:

  (i)   f_(k)(1 (x) g) = delta_{k,-1} (1 (x) fg)                      k >= -1
  (ii)  f_(k)(1 (x) g) = 1/(k+1) sum_i sum_q q gamma^i_q
                         (df/dx^i)_(k-q) (1 (x) g)                    k <  -1
  (iii) f_(k)(gamma^i_p P (x) g) = gamma^i_p f_(k)(P (x) g)
  (iv)  f_(k)(beta^i_p P (x) g)  = beta^i_p f_(k)(P (x) g)
                                   - (df/dx^i)_(k+p)(P (x) g)

with q running over k+1..-1 only: deeper terms hit case (i) with k-q >= 0
and vanish (this finite support is asserted by tests, not assumed).  The
recursion terminates because derivatives strictly lower the degree of f
and the word cases shorten the monomial.  f_(k) acts as the identity on
b/c modes and on any other tensor factor (f is even, so no signs).

Because every path ends by multiplying the coefficient with a polynomial
built from derivatives of f, the action on a fixed word factors through
the coefficient: f_(k)(P (x) g) = sum_j P_j (x) (p_j g) with (P_j, p_j)
depending only on (f, k, P).  That expansion is memoized.
"""

from __future__ import annotations

from fractions import Fraction

from .modes import B, BETA, GAMMA, Mode, Model, State, Word, _insert_creation
from .poly import Polynomial, poly_partial

_EXPANSION_CACHE: dict[tuple, tuple[tuple[Word, Polynomial], ...]] = {}


def _combine(
    acc: dict[Word, Polynomial], word: Word, poly: Polynomial, factor: Fraction | int = 1
) -> None:
    scaled = poly.scale(factor) if factor != 1 else poly
    if scaled.is_zero():
        return
    known = acc.get(word)
    total = scaled if known is None else known + scaled
    if total.is_zero():
        acc.pop(word, None)
    else:
        acc[word] = total


def _f_expansion(model: Model, f: Polynomial, k: int, word: Word) -> tuple[tuple[Word, Polynomial], ...]:
    """Expansion of f_(k) on a PBW word as ((word', multiplier), ...)."""
    key = (model, f, k, word)
    cached = _EXPANSION_CACHE.get(key)
    if cached is not None:
        return cached

    acc: dict[Word, Polynomial] = {}
    if f.is_zero():
        pass
    elif not word:
        if k >= -1:
            if k == -1:
                _combine(acc, (), f)
        else:
            gs = model.gamma_sector
            for i in range(1, model.nvars + 1):
                df = poly_partial(f, i)
                if df.is_zero():
                    continue
                for q in range(k + 1, 0):
                    inner = _f_expansion(model, df, k - q, ())
                    if not inner:
                        continue
                    gamma_q = Mode(gs, GAMMA, i, q)
                    factor = Fraction(q, k + 1)
                    for w2, p2 in inner:
                        placed = _insert_creation(gamma_q, w2)
                        assert placed is not None  # gamma modes are even
                        w3, sign = placed
                        _combine(acc, w3, p2, factor * sign)
    else:
        head, rest = word[0], word[1:]
        in_gamma = head.sector == model.gamma_sector
        for w2, p2 in _f_expansion(model, f, k, rest):
            placed = _insert_creation(head, w2)
            if placed is None:
                continue
            w3, sign = placed
            _combine(acc, w3, p2, sign)
        if in_gamma and head.species == BETA:
            df = poly_partial(f, head.index)
            if not df.is_zero():
                for w2, p2 in _f_expansion(model, df, k + head.level, rest):
                    _combine(acc, w2, p2, -1)

    result = tuple(sorted(acc.items()))
    _EXPANSION_CACHE[key] = result
    return result


def f_mode_action(f: Polynomial, k: int, state: State) -> State:
    """Apply the mode f_(k) of a coefficient polynomial to a state."""
    model = state.model
    if model.gamma_sector < 0:
        raise ValueError("f_(k) requires a polynomial-coefficient sector")
    assert f.nvars == model.nvars
    terms: dict[Word, Polynomial] = {}
    for word, g in state.terms.items():
        for w2, mult in _f_expansion(model, f, k, word):
            _combine(terms, w2, mult * g)
    return State(model, terms)


def _t_bump_factor(mode: Mode) -> int:
    """[T, X_n] = factor * X_{n-1}: -n for beta/b, 1-n for gamma/c."""
    if mode.species in (BETA, B):
        return -mode.level
    return 1 - mode.level  # gamma, c


def translation_operator(state: State) -> State:
    """The translation operator T; raises weight by exactly 1.

    T is the even derivation with [T, X_n] the level bump above, T 1 = 0,
    and T(1 (x) f) = sum_i gamma^i_{-1} (x) df/dx^i on polynomial
    coefficients (the normally ordered beta dgamma realization).
    """
    model = state.model
    terms: dict[Word, Polynomial] = {}
    for word, poly in state.terms.items():
        for j, mode in enumerate(word):
            factor = _t_bump_factor(mode)
            if factor == 0:
                continue
            bumped = Mode(mode.sector, mode.species, mode.index, mode.level - 1)
            prefix = word[:j]
            sign0 = 1
            if bumped.odd:
                crossings = sum(1 for m in prefix if m.odd)
                sign0 = (-1) ** crossings
            placed = _insert_creation(bumped, prefix + word[j + 1 :])
            if placed is None:
                continue
            new_word, sign = placed
            _combine(terms, new_word, poly, factor * sign0 * sign)
        if model.gamma_sector >= 0:
            for i in range(1, model.nvars + 1):
                df = poly_partial(poly, i)
                if df.is_zero():
                    continue
                gamma_m1 = Mode(model.gamma_sector, GAMMA, i, -1)
                placed = _insert_creation(gamma_m1, word)
                assert placed is not None
                new_word, sign = placed
                _combine(terms, new_word, df, sign)
    return State(model, terms)
