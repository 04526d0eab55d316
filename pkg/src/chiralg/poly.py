"""Exact sparse multivariate polynomials over the rationals.

A polynomial in m variables x^1..x^m is a map from exponent vectors
(length-m tuples of non-negative ints) to nonzero Fractions.  All
arithmetic is exact; identity checks are literal equality of the term
maps.  The zero polynomial has an empty term map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Exponent = tuple[int, ...]

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_scalar(text: str | int) -> Fraction:
    """Parse an exact rational from an int or a 'p/q' / 'p' string."""
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"not an exact rational: {text!r}")


def format_scalar(x: Fraction) -> str:
    """Serialize a rational as 'p/q' ('p' when q == 1)."""
    return str(x)


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients.

    Instances hash by their (nvars, sorted term) content so they can key
    memoization caches.  Do not mutate `terms` after construction.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                if coeff:
                    clean[tuple(exp)] = Fraction(coeff)
        self.terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars)

    @staticmethod
    def const(nvars: int, value: int | Fraction) -> "Polynomial":
        coeff = Fraction(value)
        if coeff == 0:
            return Polynomial(nvars)
        return Polynomial(nvars, {(0,) * nvars: coeff})

    @staticmethod
    def variable(nvars: int, i: int) -> "Polynomial":
        """The polynomial x^i, with 1 <= i <= nvars."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} out of range 1..{nvars}")
        exp = [0] * nvars
        exp[i - 1] = 1
        return Polynomial(nvars, {tuple(exp): ONE})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(exp) for exp in self.terms}
        return len(degrees) <= 1

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), ZERO)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        assert self.nvars == other.nvars
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            value = terms.get(exp, ZERO) + coeff
            if value:
                terms[exp] = value
            else:
                terms.pop(exp, None)
        return Polynomial(self.nvars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, factor: Fraction | int) -> "Polynomial":
        factor = Fraction(factor)
        if factor == 0:
            return Polynomial(self.nvars)
        return Polynomial(self.nvars, {exp: factor * c for exp, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        assert self.nvars == other.nvars
        terms: dict[Exponent, Fraction] = {}
        for exp1, c1 in self.terms.items():
            for exp2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(exp1, exp2))
                value = terms.get(exp, ZERO) + c1 * c2
                if value:
                    terms[exp] = value
                else:
                    terms.pop(exp, None)
        return Polynomial(self.nvars, terms)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(sorted(self.terms.items()))))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self.format()})"

    def format(self, names: Iterable[str] | None = None) -> str:
        """Human-readable form, deterministic term order."""
        if not self.terms:
            return "0"
        names = list(names) if names else [f"x{i+1}" for i in range(self.nvars)]
        parts = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), e)):
            coeff = self.terms[exp]
            factors = [
                names[i] if p == 1 else f"{names[i]}^{p}"
                for i, p in enumerate(exp)
                if p
            ]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(coeff) + "*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        """Split into {degree: homogeneous part}."""
        parts: dict[int, dict[Exponent, Fraction]] = {}
        for exp, coeff in self.terms.items():
            parts.setdefault(sum(exp), {})[exp] = coeff
        return {d: Polynomial(self.nvars, t) for d, t in sorted(parts.items())}


def poly_partial(f: Polynomial, i: int) -> Polynomial:
    """Exact partial derivative of f with respect to x^i (1-based)."""
    if not 1 <= i <= f.nvars:
        raise IndexError(f"variable index {i} out of range 1..{f.nvars}")
    terms: dict[Exponent, Fraction] = {}
    k = i - 1
    for exp, coeff in f.terms.items():
        p = exp[k]
        if p == 0:
            continue
        new_exp = exp[:k] + (p - 1,) + exp[k + 1 :]
        terms[new_exp] = terms.get(new_exp, ZERO) + coeff * p
    return Polynomial(f.nvars, {e: c for e, c in terms.items() if c})


def poly_compose_affine(
    f: Polynomial,
    matrix: list[list[Fraction]],
    shift: list[Fraction],
) -> Polynomial:
    """Exact substitution f(Tx + v) for an invertible m x m matrix T.

    Singular T is rejected by the caller (atlas construction); here only the
    shapes are checked.
    """
    m = f.nvars
    if len(matrix) != m or any(len(row) != m for row in matrix) or len(shift) != m:
        raise ValueError("affine data shape does not match variable count")
    images = [
        Polynomial(
            m,
            {
                **{
                    tuple(1 if j == c else 0 for j in range(m)): Fraction(matrix[r][c])
                    for c in range(m)
                    if matrix[r][c]
                },
            },
        )
        + Polynomial.const(m, shift[r])
        for r in range(m)
    ]
    result = Polynomial.zero(m)
    for exp, coeff in f.terms.items():
        term = Polynomial.const(m, coeff)
        for r, power in enumerate(exp):
            for _ in range(power):
                term = term * images[r]
        result = result + term
    return result
