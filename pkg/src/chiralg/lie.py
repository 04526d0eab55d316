"""Finite-dimensional Lie algebra data in a fixed basis.

Structure constants Gamma^k_{ij} with [xi_i, xi_j] = sum_k Gamma^k_{ij} xi_k;
antisymmetry and the Jacobi identity are enforced at construction.
"""

from __future__ import annotations

from fractions import Fraction


class LieDataError(ValueError):
    pass


class LieData:
    """dim and exact structure constants, validated on construction."""

    __slots__ = ("dim", "gamma")

    def __init__(self, dim: int, gamma: dict[tuple[int, int, int], Fraction]):
        """gamma maps (i, j, k) -> Gamma^k_{ij}, 1-based indices, sparse."""
        if dim < 1:
            raise LieDataError("dimension must be positive")
        self.dim = dim
        self.gamma = {
            key: Fraction(val)
            for key, val in gamma.items()
            if val
        }
        for (i, j, k) in self.gamma:
            if not all(1 <= t <= dim for t in (i, j, k)):
                raise LieDataError(f"structure constant index {(i, j, k)} out of range")
        self._check_antisymmetry()
        self._check_jacobi()

    @staticmethod
    def abelian(dim: int) -> "LieData":
        return LieData(dim, {})

    @staticmethod
    def nonabelian_2d() -> "LieData":
        """The 2-dim algebra with [xi_1, xi_2] = xi_2."""
        return LieData(2, {(1, 2, 2): Fraction(1), (2, 1, 2): Fraction(-1)})

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self.gamma.get((i, j, k), Fraction(0))

    def is_abelian(self) -> bool:
        return not self.gamma

    def bracket(self, v: list[Fraction], w: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for (i, j, k), const in self.gamma.items():
            out[k - 1] += const * v[i - 1] * w[j - 1]
        return out

    def coadjoint(self, i: int, j: int) -> list[Fraction]:
        """ad*(xi_i) . xi*_j expressed in the dual basis: -Gamma^j_{il} xi*_l."""
        return [-self.c(i, l, j) for l in range(1, self.dim + 1)]

    def _check_antisymmetry(self) -> None:
        for i in range(1, self.dim + 1):
            for j in range(1, self.dim + 1):
                for k in range(1, self.dim + 1):
                    if self.c(i, j, k) != -self.c(j, i, k):
                        raise LieDataError(
                            f"antisymmetry fails at Gamma^{k}_{{{i}{j}}}"
                        )

    def _check_jacobi(self) -> None:
        rng = range(1, self.dim + 1)
        for i in rng:
            for j in rng:
                for k in rng:
                    for s in rng:
                        total = Fraction(0)
                        for l in rng:
                            total += (
                                self.c(i, j, l) * self.c(l, k, s)
                                + self.c(j, k, l) * self.c(l, i, s)
                                + self.c(k, i, l) * self.c(l, j, s)
                            )
                        if total:
                            raise LieDataError(
                                f"Jacobi identity fails at (i,j,k,s)=({i},{j},{k},{s})"
                            )
