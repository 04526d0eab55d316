"""chiralg: exact chiral (equivariant) Lie algebroid cohomology.

Free-field vertex superalgebras (bc-beta-gamma systems over polynomial
coefficients), the semi-infinite Weil complex, chiral Lie algebroid
complexes with their Cartan calculus, chiral W*-module structures, and
blockwise exact cohomology, all over the rationals.
"""

from .algebroid import AlgebroidData, ChiralAlgebroid
from .lie import LieData
from .modes import Mode, Model, State, apply_mode, grade_of, mode_supercommutator
from .ope import Operator, nth_product
from .poly import Polynomial, poly_compose_affine, poly_partial
from .weil import WeilComplex

__all__ = [
    "AlgebroidData",
    "ChiralAlgebroid",
    "LieData",
    "Mode",
    "Model",
    "State",
    "Operator",
    "Polynomial",
    "WeilComplex",
    "apply_mode",
    "grade_of",
    "mode_supercommutator",
    "nth_product",
    "poly_compose_affine",
    "poly_partial",
]
