from . import geometry, linalg, polynomial, spaces
from .geometry import (
    BoxCell,
    BoxEdge,
    BoxFace,
    Segment,
    TetCell,
    TriFace,
    integrate_monomial_box,
    integrate_monomial_simplex,
    integrate_on_entity,
)
from .linalg import det, exact_rank, nullspace, solve, solve_columns
from .polynomial import Poly
from .spaces import PolySpace, span
