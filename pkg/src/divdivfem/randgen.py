"""Fixed-seed random rational data for property tests and identity suites.

Coefficients are kept small (single-digit numerators, tiny denominators) so
exact arithmetic downstream stays cheap; all draws are reproducible from the
seed.
"""

from __future__ import annotations

import random

from .polycore.geometry import TetCell
from .polycore.polynomial import Poly, monomials_total_degree
from .rational import Q
from .tensorcalc.fields import TensorField


class RatRandom:
    def __init__(self, seed: int = 20240801):
        self.rng = random.Random(seed)

    def rational(self, lo: int = -9, hi: int = 9, max_den: int = 3):
        return Q(self.rng.randint(lo, hi), self.rng.randint(1, max_den))

    def nonzero_rational(self, lo: int = -9, hi: int = 9, max_den: int = 3):
        while True:
            q = self.rational(lo, hi, max_den)
            if q != 0:
                return q

    def poly(self, degree: int, nvars: int = 3, density: float = 0.6) -> Poly:
        terms = {}
        for a in monomials_total_degree(degree, nvars):
            if self.rng.random() < density:
                c = self.rational()
                if c != 0:
                    terms[a] = c
        return Poly(nvars, terms)

    def scalar_field(self, degree: int) -> TensorField:
        return TensorField.scalar(self.poly(degree))

    def vector_field(self, degree: int) -> TensorField:
        return TensorField.vector([self.poly(degree) for _ in range(3)])

    def matrix_field(self, degree: int) -> TensorField:
        return TensorField.matrix([[self.poly(degree) for _ in range(3)] for _ in range(3)])

    def symmetric_field(self, degree: int) -> TensorField:
        p = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                p[i][j] = self.poly(degree)
                p[j][i] = p[i][j]
        return TensorField.matrix(p, symmetry="symmetric")

    def traceless_field(self, degree: int) -> TensorField:
        rows = [[self.poly(degree) for _ in range(3)] for _ in range(3)]
        rows[2][2] = -(rows[0][0] + rows[1][1])
        return TensorField.matrix(rows, symmetry="traceless")

    def vector(self, nonzero: bool = True):
        while True:
            v = tuple(self.rational(-5, 5, 2) for _ in range(3))
            if not nonzero or any(c != 0 for c in v):
                return v

    def tet(self, spread: int = 3) -> TetCell:
        while True:
            pts = [tuple(self.rational(-spread, spread, 2) for _ in range(3)) for _ in range(4)]
            try:
                return TetCell(pts)
            except ValueError:
                continue

    def cuboid_corners(self, spread: int = 3):
        lo = tuple(self.rational(-spread, spread, 2) for _ in range(3))
        lengths = tuple(self.nonzero_rational(1, 2 * spread, 2) for _ in range(3))
        hi = tuple(l + d for l, d in zip(lo, lengths))
        return lo, hi

    def coeffs(self, n: int):
        return [self.rational() for _ in range(n)]
