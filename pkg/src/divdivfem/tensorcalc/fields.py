"""Scalar-, vector-, and matrix-valued polynomial fields.

A TensorField holds exact rational polynomial entries (row major for
matrices) plus an optional symmetry tag.  Tags are verified claims, not
hints: constructing a field with a tag asserts the corresponding exact
polynomial identities, and detect_symmetry recomputes the strongest tag.
"""

from __future__ import annotations

from typing import Sequence

from ..polycore.polynomial import Poly
from ..rational import Q

SHAPES = ("scalar", "vector", "matrix")


class TensorField:
    __slots__ = ("shape", "entries", "symmetry")

    def __init__(self, shape: str, entries: Sequence[Poly], symmetry: str | None = None, check: bool = True):
        if shape not in SHAPES:
            raise ValueError(f"unknown shape {shape!r}")
        need = {"scalar": 1, "vector": 3, "matrix": 9}[shape]
        entries = list(entries)
        if len(entries) != need:
            raise ValueError(f"{shape} field needs {need} entries, got {len(entries)}")
        self.shape = shape
        self.entries = entries
        self.symmetry = symmetry
        if check and symmetry is not None:
            ok = {
                "general": True,
                "symmetric": self._is_symmetric(),
                "traceless": self._is_traceless(),
                "skew": self._is_skew(),
            }.get(symmetry)
            if ok is None:
                raise ValueError(f"unknown symmetry tag {symmetry!r}")
            if not ok:
                raise ValueError(f"field is not {symmetry}")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def scalar(p: Poly) -> "TensorField":
        return TensorField("scalar", [p])

    @staticmethod
    def vector(ps: Sequence[Poly]) -> "TensorField":
        return TensorField("vector", list(ps))

    @staticmethod
    def matrix(rows: Sequence[Sequence[Poly]], symmetry: str | None = None, check: bool = True) -> "TensorField":
        entries = [rows[i][j] for i in range(3) for j in range(3)]
        return TensorField("matrix", entries, symmetry, check)

    @staticmethod
    def zero(shape: str, nvars: int = 3) -> "TensorField":
        need = {"scalar": 1, "vector": 3, "matrix": 9}[shape]
        return TensorField(shape, [Poly.zero(nvars) for _ in range(need)])

    # -- access ----------------------------------------------------------

    @property
    def p(self) -> Poly:
        if self.shape != "scalar":
            raise ValueError("not a scalar field")
        return self.entries[0]

    def comp(self, i: int) -> Poly:
        if self.shape != "vector":
            raise ValueError("not a vector field")
        return self.entries[i]

    def entry(self, i: int, j: int) -> Poly:
        if self.shape != "matrix":
            raise ValueError("not a matrix field")
        return self.entries[3 * i + j]

    def rows(self):
        return [self.entries[3 * i : 3 * i + 3] for i in range(3)]

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def _is_symmetric(self) -> bool:
        return self.shape == "matrix" and all(
            (self.entry(i, j) - self.entry(j, i)).is_zero() for i in range(3) for j in range(i + 1, 3)
        )

    def _is_skew(self) -> bool:
        return self.shape == "matrix" and all(
            (self.entry(i, j) + self.entry(j, i)).is_zero() for i in range(3) for j in range(i, 3)
        )

    def _is_traceless(self) -> bool:
        if self.shape != "matrix":
            return False
        return (self.entry(0, 0) + self.entry(1, 1) + self.entry(2, 2)).is_zero()

    def detect_symmetry(self) -> str:
        """Strongest applicable tag: symmetric / skew / traceless / general."""
        if self.shape != "matrix":
            return "general"
        if self._is_skew():
            return "skew"
        if self._is_symmetric():
            return "symmetric"
        if self._is_traceless():
            return "traceless"
        return "general"

    # -- algebra -----------------------------------------------------------

    def _binary(self, other, fn):
        if not isinstance(other, TensorField) or other.shape != self.shape:
            raise ValueError("shape mismatch")
        return TensorField(self.shape, [fn(a, b) for a, b in zip(self.entries, other.entries)])

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return TensorField(self.shape, [-e for e in self.entries])

    def __mul__(self, scalar):
        return TensorField(self.shape, [e * Q(scalar) for e in self.entries])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return TensorField(self.shape, [e / Q(scalar) for e in self.entries])

    def __eq__(self, other):
        return (
            isinstance(other, TensorField)
            and other.shape == self.shape
            and all((a - b).is_zero() for a, b in zip(self.entries, other.entries))
        )

    def __hash__(self):
        return hash((self.shape, tuple(self.entries)))

    def transpose(self) -> "TensorField":
        if self.shape != "matrix":
            raise ValueError("transpose needs a matrix field")
        return TensorField.matrix([[self.entry(j, i) for j in range(3)] for i in range(3)])

    def map(self, fn) -> "TensorField":
        return TensorField(self.shape, [fn(e) for e in self.entries])

    def subs(self, images) -> "TensorField":
        return self.map(lambda e: e.subs(images))

    def translate(self, shift) -> "TensorField":
        return self.map(lambda e: e.translate(shift))

    def eval(self, point):
        vals = [e.eval(point) for e in self.entries]
        if self.shape == "scalar":
            return vals[0]
        if self.shape == "vector":
            return tuple(vals)
        return [vals[3 * i : 3 * i + 3] for i in range(3)]

    def dot_vector(self, v) -> "TensorField":
        """Matrix-vector product with a constant rational vector."""
        if self.shape != "matrix":
            raise ValueError("needs a matrix field")
        v = [Q(c) for c in v]
        comps = []
        for i in range(3):
            s = Poly.zero(self.entries[0].nvars)
            for j in range(3):
                s = s + self.entry(i, j) * v[j]
            comps.append(s)
        return TensorField.vector(comps)

    def vec_dot(self, v) -> Poly:
        """Dot product of a vector field with a constant rational vector."""
        if self.shape != "vector":
            raise ValueError("needs a vector field")
        s = Poly.zero(self.entries[0].nvars)
        for j in range(3):
            s = s + self.comp(j) * Q(v[j])
        return s

    def frobenius(self, other: "TensorField") -> Poly:
        """Sum of entrywise products (works for equal shapes)."""
        if other.shape != self.shape:
            raise ValueError("shape mismatch")
        s = Poly.zero(self.entries[0].nvars)
        for a, b in zip(self.entries, other.entries):
            s = s + a * b
        return s

    def max_degree(self) -> int:
        return max((e.degree() for e in self.entries), default=-1)

    def __repr__(self):
        return f"TensorField({self.shape}, {self.entries!r})"


def const_matrix(rows) -> TensorField:
    return TensorField.matrix([[Poly.const(rows[i][j], 3) for j in range(3)] for i in range(3)])


def const_vector(v) -> TensorField:
    return TensorField.vector([Poly.const(c, 3) for c in v])
