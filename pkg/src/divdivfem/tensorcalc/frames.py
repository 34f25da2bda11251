"""Face and edge frames with exact rational direction vectors.

Direction vectors are stored unnormalized together with their squared norms.
Every place a unit vector would appear, the package uses the raw vector and
tracks the normalization symbolically; all zero-tests and rank-tests are
invariant under the positive scalings this introduces.
"""

from __future__ import annotations

from ..polycore.geometry import BoxFace, Segment, TriFace, _cross, _dot, vec
from ..rational import Q


class FaceFrame:
    """A plane with a fixed normal and two tangents (all rational, unnormalized).

    The projector qf = I - n n^T / |n|^2 is exactly rational.
    """

    def __init__(self, face, normal, t_plus, t_minus):
        self.face = face
        self.normal = vec(normal)
        self.norm2 = _dot(self.normal, self.normal)
        if self.norm2 == 0:
            raise ValueError("zero normal")
        self.t_plus = vec(t_plus)
        self.t_minus = vec(t_minus)
        if _dot(self.normal, self.t_plus) != 0 or _dot(self.normal, self.t_minus) != 0:
            raise ValueError("tangents must be orthogonal to the normal")
        n = self.normal
        self.qf = [
            [Q(int(i == j)) - n[i] * n[j] / self.norm2 for j in range(3)] for i in range(3)
        ]

    @staticmethod
    def for_box_face(face: BoxFace, sign: int = 1) -> "FaceFrame":
        """Canonical frame of an axis-aligned face: +axis normal, tangents by axis order."""
        normal = tuple(Q(sign) if i == face.axis else Q(0) for i in range(3))
        i, j = face.tangent_axes
        t1 = tuple(Q(int(k == i)) for k in range(3))
        t2 = tuple(Q(int(k == j)) for k in range(3))
        return FaceFrame(face, normal, t1, t2)

    @staticmethod
    def for_triangle(face: TriFace, orient_sign: int = 1) -> "FaceFrame":
        """Frame of a triangle; normal = orient_sign * (p1-p0)x(p2-p0)."""
        n = tuple(c * orient_sign for c in face.raw_normal)
        return FaceFrame(face, n, face.u, face.v)

    def __repr__(self):
        return f"FaceFrame(n={self.normal})"


class EdgeFrame:
    """An edge tangent with two normals, mutually orthogonal and rational."""

    def __init__(self, edge, tangent, n_plus, n_minus):
        self.edge = edge
        self.tangent = vec(tangent)
        self.n_plus = vec(n_plus)
        self.n_minus = vec(n_minus)
        for a, b in ((self.tangent, self.n_plus), (self.tangent, self.n_minus), (self.n_plus, self.n_minus)):
            if _dot(a, b) != 0:
                raise ValueError("frame vectors must be mutually orthogonal")
        for v in (self.tangent, self.n_plus, self.n_minus):
            if _dot(v, v) == 0:
                raise ValueError("zero frame vector")

    @staticmethod
    def for_segment(edge: Segment, reference_normal) -> "EdgeFrame":
        """Deterministic frame: t along the segment, n+ a given orthogonal
        direction (e.g. the normal of a fixed incident face), n- = t x n+."""
        t = edge.tangent
        n_plus = vec(reference_normal)
        # remove any tangential component so the triple is orthogonal
        t2 = _dot(t, t)
        proj = _dot(n_plus, t)
        if proj != 0:
            n_plus = tuple(n_plus[i] - proj * t[i] / t2 for i in range(3))
        n_minus = _cross(t, n_plus)
        return EdgeFrame(edge, t, n_plus, n_minus)

    @staticmethod
    def for_box_edge(edge, axis: int) -> "EdgeFrame":
        t = tuple(Q(int(k == axis)) for k in range(3))
        others = [k for k in range(3) if k != axis]
        n1 = tuple(Q(int(k == others[0])) for k in range(3))
        n2 = tuple(Q(int(k == others[1])) for k in range(3))
        return EdgeFrame(edge, t, n1, n2)

    def __repr__(self):
        return f"EdgeFrame(t={self.tangent})"
