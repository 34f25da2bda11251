"""Exact verification of the two integration-by-parts identities on a
tetrahedron that motivate the element continuity conditions.

Both identities pair (div div sigma, q)_K against cell, face, and edge terms.
Each boundary term is assembled so that all unit-vector normalizations either
cancel against the surface measure or appear squared; every term below is
therefore an exact rational number.

With outward unit normals the two identities read

  (div div sigma, q)_K
    = (sigma, hess q)_K - sum_f (sigma n, grad q)_f + sum_f (n . div sigma, q)_f

  (div div sigma, q)_K
    = (sigma, hess q)_K - sum_f sum_e (m_e . sigma n, q)_e
      + sum_f [ (2 div_f(sigma n) + d(n.sigma n)/dn, q)_f - (n.sigma n, dq/dn)_f ]

with m_e the outward in-plane unit normal of edge e within face f.  The sign
of the face bracket in the second identity follows from eliminating the
tangential gradient by integration by parts on each face; it is fixed here by
that derivation (and pinned by the test suite on hand-computed examples).
"""

from __future__ import annotations

from ..polycore.geometry import Segment, TetCell, TriFace, _cross, _dot, _sub
from .fields import TensorField
from .frames import FaceFrame
from .operators import div, div_div, grad, hessian
from .surface import div_f


def outward_faces(K: TetCell) -> list[tuple[TriFace, tuple]]:
    """The four faces with outward (unnormalized) normals."""
    v = K.vertices
    out = []
    for opp in range(4):
        pts = [v[i] for i in range(4) if i != opp]
        tri = TriFace(*pts)
        n = tri.raw_normal
        if _dot(n, _sub(v[opp], pts[0])) > 0:
            n = tuple(-c for c in n)
        out.append((tri, n))
    return out


def _face_edges_outward(tri: TriFace, n):
    """Edges of a triangle with outward in-plane normals m = +-(t x n).

    |t x n| = |t| |n| because t is orthogonal to n; this product form is what
    makes the edge terms rational after measure cancellation.
    """
    pts = tri.points
    edges = []
    for a in range(3):
        b = (a + 1) % 3
        c = (a + 2) % 3
        seg = Segment(pts[a], pts[b])
        m = _cross(seg.tangent, n)
        if _dot(m, _sub(pts[c], pts[a])) > 0:
            m = tuple(-x for x in m)
        edges.append((seg, m))
    return edges


def verify_green_identities(sigma: TensorField, q: TensorField, K: TetCell):
    """Residuals (left minus right) of the two identities; exact rationals.

    sigma must be a symmetric matrix field and q a scalar field.  A zero
    residual certifies the identity for these inputs; nonzero would exhibit
    an exact counterexample.
    """
    if sigma.shape != "matrix" or not sigma._is_symmetric():
        raise ValueError("sigma must be a symmetric matrix field")
    if q.shape != "scalar":
        raise ValueError("q must be a scalar field")
    qp = q.p
    lhs = K.integrate(div_div(sigma).p * qp)
    hess_term = K.integrate(sigma.frobenius(hessian(q)))
    div_sigma = div(sigma)
    grad_q = grad(q)

    faces = outward_faces(K)

    # -- identity with (sigma n, grad q)_f and (n . div sigma, q)_f --------
    rhs1 = hess_term
    for tri, n in faces:
        sn = sigma.dot_vector(n)
        t1 = tri.integrate_ref(sn.frobenius(grad_q))
        t2 = tri.integrate_ref(div_sigma.vec_dot(n) * qp)
        rhs1 = rhs1 - t1 + t2
    res_divdiv = lhs - rhs1

    # -- identity with edge terms and the face bracket ---------------------
    rhs2 = hess_term
    for tri, n in faces:
        g = _dot(n, n)
        frame = FaceFrame(tri, n, tri.u, tri.v)
        sn = sigma.dot_vector(n)
        nsn = sn.vec_dot(n)  # n . sigma n, scaled by |n|^2
        dn_q = grad_q.vec_dot(n)  # dq/dn scaled by |n|
        dn_nsn = grad(TensorField.scalar(nsn)).vec_dot(n)
        bracket = (
            tri.integrate_ref((div_f(sn, frame).p * 2 + dn_nsn / g) * qp)
            - tri.integrate_ref(nsn * dn_q) / g
        )
        rhs2 = rhs2 + bracket
        for seg, m in _face_edges_outward(tri, n):
            edge_term = seg.integrate_ref(sn.vec_dot(m) * qp) / g
            rhs2 = rhs2 - edge_term
    res_bracket = lhs - rhs2

    return res_bracket, res_divdiv
