"""Surface differential operators relative to a face frame.

All operators take the frame's unnormalized rational normal n.  Operators
that are homogeneous of positive degree in the unit normal (rot_f, lambda_f,
curl_f rows) therefore return |n|-scaled versions of their unit-normal
definitions; every use in this package is a zero-test, a rank-test, or pairs
the scaling against the face measure, so the scale never matters.
"""

from __future__ import annotations

from ..polycore.polynomial import Poly
from .fields import TensorField
from .frames import FaceFrame
from .operators import curl, directional, grad, sym


def apply_const_matrix(M, v: TensorField) -> TensorField:
    """M v for a rational 3x3 matrix and a vector field."""
    if v.shape != "vector":
        raise ValueError("needs a vector field")
    nv = v.entries[0].nvars
    comps = []
    for i in range(3):
        s = Poly.zero(nv)
        for j in range(3):
            if M[i][j]:
                s = s + v.comp(j) * M[i][j]
        comps.append(s)
    return TensorField.vector(comps)


def sandwich_const(M, a: TensorField) -> TensorField:
    """M a M for a rational 3x3 matrix and a matrix field."""
    if a.shape != "matrix":
        raise ValueError("needs a matrix field")
    nv = a.entries[0].nvars

    def matmat(L, R_is_field):
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                s = Poly.zero(nv)
                for k in range(3):
                    if R_is_field:
                        if L[i][k]:
                            s = s + a.entry(k, j) * L[i][k]
                    else:
                        c = M[k][j]
                        if c:
                            s = s + L.entry(i, k) * c
                row.append(s)
            rows.append(row)
        return rows

    MA = TensorField.matrix(matmat(M, True))
    return TensorField.matrix(matmat(MA, False))


def pi_f(v: TensorField, frame: FaceFrame) -> TensorField:
    """Tangential part (n x v) x n / |n|^2 = qf v of a vector field."""
    return apply_const_matrix(frame.qf, v)


def grad_f(q: TensorField, frame: FaceFrame) -> TensorField:
    """Surface gradient qf grad q of a scalar field."""
    if q.shape != "scalar":
        raise ValueError("grad_f takes a scalar field")
    return apply_const_matrix(frame.qf, grad(q))


def grad_f_rows(w: TensorField, frame: FaceFrame) -> TensorField:
    """Row-wise surface gradient of a vector field: (grad w) qf."""
    if w.shape != "vector":
        raise ValueError("grad_f_rows takes a vector field")
    g = grad(w)
    rows = []
    nv = w.entries[0].nvars
    for i in range(3):
        row = []
        for j in range(3):
            s = Poly.zero(nv)
            for k in range(3):
                c = frame.qf[k][j]
                if c:
                    s = s + g.entry(i, k) * c
            row.append(s)
        rows.append(row)
    return TensorField.matrix(rows)


def eps_f(v: TensorField, frame: FaceFrame) -> TensorField:
    """Surface symmetric gradient sym(grad_f(pi_f v))."""
    return sym(grad_f_rows(pi_f(v, frame), frame))


def rot_f(v: TensorField, frame: FaceFrame) -> TensorField:
    """(n x grad) . v = n . curl v (scaled by |n|)."""
    if v.shape != "vector":
        raise ValueError("rot_f takes a vector field")
    c = curl(v)
    n = frame.normal
    return TensorField.scalar(c.comp(0) * n[0] + c.comp(1) * n[1] + c.comp(2) * n[2])


def curl_f_rows(q: TensorField, frame: FaceFrame) -> TensorField:
    """Row-wise surface curl of a vector field: row i is n x grad(q_i).

    Only tangential derivatives of q_i enter n x grad, so the value on the
    face is independent of how q is extended off it.
    """
    if q.shape != "vector":
        raise ValueError("curl_f_rows takes a vector field")
    n = frame.normal
    rows = []
    for i in range(3):
        g = [q.comp(i).diff(k) for k in range(3)]
        rows.append(
            [
                n[1] * g[2] - n[2] * g[1],
                n[2] * g[0] - n[0] * g[2],
                n[0] * g[1] - n[1] * g[0],
            ]
        )
    return TensorField.matrix(rows)


def qf_sym(a: TensorField, frame: FaceFrame) -> TensorField:
    """sym(qf a)."""
    if a.shape != "matrix":
        raise ValueError("qf_sym takes a matrix field")
    nv = a.entries[0].nvars
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            s = Poly.zero(nv)
            for k in range(3):
                c = frame.qf[i][k]
                if c:
                    s = s + a.entry(k, j) * c
            row.append(s)
        rows.append(row)
    return sym(TensorField.matrix(rows))


def lambda_f(sigma: TensorField, frame: FaceFrame) -> TensorField:
    """qf (2 eps(sigma n) - d sigma / dn) qf, with n unnormalized.

    For symmetric sigma the result annihilates the normal on both sides;
    the unit-normal version is this field divided by |n|.
    """
    if sigma.shape != "matrix":
        raise ValueError("lambda_f takes a matrix field")
    n = frame.normal
    sn = sigma.dot_vector(n)
    eps_sn = sym(grad(sn))
    dn_sigma = directional(sigma, n)
    inner = TensorField.matrix(
        [[eps_sn.entry(i, j) * 2 - dn_sigma.entry(i, j) for j in range(3)] for i in range(3)]
    )
    return sandwich_const(frame.qf, inner)


def div_f(w: TensorField, frame: FaceFrame) -> TensorField:
    """Surface divergence tr(qf grad w) of a vector field.

    On a flat face this kills the normal component of w and agrees with the
    intrinsic divergence of the tangential part.
    """
    if w.shape != "vector":
        raise ValueError("div_f takes a vector field")
    g = grad(w)
    nv = w.entries[0].nvars
    s = Poly.zero(nv)
    for i in range(3):
        for j in range(3):
            c = frame.qf[i][j]
            if c:
                s = s + g.entry(j, i) * c
    return TensorField.scalar(s)


SURFACE_OPS = {
    "Pi_f": pi_f,
    "grad_f": grad_f,
    "eps_f": eps_f,
    "rot_f": rot_f,
    "curl_f_row": curl_f_rows,
    "Lambda_f": lambda_f,
    "Q_f_sym": qf_sym,
    "div_f": div_f,
}


def surface_ops(field: TensorField, frame: FaceFrame, which: str) -> TensorField:
    """Dispatch entry point mirroring the named surface operators."""
    try:
        op = SURFACE_OPS[which]
    except KeyError:
        raise ValueError(f"unknown surface operator {which!r}") from None
    return op(field, frame)
