"""First-order differential and algebraic operators on tensor fields.

Conventions (all exact, all row-major):

* grad of a vector is the matrix (d_j v_i): row i holds the gradient of v_i.
* div and curl of a matrix act on rows; the starred variants div_col and
  curl_col act on columns.
* mspn maps a vector w to the skew matrix with mspn(w) n = w x n.
* dev A = A - tr(A)/3 I, sym A = (A + A^T)/2, skw A = (A - A^T)/2.
* the composite maps of the complex are dev_grad, sym_curl, div_div.
"""

from __future__ import annotations

from ..polycore.polynomial import Poly
from ..rational import Q
from .fields import TensorField


def _curl3(c0: Poly, c1: Poly, c2: Poly) -> list[Poly]:
    return [
        c2.diff(1) - c1.diff(2),
        c0.diff(2) - c2.diff(0),
        c1.diff(0) - c0.diff(1),
    ]


def grad(f: TensorField) -> TensorField:
    if f.shape == "scalar":
        p = f.p
        return TensorField.vector([p.diff(i) for i in range(3)])
    if f.shape == "vector":
        return TensorField.matrix([[f.comp(i).diff(j) for j in range(3)] for i in range(3)])
    raise ValueError("grad takes a scalar or vector field")


def div(f: TensorField) -> TensorField:
    if f.shape == "vector":
        s = f.comp(0).diff(0) + f.comp(1).diff(1) + f.comp(2).diff(2)
        return TensorField.scalar(s)
    if f.shape == "matrix":
        comps = []
        for i in range(3):
            comps.append(f.entry(i, 0).diff(0) + f.entry(i, 1).diff(1) + f.entry(i, 2).diff(2))
        return TensorField.vector(comps)
    raise ValueError("div takes a vector or matrix field")


def curl(f: TensorField) -> TensorField:
    if f.shape == "vector":
        return TensorField.vector(_curl3(f.comp(0), f.comp(1), f.comp(2)))
    if f.shape == "matrix":
        return TensorField.matrix([_curl3(*f.rows()[i]) for i in range(3)])
    raise ValueError("curl takes a vector or matrix field")


def div_col(f: TensorField) -> TensorField:
    """Column-wise divergence of a matrix field."""
    if f.shape != "matrix":
        raise ValueError("div_col takes a matrix field")
    comps = []
    for j in range(3):
        comps.append(f.entry(0, j).diff(0) + f.entry(1, j).diff(1) + f.entry(2, j).diff(2))
    return TensorField.vector(comps)


def curl_col(f: TensorField) -> TensorField:
    """Column-wise curl of a matrix field."""
    if f.shape != "matrix":
        raise ValueError("curl_col takes a matrix field")
    cols = [[f.entry(i, j) for i in range(3)] for j in range(3)]
    curled = [_curl3(*c) for c in cols]
    return TensorField.matrix([[curled[j][i] for j in range(3)] for i in range(3)])


def mspn(v: TensorField) -> TensorField:
    if v.shape != "vector":
        raise ValueError("mspn takes a vector field")
    z = Poly.zero(v.entries[0].nvars)
    v1, v2, v3 = v.entries
    return TensorField.matrix([[z, -v3, v2], [v3, z, -v1], [-v2, v1, z]], symmetry="skew")


def sym(a: TensorField) -> TensorField:
    if a.shape != "matrix":
        raise ValueError("sym takes a matrix field")
    half = Q(1, 2)
    rows = [[(a.entry(i, j) + a.entry(j, i)) * half for j in range(3)] for i in range(3)]
    return TensorField.matrix(rows, symmetry="symmetric", check=False)


def skw(a: TensorField) -> TensorField:
    if a.shape != "matrix":
        raise ValueError("skw takes a matrix field")
    half = Q(1, 2)
    rows = [[(a.entry(i, j) - a.entry(j, i)) * half for j in range(3)] for i in range(3)]
    return TensorField.matrix(rows, symmetry="skew", check=False)


def trace(a: TensorField) -> TensorField:
    if a.shape != "matrix":
        raise ValueError("trace takes a matrix field")
    return TensorField.scalar(a.entry(0, 0) + a.entry(1, 1) + a.entry(2, 2))


def dev(a: TensorField) -> TensorField:
    if a.shape != "matrix":
        raise ValueError("dev takes a matrix field")
    t = (a.entry(0, 0) + a.entry(1, 1) + a.entry(2, 2)) / 3
    rows = [[a.entry(i, j) - t if i == j else a.entry(i, j) for j in range(3)] for i in range(3)]
    return TensorField.matrix(rows, symmetry="traceless", check=False)


def dev_grad(v: TensorField) -> TensorField:
    """The head map of the complex: grad v minus its trace part."""
    if v.shape != "vector":
        raise ValueError("dev_grad takes a vector field")
    return dev(grad(v))


def sym_curl(u: TensorField) -> TensorField:
    """The middle map: symmetric part of the row-wise curl."""
    if u.shape != "matrix":
        raise ValueError("sym_curl takes a matrix field")
    return sym(curl(u))


def div_div(sigma: TensorField) -> TensorField:
    """The tail map: row-wise divergence followed by divergence."""
    if sigma.shape != "matrix":
        raise ValueError("div_div takes a matrix field")
    return div(div(sigma))


def hessian(q: TensorField) -> TensorField:
    """Matrix of second partials of a scalar field."""
    if q.shape != "scalar":
        raise ValueError("hessian takes a scalar field")
    p = q.p
    return TensorField.matrix([[p.diff(i).diff(j) for j in range(3)] for i in range(3)])


def directional(f: TensorField, n) -> TensorField:
    """Directional derivative (n . grad) applied entrywise; n rational."""
    n = [Q(c) for c in n]

    def d(e: Poly) -> Poly:
        return e.diff(0) * n[0] + e.diff(1) * n[1] + e.diff(2) * n[2]

    return f.map(d)


def cross_vector(v: TensorField, n) -> TensorField:
    """v x n for a vector field and a constant rational vector."""
    if v.shape != "vector":
        raise ValueError("cross_vector takes a vector field")
    n = [Q(c) for c in n]
    a, b, c = v.entries
    return TensorField.vector(
        [b * n[2] - c * n[1], c * n[0] - a * n[2], a * n[1] - b * n[0]]
    )


def matrix_cross_vector(u: TensorField, n) -> TensorField:
    """Row-wise cross product u x n of a matrix field with a vector."""
    if u.shape != "matrix":
        raise ValueError("matrix_cross_vector takes a matrix field")
    rows = []
    for i in range(3):
        rows.append(cross_vector(TensorField.vector(u.rows()[i]), n).entries)
    return TensorField.matrix(rows)


FIRST_ORDER = {
    "grad": grad,
    "div": div,
    "curl": curl,
    "curl_col": curl_col,
    "div_col": div_col,
}

ALGEBRAIC = {
    "dev": dev,
    "sym": sym,
    "skw": skw,
    "trace": trace,
    "mspn": mspn,
}


def first_order_ops(field: TensorField, which: str) -> TensorField:
    """Dispatch table entry point for grad/div/curl/curl_col/div_col."""
    try:
        return FIRST_ORDER[which](field)
    except KeyError:
        raise ValueError(f"unknown first-order operator {which!r}") from None


def algebraic_ops(field: TensorField, which: str) -> TensorField:
    """Dispatch table entry point for dev/sym/skw/trace/mspn."""
    try:
        return ALGEBRAIC[which](field)
    except KeyError:
        raise ValueError(f"unknown algebraic operator {which!r}") from None
