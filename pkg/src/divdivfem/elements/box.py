"""Cuboid elements: shape spaces, bubble spaces, and degree-of-freedom sets.

Three element families live on axis-aligned cuboids (k >= 3):

* family "Sigma": symmetric matrix fields with mixed per-variable degrees,
  normal-normal entries of degree (k, k-2, k-2)-type and shears of degree
  (k-1, k-1, k-2)-type;
* family "U": traceless matrix fields, diagonal in Q_{k-1}, off-diagonal
  entries in shifted degree boxes;
* family "V": vectors with component i of degree k in x_i and k-1 in the
  other variables.

The scalar de Rham families "Q" (tensor-degree scalars) and the vector
families "M" and "Vderham" used by the polynomial complex checks are built
here as well.

All bases are centered monomials (powers of x_i - lo_i) in graded
lexicographic order: centering keeps DOF matrices sparse and makes the
construction translation-equivariant.  Entity keys are the exact rational
coordinates of the entity, so two neighboring cells produce identical
functionals on a shared entity.
"""

from __future__ import annotations

from ..polycore.geometry import BoxCell, BoxEdge, BoxFace
from ..polycore.polynomial import Poly, monomials_box_degrees
from ..polycore.spaces import PolySpace
from ..tensorcalc.fields import TensorField
from ..tensorcalc.frames import EdgeFrame, FaceFrame
from .dof import (
    DofFunctional,
    ex_diff,
    ex_entry,
    ex_comp,
    ex_scalar,
    moment_dof,
    point_dof,
    FiniteElementDef,
)


def nxt(i: int) -> int:
    return (i + 1) % 3


def prv(i: int) -> int:
    return (i + 2) % 3


def mod3_1based(n: int) -> int:
    """Wrap an integer into {1, 2, 3} modulo 3."""
    return ((n - 1) % 3) + 1


class CuboidElement:
    """Geometry bundle for one axis-aligned cuboid cell.

    Carries the cell, its eight vertices, twelve edges and six faces (with
    canonical frames), and the three quadratic bubbles b_i that vanish on
    the pair of faces perpendicular to axis i.
    """

    def __init__(self, lo, hi):
        self.cell = BoxCell(lo, hi)
        self.lo = self.cell.lo
        self.hi = self.cell.hi
        self.h = self.cell.lengths
        x = [Poly.variable(i) for i in range(3)]
        self.b = [
            (x[i] - self.lo[i]) * (x[i] - self.hi[i]) / (self.h[i] * self.h[i])
            for i in range(3)
        ]
        self.bK = self.b[0] * self.b[1] * self.b[2]
        self.vertices = [
            (xc, yc, zc)
            for xc in (self.lo[0], self.hi[0])
            for yc in (self.lo[1], self.hi[1])
            for zc in (self.lo[2], self.hi[2])
        ]
        self.edges = []
        for m in range(3):
            p, q = nxt(m), prv(m)
            tp, tq = sorted((p, q))
            for cp in (self.lo[tp], self.hi[tp]):
                for cq in (self.lo[tq], self.hi[tq]):
                    lo_pt = [None] * 3
                    hi_pt = [None] * 3
                    lo_pt[m], hi_pt[m] = self.lo[m], self.hi[m]
                    lo_pt[tp] = hi_pt[tp] = cp
                    lo_pt[tq] = hi_pt[tq] = cq
                    self.edges.append(BoxEdge(m, lo_pt, hi_pt))
        self.faces = []
        for i in range(3):
            for val in (self.lo[i], self.hi[i]):
                lo_pt = list(self.lo)
                hi_pt = list(self.hi)
                lo_pt[i] = hi_pt[i] = val
                self.faces.append(BoxFace(i, val, lo_pt, hi_pt))

    # -- entity queries -------------------------------------------------

    def edges_parallel(self, m: int):
        return [e for e in self.edges if e.axis == m]

    def faces_perp(self, i: int):
        return [f for f in self.faces if f.axis == i]

    def face_frame(self, f: BoxFace) -> FaceFrame:
        return FaceFrame.for_box_face(f)

    def edge_frame(self, e: BoxEdge) -> EdgeFrame:
        return EdgeFrame.for_box_edge(e, e.axis)

    @staticmethod
    def vertex_key(p):
        return tuple(p)

    @staticmethod
    def edge_key(e: BoxEdge):
        return (tuple(e.lo), tuple(e.hi))

    @staticmethod
    def face_key(f: BoxFace):
        return (f.axis, f.value, tuple(f.lo), tuple(f.hi))

    def cell_key(self):
        return (tuple(self.lo), tuple(self.hi))

    # -- centered monomials ----------------------------------------------

    def centered_monomial(self, exps) -> Poly:
        out = Poly.const(1, 3)
        for i, e in enumerate(exps):
            if e:
                out = out * (Poly.variable(i) - self.lo[i]) ** e
        return out

    def edge_weight(self, e: BoxEdge, s: int) -> Poly:
        return (Poly.variable(e.axis) - e.lo[e.axis]) ** s

    def face_weight(self, f: BoxFace, exps: dict) -> Poly:
        out = Poly.const(1, 3)
        for ax, e in sorted(exps.items()):
            if e:
                out = out * (Poly.variable(ax) - f.lo[ax]) ** e
        return out


# ---------------------------------------------------------------------------
# shape spaces


def _component_box_space(K, comp_degrees, label, shape="vector") -> PolySpace:
    basis = []
    for ci, degs in enumerate(comp_degrees):
        for a in monomials_box_degrees(degs):
            m = K.centered_monomial(a)
            entries = [Poly.zero(3) for _ in range(3)]
            entries[ci] = m
            basis.append(TensorField.vector(entries))
    return PolySpace("vector", basis, label)


def _sym_entry_field(i, j, m):
    z = Poly.zero(3)
    rows = [[z] * 3 for _ in range(3)]
    rows[i][j] = m
    if i != j:
        rows[j][i] = m
    return TensorField.matrix(rows, symmetry="symmetric", check=False)


def _single_entry_field(i, j, m):
    z = Poly.zero(3)
    rows = [[z] * 3 for _ in range(3)]
    rows[i][j] = m
    return TensorField.matrix(rows)


def sigma_degrees(k: int):
    """Per-entry degree boxes of the symmetric family."""
    diag = {i: tuple(k if t == i else k - 2 for t in range(3)) for i in range(3)}
    off = {
        (0, 1): (k - 1, k - 1, k - 2),
        (0, 2): (k - 1, k - 2, k - 1),
        (1, 2): (k - 2, k - 1, k - 1),
    }
    return diag, off


def u_offdiag_degrees(k: int):
    return {
        (0, 1): (k, k - 2, k - 1),
        (0, 2): (k, k - 1, k - 2),
        (1, 2): (k - 1, k, k - 2),
        (1, 0): (k - 2, k, k - 1),
        (2, 0): (k - 2, k - 1, k),
        (2, 1): (k - 1, k - 2, k),
    }


def shape_space_box(family: str, k: int, K: CuboidElement) -> PolySpace:
    """Shape space of a cuboid family; see the family catalog in the module
    docstring.  Vderham/V at degree k share one definition."""
    if family in ("V", "U", "Sigma") and k < 3:
        raise ValueError(f"family {family} needs k >= 3")
    if family == "Q":
        if k < 0:
            return PolySpace("scalar", [], f"Q{k}")
        basis = [
            TensorField.scalar(K.centered_monomial(a))
            for a in monomials_box_degrees((k, k, k))
        ]
        return PolySpace("scalar", basis, f"Q{k}")
    if family == "M":
        comps = [tuple(k - 1 if t == i else k for t in range(3)) for i in range(3)]
        return _component_box_space(K, comps, f"M[{k}]")
    if family in ("V", "Vderham"):
        comps = [tuple(k if t == i else k - 1 for t in range(3)) for i in range(3)]
        return _component_box_space(K, comps, f"V[{k}]")
    if family == "Sigma":
        diag, off = sigma_degrees(k)
        basis = []
        for i in range(3):
            for a in monomials_box_degrees(diag[i]):
                basis.append(_sym_entry_field(i, i, K.centered_monomial(a)))
        for (i, j), degs in off.items():
            for a in monomials_box_degrees(degs):
                basis.append(_sym_entry_field(i, j, K.centered_monomial(a)))
        return PolySpace("matrix", basis, f"Sigma[{k}]")
    if family == "U":
        basis = []
        for pos in (0, 1):
            for a in monomials_box_degrees((k - 1, k - 1, k - 1)):
                m = K.centered_monomial(a)
                z = Poly.zero(3)
                rows = [[z] * 3 for _ in range(3)]
                rows[pos][pos] = m
                rows[2][2] = -m
                basis.append(TensorField.matrix(rows, symmetry="traceless", check=False))
        for (i, j), degs in u_offdiag_degrees(k).items():
            for a in monomials_box_degrees(degs):
                basis.append(_single_entry_field(i, j, K.centered_monomial(a)))
        return PolySpace("matrix", basis, f"U[{k}]")
    raise ValueError(f"unknown cuboid family {family!r}")


def derham_general_spaces(degs, K: CuboidElement):
    """The four spaces of the componentwise-degree gradient/curl/div sequence.

    degs = (k1, k2, k3); returns (head scalar, gradient target, curl target,
    divergence target) with the component degree boxes shifted accordingly.
    """
    k1, k2, k3 = degs
    head = PolySpace(
        "scalar",
        [TensorField.scalar(K.centered_monomial(a)) for a in monomials_box_degrees((k1 + 1, k2 + 1, k3 + 1))],
        f"P[{k1+1},{k2+1},{k3+1}]",
    )
    m_comps = [
        (k1, k2 + 1, k3 + 1),
        (k1 + 1, k2, k3 + 1),
        (k1 + 1, k2 + 1, k3),
    ]
    v_comps = [
        (k1 + 1, k2, k3),
        (k1, k2 + 1, k3),
        (k1, k2, k3 + 1),
    ]
    M = _component_box_space(K, m_comps, f"M[{k1}{k2}{k3}]")
    V = _component_box_space(K, v_comps, f"V[{k1}{k2}{k3}]")
    tail = PolySpace(
        "scalar",
        [TensorField.scalar(K.centered_monomial(a)) for a in monomials_box_degrees((k1, k2, k3))],
        f"P[{k1},{k2},{k3}]",
    )
    return head, M, V, tail


def box_family_dim(family: str, k: int) -> int:
    """Closed-form dimensions used as oracles by tests and reports."""
    if family == "Sigma":
        return 3 * (k + 1) * (k - 1) ** 2 + 3 * k * k * (k - 1)
    if family == "U":
        return 8 * k**3 - 6 * k
    if family in ("V", "Vderham"):
        return 3 * (k + 1) * k * k
    if family == "M":
        return 3 * k * k * (k + 1)
    if family == "Q":
        return (k + 1) ** 3
    raise ValueError(family)


# ---------------------------------------------------------------------------
# bubble spaces


def bubble_space_box(family: str, k: int, K: CuboidElement) -> PolySpace:
    """Vanishing-trace subspaces in their closed product form.

    Sigma: diagonal entries b_i^2 * (k-2, k-4, k-2)-type boxes, shears
    b_i b_j * (k-3, k-3, k-2)-type boxes.  U: diagonal b_K Q_{k-3} pairs,
    off-diagonal b_i^2 b_l * shifted boxes.  V: component i equals
    b_K b_i * (k-4 in x_i, k-3 else).
    """
    if k < 3:
        raise ValueError("bubble spaces need k >= 3")
    basis = []
    if family == "Sigma":
        for i in range(3):
            degs = tuple(k - 4 if t == i else k - 2 for t in range(3))
            bb = K.b[i] * K.b[i]
            for a in monomials_box_degrees(degs):
                basis.append(_sym_entry_field(i, i, bb * K.centered_monomial(a)))
        for (i, j) in ((0, 1), (0, 2), (1, 2)):
            l = 3 - i - j
            degs = [0, 0, 0]
            degs[i] = k - 3
            degs[j] = k - 3
            degs[l] = k - 2
            bb = K.b[i] * K.b[j]
            for a in monomials_box_degrees(tuple(degs)):
                basis.append(_sym_entry_field(i, j, bb * K.centered_monomial(a)))
        return PolySpace("matrix", basis, f"Sigma-bubble[{k}]")
    if family == "U":
        for pos in (0, 1):
            for a in monomials_box_degrees((k - 3, k - 3, k - 3)):
                m = K.bK * K.centered_monomial(a)
                z = Poly.zero(3)
                rows = [[z] * 3 for _ in range(3)]
                rows[pos][pos] = m
                rows[2][2] = -m
                basis.append(TensorField.matrix(rows, symmetry="traceless", check=False))
        for (i, j) in ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)):
            l = 3 - i - j
            degs = [0, 0, 0]
            degs[i] = k - 4
            degs[j] = k - 2
            degs[l] = k - 3
            bb = K.b[i] * K.b[i] * K.b[l]
            for a in monomials_box_degrees(tuple(degs)):
                basis.append(_single_entry_field(i, j, bb * K.centered_monomial(a)))
        return PolySpace("matrix", basis, f"U-bubble[{k}]")
    if family == "V":
        for i in range(3):
            degs = tuple(k - 4 if t == i else k - 3 for t in range(3))
            bb = K.bK * K.b[i]
            for a in monomials_box_degrees(degs):
                entries = [Poly.zero(3) for _ in range(3)]
                entries[i] = bb * K.centered_monomial(a)
                basis.append(TensorField.vector(entries))
        return PolySpace("vector", basis, f"V-bubble[{k}]")
    raise ValueError(f"unknown bubble family {family!r}")


def bubble_dim_box(family: str, k: int) -> int:
    if family == "Sigma":
        return 3 * (k - 1) ** 2 * (k - 3) + 3 * (k - 2) ** 2 * (k - 1)
    if family == "U":
        return 2 * (k - 2) ** 3 + 6 * (k - 3) * (k - 1) * (k - 2)
    if family == "V":
        return 3 * (k - 3) * (k - 2) ** 2
    raise ValueError(family)


# ---------------------------------------------------------------------------
# degree-of-freedom sets


def _face_mono_weights(K, f, deg_by_axis: dict):
    """All centered face monomial weights with per-axis degree caps."""
    axes = sorted(deg_by_axis)
    caps = [deg_by_axis[a] for a in axes]
    if any(c < 0 for c in caps):
        return []
    out = []
    for ea in range(caps[0] + 1):
        for eb in range(caps[1] + 1):
            exps = {axes[0]: ea, axes[1]: eb}
            out.append(((ea, eb), K.face_weight(f, exps)))
    return out


def dofs_box(family: str, k: int, K: CuboidElement) -> list[DofFunctional]:
    if family == "Sigma":
        return _dofs_sigma_box(k, K)
    if family == "U":
        return _dofs_u_box(k, K)
    if family == "V":
        return _dofs_v_box(k, K)
    if family == "Q":
        return _dofs_q_box(k, K)
    raise ValueError(f"unknown cuboid family {family!r}")


def _dofs_sigma_box(k: int, K: CuboidElement) -> list[DofFunctional]:
    dofs = []
    # shear moments on edges: on an edge along axis m the component picked
    # out is the shear between the two transverse axes
    for m in range(3):
        i, j = prv(m), nxt(m)
        for e in K.edges_parallel(m):
            key = K.edge_key(e)
            for s in range(k - 1):
                dofs.append(
                    moment_dof("edge", key, "sig-e", (s,), e, [(ex_entry("f", i, j), K.edge_weight(e, s))])
                )
    # shear moments on faces, weights from the image of a tangential derivative
    for i in range(3):
        for f in K.faces_perp(i):
            key = K.face_key(f)
            for other in (prv(i), nxt(i)):
                third = 3 - i - other
                caps = {other: k - 3, third: k - 2}
                for (ea, eb), w in _face_mono_weights(K, f, caps):
                    dofs.append(
                        moment_dof(
                            "face", key, "sig-f-shear", (other, ea, eb), f, [(ex_entry("f", i, other), w)]
                        )
                    )
    # normal component and its normal derivative on faces
    for i in range(3):
        p, q = sorted((nxt(i), prv(i)))
        for f in K.faces_perp(i):
            key = K.face_key(f)
            for (ea, eb), w in _face_mono_weights(K, f, {p: k - 2, q: k - 2}):
                dofs.append(moment_dof("face", key, "sig-f-nn", (0, ea, eb), f, [(ex_entry("f", i, i), w)]))
                dofs.append(
                    moment_dof(
                        "face", key, "sig-f-nn", (1, ea, eb), f, [(ex_diff(ex_entry("f", i, i), i), w)]
                    )
                )
    dofs.extend(_bubble_moment_dofs("sig-cell", bubble_space_box("Sigma", k, K), K))
    return dofs


def _bubble_moment_dofs(tag: str, bubble: PolySpace, K: CuboidElement) -> list[DofFunctional]:
    dofs = []
    key = K.cell_key()
    for n, w in enumerate(bubble.basis):
        if w.shape == "matrix":
            parts = [(ex_entry("f", i, j), w.entry(i, j)) for i in range(3) for j in range(3) if not w.entry(i, j).is_zero()]
        elif w.shape == "vector":
            parts = [(ex_comp("f", i), w.comp(i)) for i in range(3) if not w.comp(i).is_zero()]
        else:
            parts = [(ex_scalar("f"), w.p)]
        dofs.append(moment_dof("cell", key, tag, (n,), K.cell, parts))
    return dofs


def _dofs_u_box(k: int, K: CuboidElement) -> list[DofFunctional]:
    dofs = []
    for p in K.vertices:
        for i in (0, 1):
            dofs.append(point_dof(K.vertex_key(p), "u-v", (i,), ex_entry("f", i, i), p))
    for e in K.edges:
        key = K.edge_key(e)
        m = e.axis
        for i in (0, 1):
            for s in range(k - 2):
                dofs.append(
                    moment_dof("edge", key, "u-e-diag", (i, s), e, [(ex_entry("f", i, i), K.edge_weight(e, s))])
                )
        for j in range(3):
            if j == m:
                continue
            base = ex_entry("f", j, m)
            for s in range(k - 1):
                w = K.edge_weight(e, s)
                dofs.append(moment_dof("edge", key, "u-e-off", (j, 0, s), e, [(base, w)]))
                dofs.append(moment_dof("edge", key, "u-e-off", (j, 1, s), e, [(ex_diff(base, j), w)]))
    for l in range(3):
        t0, t1 = sorted((nxt(l), prv(l)))
        for f in K.faces_perp(l):
            key = K.face_key(f)
            for (i, j) in ((t0, t1), (t1, t0)):
                caps = {i: k - 4, j: k - 2}
                for (ea, eb), w in _face_mono_weights(K, f, caps):
                    dofs.append(
                        moment_dof("face", key, "u-f-d2", (i, ea, eb), f, [(ex_entry("f", i, j), w)])
                    )
    for i in range(3):
        for f in K.faces_perp(i):
            key = K.face_key(f)
            for j in (nxt(i), prv(i)):
                l = 3 - i - j
                caps = {j: k - 2, l: k - 3}
                base = ex_entry("f", i, j)
                for (ea, eb), w in _face_mono_weights(K, f, caps):
                    dofs.append(moment_dof("face", key, "u-f-dn", (j, 0, ea, eb), f, [(base, w)]))
                    dofs.append(moment_dof("face", key, "u-f-dn", (j, 1, ea, eb), f, [(ex_diff(base, i), w)]))
    for f in K.faces:
        key = K.face_key(f)
        p, q = sorted(f.tangent_axes)
        for i in (0, 1):
            for (ea, eb), w in _face_mono_weights(K, f, {p: k - 3, q: k - 3}):
                dofs.append(moment_dof("face", key, "u-f-diag", (i, ea, eb), f, [(ex_entry("f", i, i), w)]))
    dofs.extend(_bubble_moment_dofs("u-cell", bubble_space_box("U", k, K), K))
    return dofs


def _dofs_v_box(k: int, K: CuboidElement) -> list[DofFunctional]:
    dofs = []
    for p in K.vertices:
        for i in range(3):
            dofs.append(point_dof(K.vertex_key(p), "v-v", (i, 0), ex_comp("f", i), p))
            dofs.append(point_dof(K.vertex_key(p), "v-v", (i, 1), ex_diff(ex_comp("f", i), i), p))
    for e in K.edges:
        key = K.edge_key(e)
        m = e.axis
        for s in range(k - 3):
            dofs.append(moment_dof("edge", key, "v-e-own", (s,), e, [(ex_comp("f", m), K.edge_weight(e, s))]))
        for i in range(3):
            if i == m:
                continue
            base = ex_comp("f", i)
            for s in range(k - 2):
                w = K.edge_weight(e, s)
                dofs.append(moment_dof("edge", key, "v-e-oth", (i, 0, s), e, [(base, w)]))
                dofs.append(moment_dof("edge", key, "v-e-oth", (i, 1, s), e, [(ex_diff(base, i), w)]))
    for i in range(3):
        p, q = sorted((nxt(i), prv(i)))
        for f in K.faces_perp(i):
            key = K.face_key(f)
            base = ex_comp("f", i)
            for (ea, eb), w in _face_mono_weights(K, f, {p: k - 3, q: k - 3}):
                dofs.append(moment_dof("face", key, "v-f-own", (0, ea, eb), f, [(base, w)]))
                dofs.append(moment_dof("face", key, "v-f-own", (1, ea, eb), f, [(ex_diff(base, i), w)]))
    for m in range(3):
        for f in K.faces_perp(m):
            key = K.face_key(f)
            for i in f.tangent_axes:
                l = 3 - m - i
                caps = {i: k - 4, l: k - 3}
                for (ea, eb), w in _face_mono_weights(K, f, caps):
                    dofs.append(moment_dof("face", key, "v-f-oth", (i, ea, eb), f, [(ex_comp("f", i), w)]))
    dofs.extend(_bubble_moment_dofs("v-cell", bubble_space_box("V", k, K), K))
    return dofs


def _dofs_q_box(k: int, K: CuboidElement) -> list[DofFunctional]:
    dofs = []
    key = K.cell_key()
    for n, a in enumerate(monomials_box_degrees((k, k, k))):
        w = K.centered_monomial(a)
        dofs.append(moment_dof("cell", key, "q-cell", (n,), K.cell, [(ex_scalar("f"), w)]))
    return dofs


def element_def(family: str, k: int, K: CuboidElement) -> FiniteElementDef:
    """Shape space plus DOFs as one element definition."""
    space = shape_space_box(family, k, K)
    dofs = dofs_box(family, k, K)
    return FiniteElementDef(K, space, dofs, label=f"box-{family}-k{k}")
