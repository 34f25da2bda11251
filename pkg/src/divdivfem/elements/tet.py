"""Tetrahedral elements: constrained auxiliary spaces and DOF sets.

Families on a tetrahedron (shape spaces are full polynomial spaces):

* "Sigma" (k >= 3): symmetric P_k; vertex values of the field and its row
  divergence, five edge contractions, face moments of sigma n and of
  div sigma . n, and interior moments against Hessians, gradients of the
  rigid-motion-free curl space, and the double-curl image space.
* "U" (k >= 4): traceless P_{k+1}; vertex jets, edge moments of the field,
  its column divergence and the edge contractions of its symmetric curl,
  face moments of u x n and (div_col u) x n, and interior moments.
* "V" (k >= 4): vector P_{k+2}; vertex second-order jets including the
  Hessian of the divergence, edge and face moments of the field and its
  divergence plus transverse first derivatives, and interior moments against
  the divergence-free-on-faces bubble space.
* "Q": scalar P_{k-2} with plain cell moments (discontinuous coupling).

Constraints of the auxiliary spaces ("tangential trace vanishes", "projected
second fundamental operator vanishes") are imposed as polynomial identities
on faces, never by point sampling; all spaces come out of certified exact
nullspaces.
"""

from __future__ import annotations

from ..polycore.geometry import Segment, TetCell, TriFace, _cross, _dot, _sub
from ..polycore.linalg import exact_rank, EchelonForm
from ..polycore.polynomial import Poly, monomials_total_degree
from ..polycore.spaces import PolySpace, coeff_matrix, scale_coeff_vector
from ..rational import Q
from ..tensorcalc.fields import TensorField
from ..tensorcalc.frames import EdgeFrame, FaceFrame
from ..tensorcalc.operators import curl, curl_col, dev_grad, div, grad, sym, directional
from .dof import (
    DofFunctional,
    Extractor,
    FiniteElementDef,
    ex_bilinear,
    ex_comp,
    ex_cross_row,
    ex_cross_vec,
    ex_diff,
    ex_dir_dot,
    ex_entry,
    ex_scalar,
    ex_vdot,
    moment_dof,
    point_dof,
)


def ex_dir_scalar(name: str, n) -> Extractor:
    """(n . grad) of a scalar derived field."""
    n = tuple(Q(c) for c in n)

    def fn(bundle):
        p = bundle.derived(name).p
        out = Poly.zero(p.nvars)
        for m in range(3):
            if n[m]:
                out = out + p.diff(m) * n[m]
        return out

    return Extractor(("ds", name, n), fn)


class FaceData:
    def __init__(self, tri: TriFace, key, normal, opposite: int):
        self.tri = tri
        self.key = key
        self.normal = normal  # oriented (mesh rule or outward), unnormalized
        self.opposite = opposite
        self.frame = FaceFrame(tri, normal, tri.u, tri.v)
        self._lift_cache: dict = {}
        self._lift_st = None

    def lifted_monomial(self, alpha) -> Poly:
        """The face-parameter monomial s^a t^b as a polynomial in x, y, z,
        constant along the normal."""
        out = self._lift_cache.get(alpha)
        if out is None:
            if self._lift_st is None:
                self._lift_st = self.tri.param_lift()
            s, t = self._lift_st
            out = (s ** alpha[0]) * (t ** alpha[1])
            self._lift_cache[alpha] = out
        return out


class EdgeData:
    def __init__(self, seg: Segment, key, frame: EdgeFrame):
        self.seg = seg
        self.key = key
        self.frame = frame


class TetElement:
    """Geometry bundle for one tetrahedron.

    Faces carry globally oriented normals (outward by default; a mesh may
    dictate the orientation) and edges carry the deterministic frame: the
    tangent runs from the lower to the higher vertex key, the first edge
    normal is the component of the lowest incident face's normal orthogonal
    to the tangent, and the second is their cross product.
    """

    def __init__(self, vertices, face_normals=None, edge_refnormals=None):
        self.cell = TetCell(vertices)
        self.vertices = self.cell.vertices
        self.lam = self.cell.barycentric()
        self.bubble = self.lam[0] * self.lam[1] * self.lam[2] * self.lam[3]
        self.v0 = self.vertices[0]
        self._mono_cache: dict = {}
        self._space_cache: dict = {}

        self.faces: list[FaceData] = []
        face_tmp = []
        for opp in range(4):
            pts = sorted(tuple(p) for i, p in enumerate(self.vertices) if i != opp)
            key = tuple(pts)
            tri = TriFace(*pts)
            if face_normals and key in face_normals:
                n = tuple(Q(c) for c in face_normals[key])
                if _dot(_cross(n, tri.raw_normal), _cross(n, tri.raw_normal)) != 0:
                    raise ValueError("mesh normal is not normal to the face")
            else:
                n = tri.raw_normal
                inward = _sub(self.vertices[opp], pts[0])
                if _dot(n, inward) > 0:
                    n = tuple(-c for c in n)  # outward default
            face_tmp.append(FaceData(tri, key, n, opp))
        self.faces = sorted(face_tmp, key=lambda fd: fd.key)

        self.edges: list[EdgeData] = []
        pts_sorted = sorted(tuple(p) for p in self.vertices)
        seen = set()
        for a in range(4):
            for b in range(a + 1, 4):
                p, q = sorted((tuple(self.vertices[a]), tuple(self.vertices[b])))
                if (p, q) in seen:
                    continue
                seen.add((p, q))
                seg = Segment(p, q)
                key = (p, q)
                if edge_refnormals and key in edge_refnormals:
                    ref = edge_refnormals[key]
                else:
                    ref = None
                    for fd in self.faces:
                        if p in fd.key and q in fd.key:
                            ref = fd.normal
                            break
                frame = EdgeFrame.for_segment(seg, ref)
                self.edges.append(EdgeData(seg, key, frame))
        self.edges.sort(key=lambda ed: ed.key)

    def centered_monomial(self, alpha) -> Poly:
        out = self._mono_cache.get(alpha)
        if out is None:
            out = Poly.const(1, 3)
            for i, e in enumerate(alpha):
                if e:
                    out = out * (Poly.variable(i) - self.v0[i]) ** e
            self._mono_cache[alpha] = out
        return out

    def vertex_key(self, i: int):
        return tuple(self.vertices[i])

    def cell_key(self):
        return tuple(sorted(tuple(p) for p in self.vertices))


# ---------------------------------------------------------------------------
# shape spaces


def tet_scalar_space(deg: int, K: TetElement, label=None) -> PolySpace:
    basis = [TensorField.scalar(K.centered_monomial(a)) for a in monomials_total_degree(deg, 3)]
    return PolySpace("scalar", basis, label or f"P{deg}")


def tet_vector_space(deg: int, K: TetElement, label=None) -> PolySpace:
    basis = []
    for d in range(3):
        for a in monomials_total_degree(deg, 3):
            entries = [Poly.zero(3) for _ in range(3)]
            entries[d] = K.centered_monomial(a)
            basis.append(TensorField.vector(entries))
    return PolySpace("vector", basis, label or f"P{deg}^3")


def tet_symmetric_space(deg: int, K: TetElement, label=None) -> PolySpace:
    basis = []
    z = Poly.zero(3)
    for (i, j) in ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)):
        for a in monomials_total_degree(deg, 3):
            m = K.centered_monomial(a)
            rows = [[z] * 3 for _ in range(3)]
            rows[i][j] = m
            if i != j:
                rows[j][i] = m
            basis.append(TensorField.matrix(rows, symmetry="symmetric", check=False))
    return PolySpace("matrix", basis, label or f"P{deg}(S)")


def tet_traceless_space(deg: int, K: TetElement, label=None) -> PolySpace:
    basis = []
    z = Poly.zero(3)
    for pos in (0, 1):
        for a in monomials_total_degree(deg, 3):
            m = K.centered_monomial(a)
            rows = [[z] * 3 for _ in range(3)]
            rows[pos][pos] = m
            rows[2][2] = -m
            basis.append(TensorField.matrix(rows, symmetry="traceless", check=False))
    for (i, j) in ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)):
        for a in monomials_total_degree(deg, 3):
            m = K.centered_monomial(a)
            rows = [[z] * 3 for _ in range(3)]
            rows[i][j] = m
            basis.append(TensorField.matrix(rows))
    return PolySpace("matrix", basis, label or f"P{deg}(T)")


def tet_family_dim(family: str, k: int) -> int:
    if family == "Sigma":
        return (k + 1) * (k + 2) * (k + 3)
    if family == "U":
        return 4 * (k + 4) * (k + 3) * (k + 2) // 3
    if family == "V":
        return (k + 5) * (k + 4) * (k + 3) // 2
    if family == "Q":
        return (k - 1) * k * (k + 1) // 6
    raise ValueError(family)


# ---------------------------------------------------------------------------
# constrained spaces


class ConstrainedSpace:
    """Nullspace of linear face/volume constraints inside a parent space.

    basis members are certified: they satisfy every constraint exactly, and
    the dimension equals parent dim minus the exact constraint rank.
    """

    def __init__(self, parent: PolySpace, description: str, constraint_rows, basis_coeffs):
        self.parent = parent
        self.description = description
        self.constraint_rank = None
        self.basis_coeffs = [scale_coeff_vector(c) for c in basis_coeffs]
        self.basis = [parent.field_from_coeffs(c) for c in self.basis_coeffs]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_space(self, shape: str) -> PolySpace:
        return PolySpace(shape, self.basis, self.description)


def _nullspace_constrained(parent: PolySpace, rows, description: str) -> ConstrainedSpace:
    if not rows:
        coeffs = [[Q(1) if i == j else Q(0) for j in range(parent.dim)] for i in range(parent.dim)]
        cs = ConstrainedSpace(parent, description, [], coeffs)
        cs.constraint_rank = 0
        return cs
    rank, ns = exact_rank(rows, want_nullspace=True)
    cs = ConstrainedSpace(parent, description, rows, ns)
    cs.constraint_rank = rank
    if cs.dim != parent.dim - rank:
        raise ArithmeticError("nullspace dimension mismatch")
    return cs


def _poly_coeff_rows(polys_per_basis, nvars: int):
    """Constraint rows: one row per monomial of the stacked polynomials."""
    index = {}
    rows = []
    for j, plist in enumerate(polys_per_basis):
        for t, p in enumerate(plist):
            for a, c in p.terms.items():
                key = (t, a)
                r = index.get(key)
                if r is None:
                    r = len(rows)
                    index[key] = r
                    rows.append([Q(0)] * len(polys_per_basis))
                rows[r][j] = c
    return rows


def space_W(m: int, K: TetElement) -> ConstrainedSpace:
    """Vectors of total degree <= m with vanishing tangential trace on all
    four faces (the cross product with each face normal vanishes there)."""
    parent = tet_vector_space(m, K, label=f"W{m}-parent")
    per_basis = []
    for b in parent.basis:
        plist = []
        for fd in K.faces:
            for tvec in (fd.tri.u, fd.tri.v):
                plist.append(fd.tri.restrict(b.vec_dot(tvec)))
        per_basis.append(plist)
    rows = _poly_coeff_rows(per_basis, 2)
    return _nullspace_constrained(parent, rows, f"W{m}")


def space_M(m: int, K: TetElement) -> ConstrainedSpace:
    """Symmetric fields of degree <= m whose tangential-tangential part and
    projected face operator (two symmetric-gradient terms minus the normal
    derivative, framed by the face projector) vanish on every face."""
    parent = tet_symmetric_space(m, K, label=f"M{m}-parent")
    per_basis = []
    for b in parent.basis:
        plist = []
        for fd in K.faces:
            n = fd.normal
            sn = b.dot_vector(n)
            inner = sym(grad(sn)) * 2 - directional(b, n)
            for (a, c) in ((fd.tri.u, fd.tri.u), (fd.tri.u, fd.tri.v), (fd.tri.v, fd.tri.v)):
                tt = _contract(b, a, c)
                plist.append(fd.tri.restrict(tt))
                lam = _contract(inner, a, c)
                plist.append(fd.tri.restrict(lam))
        per_basis.append(plist)
    rows = _poly_coeff_rows(per_basis, 2)
    return _nullspace_constrained(parent, rows, f"M{m}")


def _contract(field: TensorField, a, b):
    a = tuple(Q(c) for c in a)
    b = tuple(Q(c) for c in b)
    s = Poly.zero(3)
    for i in range(3):
        if not a[i]:
            continue
        for j in range(3):
            c = a[i] * b[j]
            if c:
                s = s + field.entry(i, j) * c
    return s


def rigid_motions() -> list[TensorField]:
    """Basis of the six-dimensional rigid motion space."""
    x, y, z = (Poly.variable(i) for i in range(3))
    zero = Poly.zero(3)
    one = Poly.const(1)
    return [
        TensorField.vector([one, zero, zero]),
        TensorField.vector([zero, one, zero]),
        TensorField.vector([zero, zero, one]),
        TensorField.vector([-y, x, zero]),
        TensorField.vector([-z, zero, x]),
        TensorField.vector([zero, -z, y]),
    ]


def _image_basis(fields: list[TensorField]) -> list[TensorField]:
    """An independent subset spanning the same space (pivot columns)."""
    nonzero = [f for f in fields if not f.is_zero()]
    if not nonzero:
        return []
    M, _ = coeff_matrix(nonzero)
    ech = EchelonForm(M)
    return [nonzero[c] for c in ech.pivot_cols]


def space_W_quotient(k: int, K: TetElement) -> PolySpace:
    """curl of the tangential-trace-free degree-k space, made orthogonal to
    the rigid motions in the cell's L2 pairing."""
    W = space_W(k, K)
    image = _image_basis([curl(w) for w in W.basis])
    rms = rigid_motions()
    rows = []
    for rm in rms:
        rows.append([K.cell.integrate(w.frobenius(rm)) for w in image])
    rank, ns = exact_rank(rows, want_nullspace=True) if image else (0, [])
    basis = []
    for coeffs in ns:
        coeffs = scale_coeff_vector(coeffs)
        f = None
        for c, w in zip(coeffs, image):
            if c:
                t = w * c
                f = t if f is None else f + t
        if f is not None:
            basis.append(f)
    return PolySpace("vector", basis, f"curlW{k}/RM")


def w_quotient_dim(k: int) -> int:
    return (2 * k**3 - 3 * k**2 - 5 * k - 12) // 6


def space_M_image(k: int, K: TetElement) -> PolySpace:
    """Row-curl of the column-curl of the degree-(k+2) constrained space."""
    M = space_M(k + 2, K)
    image = _image_basis([curl(curl_col(t)) for t in M.basis])
    return PolySpace("matrix", image, f"curlcurl*M{k+2}")


def m_image_dim(k: int) -> int:
    return (k**3 - 3 * k**2 - 4 * k + 12) // 2


def space_Pdiv_bubble(k: int, K: TetElement) -> ConstrainedSpace:
    """Vector bubbles lambda1..lambda4 * P_{k-2} whose divergence vanishes
    identically on every face (degree k+2 fields)."""
    basis = []
    for d in range(3):
        for a in monomials_total_degree(k - 2, 3):
            entries = [Poly.zero(3) for _ in range(3)]
            entries[d] = K.bubble * K.centered_monomial(a)
            basis.append(TensorField.vector(entries))
    parent = PolySpace("vector", basis, f"bubbleP{k-2}")
    per_basis = []
    for b in parent.basis:
        dv = div(b).p
        per_basis.append([fd.tri.restrict(dv) for fd in K.faces])
    rows = _poly_coeff_rows(per_basis, 2)
    return _nullspace_constrained(parent, rows, f"Pdiv{k+2}")


def space_Ptilde_face(deg: int, fd: FaceData) -> list[Poly]:
    """Degree <= deg polynomials on the face (in parameters) that vanish at
    its three vertices; returned as parameter polynomials."""
    monos = monomials_total_degree(deg, 2)
    pts = [(Q(0), Q(0)), (Q(1), Q(0)), (Q(0), Q(1))]
    rows = []
    for pt in pts:
        rows.append([Poly.monomial(a).eval(pt) for a in monos])
    _rank, ns = exact_rank(rows, want_nullspace=True)
    out = []
    for coeffs in ns:
        p = Poly.zero(2)
        for c, a in zip(scale_coeff_vector(coeffs), monos):
            if c:
                p = p + Poly.monomial(a) * c
        out.append(p)
    return out


def scalar_quotient_mod_linears(k: int, K: TetElement) -> list[TensorField]:
    """Basis of degree <= k scalars L2-orthogonal to affine functions."""
    parent = tet_scalar_space(k, K)
    lin = tet_scalar_space(1, K)
    rows = []
    for q in lin.basis:
        rows.append([K.cell.integrate(p.p * q.p) for p in parent.basis])
    _rank, ns = exact_rank(rows, want_nullspace=True)
    return [parent.field_from_coeffs(scale_coeff_vector(c)) for c in ns]


def face_vector_weights(deg: int, fd: FaceData):
    """Vector weights on a face split as three constants plus a basis of the
    mean-free complement (in the reference pairing), all in parameters.

    Returns (constant_weights, quotient_weights) where each weight is a
    3-list of parameter polynomials.
    """
    consts = []
    for d in range(3):
        w = [Poly.zero(2)] * 3
        w = list(w)
        w[d] = Poly.const(1, 2)
        consts.append((("c", d), w))
    quots = []
    if deg >= 1:
        from ..polycore.geometry import integrate_poly_unit_simplex

        for a in monomials_total_degree(deg, 2):
            if sum(a) == 0:
                continue
            m = Poly.monomial(a, nvars=2)
            mean = integrate_poly_unit_simplex(m) * 2  # reference area is 1/2
            mt = m - Poly.const(mean, 2)
            for d in range(3):
                w = [Poly.zero(2)] * 3
                w = list(w)
                w[d] = mt
                quots.append((("m", d, a), w))
    return consts, quots


# ---------------------------------------------------------------------------
# DOF sets


_SIG_EDGE_PAIRS = ("tp", "tm", "pp", "mm", "pm")


def _edge_pair_vectors(frame: EdgeFrame):
    t, np_, nm = frame.tangent, frame.n_plus, frame.n_minus
    return {
        "tp": (t, np_),
        "tm": (t, nm),
        "pp": (np_, np_),
        "mm": (nm, nm),
        "pm": (np_, nm),
    }


def _edge_weight(s: int) -> Poly:
    return Poly.monomial((s,), nvars=1)


def _restrict_weight_field(fd: FaceData, vec_polys) -> list[Poly]:
    return [fd.tri.restrict(p) for p in vec_polys]


def dofs_tet(family: str, k: int, K: TetElement) -> list[DofFunctional]:
    if family == "Sigma":
        if k < 3:
            raise ValueError("symmetric family needs k >= 3")
        return _dofs_sigma_tet(k, K)
    if family == "U":
        if k < 4:
            raise ValueError("traceless family needs k >= 4")
        return _dofs_u_tet(k, K)
    if family == "V":
        if k < 4:
            raise ValueError("vector family needs k >= 4")
        return _dofs_v_tet(k, K)
    if family == "Q":
        return _dofs_q_tet(k, K)
    raise ValueError(f"unknown tet family {family!r}")


def _dofs_sigma_tet(k: int, K: TetElement) -> list[DofFunctional]:
    dofs = []
    for vi in range(4):
        p = K.vertices[vi]
        key = K.vertex_key(vi)
        for (i, j) in ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)):
            dofs.append(point_dof(key, "sig-v", (i, j), ex_entry("f", i, j), p))
        for i in range(3):
            dofs.append(point_dof(key, "sig-v-div", (i,), ex_comp("div_row", i), p))
    for ed in K.edges:
        pairs = _edge_pair_vectors(ed.frame)
        for pair in _SIG_EDGE_PAIRS:
            a, b = pairs[pair]
            base = ex_bilinear("f", a, b)
            for s in range(k - 1):
                dofs.append(moment_dof("edge", ed.key, "sig-e", (pair, s), ed.seg, [(base, _edge_weight(s))]))
    for fd in K.faces:
        consts, quots = face_vector_weights(k - 3, fd)
        for sub, w in consts + quots:
            parts = [
                (ex_bilinear("f", _unit(d), fd.normal), w[d]) for d in range(3) if not w[d].is_zero()
            ]
            dofs.append(moment_dof("face", fd.key, "sig-f-n", sub, fd.tri, parts))
        base = ex_vdot("div_row", fd.normal)
        for idx, q in enumerate(space_Ptilde_face(k - 1, fd)):
            dofs.append(moment_dof("face", fd.key, "sig-f-dn", (idx,), fd.tri, [(base, q)]))
    ckey = K.cell_key()
    from ..tensorcalc.operators import hessian

    for idx, q in enumerate(cached_space(K, "quotlin", k - 2)):
        h = hessian(q)
        parts = [(ex_entry("f", i, j), h.entry(i, j)) for i in range(3) for j in range(3) if not h.entry(i, j).is_zero()]
        dofs.append(moment_dof("cell", ckey, "sig-c-hess", (idx,), K.cell, parts, aux=q))
    for idx, w in enumerate(cached_space(K, "Wq", k).basis):
        g = grad(w)
        parts = [(ex_entry("f", i, j), g.entry(i, j)) for i in range(3) for j in range(3) if not g.entry(i, j).is_zero()]
        dofs.append(moment_dof("cell", ckey, "sig-c-w", (idx,), K.cell, parts))
    for idx, t in enumerate(cached_space(K, "Mimg", k).basis):
        parts = [(ex_entry("f", i, j), t.entry(i, j)) for i in range(3) for j in range(3) if not t.entry(i, j).is_zero()]
        dofs.append(moment_dof("cell", ckey, "sig-c-m", (idx,), K.cell, parts))
    return dofs


def _unit(d: int):
    return tuple(Q(int(i == d)) for i in range(3))


_U_PATTERNS = (
    ("d0", ((0, 0, 1), (2, 2, -1))),
    ("d1", ((1, 1, 1), (2, 2, -1))),
    ("o01", ((0, 1, 1),)),
    ("o02", ((0, 2, 1),)),
    ("o10", ((1, 0, 1),)),
    ("o12", ((1, 2, 1),)),
    ("o20", ((2, 0, 1),)),
    ("o21", ((2, 1, 1),)),
)

_U_INDEP_ENTRIES = ((0, 0), (1, 1), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


def _dofs_u_tet(k: int, K: TetElement) -> list[DofFunctional]:
    dofs = []
    for vi in range(4):
        p = K.vertices[vi]
        key = K.vertex_key(vi)
        for (i, j) in _U_INDEP_ENTRIES:
            dofs.append(point_dof(key, "u-v", (i, j), ex_entry("f", i, j), p))
        for m in range(3):
            for (i, j) in _U_INDEP_ENTRIES:
                dofs.append(point_dof(key, "u-v-grad", (m, i, j), ex_diff(ex_entry("f", i, j), m), p))
        for m in range(3):
            for j in range(3):
                dofs.append(point_dof(key, "u-v-gdc", (m, j), ex_diff(ex_comp("div_col", j), m), p))
    for ed in K.edges:
        for pat, terms in _U_PATTERNS:
            for s in range(k - 2):
                w = _edge_weight(s)
                parts = [(ex_entry("f", i, j), w * c) for (i, j, c) in terms]
                dofs.append(moment_dof("edge", ed.key, "u-e-mom", (pat, s), ed.seg, parts))
        for d in range(3):
            base = ex_comp("div_col", d)
            for s in range(k - 3):
                dofs.append(moment_dof("edge", ed.key, "u-e-dc", (d, s), ed.seg, [(base, _edge_weight(s))]))
        pairs = _edge_pair_vectors(ed.frame)
        for pair in _SIG_EDGE_PAIRS:
            a, b = pairs[pair]
            base = ex_bilinear("sym_curl", a, b)
            for s in range(k - 1):
                dofs.append(moment_dof("edge", ed.key, "u-e-sc", (pair, s), ed.seg, [(base, _edge_weight(s))]))
    for fd in K.faces:
        n = fd.normal
        qf = fd.frame.qf
        # moments of u x n against surface gradients of vector polynomials
        for a in monomials_total_degree(k - 3, 2):
            if sum(a) == 0:
                continue
            lifted = fd.lifted_monomial(a)
            gvec = [lifted.diff(0), lifted.diff(1), lifted.diff(2)]
            wvec = []
            for c in range(3):
                s = Poly.zero(3)
                for t in range(3):
                    if qf[c][t]:
                        s = s + gvec[t] * qf[c][t]
                wvec.append(s)
            wref = _restrict_weight_field(fd, wvec)
            for d in range(3):
                parts = [(ex_cross_row("f", n, d, c), wref[c]) for c in range(3) if not wref[c].is_zero()]
                dofs.append(moment_dof("face", fd.key, "u-f-grad", (d, a), fd.tri, parts))
        # moments of u x n against surface curls of squared-bubble fields
        lam = fd.tri.barycentric_ref()
        bub2 = (lam[0] * lam[1] * lam[2]) ** 2
        for a in monomials_total_degree(k - 4, 2):
            qparam = bub2 * Poly.monomial(a, nvars=2)
            lifted = fd.tri.lift_to_space(qparam)
            g = [lifted.diff(0), lifted.diff(1), lifted.diff(2)]
            wvec = [
                n[1] * g[2] - n[2] * g[1],
                n[2] * g[0] - n[0] * g[2],
                n[0] * g[1] - n[1] * g[0],
            ]
            wref = _restrict_weight_field(fd, wvec)
            for d in range(3):
                parts = [(ex_cross_row("f", n, d, c), wref[c]) for c in range(3) if not wref[c].is_zero()]
                dofs.append(moment_dof("face", fd.key, "u-f-curl", (d, a), fd.tri, parts))
        # moments of (div_col u) x n against tangential vector polynomials
        for ti, tvec in ((0, fd.tri.u), (1, fd.tri.v)):
            for a in monomials_total_degree(k - 3, 2):
                m = Poly.monomial(a, nvars=2)
                parts = []
                for c in range(3):
                    if tvec[c]:
                        parts.append((ex_cross_vec("div_col", n, c), m * tvec[c]))
                dofs.append(moment_dof("face", fd.key, "u-f-dc", (ti, a), fd.tri, parts))
    ckey = K.cell_key()
    for idx, w in enumerate(cached_space(K, "Wq", k).basis):
        g = grad(w)
        parts = [(ex_entry("sym_curl", i, j), g.entry(i, j)) for i in range(3) for j in range(3) if not g.entry(i, j).is_zero()]
        dofs.append(moment_dof("cell", ckey, "u-c-w", (idx,), K.cell, parts))
    for idx, t in enumerate(cached_space(K, "Mimg", k).basis):
        parts = [(ex_entry("sym_curl", i, j), t.entry(i, j)) for i in range(3) for j in range(3) if not t.entry(i, j).is_zero()]
        dofs.append(moment_dof("cell", ckey, "u-c-m", (idx,), K.cell, parts))
    for idx, q in enumerate(cached_space(K, "Pdiv", k).basis):
        dg = dev_grad(q)
        parts = [(ex_entry("f", i, j), dg.entry(i, j)) for i in range(3) for j in range(3) if not dg.entry(i, j).is_zero()]
        dofs.append(moment_dof("cell", ckey, "u-c-dg", (idx,), K.cell, parts))
    return dofs


_V_EDGE_PAIRS = ("pp", "mp", "pt", "mt", "pm")


def _v_edge_pair_vectors(frame: EdgeFrame):
    t, np_, nm = frame.tangent, frame.n_plus, frame.n_minus
    # (direction of derivative, component vector)
    return {
        "pp": (np_, np_),
        "mp": (nm, np_),
        "pt": (np_, t),
        "mt": (nm, t),
        "pm": (np_, nm),
    }


def _dofs_v_tet(k: int, K: TetElement) -> list[DofFunctional]:
    dofs = []
    for vi in range(4):
        p = K.vertices[vi]
        key = K.vertex_key(vi)
        for i in range(3):
            dofs.append(point_dof(key, "v-v", (i,), ex_comp("f", i), p))
        for m in range(3):
            for i in range(3):
                dofs.append(point_dof(key, "v-v-grad", (m, i), ex_diff(ex_comp("f", i), m), p))
        for i in range(3):
            for m in range(3):
                for nax in range(m, 3):
                    dofs.append(
                        point_dof(key, "v-v-hess", (i, m, nax), ex_diff(ex_diff(ex_comp("f", i), m), nax), p)
                    )
        for m in range(3):
            for nax in range(m, 3):
                dofs.append(
                    point_dof(key, "v-v-hdiv", (m, nax), ex_diff(ex_diff(ex_scalar("div_scalar"), m), nax), p)
                )
    for ed in K.edges:
        for d in range(3):
            base = ex_comp("f", d)
            for s in range(k - 3):
                dofs.append(moment_dof("edge", ed.key, "v-e-mom", (d, s), ed.seg, [(base, _edge_weight(s))]))
        base = ex_scalar("div_scalar")
        for s in range(k - 4):
            dofs.append(moment_dof("edge", ed.key, "v-e-div", (s,), ed.seg, [(base, _edge_weight(s))]))
        pairs = _v_edge_pair_vectors(ed.frame)
        for pair in _V_EDGE_PAIRS:
            a, b = pairs[pair]
            base = ex_dir_dot(a, b)
            for s in range(k - 2):
                dofs.append(moment_dof("edge", ed.key, "v-e-dn", (pair, s), ed.seg, [(base, _edge_weight(s))]))
        for sgn, nvec in ((0, ed.frame.n_plus), (1, ed.frame.n_minus)):
            base = ex_dir_scalar("div_scalar", nvec)
            for s in range(k - 3):
                dofs.append(moment_dof("edge", ed.key, "v-e-dndiv", (sgn, s), ed.seg, [(base, _edge_weight(s))]))
    for fd in K.faces:
        for d in range(3):
            base = ex_comp("f", d)
            for a in monomials_total_degree(k - 4, 2):
                m = Poly.monomial(a, nvars=2)
                dofs.append(moment_dof("face", fd.key, "v-f-mom", (d, a), fd.tri, [(base, m)]))
        base = ex_scalar("div_scalar")
        for a in monomials_total_degree(k - 5, 2):
            m = Poly.monomial(a, nvars=2)
            dofs.append(moment_dof("face", fd.key, "v-f-div", (a,), fd.tri, [(base, m)]))
    ckey = K.cell_key()
    for idx, q in enumerate(cached_space(K, "Pdiv", k).basis):
        parts = [(ex_comp("f", i), q.comp(i)) for i in range(3) if not q.comp(i).is_zero()]
        dofs.append(moment_dof("cell", ckey, "v-c-pdiv", (idx,), K.cell, parts))
    return dofs


def _dofs_q_tet(k: int, K: TetElement) -> list[DofFunctional]:
    dofs = []
    ckey = K.cell_key()
    for n, a in enumerate(monomials_total_degree(k - 2, 3)):
        w = K.centered_monomial(a)
        dofs.append(moment_dof("cell", ckey, "q-cell", (n,), K.cell, [(ex_scalar("f"), w)]))
    return dofs


def cached_space(K: TetElement, kind: str, k: int):
    """Auxiliary spaces are shared between families; build each once per cell."""
    key = (kind, k)
    out = K._space_cache.get(key)
    if out is None:
        if kind == "Wq":
            out = space_W_quotient(k, K)
        elif kind == "Mimg":
            out = space_M_image(k, K)
        elif kind == "Pdiv":
            out = space_Pdiv_bubble(k, K)
        elif kind == "quotlin":
            out = scalar_quotient_mod_linears(k, K)
        else:
            raise ValueError(kind)
        K._space_cache[key] = out
    return out


def element_def(family: str, k: int, K: TetElement) -> FiniteElementDef:
    """Shape space plus DOFs as one element definition.

    The shape degree is k for Sigma, k+1 for U, k+2 for V, k-2 for Q.
    """
    if family == "Sigma":
        space = tet_symmetric_space(k, K, label=f"P{k}(S)")
    elif family == "U":
        space = tet_traceless_space(k + 1, K, label=f"P{k+1}(T)")
    elif family == "V":
        space = tet_vector_space(k + 2, K, label=f"P{k+2}^3")
    elif family == "Q":
        space = tet_scalar_space(k - 2, K, label=f"P{k-2}")
    else:
        raise ValueError(f"unknown tet family {family!r}")
    dofs = dofs_tet(family, k, K)
    return FiniteElementDef(K, space, dofs, label=f"tet-{family}-k{k}")
