"""Constructive surjectivity of div div on tetrahedral meshes.

For each basis function q_h of the discontinuous target space the check
builds, by explicit DOF assignment, a member u_h of the assembled symmetric
space with div div u_h = q_h:

1. an auxiliary H(div) field v_h is solved for with div v_h = q_h; the
   auxiliary space consists of piecewise vector polynomials of degree k-1
   with single-valued vertex values and normal traces (the extra vertex
   continuity makes the vertex assignments of step 2 well posed);
2. u_h's DOFs are set so that div u_h . n agrees with v_h . n on every face
   (vertex divergence values plus the vertex-vanishing face moments), the
   constant face moments of u_h n carry per-face constants solved from the
   signed cell-face balance sum_f s_Kf F_f = (v_h, e_d)_K, and the interior
   Hessian moments absorb the remaining volume terms; all other DOFs vanish.

The final verification is unconditional: div div u_h is compared with q_h as
an exact polynomial identity cell by cell, and the result is cross-checked
against the rank of the assembled div div matrix.
"""

from __future__ import annotations

from ..elements.tet import tet_vector_space
from ..mesh.assembly import assemble_global_space, operator_matrix
from ..mesh.complex import MeshComplex
from ..polycore.linalg import exact_rank, solve, solve_columns
from ..polycore.polynomial import Poly, monomials_total_degree
from ..polycore.spaces import scale_coeff_vector
from ..rational import Q
from ..tensorcalc.fields import TensorField
from ..tensorcalc.operators import div, div_div, grad
from .report import Timer, VerificationReport


def _broken_vector_basis(mesh: MeshComplex, deg: int):
    """Per-cell vector monomial fields and a flat coefficient indexing."""
    cell_spaces = []
    for c in range(mesh.n_cells):
        elem = mesh.element_geometry(c)
        cell_spaces.append(tet_vector_space(deg, elem))
    offsets = [0]
    for sp in cell_spaces:
        offsets.append(offsets[-1] + sp.dim)
    return cell_spaces, offsets


def auxiliary_hdiv_space(mesh: MeshComplex, deg: int):
    """Basis (broken coefficient vectors) of the vertex-continuous,
    normal-trace-continuous piecewise P_deg vector space."""
    cell_spaces, offsets = _broken_vector_basis(mesh, deg)
    total = offsets[-1]
    rows = []

    def new_row():
        rows.append([Q(0)] * total)
        return rows[-1]

    # vertex continuity between consecutive incident cells
    for vid, vk in enumerate(mesh.vertex_list):
        cells = sorted(set(mesh.vertex_cells[vid]))
        for a, b in zip(cells, cells[1:]):
            for comp in range(3):
                row = new_row()
                for cidx, sgn in ((a, Q(1)), (b, Q(-1))):
                    sp = cell_spaces[cidx]
                    for j, f in enumerate(sp.basis):
                        val = f.comp(comp).eval(vk)
                        if val:
                            row[offsets[cidx] + j] = sgn * val
    # normal-trace continuity across interior faces (polynomial identity)
    from ..polycore.geometry import TriFace

    for fid in mesh.interior_faces():
        fk = mesh.face_list[fid]
        a, b = sorted(mesh.face_cells[fid])
        tri = TriFace(*fk)
        n = mesh.face_normals[fk]
        index = {}
        face_rows = []
        for cidx, sgn in ((a, Q(1)), (b, Q(-1))):
            sp = cell_spaces[cidx]
            for j, f in enumerate(sp.basis):
                r = tri.restrict(f.vec_dot(n))
                for alpha, coef in r.terms.items():
                    ridx = index.get(alpha)
                    if ridx is None:
                        ridx = len(face_rows)
                        index[alpha] = ridx
                        face_rows.append(new_row())
                    face_rows[ridx][offsets[cidx] + j] += sgn * coef
    _rank, ns = exact_rank(rows, want_nullspace=True) if rows else (0, None)
    if ns is None:
        ns = [[Q(1) if i == j else Q(0) for j in range(total)] for i in range(total)]
    return cell_spaces, offsets, [scale_coeff_vector(v) for v in ns]


def _cell_fields_from_broken(coeffs, cell_spaces, offsets):
    out = []
    for c, sp in enumerate(cell_spaces):
        seg = coeffs[offsets[c] : offsets[c + 1]]
        out.append(sp.field_from_coeffs(seg))
    return out


def check_divdiv_surjectivity_constructive(mesh: MeshComplex, k: int, mesh_label: str = "") -> VerificationReport:
    if mesh.kind != "tet":
        raise ValueError("constructive surjectivity runs on tetrahedral meshes")
    if k < 3:
        raise ValueError("needs k >= 3")
    label = mesh_label or f"{mesh.n_cells}cells"
    rep = VerificationReport(f"divdiv-surjectivity:{label}:k={k}")
    with Timer() as t:
        S = assemble_global_space(mesh, "Sigma", k)
        Qs = assemble_global_space(mesh, "Q", k)
        rep.dims = {"Sigma": S.dim, "Q": Qs.dim}

        # auxiliary solve: div v = q for every broken monomial basis field q
        cell_spaces, offsets, aux_basis = auxiliary_hdiv_space(mesh, k - 1)
        scalar_monos = monomials_total_degree(k - 2, 3)
        q_fields = []  # (cell, monomial field)
        for c in range(mesh.n_cells):
            elem_v0 = S.cell_defs[c].cell.v0
            for alpha in scalar_monos:
                mono = Poly.const(1, 3)
                for i, e in enumerate(alpha):
                    if e:
                        mono = mono * (Poly.variable(i) - elem_v0[i]) ** e
                q_fields.append((c, TensorField.scalar(mono)))
        # divergence matrix over the auxiliary basis, rows indexed by
        # (cell, scalar monomial) coefficients of the per-cell divergence
        row_index = {}
        rows = []
        ncols = len(aux_basis)

        def row_of(key):
            r = row_index.get(key)
            if r is None:
                r = len(rows)
                row_index[key] = r
                rows.append([Q(0)] * ncols)
            return rows[r]

        aux_fields = [
            _cell_fields_from_broken(v, cell_spaces, offsets) for v in aux_basis
        ]
        for j, fields in enumerate(aux_fields):
            for c, f in enumerate(fields):
                d = div(f).p
                for alpha, coef in d.terms.items():
                    row_of((c, alpha))[j] = coef
        nrhs = len(q_fields)
        B = [[Q(0)] * nrhs for _ in range(len(rows))]
        for col, (c, qf) in enumerate(q_fields):
            for alpha, coef in qf.p.terms.items():
                B[row_index[(c, alpha)]][col] = coef
        X, flags = solve_columns(rows, B)
        rep.require(all(flags), "auxiliary divergence solve inconsistent")
        if not all(flags):
            rep.millis = t.millis
            return rep

        # signed cell-face balance matrix for the constant face moments
        face_ids = list(range(mesh.n_faces))
        balance = [[Q(0)] * len(face_ids) for _ in range(mesh.n_cells)]
        for c in range(mesh.n_cells):
            for fid in mesh.cell_faces[c]:
                fk = mesh.face_list[fid]
                balance[c][fid] = Q(mesh.outward_sign(c, fk))

        sig_defs = S.cell_defs
        failures = 0
        for col, (qcell, qf) in enumerate(q_fields):
            vcoeffs = [
                sum((X[i][col] * aux_basis[i][j] for i in range(ncols) if X[i][col]), Q(0))
                for j in range(offsets[-1])
            ]
            v_fields = _cell_fields_from_broken(vcoeffs, cell_spaces, offsets)
            ok = _construct_and_verify(mesh, S, sig_defs, v_fields, qcell, qf, balance, rep, col)
            if not ok:
                failures += 1
        rep.dims["q_basis"] = nrhs
        rep.require(failures == 0, ("constructions failed", failures))

        A3 = operator_matrix("div_div", S, Qs)
        r3 = A3.rank()
        rep.ranks = {"div_div": r3}
        rep.require(r3 == Qs.dim, ("rank cross-check", r3, Qs.dim))
    rep.millis = t.millis
    return rep


def _construct_and_verify(mesh, S, sig_defs, v_fields, qcell, qf, balance, rep, col) -> bool:
    # residual of div v = q (defensive; the solver already certified it)
    for c in range(mesh.n_cells):
        target = qf.p if c == qcell else Poly.zero(3)
        if not (div(v_fields[c]).p - target).is_zero():
            return not rep.fail(f"q {col}: auxiliary divergence mismatch on cell {c}")

    # per-face constants from the signed balance
    rhs = [
        [sig_defs[c].cell.cell.integrate(v_fields[c].comp(d)) for c in range(mesh.n_cells)]
        for d in range(3)
    ]
    consts = []
    for d in range(3):
        sol = solve(balance, rhs[d])
        if sol is None:
            return not rep.fail(f"q {col}: face-constant system inconsistent")
        consts.append(sol)

    gvec = [Q(0)] * S.dim
    # vertex divergence values and face moments, taken from the lowest
    # incident cell and verified against the others
    for gid, key in enumerate(S.dof_keys):
        kind, ekey, tag, sub = key
        if tag == "sig-v-div":
            cells = S.cells_of_gid(gid)
            vals = [v_fields[c].comp(sub[0]).eval(ekey) for c in cells]
            if any(v != vals[0] for v in vals):
                return not rep.fail(f"q {col}: auxiliary field not vertex-continuous")
            gvec[gid] = vals[0]
        elif tag == "sig-f-dn":
            cells = S.cells_of_gid(gid)
            vals = []
            for c in cells:
                d = sig_defs[c]
                dof = d.dofs[S.local_to_global[c].index(gid)]
                tri = dof.entity
                weight = dof.parts[0][1]
                n = _face_normal_of_dof(mesh, ekey)
                integrand = tri.restrict(v_fields[c].vec_dot(n)) * weight
                vals.append(tri.integrate_ref2(integrand))
            if any(v != vals[0] for v in vals):
                return not rep.fail(f"q {col}: normal trace not single-valued")
            gvec[gid] = vals[0]
        elif tag == "sig-f-n" and sub[0] == "c":
            fid = mesh.face_ids[ekey]
            gvec[gid] = consts[sub[1]][fid]
    # interior Hessian moments absorb the volume terms
    for c in range(mesh.n_cells):
        d = sig_defs[c]
        elem = d.cell
        for loc, dof in enumerate(d.dofs):
            if dof.tag != "sig-c-hess":
                continue
            q = dof.aux  # the generating scalar, orthogonal to affine functions
            gq = grad(q)
            val = -elem.cell.integrate(v_fields[c].frobenius(gq))
            for fid in mesh.cell_faces[c]:
                fk = mesh.face_list[fid]
                s = mesh.outward_sign(c, fk)
                from ..polycore.geometry import TriFace

                tri = TriFace(*fk)
                for dd in range(3):
                    cmean = tri.integrate_ref(gq.comp(dd)) * 2
                    if cmean:
                        val += s * cmean * consts[dd][fid]
            gvec[S.local_to_global[c][loc]] = val

    u_fields = S.reconstruct(gvec)
    for c in range(mesh.n_cells):
        target = qf.p if c == qcell else Poly.zero(3)
        if not (div_div(u_fields[c]).p - target).is_zero():
            return not rep.fail(f"q {col}: div div u != q on cell {c}")
    return True


def _face_normal_of_dof(mesh, face_key):
    return mesh.face_normals[face_key]
