"""Meshes, global spaces, and assembled operator matrices."""

import pytest

from divdivfem.mesh.assembly import assemble_global_space, operator_matrix
from divdivfem.mesh.complex import (
    MeshComplex,
    build_box_mesh,
    build_tet_mesh,
    permute_mesh,
    scale_mesh,
    single_tet_mesh,
    two_tet_mesh,
)
from divdivfem.polycore.geometry import _dot
from divdivfem.polycore.linalg import is_zero_matrix, matmul, matvec
from divdivfem.polycore.polynomial import Poly
from divdivfem.randgen import RatRandom
from divdivfem.rational import Q
from divdivfem.tensorcalc.fields import TensorField
from divdivfem.tensorcalc.operators import dev_grad

RNG = RatRandom(20240809)


def test_box_mesh_counts_and_euler():
    for dims, expect in ((
        (1, 1, 1), (8, 12, 6, 1)), ((2, 1, 1), (12, 20, 11, 2)), ((2, 2, 2), (27, 54, 36, 8))):
        m = build_box_mesh(*dims)
        assert m.entity_counts() == expect
        assert m.euler_characteristic() == 1
    with pytest.raises(ValueError):
        build_box_mesh(0, 1, 1)


def test_tet_mesh_counts_and_euler():
    m = build_tet_mesh(1, 1, 1)
    assert m.entity_counts() == (8, 19, 18, 6)
    assert m.euler_characteristic() == 1
    assert len(m.interior_faces()) == 6 and len(m.boundary_faces()) == 12
    st = single_tet_mesh()
    assert st.entity_counts() == (4, 6, 4, 1)
    tt = two_tet_mesh()
    assert tt.entity_counts() == (5, 9, 7, 2)
    big = build_tet_mesh(2, 1, 1)
    assert big.euler_characteristic() == 1
    assert all(len(cells) in (1, 2) for cells in big.face_cells)


def test_kuhn_faces_align_across_cubes():
    # shared faces between the two cubes appear exactly twice, so the split
    # is conforming
    m = build_tet_mesh(2, 1, 1)
    interior = m.interior_faces()
    plane = [f for f in interior if all(p[0] == 1 for p in m.face_list[f])]
    assert len(plane) == 2  # the square interface is split into 2 triangles


def test_mesh_json_roundtrip():
    m = build_tet_mesh(1, 1, 1)
    m2 = MeshComplex.from_json(m.to_json())
    assert m2.entity_counts() == m.entity_counts()
    assert m2.face_normals == m.face_normals
    b = build_box_mesh(2, 1, 1)
    b2 = MeshComplex.from_json(b.to_json())
    assert b2.entity_counts() == b.entity_counts()


def test_global_frames_shared_and_oriented():
    m = two_tet_mesh()
    fk = m.face_list[m.interior_faces()[0]]
    n = m.face_normals[fk]
    # the normal points out of the lower-id cell
    assert m.outward_sign(0, fk) == 1 and m.outward_sign(1, fk) == -1
    # boundary faces point outward
    for fid in m.boundary_faces():
        fk2 = m.face_list[fid]
        c = m.face_cells[fid][0]
        assert m.outward_sign(c, fk2) == 1


def test_global_dims_box():
    k = 3
    for dims in ((1, 1, 1), (2, 1, 1)):
        m = build_box_mesh(*dims)
        nv, ne, nf, nc = m.entity_counts()
        expect = {
            "V": 6 * nv + (5 * k - 11) * ne + 2 * (k - 2) * (2 * k - 5) * nf + 3 * (k - 3) * (k - 2) ** 2 * nc,
            "U": 2 * nv + (6 * k - 8) * ne + (8 * k * k - 28 * k + 22) * nf
            + (2 * (k - 2) ** 3 + 6 * (k - 3) * (k - 1) * (k - 2)) * nc,
            "Sigma": (k - 1) * ne + (4 * k * k - 10 * k + 6) * nf
            + (3 * (k - 1) ** 2 * (k - 3) + 3 * (k - 2) ** 2 * (k - 1)) * nc,
            "Q": (k - 1) ** 3 * nc,
        }
        for fam, d in expect.items():
            space = assemble_global_space(m, fam, k if fam != "Q" else k - 2)
            assert space.dim == d, (dims, fam)


def test_global_dims_tet_match_entity_formulas():
    k = 4
    for mesh in (single_tet_mesh(), two_tet_mesh()):
        nv, ne, nf, nc = mesh.entity_counts()
        expect = {
            "V": 36 * nv + (11 * k - 29) * ne + (2 * k * k - 11 * k + 15) * nf + (k**3 - 4 * k * k + 3 * k) // 2 * nc,
            "U": 41 * nv + (16 * k - 30) * ne + (4 * k * k - 15 * k + 11) * nf
            + (4 * k**3 - 12 * k * k - 4 * k + 12) // 3 * nc,
            "Sigma": 9 * nv + (5 * k - 5) * ne + (2 * k * k - 4 * k) * nf + (k**3 - 2 * k * k - 3 * k) * nc,
            "Q": (k**3 - k) // 6 * nc,
        }
        for fam, d in expect.items():
            space = assemble_global_space(mesh, fam, k)
            assert space.dim == d, fam


def test_entity_dof_count_split():
    m = single_tet_mesh()
    s = assemble_global_space(m, "Sigma", 4)
    counts = s.entity_dof_counts()
    assert counts["vertex"] == 36 and counts["edge"] == 90
    assert counts["face"] == 64 and counts["cell"] == 20


def test_interpolate_global_fields():
    m = build_box_mesh(1, 1, 1)
    k = 3
    V = assemble_global_space(m, "V", k)
    x, y, z = (Poly.variable(i) for i in range(3))
    rt = TensorField.vector([x + 1, y - 2, z])
    assert V.interpolate_reproduces(rt)
    U = assemble_global_space(m, "U", k)
    v = TensorField.vector([x * y, y * z, x + z])
    assert U.interpolate_reproduces(dev_grad(v))
    # a local shape function on one cell reproduces as well
    f = V.cell_defs[0].space.field_from_coeffs(RNG.coeffs(V.cell_defs[0].dim))
    assert V.interpolate_reproduces([f])


def test_interpolate_detects_nonconforming():
    m = two_tet_mesh()
    k = 4
    V = assemble_global_space(m, "V", k)
    f0 = V.cell_defs[0].space.field_from_coeffs(RNG.coeffs(V.cell_defs[0].dim))
    zero = TensorField.zero("vector")
    with pytest.raises(ValueError):
        V.interpolate([f0, zero])


def test_operator_matrix_shapes_and_products_box():
    m = build_box_mesh(1, 1, 1)
    k = 3
    V = assemble_global_space(m, "V", k)
    U = assemble_global_space(m, "U", k)
    S = assemble_global_space(m, "Sigma", k)
    Qs = assemble_global_space(m, "Q", k - 2)
    A1 = operator_matrix("dev_grad", V, U)
    A2 = operator_matrix("sym_curl", U, S)
    A3 = operator_matrix("div_div", S, Qs)
    assert A1.shape() == (U.dim, V.dim) == (198, 108)
    assert A2.shape() == (S.dim, U.dim) == (102, 198)
    assert A3.shape() == (Qs.dim, S.dim) == (8, 102)
    assert is_zero_matrix(matmul(A2.matrix, A1.matrix))
    assert is_zero_matrix(matmul(A3.matrix, A2.matrix))
    with pytest.raises(ValueError):
        operator_matrix("dev_grad", U, S)
    # interpolants of the four lowest-order fields lie in the kernel
    x, y, z = (Poly.variable(i) for i in range(3))
    for f in (TensorField.vector([Poly.const(1), Poly.zero(3), Poly.zero(3)]),
              TensorField.vector([x, y, z])):
        vec = V.interpolate(f)
        assert all(e == 0 for e in matvec(A1.matrix, vec))


def test_scaling_preserves_verdicts():
    from divdivfem.verify.checks import check_exactness_global

    m = scale_mesh(build_box_mesh(1, 1, 1), Q(3, 2))
    rep = check_exactness_global(m, 3, "scaled")
    assert rep.passed


def test_permutation_preserves_verdicts():
    from divdivfem.verify.checks import check_exactness_global

    m = permute_mesh(build_box_mesh(2, 1, 1), seed=5)
    assert m.euler_characteristic() == 1
    rep = check_exactness_global(m, 3, "permuted")
    assert rep.passed


def test_orientation_flip_preserves_verdicts():
    from divdivfem.verify.checks import check_exactness_global

    m = build_box_mesh(1, 1, 1, flip_orientation=True)
    rep = check_exactness_global(m, 3, "flipped")
    assert rep.passed
    mt = MeshComplex("tet", [[0, 1, 2, 3]], [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], flip_orientation=True)
    # flipping reverses every face normal
    base = single_tet_mesh()
    for fk, n in mt.face_normals.items():
        assert tuple(-c for c in n) == base.face_normals[fk]


def test_operator_matrix_coordinate_export():
    m = build_box_mesh(1, 1, 1)
    S = assemble_global_space(m, "Sigma", 3)
    Qs = assemble_global_space(m, "Q", 1)
    A3 = operator_matrix("div_div", S, Qs)
    text = A3.to_coordinate_text()
    head, *lines = text.strip().splitlines()
    rows, cols, nnz = (int(x) for x in head.split())
    assert (rows, cols) == (8, 102) and nnz == len(lines)
    i, j, v = lines[0].split()
    assert A3.matrix[int(i)][int(j)] == Q(v)
