"""Assembled complexes on meshes: exactness by rank
=================================================

Shared degrees of freedom glue per-cell elements into global spaces; the
three differential operators become exact rational matrices between them.
Exactness of
the assembled sequence is four rank identities plus the alternating
dimension sum, all certified here on a one-cube mesh (degree 3) and a
single-tetrahedron mesh (degree 4).
"""

from divdivfem.mesh.assembly import assemble_global_space, operator_matrix
from divdivfem.mesh.complex import build_box_mesh, single_tet_mesh
from divdivfem.polycore.linalg import is_zero_matrix, matmul


def run(mesh, k, label):
    qdeg = k if mesh.kind == "tet" else k - 2
    V = assemble_global_space(mesh, "V", k)
    U = assemble_global_space(mesh, "U", k)
    S = assemble_global_space(mesh, "Sigma", k)
    Qs = assemble_global_space(mesh, "Q", qdeg)
    print(f"{label}: entities {mesh.entity_counts()}, dims {V.dim} -> {U.dim} -> {S.dim} -> {Qs.dim}")
    A1 = operator_matrix("dev_grad", V, U)
    A2 = operator_matrix("sym_curl", U, S)
    A3 = operator_matrix("div_div", S, Qs)
    print("  compositions vanish:",
          is_zero_matrix(matmul(A2.matrix, A1.matrix)),
          is_zero_matrix(matmul(A3.matrix, A2.matrix)))
    r1, r2, r3 = A1.rank(), A2.rank(), A3.rank()
    print(f"  ranks {r1}, {r2}, {r3}")
    print("  head kernel is four-dimensional:", r1 == V.dim - 4)
    print("  middle slots exact:", r2 == U.dim - r1 and r2 == S.dim - Qs.dim)
    print("  tail onto:", r3 == Qs.dim)
    print("  alternating sum:", V.dim - U.dim + S.dim - Qs.dim, "(= 4)")


run(build_box_mesh(1, 1, 1), 3, "one-cube mesh, k=3")
print()
run(single_tet_mesh(), 4, "single tetrahedron, k=4")
