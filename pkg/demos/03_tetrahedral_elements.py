"""Tetrahedral elements and their constrained auxiliary spaces
============================================================

The symmetric family on a tetrahedron draws its interior moments from two
constrained spaces: the rigid-motion-free curls of tangential-trace-free
vector polynomials, and the double-curl images of symmetric fields whose
projected face operators vanish.  Both are built as certified exact
nullspaces; their dimensions land exactly on the closed-form counts.
"""

from divdivfem.elements.tet import (
    TetElement,
    element_def,
    m_image_dim,
    space_M_image,
    space_Pdiv_bubble,
    space_W,
    space_W_quotient,
    tet_family_dim,
    w_quotient_dim,
)
from divdivfem.randgen import RatRandom
from divdivfem.tensorcalc.operators import div

ref = TetElement([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])

print("tangential-trace-free vector spaces on the reference cell:")
for m in (1, 2, 3, 4):
    W = space_W(m, ref)
    print(f"  degree {m}: dim {W.dim} (parent {W.parent.dim}, constraint rank {W.constraint_rank})")

print("\nrigid-motion-free curl spaces:")
for k in (4, 5):
    Wq = space_W_quotient(k, ref)
    print(f"  k={k}: dim {Wq.dim} = closed form {w_quotient_dim(k)}")

print("\ndouble-curl image spaces (symmetric, divergence-free):")
for k in (4, 5):
    Mi = space_M_image(k, ref)
    div_free = all(div(w).is_zero() for w in Mi.basis)
    print(f"  k={k}: dim {Mi.dim} = closed form {m_image_dim(k)}; divergence-free: {div_free}")

P = space_Pdiv_bubble(4, ref)
print("\nvector bubbles with face-vanishing divergence: dim", P.dim)

print("\nunisolvence on the reference tetrahedron:")
for fam, k in (("Sigma", 3), ("Sigma", 4), ("U", 4), ("V", 4)):
    d = element_def(fam, k, ref)
    cert = d.unisolvence()
    print(f"  {fam} k={k}: {len(d.dofs)} DOFs = dim {tet_family_dim(fam, k)};"
          f" nonsingular: {cert['det_nonzero']}")

rng = RatRandom(12)
K = TetElement(rng.tet().vertices)
cert = element_def("Sigma", 3, K).unisolvence()
print("random rational tetrahedron, symmetric family k=3:", cert["det_nonzero"])
