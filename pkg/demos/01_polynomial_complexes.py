"""Polynomial complexes under exact rational arithmetic
=====================================================

Two polynomial sequences drive every element construction in this package:
a gradient/curl/divergence sequence on componentwise-degree spaces, and the
deviatoric-gradient / symmetric-curl / divdiv sequence connecting vector,
traceless-matrix, and symmetric-matrix polynomial spaces.  Exactness of both
is a statement about kernels and images of finite linear maps, so it can be
certified with exact ranks -- which is what this script does.
"""

from divdivfem.elements.box import CuboidElement, derham_general_spaces, shape_space_box
from divdivfem.polycore.spaces import operator_rank
from divdivfem.tensorcalc.operators import curl, dev_grad, div, div_div, grad, sym_curl

K = CuboidElement((0, 0, 0), (1, 1, 1))

# -- the scalar-to-scalar sequence at componentwise degrees (2,2,2) ---------
head, M, V, tail = derham_general_spaces((2, 2, 2), K)
print("gradient/curl/divergence sequence, degrees (2,2,2):")
print("  dims:", head.dim, "->", M.dim, "->", V.dim, "->", tail.dim)

r_grad = operator_rank(grad, head)
r_curl = operator_rank(curl, M)
r_div = operator_rank(div, V)
print("  rank(grad) =", r_grad, " (kernel = constants:", head.dim - r_grad == 1, ")")
print("  rank(curl) =", r_curl, " (kernel = gradients:", M.dim - r_curl == r_grad, ")")
print("  rank(div)  =", r_div, " (kernel = curls:", V.dim - r_div == r_curl, ")")
print("  divergence onto the tail:", r_div == tail.dim)

# -- the matrix-valued sequence at degree k = 3 ------------------------------
k = 3
Vk = shape_space_box("V", k, K)
Uk = shape_space_box("U", k, K)
Sk = shape_space_box("Sigma", k, K)
Qk = shape_space_box("Q", k - 2, K)
print("\nmatrix-valued sequence, degree", k, ":")
print("  dims:", Vk.dim, "->", Uk.dim, "->", Sk.dim, "->", Qk.dim)

r1 = operator_rank(dev_grad, Vk)
r2 = operator_rank(sym_curl, Uk)
r3 = operator_rank(div_div, Sk)
print("  rank(dev_grad) =", r1, " kernel dim =", Vk.dim - r1, "(the a*x+b fields)")
print("  rank(sym_curl) =", r2, " = 5k^3-3k^2-6k+4 =", 5 * k**3 - 3 * k**2 - 6 * k + 4)
print("  rank(div_div)  =", r3, " = dim of the scalar tail =", Qk.dim)
print("  exact at the middle slots:", Uk.dim - r2 == r1 and Sk.dim - r3 == r2)
