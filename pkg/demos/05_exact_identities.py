"""Pointwise and integral identities, exactly
===========================================

The continuity devices of the matrix-valued elements rest on a handful of
algebraic identities: the symmetric curl differs from the row curl by the
skew matrix of the column divergence, its row divergence is half the curl of
the column divergence, and two integration-by-parts formulas tie the divdiv
pairing to face and edge terms.  All of them hold as exact rational
identities; residuals here are exact zeros, not small numbers.
"""

from divdivfem.randgen import RatRandom
from divdivfem.rational import Q
from divdivfem.tensorcalc.green import verify_green_identities
from divdivfem.tensorcalc.operators import (
    cross_vector,
    curl,
    dev_grad,
    div,
    div_col,
    div_div,
    grad,
    mspn,
    sym_curl,
)

rng = RatRandom(77)

print("compositions of the complex maps on random cubic fields:")
v = rng.vector_field(3)
u = rng.traceless_field(3)
print("  sym_curl(dev_grad v) == 0:", sym_curl(dev_grad(v)).is_zero())
print("  div_div(sym_curl u) == 0:", div_div(sym_curl(u)).p.is_zero())

print("\ntrace identities of the symmetric curl (u traceless):")
sc = sym_curl(u)
print("  sym_curl u == curl u - mspn(div_col u)/2:",
      (sc - (curl(u) - mspn(div_col(u)) * Q(1, 2))).is_zero())
print("  div(sym_curl u) == curl(div_col u)/2:",
      (div(sc) - curl(div_col(u)) * Q(1, 2)).is_zero())
n = rng.vector()
print("  (sym_curl u) n == (curl u) n - (div_col u) x n / 2:",
      (sc.dot_vector(n) - curl(u).dot_vector(n) + cross_vector(div_col(u), n) * Q(1, 2)).is_zero())

print("\nderived identities of the deviatoric gradient:")
w = rng.vector_field(4)
print("  3 curl(dev_grad w) == mspn(grad(div w)):",
      (curl(dev_grad(w)) * 3 - mspn(grad(div(w)))).is_zero())
print("  div_col(dev_grad w) == (2/3) grad(div w):",
      (div_col(dev_grad(w)) - grad(div(w)) * Q(2, 3)).is_zero())

print("\nintegration-by-parts identities on random rational tetrahedra:")
for trial in range(3):
    K = rng.tet(2)
    sigma = rng.symmetric_field(2)
    q = rng.scalar_field(3)
    res_bracket, res_divdiv = verify_green_identities(sigma, q, K)
    print(f"  trial {trial}: residuals ({res_bracket}, {res_divdiv})")
