"""Exact arithmetic, polynomials, integration, and linear algebra."""

import random

import pytest

from divdivfem.polycore.geometry import (
    BoxCell,
    BoxEdge,
    BoxFace,
    Segment,
    TetCell,
    TriFace,
    integrate_monomial_box,
    integrate_monomial_simplex,
    integrate_on_entity,
)
from divdivfem.polycore import linalg
from divdivfem.polycore.polynomial import Poly, monomials_box_degrees, monomials_total_degree
from divdivfem.polycore.spaces import span
from divdivfem.rational import Q, rat_str, parse_rat


def test_rational_invariants():
    x = Q(6, -4)
    assert x.numerator == -3 and x.denominator == 2
    assert rat_str(x) == "-3/2" and parse_rat("-3/2") == x
    assert Q(1, 3) + Q(1, 6) == Q(1, 2)


def test_poly_arithmetic_and_degrees():
    x, y, z = (Poly.variable(i) for i in range(3))
    p = (x + y) * (x - y) - x * x + y * y
    assert p.is_zero()
    q = x**2 * y + z**3
    assert q.degree() == 3 and q.degree_in(0) == 2 and q.degree_in(2) == 3
    assert q.diff(0) == 2 * x * y
    assert Poly.const(5).diff(1).is_zero()
    assert (x**3 * z**2).diff(2) == 2 * x**3 * z


def test_poly_eval_subs_translate():
    x, y, z = (Poly.variable(i) for i in range(3))
    p = x * y + z
    assert p.eval((Q(1, 2), Q(2), Q(-1))) == 0
    s = p.subs([y, x, z])  # swap variables
    assert s == y * x + z
    t = p.translate((1, 0, 0))
    assert t == (x + 1) * y + z


def test_monomial_enumeration_graded_lex():
    monos = monomials_total_degree(2, 3)
    assert monos[0] == (0, 0, 0)
    assert len(monos) == 10
    degrees = [sum(a) for a in monos]
    assert degrees == sorted(degrees)
    assert monomials_box_degrees((1, -1, 0)) == []


# --- integration ------------------------------------------------------------


def test_integrate_monomial_box_examples():
    unit = ((0, 0, 0), (1, 1, 1))
    assert integrate_monomial_box((0, 0, 0), *unit) == 1
    assert integrate_monomial_box((1, 1, 1), *unit) == Q(1, 8)
    assert integrate_monomial_box((2, 0, 3), *unit) == Q(1, 12)


def test_integrate_monomial_box_against_antiderivative_oracle():
    # independent oracle: symbolic antiderivative evaluated at the endpoints
    rng = random.Random(7)
    for _ in range(20):
        alpha = tuple(rng.randint(0, 4) for _ in range(3))
        lo = tuple(Q(rng.randint(-3, 1)) for _ in range(3))
        hi = tuple(l + rng.randint(1, 3) for l in lo)
        expected = Q(1)
        for e, a, b in zip(alpha, lo, hi):
            anti = Poly.monomial((e,), nvars=1).antideriv(0)
            expected *= anti.eval((b,)) - anti.eval((a,))
        assert integrate_monomial_box(alpha, lo, hi) == expected


def test_integrate_monomial_simplex_examples():
    assert integrate_monomial_simplex((0, 0, 0)) == Q(1, 6)
    assert integrate_monomial_simplex((1, 0, 0)) == Q(1, 24)
    assert integrate_monomial_simplex((1, 1, 0)) == Q(1, 120)


def test_integrate_simplex_against_iterated_antiderivative_oracle():
    # brute force: integrate z, then y, then x with exact antiderivatives
    for alpha in [(1, 0, 0), (2, 1, 0), (1, 1, 1), (3, 0, 2)]:
        x, y = Poly.variable(0, 2), Poly.variable(1, 2)
        inner = Poly.monomial(alpha[2:], nvars=1).antideriv(0)
        # evaluate z-antiderivative at z = 1 - x - y as a 2-variable polynomial
        zval = inner.subs([Poly.const(1, 2) - x - y])
        poly2 = Poly.monomial(alpha[:2], nvars=2) * zval
        level1 = poly2.antideriv(1)
        xonly = level1.subs([Poly.variable(0, 1), Poly.const(1, 1) - Poly.variable(0, 1)]) - level1.subs(
            [Poly.variable(0, 1), Poly.const(0, 1)]
        )
        total = xonly.antideriv(0)
        expected = total.eval((Q(1),)) - total.eval((Q(0),))
        assert integrate_monomial_simplex(alpha) == expected


def test_cube_equals_six_tet_decomposition():
    # Kuhn decomposition of the unit cube; exact agreement for all |alpha|<=6
    perms = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))
    tets = []
    for perm in perms:
        pts = [(0, 0, 0)]
        cur = [0, 0, 0]
        for ax in perm:
            cur = list(cur)
            cur[ax] += 1
            pts.append(tuple(cur))
        tets.append(TetCell(pts))
    for alpha in monomials_total_degree(6, 3):
        box_val = integrate_monomial_box(alpha, (0, 0, 0), (1, 1, 1))
        tet_val = sum((t.integrate(Poly.monomial(alpha)) for t in tets), Q(0))
        assert box_val == tet_val


def test_entity_integrals_and_errors():
    face = BoxFace(2, 0, (0, 0, 0), (1, 1, 0))
    assert integrate_on_entity(Poly.const(1), face) == 1
    assert integrate_on_entity(Poly.variable(0) * Poly.variable(1), face) == Q(1, 4)
    edge = BoxEdge(0, (0, 0, 0), (1, 0, 0))
    assert integrate_on_entity(Poly.variable(0), edge) == Q(1, 2)
    with pytest.raises(ValueError):
        BoxFace(2, 0, (0, 0, 0), (0, 1, 0))
    with pytest.raises(ValueError):
        TriFace((0, 0, 0), (1, 0, 0), (2, 0, 0))
    with pytest.raises(ValueError):
        Segment((1, 1, 1), (1, 1, 1))
    with pytest.raises(ValueError):
        TetCell([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])


def test_fundamental_theorem_on_edges():
    # the tangential derivative integrates to the endpoint difference
    e = BoxEdge(1, (2, Q(1, 2), 3), (2, Q(7, 2), 3))
    p = Poly.variable(0) * Poly.variable(1) ** 3 + Poly.variable(1)
    val = integrate_on_entity(p.diff(1), e)
    assert val == p.eval((2, Q(7, 2), 3)) - p.eval((2, Q(1, 2), 3))
    seg = Segment((0, 0, 0), (1, 2, 3))
    q = Poly.variable(0) + Poly.variable(2) ** 2
    restricted = seg.restrict(q)
    assert seg.integrate_ref2(restricted.diff(0)) == q.eval((1, 2, 3)) - q.eval((0, 0, 0))


def test_triangle_metric_and_reference_integral():
    tri = TriFace((0, 0, 0), (1, 0, 0), (0, 1, 0))
    assert tri.metric2 == 1
    assert tri.integrate_ref(Poly.const(1)) == Q(1, 2)
    s, t = tri.param_lift()
    assert s == Poly.variable(0) and t == Poly.variable(1)


# --- linear algebra -----------------------------------------------------------


def test_exact_rank_examples():
    eye = linalg.identity(5)
    assert linalg.exact_rank(eye)[0] == 5
    zero = [[Q(0)] * 4 for _ in range(3)]
    rank, ns = linalg.exact_rank(zero, want_nullspace=True)
    assert rank == 0 and len(ns) == 4
    vand = [[Q(i) ** j for j in range(4)] for i in range(4)]
    assert linalg.exact_rank(vand)[0] == 4
    # Vandermonde determinant: product of node differences
    expected = Q(1)
    for i in range(4):
        for j in range(i):
            expected *= Q(i - j)
    assert linalg.det(vand) == expected


def test_rank_nullity_and_verified_nullspace():
    rng = random.Random(11)
    for _ in range(8):
        n, m = rng.randint(2, 7), rng.randint(2, 7)
        M = [[Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(m)] for _ in range(n)]
        rank, ns = linalg.exact_rank(M, want_nullspace=True)
        assert rank + len(ns) == m
        for v in ns:
            assert all(e == 0 for e in linalg.matvec(M, v))


def test_solve_and_inverse():
    rng = random.Random(13)
    n = 6
    M = [[Q(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    while linalg.det(M) == 0:
        M = [[Q(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    b = [Q(rng.randint(-3, 3)) for _ in range(n)]
    x = linalg.solve(M, b)
    assert linalg.matvec(M, x) == b
    X = linalg.inv(M)
    assert linalg.matmul(M, X) == linalg.identity(n)
    assert X == linalg.inv_jordan(M)


def test_inverse_padic_agrees_with_jordan_midsize():
    rng = random.Random(17)
    n = 30  # above the small-matrix cutoff, so the lifting path runs
    M = [[Q(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
    X = linalg.inv(M)
    assert linalg.matmul(M, X) == linalg.identity(n)


def test_solve_detects_inconsistency():
    A = [[Q(1), Q(1)], [Q(2), Q(2)]]
    assert linalg.solve(A, [Q(1), Q(3)]) is None
    assert linalg.solve(A, [Q(1), Q(2)]) is not None


def test_certify_nonsingular_and_singular():
    assert linalg.certify_nonsingular(linalg.identity(8))
    S = [[Q(1), Q(2)], [Q(2), Q(4)]]
    assert not linalg.certify_nonsingular(S)


# --- spans ---------------------------------------------------------------------


def test_span_dimensions():
    assert span(("Q", 2)).dim == 27
    assert span(("P", 3)).dim == 20
    assert span(("Pbox", (2, 1, 0))).dim == 6
    assert span(("P", -1)).dim == 0
    assert span(("Q", 2)).verify_independent()
