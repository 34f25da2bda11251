"""Acceptance suite: one test per acceptance criterion.

Every criterion is checked at its exact value (no tolerances anywhere: all
quantities are rationals) and against its stated wall-clock budget.  Each
test prints one pass/fail line; run with ``pytest -s tests/test_acceptance.py``
to see them live.
"""

import time

import pytest

from divdivfem.elements.box import CuboidElement, element_def as box_def, shape_space_box
from divdivfem.elements.tet import (
    TetElement,
    element_def as tet_def,
    m_image_dim,
    space_M_image,
    space_W_quotient,
    w_quotient_dim,
)
from divdivfem.mesh.complex import build_box_mesh, single_tet_mesh, two_tet_mesh
from divdivfem.randgen import RatRandom
from divdivfem.verify.checks import (
    check_exactness_global,
    check_identity_suite,
    check_polynomial_derham,
    check_polynomial_divdiv,
)
from divdivfem.verify.surjectivity import check_divdiv_surjectivity_constructive

REF_TET = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]


def _report(name, ok, t0, budget):
    elapsed = time.time() - t0
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s, budget {budget}s)")
    assert ok, name
    assert elapsed < budget, f"{name} exceeded its runtime budget: {elapsed:.1f}s"


def test_criterion_1_dimension_tables():
    t0 = time.time()
    expected = {
        "Sigma": {3: 102, 4: 279, 5: 588},
        "U": {3: 198, 4: 488, 5: 970},
        "V": {3: 108, 4: 240, 5: 450},
    }
    K = CuboidElement((0, 0, 0), (1, 1, 1))
    ok = True
    for fam, table in expected.items():
        for k, want in table.items():
            got = shape_space_box(fam, k, K).dim
            ok = ok and got == want
    _report("1 dimension tables (box k=3,4,5)", ok, t0, 10)


def test_criterion_2_unisolvence():
    t0 = time.time()
    rng = RatRandom(20240811)
    ok = True
    unit = CuboidElement((0, 0, 0), (1, 1, 1))
    lo, hi = rng.cuboid_corners()
    rand_box = CuboidElement(lo, hi)
    for K in (unit, rand_box):
        for fam in ("Sigma", "U", "V"):
            for k in (3, 4):
                cert = box_def(fam, k, K).unisolvence()
                ok = ok and cert["square"] and cert["det_nonzero"]
    ref = TetElement(REF_TET)
    rand_tet = TetElement(rng.tet().vertices)
    for K in (ref, rand_tet):
        for fam, ks in (("Sigma", (3, 4)), ("U", (4,)), ("V", (4,))):
            for k in ks:
                cert = tet_def(fam, k, K).unisolvence()
                ok = ok and cert["square"] and cert["det_nonzero"]
    _report("2 unisolvence (box k=3,4; tet Sigma 3,4 / U,V 4; unit+random)", ok, t0, 900)


def test_criterion_3_polynomial_complexes():
    t0 = time.time()
    ok = True
    for k in (3, 4):
        ok = ok and check_polynomial_derham(k).passed
    for degs in ((1, 1, 1), (2, 1, 0)):
        ok = ok and check_polynomial_derham(degrees=degs).passed
    for k, sc_dim in ((3, 94), (4, 252)):
        rep = check_polynomial_divdiv(k)
        ok = ok and rep.passed and rep.ranks["sym_curl"] == sc_dim == 5 * k**3 - 3 * k**2 - 6 * k + 4
    _report("3 polynomial complex exactness", ok, t0, 120)


def test_criterion_4_constrained_space_dimensions():
    t0 = time.time()
    ref = TetElement(REF_TET)
    ok = True
    for k, want in ((4, 8), (5, 23)):
        ok = ok and space_W_quotient(k, ref).dim == want == w_quotient_dim(k)
    for k, want in ((4, 6), (5, 21)):
        ok = ok and space_M_image(k, ref).dim == want == m_image_dim(k)
    _report("4 constrained-space dimensions", ok, t0, 600)


def test_criterion_5_global_exactness_box():
    t0 = time.time()
    ok = True
    rep1 = check_exactness_global(build_box_mesh(1, 1, 1), 3, "1x1x1")
    ok = ok and rep1.passed
    # the symmetric-curl rank matches the global closed form at (8,12,6,1)
    k, nv, ne, nf, nc = 3, 8, 12, 6, 1
    formula = (
        -4 * nv + (k + 3) * ne + (4 * k * k - 10 * k + 2) * nf
        + (5 * k**3 - 27 * k * k + 42 * k - 16) * nc + 4
    )
    ok = ok and rep1.ranks["sym_curl"] == 94 == formula
    rep2 = check_exactness_global(build_box_mesh(2, 1, 1), 3, "2x1x1")
    ok = ok and rep2.passed
    _report("5 global exactness, box meshes k=3", ok, t0, 600)


def test_criterion_6_global_exactness_tet():
    t0 = time.time()
    rep1 = check_exactness_global(single_tet_mesh(), 4, "single")
    ok = rep1.passed and rep1.dims["V"] == 252 and rep1.dims["U"] == 448
    ok = ok and rep1.dims["Sigma"] == 210 and rep1.dims["Q"] == 10
    rep2 = check_exactness_global(two_tet_mesh(), 4, "two")
    ok = ok and rep2.passed
    _report("6 global exactness, tet meshes k=4", ok, t0, 900)


def test_criterion_7_identity_suite():
    t0 = time.time()
    rep = check_identity_suite(count=100, seed=20240805)
    ok = rep.passed and rep.dims["checked"] == 100
    _report("7 identity suite (100 random fields, zero failures)", ok, t0, 600)


def test_criterion_8_constructive_surjectivity():
    t0 = time.time()
    rep = check_divdiv_surjectivity_constructive(two_tet_mesh(), 4, "two")
    ok = rep.passed and rep.dims["q_basis"] == 20 and rep.ranks["div_div"] == 20
    _report("8 constructive surjectivity (two-tet mesh, k=4)", ok, t0, 600)
