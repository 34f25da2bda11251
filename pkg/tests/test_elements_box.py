"""Cuboid elements: dimensions, bubbles, DOF counts, unisolvence."""

from collections import Counter

import pytest

from divdivfem.elements.box import (
    CuboidElement,
    bubble_dim_box,
    bubble_space_box,
    box_family_dim,
    dofs_box,
    element_def,
    mod3_1based,
    shape_space_box,
)
from divdivfem.elements.dof import FiniteElementDef
from divdivfem.polycore.spaces import fit_in_space
from divdivfem.randgen import RatRandom
from divdivfem.rational import Q

UNIT = CuboidElement((0, 0, 0), (1, 1, 1))
RNG = RatRandom(20240806)


def test_wraparound_index_map():
    assert [mod3_1based(n) for n in range(-2, 8)] == [1, 2, 3, 1, 2, 3, 1, 2, 3, 1]


def test_element_geometry():
    K = CuboidElement((0, 0, 0), (2, 1, 1))
    assert len(K.vertices) == 8 and len(K.edges) == 12 and len(K.faces) == 6
    assert len(K.edges_parallel(0)) == 4 and len(K.faces_perp(2)) == 2
    for i in range(3):
        b = K.b[i]
        for f in K.faces_perp(i):
            assert f.restrict(b).is_zero()
    with pytest.raises(ValueError):
        CuboidElement((0, 0, 0), (0, 1, 1))


@pytest.mark.parametrize("family", ["Sigma", "U", "V"])
@pytest.mark.parametrize("k", [3, 4, 5])
def test_shape_space_dims(family, k):
    sp = shape_space_box(family, k, UNIT)
    assert sp.dim == box_family_dim(family, k)
    if k == 3:
        assert sp.verify_independent()


def test_shape_space_symmetry_tags():
    for b in shape_space_box("Sigma", 3, UNIT).basis:
        assert b._is_symmetric()
    for b in shape_space_box("U", 3, UNIT).basis:
        assert b._is_traceless()


def test_low_degree_rejected():
    with pytest.raises(ValueError):
        shape_space_box("Sigma", 2, UNIT)


@pytest.mark.parametrize("family", ["Sigma", "U", "V"])
@pytest.mark.parametrize("k", [3, 4, 5])
def test_bubble_dims_membership_traces(family, k):
    bb = bubble_space_box(family, k, UNIT)
    assert bb.dim == bubble_dim_box(family, k)
    parent = shape_space_box(family, k, UNIT)
    if bb.dim:
        _, flags = fit_in_space(bb.basis, parent)
        assert all(flags)
    # declared trace conditions, as exact polynomial identities on faces
    for w in bb.basis:
        if family == "Sigma":
            for i in range(3):
                for f in UNIT.faces_perp(i):
                    assert f.restrict(w.entry(i, i)).is_zero()
                    assert f.restrict(w.entry(i, i).diff(i)).is_zero()
                    for j in range(3):
                        if j != i:
                            assert f.restrict(w.entry(i, j)).is_zero()
        elif family == "U":
            for f in UNIT.faces:
                for i in range(3):
                    assert f.restrict(w.entry(i, i)).is_zero()
            for i in range(3):
                for j in range(3):
                    if i == j:
                        continue
                    l = 3 - i - j
                    for f in UNIT.faces_perp(i):
                        assert f.restrict(w.entry(i, j)).is_zero()
                        assert f.restrict(w.entry(i, j).diff(i)).is_zero()
                    for f in UNIT.faces_perp(l):
                        assert f.restrict(w.entry(i, j)).is_zero()
        else:
            for f in UNIT.faces:
                for i in range(3):
                    assert f.restrict(w.comp(i)).is_zero()
            for i in range(3):
                for f in UNIT.faces_perp(i):
                    assert f.restrict(w.comp(i).diff(i)).is_zero()


@pytest.mark.parametrize("family,k", [("Sigma", 3), ("U", 3), ("V", 3), ("Sigma", 4)])
def test_dof_counts_square(family, k):
    dofs = dofs_box(family, k, UNIT)
    assert len(dofs) == box_family_dim(family, k)


def test_dof_counts_per_entity_sigma():
    k = 4
    dofs = dofs_box("Sigma", k, UNIT)
    per_edge = Counter()
    per_face = Counter()
    for d in dofs:
        if d.entity_kind == "edge":
            per_edge[d.entity_key] += 1
        elif d.entity_kind == "face":
            per_face[d.entity_key] += 1
    assert set(per_edge.values()) == {k - 1}
    assert set(per_face.values()) == {2 * (k - 1) ** 2 + 2 * (k - 2) * (k - 1)}


def test_dof_counts_per_entity_u_and_v():
    k = 4
    for family, edge_expect, face_expect, vertex_expect in (
        ("U", 6 * k - 8, 8 * k * k - 28 * k + 22, 2),
        ("V", 5 * k - 11, 2 * (k - 2) * (2 * k - 5), 6),
    ):
        dofs = dofs_box(family, k, UNIT)
        per = {"vertex": Counter(), "edge": Counter(), "face": Counter()}
        for d in dofs:
            if d.entity_kind in per:
                per[d.entity_kind][d.entity_key] += 1
        assert set(per["vertex"].values()) == {vertex_expect}
        assert set(per["edge"].values()) == {edge_expect}
        assert set(per["face"].values()) == {face_expect}


@pytest.mark.parametrize("family", ["Sigma", "U", "V"])
def test_unisolvence_unit_k3(family):
    cert = element_def(family, 3, UNIT).unisolvence()
    assert cert["square"] and cert["det_nonzero"]


def test_unisolvence_scaled_translated():
    lo, hi = RNG.cuboid_corners()
    K = CuboidElement(lo, hi)
    for family in ("Sigma", "U", "V"):
        cert = element_def(family, 3, K).unisolvence()
        assert cert["square"] and cert["det_nonzero"]


def test_deleted_group_is_singular_with_witness():
    d = element_def("Sigma", 3, UNIT)
    kept = [dof for dof in d.dofs if dof.tag != "sig-e"]
    broken = FiniteElementDef(d.cell, d.space, kept, label="broken")
    cert = broken.unisolvence()
    assert not cert["square"] and not cert["det_nonzero"]
    assert cert["witness"] is not None
    vals = broken.dof_values(cert["witness"])
    assert all(v == 0 for v in vals)
    assert not cert["witness"].is_zero()


def test_interpolation_reproduction():
    for family in ("Sigma", "U", "V"):
        d = element_def(family, 3, UNIT)
        f = d.space.field_from_coeffs(RNG.coeffs(d.dim))
        assert d.reproduces(f)


def test_q_family_cellwise():
    d = element_def("Q", 1, UNIT)
    assert d.dim == 8 and len(d.dofs) == 8
    assert all(dof.entity_kind == "cell" for dof in d.dofs)
    assert d.unisolvence()["det_nonzero"]
