"""Structured cuboid and tetrahedral meshes with globally oriented entities.

Entities are identified by their exact rational geometry: a vertex by its
coordinate triple, an edge by its sorted endpoint pair, a face by its sorted
vertex tuple.  Two cells therefore agree on the identity of everything they
share, and the per-entity frames (face normals oriented from the lower to the
higher incident cell id, outward on the boundary; edge frames derived from
the lowest incident face) are global by construction.

The JSON schema stores vertices as rational strings and cells as vertex-id
lists with a type tag "box" or "tet".
"""

from __future__ import annotations

import json

from ..elements.box import CuboidElement
from ..elements.tet import TetElement
from ..polycore.geometry import _cross, _dot, _sub
from ..rational import Q, parse_rat, rat_str


def _vkey(p):
    return tuple(Q(c) for c in p)


class MeshComplex:
    def __init__(self, kind: str, cell_vertex_lists, vertices, flip_orientation: bool = False):
        if kind not in ("box", "tet"):
            raise ValueError("mesh kind must be 'box' or 'tet'")
        self.kind = kind
        self.vertices = [_vkey(p) for p in vertices]
        self.flip = flip_orientation
        self.cells = [tuple(c) for c in cell_vertex_lists]
        self._build()

    # -- construction ------------------------------------------------------

    def _cell_entities(self, cidx):
        """(vertex_keys, edge_keys, face_keys) of one cell."""
        ids = self.cells[cidx]
        pts = [self.vertices[i] for i in ids]
        if self.kind == "tet":
            vks = [tuple(p) for p in pts]
            eks = []
            for a in range(4):
                for b in range(a + 1, 4):
                    eks.append(tuple(sorted((vks[a], vks[b]))))
            fks = []
            for opp in range(4):
                fks.append(tuple(sorted(vks[i] for i in range(4) if i != opp)))
            return vks, eks, fks
        lo = tuple(min(p[i] for p in pts) for i in range(3))
        hi = tuple(max(p[i] for p in pts) for i in range(3))
        elem = CuboidElement(lo, hi)
        vks = [tuple(p) for p in elem.vertices]
        eks = [CuboidElement.edge_key(e) for e in elem.edges]
        fks = [CuboidElement.face_key(f) for f in elem.faces]
        return vks, eks, fks

    def _build(self):
        self.vertex_ids = {}
        self.edge_ids = {}
        self.face_ids = {}
        self.vertex_list = []
        self.edge_list = []
        self.face_list = []
        self.cell_vertices = []
        self.cell_edges = []
        self.cell_faces = []
        self.face_cells: list[list[int]] = []
        self.edge_cells: list[list[int]] = []
        self.vertex_cells: list[list[int]] = []
        for cidx in range(len(self.cells)):
            vks, eks, fks = self._cell_entities(cidx)
            vids, eids, fids = [], [], []
            for vk in vks:
                vid = self.vertex_ids.get(vk)
                if vid is None:
                    vid = len(self.vertex_list)
                    self.vertex_ids[vk] = vid
                    self.vertex_list.append(vk)
                    self.vertex_cells.append([])
                self.vertex_cells[vid].append(cidx)
                vids.append(vid)
            for ek in eks:
                eid = self.edge_ids.get(ek)
                if eid is None:
                    eid = len(self.edge_list)
                    self.edge_ids[ek] = eid
                    self.edge_list.append(ek)
                    self.edge_cells.append([])
                self.edge_cells[eid].append(cidx)
                eids.append(eid)
            for fk in fks:
                fid = self.face_ids.get(fk)
                if fid is None:
                    fid = len(self.face_list)
                    self.face_ids[fk] = fid
                    self.face_list.append(fk)
                    self.face_cells.append([])
                self.face_cells[fid].append(cidx)
                fids.append(fid)
            self.cell_vertices.append(vids)
            self.cell_edges.append(eids)
            self.cell_faces.append(fids)
        for fid, cells in enumerate(self.face_cells):
            if len(cells) not in (1, 2):
                raise ValueError(f"face {fid} has {len(cells)} incident cells")
        self._orient()

    def _face_points(self, fk):
        if self.kind == "tet":
            return list(fk)
        axis, value, lo, hi = fk
        return None

    def _outward_normal_tet(self, fk, cidx):
        ids = self.cells[cidx]
        pts = [self.vertices[i] for i in ids]
        opp = [p for p in map(tuple, pts) if p not in fk]
        assert len(opp) == 1
        p0, p1, p2 = fk
        n = _cross(_sub(p1, p0), _sub(p2, p0))
        if _dot(n, _sub(opp[0], p0)) > 0:
            n = tuple(-c for c in n)
        return n

    def _orient(self):
        """Face normals: lower to higher incident cell id; boundary outward.
        Edge frames reference the oriented normal of the lowest incident face."""
        self.face_normals = {}
        sign = -1 if self.flip else 1
        if self.kind == "tet":
            for fid, fk in enumerate(self.face_list):
                cells = sorted(self.face_cells[fid])
                n = self._outward_normal_tet(fk, cells[0])
                self.face_normals[fk] = tuple(c * sign for c in n)
            self.edge_refnormals = {}
            edge_faces: dict = {}
            for fid, fk in enumerate(self.face_list):
                pts = list(fk)
                for a in range(3):
                    for b in range(a + 1, 3):
                        ek = tuple(sorted((pts[a], pts[b])))
                        cur = edge_faces.get(ek)
                        if cur is None or fk < cur:
                            edge_faces[ek] = fk
            for ek, fk in edge_faces.items():
                self.edge_refnormals[ek] = self.face_normals[fk]
        else:
            for fid, fk in enumerate(self.face_list):
                axis = fk[0]
                cells = sorted(self.face_cells[fid])
                c0 = cells[0]
                lo = min(self.vertices[i][axis] for i in self.cells[c0])
                hi = max(self.vertices[i][axis] for i in self.cells[c0])
                value = fk[1]
                out = 1 if value == hi else -1
                n = tuple(Q(sign * out) if i == axis else Q(0) for i in range(3))
                self.face_normals[fk] = n

    # -- counts and invariants ----------------------------------------------

    @property
    def n_vertices(self):
        return len(self.vertex_list)

    @property
    def n_edges(self):
        return len(self.edge_list)

    @property
    def n_faces(self):
        return len(self.face_list)

    @property
    def n_cells(self):
        return len(self.cells)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces - self.n_cells

    def entity_counts(self):
        return (self.n_vertices, self.n_edges, self.n_faces, self.n_cells)

    def interior_faces(self):
        return [fid for fid, cells in enumerate(self.face_cells) if len(cells) == 2]

    def boundary_faces(self):
        return [fid for fid, cells in enumerate(self.face_cells) if len(cells) == 1]

    # -- element construction ------------------------------------------------

    def element_geometry(self, cidx):
        """CuboidElement or TetElement for one cell, wired to global frames."""
        ids = self.cells[cidx]
        pts = [self.vertices[i] for i in ids]
        if self.kind == "box":
            lo = tuple(min(p[i] for p in pts) for i in range(3))
            hi = tuple(max(p[i] for p in pts) for i in range(3))
            return CuboidElement(lo, hi)
        return TetElement(pts, face_normals=self.face_normals, edge_refnormals=self.edge_refnormals)

    def outward_sign(self, cidx, fk) -> int:
        """+1 if the global face normal points out of cell cidx."""
        if self.kind == "tet":
            n = self.face_normals[fk]
            out = self._outward_normal_tet(fk, cidx)
            return 1 if _dot(n, out) > 0 else -1
        axis, value, _, _ = fk
        lo = min(self.vertices[i][axis] for i in self.cells[cidx])
        hi = max(self.vertices[i][axis] for i in self.cells[cidx])
        out = 1 if value == hi else -1
        n_ax = self.face_normals[fk][axis]
        return 1 if n_ax * out > 0 else -1

    # -- serialization --------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "type": self.kind,
                "vertices": [[rat_str(c) for c in p] for p in self.vertex_list],
                "cells": [list(self.cell_vertices[c]) for c in range(self.n_cells)],
            }
        )

    @staticmethod
    def from_json(text: str) -> "MeshComplex":
        data = json.loads(text)
        vertices = [tuple(parse_rat(c) for c in p) for p in data["vertices"]]
        return MeshComplex(data["type"], data["cells"], vertices)


# ---------------------------------------------------------------------------
# generators


def build_box_mesh(nx: int, ny: int, nz: int, lo=(0, 0, 0), hi=None, flip_orientation=False) -> MeshComplex:
    """Axis-aligned grid of nx*ny*nz congruent cells on a cuboid domain."""
    if nx < 1 or ny < 1 or nz < 1:
        raise ValueError("subdivision counts must be positive")
    lo = tuple(Q(c) for c in lo)
    if hi is None:
        hi = (lo[0] + nx, lo[1] + ny, lo[2] + nz)
    hi = tuple(Q(c) for c in hi)
    steps = [(hi[i] - lo[i]) / (nx, ny, nz)[i] for i in range(3)]
    if any(s <= 0 for s in steps):
        raise ValueError("domain must have positive extent")

    def corner(ix, iy, iz):
        return (lo[0] + steps[0] * ix, lo[1] + steps[1] * iy, lo[2] + steps[2] * iz)

    vid = {}
    vertices = []

    def getv(p):
        if p not in vid:
            vid[p] = len(vertices)
            vertices.append(p)
        return vid[p]

    cells = []
    for ix in range(nx):
        for iy in range(ny):
            for iz in range(nz):
                ids = [
                    getv(corner(ix + dx, iy + dy, iz + dz))
                    for dx in (0, 1)
                    for dy in (0, 1)
                    for dz in (0, 1)
                ]
                cells.append(ids)
    return MeshComplex("box", cells, vertices, flip_orientation=flip_orientation)


_KUHN_PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def build_tet_mesh(nx: int, ny: int, nz: int, lo=(0, 0, 0), hi=None, flip_orientation=False) -> MeshComplex:
    """Each grid cube split into six tetrahedra around its main diagonal;
    the uniform diagonal direction makes faces match across cubes."""
    if nx < 1 or ny < 1 or nz < 1:
        raise ValueError("subdivision counts must be positive")
    lo = tuple(Q(c) for c in lo)
    if hi is None:
        hi = (lo[0] + nx, lo[1] + ny, lo[2] + nz)
    hi = tuple(Q(c) for c in hi)
    steps = [(hi[i] - lo[i]) / (nx, ny, nz)[i] for i in range(3)]
    vid = {}
    vertices = []

    def getv(p):
        if p not in vid:
            vid[p] = len(vertices)
            vertices.append(p)
        return vid[p]

    cells = []
    for ix in range(nx):
        for iy in range(ny):
            for iz in range(nz):
                base = [ix, iy, iz]
                for perm in _KUHN_PERMS:
                    idx = [list(base)]
                    for ax in perm:
                        nxt = list(idx[-1])
                        nxt[ax] += 1
                        idx.append(nxt)
                    ids = []
                    for gi in idx:
                        p = tuple(lo[i] + steps[i] * gi[i] for i in range(3))
                        ids.append(getv(p))
                    cells.append(ids)
    return MeshComplex("tet", cells, vertices, flip_orientation=flip_orientation)


def single_tet_mesh(vertices=None) -> MeshComplex:
    if vertices is None:
        vertices = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    return MeshComplex("tet", [[0, 1, 2, 3]], vertices)


def two_tet_mesh() -> MeshComplex:
    """Two tetrahedra sharing the face x = 0 of the reference cell."""
    vertices = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0)]
    return MeshComplex("tet", [[0, 1, 2, 3], [0, 2, 3, 4]], vertices)


def scale_mesh(mesh: MeshComplex, factor) -> MeshComplex:
    """Same connectivity on geometry scaled by a positive rational factor."""
    f = Q(factor)
    if f <= 0:
        raise ValueError("scale must be positive")
    vertices = [tuple(c * f for c in p) for p in mesh.vertex_list]
    return MeshComplex(mesh.kind, [list(c) for c in mesh.cell_vertices], vertices, flip_orientation=mesh.flip)


def permute_mesh(mesh: MeshComplex, seed: int = 1) -> MeshComplex:
    """Same mesh with cells and vertex ids relabeled deterministically."""
    import random

    rng = random.Random(seed)
    nv = mesh.n_vertices
    perm = list(range(nv))
    rng.shuffle(perm)
    vertices = [None] * nv
    for old, new in enumerate(perm):
        vertices[new] = mesh.vertex_list[old]
    cells = [[perm[i] for i in mesh.cell_vertices[c]] for c in range(mesh.n_cells)]
    rng.shuffle(cells)
    return MeshComplex(mesh.kind, cells, vertices, flip_orientation=mesh.flip)
