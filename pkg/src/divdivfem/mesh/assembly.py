"""Global finite element spaces and exact global operator matrices.

A global space is the span of nodal basis functions indexed by global DOFs;
DOFs on shared entities are identified by their (entity, group, subindex)
keys, which agree across neighboring cells by construction.  The dimension
is therefore the number of distinct keys, i.e. the entity-weighted count.

The matrix of a differential operator between two global spaces is built
cellwise: T_K = D'_K O_K inv(D_K) maps local source DOF values to local
target DOF values, where O_K expresses the operator's action in the shape
bases (certified exact fit: a membership failure would disprove the claimed
inclusion between the families and aborts the build).  Assembly verifies that
every target DOF receives the same value from every incident cell — with
zero contributions from cells where the source basis function vanishes —
which is precisely the conformity statement for the operator's image.
"""

from __future__ import annotations

from ..elements import box as boxmod
from ..elements import tet as tetmod
from ..elements.dof import FieldBundle, FiniteElementDef
from ..polycore.linalg import exact_rank, matmul
from ..polycore.spaces import fit_in_space
from ..rational import Q
from ..tensorcalc.operators import dev_grad, div_div, sym_curl
from .complex import MeshComplex

OPERATORS = {
    "dev_grad": (dev_grad, "V", "U"),
    "sym_curl": (sym_curl, "U", "Sigma"),
    "div_div": (div_div, "Sigma", "Q"),
}


class GlobalSpace:
    def __init__(self, mesh: MeshComplex, family: str, k: int):
        self.mesh = mesh
        self.family = family
        self.k = k
        self.cell_defs: list[FiniteElementDef] = []
        for c in range(mesh.n_cells):
            geom = mesh.element_geometry(c)
            if mesh.kind == "box":
                self.cell_defs.append(boxmod.element_def(family, k, geom))
            else:
                self.cell_defs.append(tetmod.element_def(family, k, geom))
        self.dof_keys: list = []
        self.key_to_gid: dict = {}
        self.local_to_global: list[list[int]] = []
        self.gid_entity: list = []
        for c, d in enumerate(self.cell_defs):
            l2g = []
            for dof in d.dofs:
                gid = self.key_to_gid.get(dof.key)
                if gid is None:
                    gid = len(self.dof_keys)
                    self.key_to_gid[dof.key] = gid
                    self.dof_keys.append(dof.key)
                    self.gid_entity.append((dof.entity_kind, dof.entity_key))
                l2g.append(gid)
            self.local_to_global.append(l2g)
        self._gid_cells = None

    @property
    def dim(self) -> int:
        return len(self.dof_keys)

    def entity_dof_counts(self) -> dict:
        """Number of global DOFs per entity kind."""
        out = {"vertex": 0, "edge": 0, "face": 0, "cell": 0}
        for kind, _ in self.gid_entity:
            out[kind] += 1
        return out

    def cells_of_gid(self, gid: int) -> list[int]:
        """Cells incident to the entity carrying a global DOF."""
        if self._gid_cells is None:
            mesh = self.mesh
            ent_cells = {}
            for c in range(mesh.n_cells):
                for gid2 in self.local_to_global[c]:
                    ent_cells.setdefault(gid2, set()).add(c)
            self._gid_cells = {g: sorted(s) for g, s in ent_cells.items()}
        return self._gid_cells[gid]

    def interpolate(self, fields) -> list:
        """Global DOF vector of a piecewise field (one TensorField per cell,
        or one field used on every cell).

        Shared DOFs must be single-valued across cells; a mismatch raises,
        exhibiting the entity at fault.
        """
        if not isinstance(fields, (list, tuple)):
            fields = [fields] * self.mesh.n_cells
        gvec = [None] * self.dim
        for c, d in enumerate(self.cell_defs):
            vals = d.dof_values(fields[c])
            for loc, gid in enumerate(self.local_to_global[c]):
                if gvec[gid] is None:
                    gvec[gid] = vals[loc]
                elif gvec[gid] != vals[loc]:
                    raise ValueError(
                        f"field is not single-valued at dof {self.dof_keys[gid]!r}"
                    )
        return [Q(0) if v is None else v for v in gvec]

    def reconstruct(self, gvec) -> list:
        """Per-cell fields with the given global DOF values."""
        out = []
        for c, d in enumerate(self.cell_defs):
            local = [gvec[g] for g in self.local_to_global[c]]
            Minv = d.inverse_dof_matrix()
            coeffs = [
                sum((Minv[i][j] * local[j] for j in range(len(local)) if local[j]), Q(0))
                for i in range(d.dim)
            ]
            out.append(d.space.field_from_coeffs(coeffs))
        return out

    def interpolate_reproduces(self, fields) -> bool:
        """Interpolation followed by reconstruction returns the input exactly."""
        if not isinstance(fields, (list, tuple)):
            fields = [fields] * self.mesh.n_cells
        gvec = self.interpolate(fields)
        rec = self.reconstruct(gvec)
        return all((a - b).is_zero() for a, b in zip(rec, fields))


def assemble_global_space(mesh: MeshComplex, family: str, k: int) -> GlobalSpace:
    return GlobalSpace(mesh, family, k)


class GlobalOperatorMatrix:
    """Exact rational matrix of a differential operator between global spaces.

    matrix[i][j] is target DOF i applied to op(source basis function j); the
    build certifies cellwise shape-space membership of the image and exact
    single-valuedness of every target DOF.
    """

    def __init__(self, op_tag: str, source: GlobalSpace, target: GlobalSpace):
        if op_tag not in OPERATORS:
            raise ValueError(f"unknown operator {op_tag!r}")
        op, src_fam, tgt_fam = OPERATORS[op_tag]
        if source.family != src_fam or target.family != tgt_fam:
            raise ValueError(f"{op_tag} maps family {src_fam} to {tgt_fam}")
        if source.mesh is not target.mesh:
            raise ValueError("source and target must share a mesh")
        self.op_tag = op_tag
        self.source = source
        self.target = target
        mesh = source.mesh
        n_t, n_s = target.dim, source.dim
        M = [[Q(0)] * n_s for _ in range(n_t)]
        touched: dict = {}
        for c in range(mesh.n_cells):
            sd = source.cell_defs[c]
            td = target.cell_defs[c]
            images = [op(b) for b in sd.space.basis]
            _coeffs, flags = fit_in_space(images, td.space)
            if not all(flags):
                bad = flags.index(False)
                raise ArithmeticError(
                    f"{op_tag}: image of source basis {bad} on cell {c} leaves the target shape space"
                )
            # local matrix: target DOFs of op(source nodal basis)
            dval_cols = []
            for img in images:
                bundle = FieldBundle(img)
                dval_cols.append([dof.evaluate(bundle) for dof in td.dofs])
            DO = [[dval_cols[j][i] for j in range(sd.dim)] for i in range(len(td.dofs))]
            Sinv = sd.inverse_dof_matrix()
            T = matmul(DO, Sinv)
            l2g_s = source.local_to_global[c]
            l2g_t = target.local_to_global[c]
            for r, g in enumerate(l2g_t):
                rowT = T[r]
                for cc, j in enumerate(l2g_s):
                    v = rowT[cc]
                    prev = touched.get((g, j))
                    if prev is None:
                        touched[(g, j)] = v
                        if v:
                            M[g][j] = v
                    elif prev != v:
                        raise ArithmeticError(
                            f"{op_tag}: target dof {target.dof_keys[g]!r} is not single-valued"
                        )
        # cells that do not carry source dof j contribute zero; verify that
        # shared target dofs agree with that implicit zero
        src_gids_of_cell = [set(source.local_to_global[c]) for c in range(mesh.n_cells)]
        for (g, j), v in touched.items():
            if not v:
                continue
            for c in self.target.cells_of_gid(g):
                if j not in src_gids_of_cell[c]:
                    raise ArithmeticError(
                        f"{op_tag}: target dof {target.dof_keys[g]!r} sees {v} from one cell and 0 from cell {c}"
                    )
        self.matrix = M

    def rank(self) -> int:
        return exact_rank(self.matrix)[0]

    def shape(self):
        return (self.target.dim, self.source.dim)

    def to_coordinate_text(self) -> str:
        """Sparse export: header `rows cols nnz`, then `i j value` lines with
        exact rational values, zero-based indices, row-major order."""
        from ..rational import rat_str

        lines = []
        for i, row in enumerate(self.matrix):
            for j, v in enumerate(row):
                if v:
                    lines.append(f"{i} {j} {rat_str(v)}")
        head = f"{self.target.dim} {self.source.dim} {len(lines)}"
        return "\n".join([head] + lines) + "\n"


def operator_matrix(op_tag: str, source: GlobalSpace, target: GlobalSpace) -> GlobalOperatorMatrix:
    return GlobalOperatorMatrix(op_tag, source, target)
