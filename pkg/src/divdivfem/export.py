"""Exact JSON export of nodal (dual) bases.

Layout: one record per element, with the cell geometry, the ordered DOF
keys, and per nodal field a table of rational coefficient strings keyed by
component label and multi-index.  Component labels are "" for scalars,
"0".."2" for vectors, and "00".."22" for matrices; multi-indices are
comma-separated exponent strings.  Coefficients are those of the centered
monomials (powers of x - x0 with x0 the cell anchor), and the anchor is part
of the record, so re-importing is exact.
"""

from __future__ import annotations

import json

from .elements.box import CuboidElement, element_def as box_element_def
from .elements.tet import TetElement, element_def as tet_element_def
from .polycore.polynomial import Poly
from .rational import parse_rat, rat_str
from .tensorcalc.fields import TensorField

_COMP_LABELS = {
    "scalar": [""],
    "vector": ["0", "1", "2"],
    "matrix": [f"{i}{j}" for i in range(3) for j in range(3)],
}


def _field_to_tables(f: TensorField) -> dict:
    out = {}
    for label, e in zip(_COMP_LABELS[f.shape], f.entries):
        if e.is_zero():
            continue
        out[label] = {",".join(map(str, a)): rat_str(c) for a, c in e.items_grlex()}
    return out


def _field_from_tables(shape: str, tables: dict) -> TensorField:
    entries = []
    for label in _COMP_LABELS[shape]:
        terms = {}
        for astr, cstr in tables.get(label, {}).items():
            alpha = tuple(int(x) for x in astr.split(","))
            terms[alpha] = parse_rat(cstr)
        entries.append(Poly(3, terms))
    return TensorField(shape, entries)


def export_basis(family: str, k: int, grid: str, path: str | None = None, cell=None) -> dict:
    """Write the nodal basis of one element as exact rationals.

    The element's unisolvence is certified first; the nodal fields are the
    inverse DOF matrix applied to the shape basis, so dof_i(field_j) is the
    Kronecker delta, which re-verification after import confirms.
    """
    if grid == "box":
        K = cell or CuboidElement((0, 0, 0), (1, 1, 1))
        d = box_element_def(_canonical_family(family), k, K)
        geom = {"lo": [rat_str(c) for c in K.lo], "hi": [rat_str(c) for c in K.hi]}
    elif grid == "tet":
        K = cell or TetElement([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
        d = tet_element_def(_canonical_family(family), k, K)
        geom = {"vertices": [[rat_str(c) for c in p] for p in K.vertices]}
    else:
        raise ValueError("grid must be 'box' or 'tet'")
    cert = d.unisolvence()
    if not (cert["square"] and cert["det_nonzero"]):
        raise ArithmeticError("element is not unisolvent; nothing to export")
    nodal = d.nodal_basis()
    data = {
        "family": _canonical_family(family),
        "k": k,
        "grid": grid,
        "shape": d.space.shape,
        "dim": d.dim,
        "cell": geom,
        "dof_keys": [repr(dof.key) for dof in d.dofs],
        "fields": [
            {"index": j, "entries": _field_to_tables(f)} for j, f in enumerate(nodal)
        ],
    }
    if path is not None:
        with open(path, "w") as fh:
            json.dump(data, fh)
    return data


def import_basis(data_or_path) -> list[TensorField]:
    if isinstance(data_or_path, str):
        with open(data_or_path) as fh:
            data = json.load(fh)
    else:
        data = data_or_path
    return [_field_from_tables(data["shape"], rec["entries"]) for rec in data["fields"]]


def verify_duality(family: str, k: int, grid: str, fields: list[TensorField], cell=None, sample: int | None = None) -> bool:
    """dof_i(field_j) equals the Kronecker delta, exactly.

    With sample=n only a deterministic subset of n nodal fields is checked
    (each still against every functional); sample=None checks all of them.
    """
    if grid == "box":
        K = cell or CuboidElement((0, 0, 0), (1, 1, 1))
        d = box_element_def(_canonical_family(family), k, K)
    else:
        K = cell or TetElement([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
        d = tet_element_def(_canonical_family(family), k, K)
    indices = range(len(fields))
    if sample is not None and sample < len(fields):
        step = max(1, len(fields) // sample)
        indices = range(0, len(fields), step)
    for j in indices:
        vals = d.dof_values(fields[j])
        for i, v in enumerate(vals):
            if v != (1 if i == j else 0):
                return False
    return True


def _canonical_family(family: str) -> str:
    key = family.lower()
    table = {"sigma": "Sigma", "u": "U", "v": "V", "q": "Q"}
    if key not in table:
        raise ValueError(f"unknown family {family!r}")
    return table[key]
