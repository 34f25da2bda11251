"""Polynomial spaces as ordered bases of tensor fields.

A PolySpace is an explicit ordered basis (scalar, vector, or matrix fields
with rational polynomial entries) plus a descriptor of the degree constraints
that define it.  Monomial bases are enumerated in graded lexicographic order
and components in a fixed component order, so every space construction is
reproducible bit for bit.

Coefficient matrices stack the entries' monomial coefficients over a
canonical (component, multi-index) row index; exact rank of that matrix is
the workhorse behind every dimension, kernel, and exactness statement.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from ..rational import Q
from ..tensorcalc.fields import TensorField
from .linalg import exact_rank, solve_columns
from .polynomial import Poly, grlex_key, monomials_box_degrees, monomials_total_degree


class PolySpace:
    def __init__(self, shape: str, basis: Sequence[TensorField], degree_spec: str):
        self.shape = shape
        self.basis = list(basis)
        self.degree_spec = degree_spec
        for b in self.basis:
            if b.shape != shape:
                raise ValueError("basis member shape mismatch")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self):
        return f"PolySpace({self.degree_spec}, dim={self.dim})"

    def verify_independent(self) -> bool:
        """Exact rank of the stacked coefficient matrix equals the length."""
        if not self.basis:
            return True
        M, _ = coeff_matrix(self.basis)
        return exact_rank(M)[0] == self.dim

    def field_from_coeffs(self, coeffs) -> TensorField:
        out = None
        for c, b in zip(coeffs, self.basis):
            if c == 0:
                continue
            term = b * c
            out = term if out is None else out + term
        if out is None:
            nv = self.basis[0].entries[0].nvars if self.basis else 3
            return TensorField.zero(self.shape, nv)
        return out


def scale_coeff_vector(vec):
    """Rescale a rational vector to coprime integers (deterministic sign).

    Scaling a basis vector never changes the space it spans; small integer
    coefficients keep all downstream exact arithmetic cheap.
    """
    import math

    from ..rational import mpz

    lcm = 1
    for e in vec:
        d = int(Q(e).denominator)
        if d != 1:
            lcm = lcm // math.gcd(lcm, d) * d
    ints = [mpz(Q(e).numerator) * (lcm // int(Q(e).denominator)) for e in vec]
    g = 0
    for e in ints:
        if e:
            g = math.gcd(g, int(e))
            if g == 1:
                break
    if g > 1:
        ints = [e // g for e in ints]
    for e in ints:
        if e:
            if e < 0:
                ints = [-x for x in ints]
            break
    return [Q(e) for e in ints]


def support_index(fields: Iterable[TensorField]) -> list[tuple[int, tuple]]:
    """Canonical (component, multi-index) row index covering all supports."""
    seen = set()
    for f in fields:
        for ci, e in enumerate(f.entries):
            for a in e.terms:
                seen.add((ci, a))
    return sorted(seen, key=lambda t: (t[0], grlex_key(t[1])))


def coeff_matrix(fields: Sequence[TensorField], index=None):
    """Columns are the fields' coefficient vectors over the row index."""
    if index is None:
        index = support_index(fields)
    pos = {key: i for i, key in enumerate(index)}
    M = [[Q(0)] * len(fields) for _ in index]
    for j, f in enumerate(fields):
        for ci, e in enumerate(f.entries):
            for a, c in e.terms.items():
                row = pos.get((ci, a))
                if row is None:
                    raise ValueError("field support outside the index")
                M[row][j] = c
    return M, index


def fit_in_space(fields: Sequence[TensorField], space: PolySpace):
    """Exact coordinates of each field in the space's basis, or None.

    Returns (coeff_matrix, flags): column j holds the coordinates of
    fields[j]; flag False marks a field outside the space.
    """
    index = support_index(list(space.basis) + list(fields))
    A, _ = coeff_matrix(space.basis, index)
    B, _ = coeff_matrix(fields, index)
    return solve_columns(A, B)


def operator_image_fields(op: Callable[[TensorField], TensorField], space: PolySpace) -> list[TensorField]:
    return [op(b) for b in space.basis]


def operator_rank(op, space: PolySpace) -> int:
    """Exact rank of the operator restricted to the space."""
    images = operator_image_fields(op, space)
    M, _ = coeff_matrix(images)
    return exact_rank(M)[0] if M else 0


def operator_kernel_dim(op, space: PolySpace) -> int:
    return space.dim - operator_rank(op, space)


# ---------------------------------------------------------------------------
# scalar spans


def span(degree_spec) -> PolySpace:
    """Scalar monomial space from a degree descriptor.

    Descriptors: ("P", k) for total degree, ("Q", k) per-variable degree,
    ("Pbox", (k1, k2, k3)) for mixed per-variable degrees.  Negative degrees
    yield the zero space.
    """
    kind, arg = degree_spec
    if kind == "P":
        monos = monomials_total_degree(arg, 3)
        label = f"P{arg}"
    elif kind == "Q":
        monos = monomials_box_degrees((arg, arg, arg))
        label = f"Q{arg}"
    elif kind == "Pbox":
        monos = monomials_box_degrees(tuple(arg))
        label = "P[" + ",".join(str(a) for a in arg) + "]"
    else:
        raise ValueError(f"unknown degree kind {kind!r}")
    basis = [TensorField.scalar(Poly.monomial(a)) for a in monos]
    return PolySpace("scalar", basis, label)


def vector_space_from_components(component_degrees, label: str) -> PolySpace:
    """Vector space with per-component per-variable degree boxes."""
    basis = []
    for ci in range(3):
        for a in monomials_box_degrees(component_degrees[ci]):
            entries = [Poly.zero(3), Poly.zero(3), Poly.zero(3)]
            entries[ci] = Poly.monomial(a)
            basis.append(TensorField.vector(entries))
    return PolySpace("vector", basis, label)


def vector_space_total_degree(k: int, label: str | None = None) -> PolySpace:
    basis = []
    for ci in range(3):
        for a in monomials_total_degree(k, 3):
            entries = [Poly.zero(3), Poly.zero(3), Poly.zero(3)]
            entries[ci] = Poly.monomial(a)
            basis.append(TensorField.vector(entries))
    return PolySpace("vector", basis, label or f"P{k}^3")


def symmetric_matrix_space_total_degree(k: int, label: str | None = None) -> PolySpace:
    """P_k valued in symmetric matrices; entry order 11,22,33,12,13,23."""
    basis = []
    z = Poly.zero(3)
    for (i, j) in ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)):
        for a in monomials_total_degree(k, 3):
            m = Poly.monomial(a)
            rows = [[z] * 3 for _ in range(3)]
            rows[i][j] = m
            if i != j:
                rows = [list(r) for r in rows]
                rows[j][i] = m
            basis.append(TensorField.matrix(rows, symmetry="symmetric", check=False))
    return PolySpace("matrix", basis, label or f"P{k}(S)")


def traceless_matrix_space_total_degree(k: int, label: str | None = None) -> PolySpace:
    """P_k valued in traceless matrices; diagonal pairs then off-diagonals."""
    basis = []
    z = Poly.zero(3)
    diag_patterns = (((0, 0), (2, 2)), ((1, 1), (2, 2)))
    for pos, neg in diag_patterns:
        for a in monomials_total_degree(k, 3):
            m = Poly.monomial(a)
            rows = [[z] * 3 for _ in range(3)]
            rows[pos[0]][pos[1]] = m
            rows[neg[0]][neg[1]] = -m
            basis.append(TensorField.matrix(rows, symmetry="traceless", check=False))
    for (i, j) in ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)):
        for a in monomials_total_degree(k, 3):
            m = Poly.monomial(a)
            rows = [[z] * 3 for _ in range(3)]
            rows[i][j] = m
            basis.append(TensorField.matrix(rows, symmetry="traceless", check=False))
    return PolySpace("matrix", basis, label or f"P{k}(T)")
