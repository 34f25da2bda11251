"""Reference and physical integration entities with exact rational geometry.

Cuboid cells and their faces/edges are axis-aligned, so all their measures
are rational and integrals are taken in global coordinates with the true
measure.  Tetrahedra, triangles, and segments carry a rational affine
parametrization; their volume measure (|det J|) is rational, while face and
edge measures are rational multiples of a square root.  Integrals on those
entities are returned as reference integrals (the pullback integral over the
unit simplex of the parameter domain), and the squared metric factor is
exposed as ``metric2``: the true integral equals sqrt(metric2) times the
reference integral.  Every verification in this package compares quantities
to zero or compares ranks, so the square root never needs a value.
"""

from __future__ import annotations

from ..rational import Q, factorial, Rational
from .polynomial import Poly


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Q(0))


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec(p):
    return tuple(Q(c) for c in p)


# ---------------------------------------------------------------------------
# closed-form monomial integrals


def integrate_monomial_box(alpha, lo, hi) -> Rational:
    """Exact integral of x^a y^b z^c over an axis-aligned box.

    Uses the one-dimensional closed form per variable:
    int_[s,t] x^a dx = (t^(a+1) - s^(a+1)) / (a+1).
    """
    lo = vec(lo)
    hi = vec(hi)
    if any(h <= l for l, h in zip(lo, hi)):
        raise ValueError("box must have positive edge lengths")
    out = Q(1)
    for e, l, h in zip(alpha, lo, hi):
        out *= (h ** (e + 1) - l ** (e + 1)) / (e + 1)
    return out


def integrate_monomial_simplex(alpha) -> Rational:
    """Exact integral of x^a y^b z^c over the unit simplex.

    Dirichlet's formula: a! b! c! / (a+b+c+3)!.
    """
    if any(e < 0 for e in alpha):
        raise ValueError("exponents must be nonnegative")
    num = Q(1)
    for e in alpha:
        num *= factorial(e)
    return num / factorial(sum(alpha) + len(alpha))


def integrate_poly_unit_simplex(p: Poly) -> Rational:
    """Exact integral of a polynomial over the unit simplex of its dimension."""
    total = Q(0)
    n = p.nvars
    for a, c in p.terms.items():
        num = Q(1)
        for e in a:
            num *= factorial(e)
        total += c * num / factorial(sum(a) + n)
    return total


# ---------------------------------------------------------------------------
# axis-aligned entities (cuboid grids)


class BoxCell:
    """Axis-aligned cuboid (x_a,x_b) x (y_a,y_b) x (z_a,z_b)."""

    kind = "cell"
    dim = 3

    def __init__(self, lo, hi):
        self.lo = vec(lo)
        self.hi = vec(hi)
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise ValueError("degenerate box")
        self._mono_cache: dict = {}

    @property
    def lengths(self):
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def monomial_integral(self, alpha) -> Rational:
        v = self._mono_cache.get(alpha)
        if v is None:
            v = integrate_monomial_box(alpha, self.lo, self.hi)
            self._mono_cache[alpha] = v
        return v

    def integrate(self, p: Poly) -> Rational:
        total = Q(0)
        for a, c in p.terms.items():
            total += c * self.monomial_integral(a)
        return total

    def measure(self) -> Rational:
        lx, ly, lz = self.lengths
        return lx * ly * lz

    def __repr__(self):
        return f"BoxCell({self.lo}, {self.hi})"


class BoxFace:
    """Axis-aligned rectangle: coordinate `axis` frozen at `value`."""

    kind = "face"
    dim = 2

    def __init__(self, axis: int, value, lo, hi):
        self.axis = axis
        self.value = Q(value)
        self.lo = vec(lo)  # full 3-tuples; entry `axis` equals value
        self.hi = vec(hi)
        self.tangent_axes = tuple(i for i in range(3) if i != axis)
        for i in self.tangent_axes:
            if self.hi[i] <= self.lo[i]:
                raise ValueError("degenerate face")

    def restrict(self, p: Poly) -> Poly:
        images = []
        for i in range(3):
            if i == self.axis:
                images.append(Poly.const(self.value, 3))
            else:
                images.append(Poly.variable(i, 3))
        return p.subs(images)

    def integrate(self, p: Poly) -> Rational:
        """True surface integral (the measure is rational for boxes)."""
        q = self.restrict(p)
        total = Q(0)
        i, j = self.tangent_axes
        for a, c in q.terms.items():
            v = Q(1)
            for t in (i, j):
                e = a[t]
                v *= (self.hi[t] ** (e + 1) - self.lo[t] ** (e + 1)) / (e + 1)
            total += c * v
        return total

    def measure(self) -> Rational:
        i, j = self.tangent_axes
        return (self.hi[i] - self.lo[i]) * (self.hi[j] - self.lo[j])

    def normal(self):
        """Unit +axis normal (rational for axis-aligned faces)."""
        return tuple(Q(1) if i == self.axis else Q(0) for i in range(3))

    def __repr__(self):
        return f"BoxFace(axis={self.axis}, value={self.value})"


class BoxEdge:
    """Axis-aligned segment along `axis`; the two other coordinates frozen."""

    kind = "edge"
    dim = 1

    def __init__(self, axis: int, lo, hi):
        self.axis = axis
        self.lo = vec(lo)
        self.hi = vec(hi)
        if self.hi[axis] <= self.lo[axis]:
            raise ValueError("degenerate edge")

    def restrict(self, p: Poly) -> Poly:
        images = []
        for i in range(3):
            if i == self.axis:
                images.append(Poly.variable(i, 3))
            else:
                images.append(Poly.const(self.lo[i], 3))
        return p.subs(images)

    def integrate(self, p: Poly) -> Rational:
        q = self.restrict(p)
        total = Q(0)
        t = self.axis
        for a, c in q.terms.items():
            e = a[t]
            total += c * (self.hi[t] ** (e + 1) - self.lo[t] ** (e + 1)) / (e + 1)
        return total

    def measure(self) -> Rational:
        return self.hi[self.axis] - self.lo[self.axis]

    def __repr__(self):
        return f"BoxEdge(axis={self.axis}, {self.lo}->{self.hi})"


# ---------------------------------------------------------------------------
# simplicial entities


class TetCell:
    """Tetrahedron with rational vertices (positive volume required)."""

    kind = "cell"
    dim = 3

    def __init__(self, vertices):
        if len(vertices) != 4:
            raise ValueError("four vertices required")
        self.vertices = [vec(p) for p in vertices]
        v0 = self.vertices[0]
        self.jac_cols = [_sub(p, v0) for p in self.vertices[1:]]
        d = _dot(self.jac_cols[0], _cross(self.jac_cols[1], self.jac_cols[2]))
        if d == 0:
            raise ValueError("degenerate tetrahedron")
        self.det_jac = d
        self._mono_table: dict = {}
        self._img_pows: list[dict] = [dict(), dict(), dict()]
        self._imgs = None

    def measure(self) -> Rational:
        return abs(self.det_jac) / 6

    def to_reference(self) -> list[Poly]:
        """Affine images of (x,y,z) in the reference coordinates (s,t,u)."""
        v0 = self.vertices[0]
        cols = self.jac_cols
        imgs = []
        for i in range(3):
            p = Poly.const(v0[i], 3)
            for j in range(3):
                p = p + Poly.variable(j, 3) * cols[j][i]
            imgs.append(p)
        return imgs

    def monomial_integral(self, alpha) -> Rational:
        """int_K x^a y^b z^c via the affine pullback, cached per exponent."""
        out = self._mono_table.get(alpha)
        if out is not None:
            return out
        if self._imgs is None:
            self._imgs = self.to_reference()
        prod = None
        for i, e in enumerate(alpha):
            if not e:
                continue
            pw = self._img_pows[i].get(e)
            if pw is None:
                pw = self._imgs[i] ** e
                self._img_pows[i][e] = pw
            prod = pw if prod is None else prod * pw
        if prod is None:
            prod = Poly.const(1, 3)
        out = integrate_poly_unit_simplex(prod) * abs(self.det_jac)
        self._mono_table[alpha] = out
        return out

    def integrate(self, p: Poly) -> Rational:
        """True volume integral (affine pullback; |det J| is rational)."""
        total = Q(0)
        for a, c in p.terms.items():
            total += c * self.monomial_integral(a)
        return total

    def barycentric(self) -> list[Poly]:
        """The four barycentric coordinates as affine polynomials in x,y,z."""
        from .linalg import inv_jordan

        # rows (1, x_j) of V; lambda_i coefficients form column i of inv(V)
        V = [[Q(1)] + list(v) for v in self.vertices]
        Vinv = inv_jordan(V)
        lams = []
        for i in range(4):
            p = Poly.const(Vinv[0][i], 3)
            for j in range(3):
                p = p + Poly.variable(j, 3) * Vinv[j + 1][i]
            lams.append(p)
        return lams

    def __repr__(self):
        return f"TetCell({self.vertices})"


class TriFace:
    """Triangle in 3-space; parametrized over the unit triangle in (s,t)."""

    kind = "face"
    dim = 2

    def __init__(self, p0, p1, p2):
        self.points = [vec(p0), vec(p1), vec(p2)]
        self.u = _sub(self.points[1], self.points[0])
        self.v = _sub(self.points[2], self.points[0])
        self.raw_normal = _cross(self.u, self.v)
        self.metric2 = _dot(self.raw_normal, self.raw_normal)
        if self.metric2 == 0:
            raise ValueError("degenerate triangle")

    def param_images(self) -> list[Poly]:
        """x,y,z as affine polynomials in the parameters (s,t)."""
        p0 = self.points[0]
        out = []
        for i in range(3):
            p = Poly.const(p0[i], 2) + Poly.variable(0, 2) * self.u[i] + Poly.variable(1, 2) * self.v[i]
            out.append(p)
        return out

    def restrict(self, p: Poly) -> Poly:
        return p.subs(self.param_images())

    def integrate_ref(self, p: Poly) -> Rational:
        """Reference integral: true integral = sqrt(metric2) * this value."""
        return integrate_poly_unit_simplex(self.restrict(p))

    def integrate_ref2(self, q: Poly) -> Rational:
        """Reference integral of a polynomial already in the parameters."""
        return integrate_poly_unit_simplex(q)

    def param_lift(self) -> tuple[Poly, Poly]:
        """The parameters (s,t) as affine polynomials in x,y,z.

        The lift is constant along the normal, so polynomials in (s,t) extend
        canonically to 3-space; surface operators use this extension.
        """
        g11 = _dot(self.u, self.u)
        g12 = _dot(self.u, self.v)
        g22 = _dot(self.v, self.v)
        det = g11 * g22 - g12 * g12
        p0 = self.points[0]
        dx = [Poly.variable(i, 3) - p0[i] for i in range(3)]
        du = dx[0] * self.u[0] + dx[1] * self.u[1] + dx[2] * self.u[2]
        dv = dx[0] * self.v[0] + dx[1] * self.v[1] + dx[2] * self.v[2]
        s = (du * g22 - dv * g12) / det
        t = (dv * g11 - du * g12) / det
        return s, t

    def lift_to_space(self, q: Poly) -> Poly:
        """Extend a polynomial in (s,t) to x,y,z, constant along the normal."""
        s, t = self.param_lift()
        return q.subs([s, t])

    def barycentric_ref(self) -> list[Poly]:
        """Face barycentric coordinates as polynomials in (s,t)."""
        s = Poly.variable(0, 2)
        t = Poly.variable(1, 2)
        return [Poly.const(1, 2) - s - t, s, t]

    def measure2(self) -> Rational:
        """Squared area times 4 (= metric2); area = sqrt(metric2)/2."""
        return self.metric2

    def __repr__(self):
        return f"TriFace({self.points})"


class Segment:
    """Straight segment in 3-space, parametrized over [0,1]."""

    kind = "edge"
    dim = 1

    def __init__(self, p0, p1):
        self.points = [vec(p0), vec(p1)]
        self.tangent = _sub(self.points[1], self.points[0])
        self.metric2 = _dot(self.tangent, self.tangent)
        if self.metric2 == 0:
            raise ValueError("degenerate segment")

    def param_images(self) -> list[Poly]:
        p0 = self.points[0]
        return [Poly.const(p0[i], 1) + Poly.variable(0, 1) * self.tangent[i] for i in range(3)]

    def restrict(self, p: Poly) -> Poly:
        return p.subs(self.param_images())

    def integrate_ref(self, p: Poly) -> Rational:
        """Reference integral: true integral = sqrt(metric2) * this value."""
        q = self.restrict(p)
        total = Q(0)
        for a, c in q.terms.items():
            total += c / (a[0] + 1)
        return total

    def integrate_ref2(self, q: Poly) -> Rational:
        total = Q(0)
        for a, c in q.terms.items():
            total += c / (a[0] + 1)
        return total

    def __repr__(self):
        return f"Segment({self.points})"


def integrate_on_entity(p: Poly, entity) -> Rational:
    """Exact integral of a polynomial restricted to a mesh entity.

    Axis-aligned entities and volume cells return the true integral.  For
    simplicial faces and edges the return value is the reference integral;
    multiply by sqrt(entity.metric2) for the metric-weighted value (the
    factor cancels in every zero- and rank-test this package performs).
    """
    if isinstance(entity, (BoxCell, BoxFace, BoxEdge, TetCell)):
        return entity.integrate(p)
    if isinstance(entity, (TriFace, Segment)):
        return entity.integrate_ref(p)
    raise TypeError(f"not an integration entity: {entity!r}")
