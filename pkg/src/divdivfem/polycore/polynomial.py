"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a dict mapping exponent tuples (the multi-index) to nonzero
rational coefficients.  Most of the package works with polynomials in the
three space variables x, y, z; restrictions to faces and edges produce
polynomials in two variables or one, so the number of variables is carried
explicitly.

Multi-indices are plain tuples of nonnegative ints.  Total degree is
``sum(alpha)``; the per-variable degree of variable i is ``alpha[i]``.
Bases are always enumerated in graded lexicographic order so that every
construction in the package is deterministic.
"""

from __future__ import annotations

from typing import Sequence

from ..rational import Q, rat_str

MultiIndex = tuple  # exponent tuple, one entry per variable


def grlex_key(alpha: MultiIndex):
    """Sort key for graded lexicographic order (total degree, then lex)."""
    return (sum(alpha), alpha)


class Poly:
    """Immutable-by-convention sparse polynomial over the rationals."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None, _clean: bool = False):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {tuple(a): Q(c) for a, c in terms.items() if c != 0}

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars: int = 3) -> "Poly":
        return Poly(nvars, {}, _clean=True)

    @staticmethod
    def const(c, nvars: int = 3) -> "Poly":
        c = Q(c)
        if c == 0:
            return Poly.zero(nvars)
        return Poly(nvars, {(0,) * nvars: c}, _clean=True)

    @staticmethod
    def monomial(alpha: Sequence[int], coeff=1, nvars: int | None = None) -> "Poly":
        alpha = tuple(alpha)
        if nvars is None:
            nvars = len(alpha)
        c = Q(coeff)
        if c == 0:
            return Poly.zero(nvars)
        return Poly(nvars, {alpha: c}, _clean=True)

    @staticmethod
    def variable(i: int, nvars: int = 3) -> "Poly":
        alpha = tuple(1 if j == i else 0 for j in range(nvars))
        return Poly(nvars, {alpha: Q(1)}, _clean=True)

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(a[i] for a in self.terms)

    def coeff(self, alpha: Sequence[int]):
        return self.terms.get(tuple(alpha), Q(0))

    def items_grlex(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other, self.nvars)
        t = dict(self.terms)
        for a, c in other.terms.items():
            s = t.get(a)
            if s is None:
                t[a] = c
            else:
                s = s + c
                if s == 0:
                    del t[a]
                else:
                    t[a] = s
        return Poly(self.nvars, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {a: -c for a, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Q(other)
            if c == 0:
                return Poly.zero(self.nvars)
            return Poly(self.nvars, {a: v * c for a, v in self.terms.items()}, _clean=True)
        t: dict = {}
        n = self.nvars
        for a1, c1 in self.terms.items():
            for a2, c2 in other.terms.items():
                a = tuple(a1[i] + a2[i] for i in range(n))
                s = t.get(a)
                if s is None:
                    t[a] = c1 * c2
                else:
                    t[a] = s + c1 * c2
        return Poly(n, {a: c for a, c in t.items() if c != 0}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = Q(scalar)
        return Poly(self.nvars, {a: v / c for a, v in self.terms.items()}, _clean=True)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        return (self - Poly.const(other, self.nvars)).is_zero()

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus ------------------------------------------------------

    def diff(self, i: int) -> "Poly":
        """Exact partial derivative with respect to variable i."""
        t = {}
        for a, c in self.terms.items():
            e = a[i]
            if e:
                b = a[:i] + (e - 1,) + a[i + 1 :]
                nc = c * e
                s = t.get(b)
                t[b] = nc if s is None else s + nc
        return Poly(self.nvars, {a: c for a, c in t.items() if c != 0}, _clean=True)

    def antideriv(self, i: int) -> "Poly":
        """Antiderivative in variable i with zero constant term."""
        t = {}
        for a, c in self.terms.items():
            b = a[:i] + (a[i] + 1,) + a[i + 1 :]
            t[b] = c / (a[i] + 1)
        return Poly(self.nvars, t, _clean=True)

    def eval(self, point: Sequence):
        """Exact value at a rational point."""
        pt = [Q(v) for v in point]
        total = Q(0)
        pows: list[dict] = [dict() for _ in range(self.nvars)]
        for a, c in self.terms.items():
            v = c
            for i, e in enumerate(a):
                if e:
                    pe = pows[i].get(e)
                    if pe is None:
                        pe = pt[i] ** e
                        pows[i][e] = pe
                    v = v * pe
            total += v
        return total

    def subs(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute variable i by images[i] (all in a common variable set)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars if images else self.nvars
        for im in images:
            if im.nvars != nv:
                raise ValueError("images must share a variable count")
        out = Poly.zero(nv)
        pows: list[dict] = [dict() for _ in range(self.nvars)]
        for a, c in self.terms.items():
            term = Poly.const(c, nv)
            for i, e in enumerate(a):
                if e:
                    pe = pows[i].get(e)
                    if pe is None:
                        pe = images[i] ** e
                        pows[i][e] = pe
                    term = term * pe
            out = out + term
        return out

    def translate(self, shift: Sequence) -> "Poly":
        """p(x + shift): substitute x_i -> x_i + shift_i."""
        images = [Poly.variable(i, self.nvars) + Q(shift[i]) for i in range(self.nvars)]
        return self.subs(images)

    # -- display -------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        names = ["x", "y", "z", "s", "t"][: self.nvars]
        parts = []
        for a, c in self.items_grlex():
            mono = "".join(f"*{names[i]}^{e}" if e > 1 else f"*{names[i]}" if e == 1 else "" for i, e in enumerate(a))
            parts.append(f"{rat_str(c)}{mono}")
        return " + ".join(parts)


def monomials_total_degree(k: int, nvars: int = 3) -> list[MultiIndex]:
    """All exponent tuples of total degree <= k, in graded lex order."""
    if k < 0:
        return []
    out = []
    if nvars == 1:
        out = [(e,) for e in range(k + 1)]
        return out
    for d in range(k + 1):
        out.extend(_compositions(d, nvars))
    return out


def _compositions(d: int, n: int):
    """Exponent tuples of total degree exactly d, lex ascending."""
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


def monomials_box_degrees(degrees: Sequence[int]) -> list[MultiIndex]:
    """Exponent tuples with per-variable bounds, in graded lex order.

    degrees[i] < 0 yields the empty list (zero space).
    """
    if any(d < 0 for d in degrees):
        return []
    ranges = [range(d + 1) for d in degrees]
    out = []

    def rec(prefix, i):
        if i == len(ranges):
            out.append(tuple(prefix))
            return
        for e in ranges[i]:
            rec(prefix + [e], i + 1)

    rec([], 0)
    out.sort(key=grlex_key)
    return out
