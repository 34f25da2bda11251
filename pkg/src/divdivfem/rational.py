"""Exact rational scalars.

Every coefficient, integral, and matrix entry in this package is a rational
number; nothing is ever rounded.  gmpy2's mpq is used as the carrier (it is
stored in lowest terms with a positive denominator, and arithmetic is exact).
A pure-Python fallback on fractions.Fraction keeps the package importable
without gmpy2, at a significant speed cost.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _mpq, mpz as _mpz

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _mpq

    _mpz = int
    HAVE_GMPY2 = False

#: The rational scalar type. mpq keeps values in lowest terms with a strictly
#: positive denominator, which is exactly the invariant this package needs.
Rational = type(_mpq(0))

ZERO = _mpq(0)
ONE = _mpq(1)


def Q(num, den=1):
    """Build a rational from integers, a rational, or a string like "3/2"."""
    if den != 1:
        return _mpq(num, den)
    if isinstance(num, str):
        return _mpq(num)
    return _mpq(num)


def mpz(n):
    """Arbitrary-precision integer (gmpy2.mpz, or int without gmpy2)."""
    return _mpz(n)


def is_rational(x) -> bool:
    return isinstance(x, Rational) or isinstance(x, int)


def rat_str(x) -> str:
    """Canonical string form, e.g. "3/2" or "-7"."""
    x = _mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str):
    """Inverse of rat_str."""
    return _mpq(s)


def factorial(n: int):
    r = _mpz(1)
    for i in range(2, n + 1):
        r *= i
    return r


def is_perfect_square(x) -> bool:
    """Whether a nonnegative rational is the square of a rational."""
    x = _mpq(x)
    if x < 0:
        return False
    return _isqrt_exact(x.numerator) is not None and _isqrt_exact(x.denominator) is not None


def sqrt_exact(x):
    """Exact square root of a perfect-square rational; raises otherwise."""
    x = _mpq(x)
    n = _isqrt_exact(x.numerator)
    d = _isqrt_exact(x.denominator)
    if n is None or d is None:
        raise ValueError(f"{rat_str(x)} is not a perfect square")
    return _mpq(n, d)


def _isqrt_exact(n):
    import math

    if n < 0:
        return None
    r = math.isqrt(int(n))
    return r if r * r == n else None
