"""Exact dense linear algebra over the rationals.

Rank, determinant, nullspace, and linear solves run on fraction-free
(Bareiss) row echelon forms of integer-scaled copies, which bounds the
intermediate growth to minors of the input.  Nullspace vectors and solutions
are re-checked against the original matrix, so every answer that leaves this
module is certified.

Two rigorous shortcuts exist for the hot paths:

* nonsingularity certificates: a determinant that is nonzero modulo a prime
  is nonzero over the rationals, so a modular elimination (numpy, int64) can
  certify "exact rank = n" outright; only the singular verdict requires the
  full fraction-free elimination.
* matrix inverses: p-adic lifting up to the Hadamard bound reconstructs the
  exact rational inverse; the bound makes the result proven, not heuristic.
  The fraction-free Jordan inverse remains as reference and fallback.

Matrices are plain lists of row lists holding Rational entries.
"""

from __future__ import annotations

import math

import numpy as np

from ..rational import Q, mpz

_PRIMES = (2147483629, 2147483587, 2147483563, 2147483549, 2146435999)


# ---------------------------------------------------------------------------
# basic helpers


def identity(n):
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    Bt = transpose(B)
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            Bj = Bt[j]
            s = Q(0)
            for t in range(k):
                a = Ai[t]
                if a:
                    s += a * Bj[t]
            row.append(s)
        out.append(row)
    return out


def matvec(A, v):
    out = []
    for row in A:
        s = Q(0)
        for a, x in zip(row, v):
            if a and x:
                s += a * x
        out.append(s)
    return out


def is_zero_matrix(M) -> bool:
    return all(all(e == 0 for e in row) for row in M)


def _lcm(a, b):
    return a // math.gcd(a, b) * b


def _int_rows(M):
    """Integerize each row: multiply by the denominator lcm, divide by the
    entry gcd.  Row scalings are transparent to rank, nullspace, and solves;
    determinants divide the tracked rational scales back out."""
    out = []
    scales = []
    for row in M:
        qrow = [Q(e) for e in row]
        lcm = 1
        for e in qrow:
            d = int(e.denominator)
            if d != 1:
                lcm = _lcm(lcm, d)
        irow = [mpz(e.numerator) * (lcm // int(e.denominator)) for e in qrow]
        g = 0
        for e in irow:
            if e:
                g = math.gcd(g, int(e))
                if g == 1:
                    break
        if g > 1:
            irow = [e // g for e in irow]
        out.append(irow)
        scales.append(Q(lcm, g if g > 1 else 1))
    return out, scales


# ---------------------------------------------------------------------------
# fraction-free row echelon form


class EchelonForm:
    """Fraction-free (Bareiss) row echelon form of an integer-scaled copy.

    Pivot columns are scanned left to right, so they form the canonical
    (lexicographically first) independent column set; the pivot row among the
    candidates is the sparsest one, which keeps structured matrices fast
    without affecting any result.
    """

    def __init__(self, M):
        rows, scales = _int_rows(M)
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        self.scales = scales
        self.sign = 1
        self.pivots: list[tuple[int, int]] = []
        nnz = [sum(1 for e in r if e) for r in rows]
        # In classical Bareiss a zero-multiplier row is still rescaled by
        # p/prev each step.  Since row scalings never change rank, nullspace,
        # or solution sets, rows are instead left stale and carry the pivot
        # value of their last true update (last_piv_of[r]); the update at a
        # later step divides by that stored value, which the Sylvester
        # identity shows is still an exact integer division.  Pivot rows are
        # brought up to date on selection, so determinants stay available.
        last_piv_of = [mpz(1)] * self.nrows
        prev = mpz(1)
        pr = 0
        for pc in range(self.ncols):
            best = -1
            for r in range(pr, self.nrows):
                if rows[r][pc] and (best < 0 or nnz[r] < nnz[best]):
                    best = r
            if best < 0:
                continue
            if best != pr:
                rows[pr], rows[best] = rows[best], rows[pr]
                nnz[pr], nnz[best] = nnz[best], nnz[pr]
                last_piv_of[pr], last_piv_of[best] = last_piv_of[best], last_piv_of[pr]
                self.sign = -self.sign
            prow = rows[pr]
            if last_piv_of[pr] != prev:
                lp = last_piv_of[pr]
                for j in range(pc, self.ncols):
                    if prow[j]:
                        prow[j] = prow[j] * prev // lp
                last_piv_of[pr] = prev
            p = prow[pc]
            for r in range(pr + 1, self.nrows):
                row = rows[r]
                f = row[pc]
                if f:
                    lp = last_piv_of[r]
                    cnt = 0
                    for j in range(pc + 1, self.ncols):
                        v = (p * row[j] - f * prow[j]) // lp
                        row[j] = v
                        if v:
                            cnt += 1
                    row[pc] = mpz(0)
                    nnz[r] = cnt
                    last_piv_of[r] = p
            prev = p
            self.pivots.append((pr, pc))
            pr += 1
        self.rank = pr
        self.rows = rows
        self.last_piv = prev

    @property
    def pivot_cols(self):
        return [pc for _, pc in self.pivots]

    def free_cols(self):
        pivset = set(self.pivot_cols)
        return [c for c in range(self.ncols) if c not in pivset]

    def nullspace(self):
        """Canonical rational nullspace basis, one vector per free column."""
        basis = []
        piv = self.pivots
        for fc in self.free_cols():
            v = [Q(0)] * self.ncols
            v[fc] = Q(1)
            for r in range(self.rank - 1, -1, -1):
                pr, pc = piv[r]
                if pc > fc:
                    continue
                row = self.rows[pr]
                s = Q(row[fc]) if row[fc] else Q(0)
                for rr in range(r + 1, self.rank):
                    _, cc = piv[rr]
                    if cc > fc:
                        break
                    if row[cc] and v[cc]:
                        s += Q(row[cc]) * v[cc]
                v[pc] = -s / Q(row[pc])
            basis.append(v)
        return basis


def exact_rank(M, want_nullspace: bool = False):
    """Exact rank (and optionally a certified nullspace basis).

    The nullspace basis is re-checked against M, so a faulty elimination
    cannot return silently.
    """
    if not M or not M[0]:
        ncols = len(M[0]) if M else 0
        return (0, identity(ncols) if want_nullspace else None)
    ech = EchelonForm(M)
    if not want_nullspace:
        return (ech.rank, None)
    ns = ech.nullspace()
    for v in ns:
        if any(e != 0 for e in matvec(M, v)):
            raise ArithmeticError("nullspace verification failed")
    return (ech.rank, ns)


def nullspace(M):
    return exact_rank(M, want_nullspace=True)[1]


def det(M):
    """Exact determinant via fraction-free elimination."""
    n = len(M)
    if n == 0:
        return Q(1)
    if any(len(r) != n for r in M):
        raise ValueError("determinant needs a square matrix")
    ech = EchelonForm(M)
    if ech.rank < n:
        return Q(0)
    d = Q(ech.last_piv) * ech.sign
    for s in ech.scales:
        d /= s
    return d


# ---------------------------------------------------------------------------
# exact solving


def solve_columns(A, B):
    """Solve A X = B exactly, column by column.

    Returns (X, flags): free variables are fixed to zero, and a column
    without an exact solution gets flag False (its X column is zero).
    Every returned solution is re-checked against A and B.
    """
    n, m = len(A), len(A[0])
    k = len(B[0])
    aug = [list(A[i]) + list(B[i]) for i in range(n)]
    ech = EchelonForm(aug)
    pivots = [(r, c) for (r, c) in ech.pivots if c < m]
    rhs_pivot_rows = [r for (r, c) in ech.pivots if c >= m]
    rank_A = len(pivots)
    X = [[Q(0)] * k for _ in range(m)]
    flags = []
    for col in range(k):
        cc = m + col
        consistent = all(not ech.rows[r][cc] for r in rhs_pivot_rows)
        if consistent:
            x = [Q(0)] * m
            for r in range(rank_A - 1, -1, -1):
                pr, pc = pivots[r]
                row = ech.rows[pr]
                s = Q(row[cc])
                for rr in range(r + 1, rank_A):
                    _, c2 = pivots[rr]
                    if row[c2] and x[c2]:
                        s -= Q(row[c2]) * x[c2]
                x[pc] = s / Q(row[pc])
            resid = matvec(A, x)
            consistent = all(resid[i] == B[i][col] for i in range(n))
            if consistent:
                for i in range(m):
                    X[i][col] = x[i]
        flags.append(consistent)
    return X, flags


def solve(A, b):
    """One exact solution of A x = b, or None if inconsistent."""
    X, flags = solve_columns(A, [[e] for e in b])
    return [row[0] for row in X] if flags[0] else None


# ---------------------------------------------------------------------------
# modular certificates


def _to_mod_matrix(M, p):
    """Reduce a rational matrix mod p, or None if a denominator hits p."""
    n, m = len(M), len(M[0])
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        row = M[i]
        for j in range(m):
            e = Q(row[j])
            den = int(e.denominator) % p
            if den == 0:
                return None
            num = int(e.numerator) % p
            if den != 1:
                num = num * pow(den, p - 2, p) % p
            out[i, j] = num
    return out


def _mod_elimination(A, p):
    """In-place row reduction of an int64 matrix mod p; returns the rank."""
    n, m = A.shape
    r = 0
    for c in range(m):
        if r == n:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv_p = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv_p) % p
        col = A[r + 1 :, c].copy()
        mask = col != 0
        if mask.any():
            A[r + 1 :, c:][mask] = (A[r + 1 :, c:][mask] - np.outer(col[mask], A[r, c:])) % p
        r += 1
    return r


def rank_lower_bound(M) -> int:
    """Certified lower bound for rank(M) (rank over GF(p) never exceeds it)."""
    for p in _PRIMES:
        A = _to_mod_matrix(M, p)
        if A is not None:
            return _mod_elimination(A, p)
    raise ArithmeticError("all probe primes divide some denominator")


def certify_nonsingular(M) -> bool:
    """Exact nonsingularity verdict for a square matrix.

    A nonzero determinant modulo a prime is a proof of nonsingularity; the
    singular verdict is only reported after a full fraction-free rank.
    """
    n = len(M)
    for p in _PRIMES:
        A = _to_mod_matrix(M, p)
        if A is None:
            continue
        if _mod_elimination(A, p) == n:
            return True
        break
    return EchelonForm(M).rank == n


# ---------------------------------------------------------------------------
# exact inverse


def inv_jordan(M):
    """Fraction-free Gauss-Jordan inverse (reference implementation)."""
    n = len(M)
    aug = [list(M[i]) + identity(n)[i] for i in range(n)]
    rows, scales = _int_rows(aug)
    prev = mpz(1)
    for c in range(n):
        piv = None
        for r in range(c, n):
            if rows[r][c]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
        p = rows[c][c]
        prow = rows[c]
        for r in range(n):
            if r == c:
                continue
            row = rows[r]
            f = row[c]
            if f or prev != p:
                for j in range(n + n):
                    if j != c:
                        row[j] = (p * row[j] - f * prow[j]) // prev
                row[c] = mpz(0)
        prev = p
    # The identity block was row-scaled along with M, so the right block is
    # d * inv(M) directly; no unscaling is needed.
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        d = Q(rows[i][i])
        for j in range(n):
            out[i][j] = Q(rows[i][n + j]) / d
    return out


def _hadamard_bits(rows) -> int:
    """ceil(log2) of prod_i ||row_i||_2, clamped below at 1."""
    bits = 0
    for row in rows:
        s = 0
        for e in row:
            s += int(e) * int(e)
        if s > 1:
            bits += (s.bit_length() + 1) // 2 + 1
    return max(bits, 1)


def _rational_reconstruct(a, m, bound):
    """num/den with a*den = num (mod m), |num| <= bound, 0 < den <= bound."""
    r0, r1 = int(m), int(a) % int(m)
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    den = s1
    num = r1
    if den == 0:
        return None
    if den < 0:
        den, num = -den, -num
    if den > bound or math.gcd(num % den if den else num, den) != 1:
        return None
    return Q(num, den)


def inv(M):
    """Exact inverse of a nonsingular rational matrix.

    p-adic lifting of an integer-scaled copy up to the Hadamard bound; the
    bound proves the reconstruction equals the true inverse.  Falls back to
    the fraction-free Jordan elimination when the int64 windows are too small.
    """
    n = len(M)
    if n == 0:
        return []
    if n <= 24:
        return inv_jordan(M)
    rows, scales = _int_rows(M)
    maxabs = max((abs(int(e)) for row in rows for e in row), default=0)
    if maxabs == 0:
        raise ZeroDivisionError("matrix is singular")
    # int64 windows: n*(p-1)^2 < 2^63 (digit matmul), n*maxA*(p-1) < 2^63 (residue update)
    p = 1 << 26
    while p > (1 << 7) and (n * (p - 1) * (p - 1) >= (1 << 63) or n * maxabs * (p - 1) >= (1 << 63)):
        p >>= 1
    if p <= (1 << 7):
        return inv_jordan(M)
    prime = _prev_prime(p)
    A64 = np.array([[int(e) for e in row] for row in rows], dtype=np.int64)
    Cinv = _mod_inverse_matrix(A64 % prime, prime)
    if Cinv is None:
        return inv_jordan(M)
    had = _hadamard_bits(rows)
    target_bits = 2 * had + 2
    steps = target_bits // (prime.bit_length() - 1) + 2
    R = np.eye(n, dtype=np.int64)
    digits = []
    for _ in range(steps):
        Xk = Cinv.dot(R % prime) % prime
        digits.append(Xk)
        R = (R - A64.dot(Xk)) // prime
    modulus = mpz(prime) ** steps
    bound = int(mpz(1) << had)
    pk = mpz(1)
    acc = [[mpz(0)] * n for _ in range(n)]
    for Xk in digits:
        Xl = Xk.tolist()
        for i in range(n):
            row = Xl[i]
            arow = acc[i]
            for j in range(n):
                if row[j]:
                    arow[j] += pk * row[j]
        pk *= prime
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            q = _rational_reconstruct(acc[i][j] % modulus, modulus, bound)
            if q is None:
                return inv_jordan(M)
            out[i][j] = q
    for j in range(n):
        if scales[j] != 1:
            for i in range(n):
                out[i][j] *= scales[j]
    return out


def _mod_inverse_matrix(A, p):
    """Inverse of A mod p via Gauss-Jordan, or None if singular mod p."""
    n = A.shape[0]
    W = np.concatenate([A % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        nz = np.nonzero(W[c:, c])[0]
        if nz.size == 0:
            return None
        pr = c + int(nz[0])
        if pr != c:
            W[[c, pr]] = W[[pr, c]]
        invp = pow(int(W[c, c]), p - 2, p)
        W[c] = (W[c] * invp) % p
        col = W[:, c].copy()
        col[c] = 0
        mask = col != 0
        if mask.any():
            W[mask] = (W[mask] - np.outer(col[mask], W[c])) % p
    return W[:, n:]


def _prev_prime(n: int) -> int:
    try:
        from gmpy2 import prev_prime

        return int(prev_prime(n))
    except Exception:  # pragma: no cover
        k = n - 1
        while k > 2:
            if all(k % d for d in range(2, int(math.isqrt(k)) + 1)):
                return k
            k -= 1
        return 2
