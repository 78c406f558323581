"""Exact Gaussian elimination over a cyclotomic field."""
from __future__ import annotations

from functools import lru_cache

from .cyclotomic import CycNum


class SingularMatrix(ArithmeticError):
    pass


def _copy(rows):
    return [list(r) for r in rows]


def row_echelon(rows: list[list[CycNum]]) -> tuple[list[list[CycNum]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = _copy(rows)
    if not A:
        return A, []
    n_cols = len(A[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(A)) if not A[i][c].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank(rows: list[list[CycNum]]) -> int:
    """Exact row rank; a modular certificate short-cuts the full-rank case."""
    if not rows:
        return 0
    p, w = split_prime(rows[0][0].conductor)
    if _rank_mod_p(rows, p, w) == len(rows):
        return len(rows)
    return _exact_rank(rows)


def _exact_rank(rows: list[list[CycNum]]) -> int:
    """Row rank, computed by sweeping columns and stopping once it is full."""
    if not rows:
        return 0
    n = len(rows)
    basis: list[tuple[int, list[CycNum]]] = []  # (pivot, vector with 1 at pivot)
    for j in range(len(rows[0])):
        v = [rows[i][j] for i in range(n)]
        for piv, b in basis:
            c = v[piv]
            if not c.is_zero():
                v = [x - c * y if not y.is_zero() else x for x, y in zip(v, b)]
        piv = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if piv is None:
            continue
        inv = v[piv].inverse()
        v = [x * inv for x in v]
        basis.append((piv, v))
        if len(basis) == n:
            break
    return len(basis)


def inverse(M: list[list[CycNum]]) -> list[list[CycNum]]:
    n = len(M)
    L = M[0][0].conductor
    one, zero = CycNum.from_rational(L, 1), CycNum.zero(L)
    aug = [list(M[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    R, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in R]


def matmul(A, B):
    L = A[0][0].conductor
    out = []
    for row in A:
        new = []
        for j in range(len(B[0])):
            acc = CycNum.zero(L)
            for i, x in enumerate(row):
                if not x.is_zero():
                    acc = acc + x * B[i][j]
            new.append(acc)
        out.append(new)
    return out


def solve(A: list[list[CycNum]], b: list[CycNum]) -> list[CycNum] | None:
    """A solution x of A x = b (free variables set to 0), or None if inconsistent."""
    n = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = row_echelon(aug)
    if n in piv:
        return None
    L = b[0].conductor
    x = [CycNum.zero(L) for _ in range(n)]
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return x


# -- modular full-rank certificate ------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def split_prime(L: int) -> tuple[int, int]:
    """A prime p = 1 mod L near 2^61 and w in F_p of exact multiplicative order L."""
    m = (1 << 61) // L
    while not _is_probable_prime(m * L + 1):
        m += 1
    p = m * L + 1
    qs = [q for q in range(2, L + 1) if L % q == 0 and _is_probable_prime(q)]
    for a in range(2, p):
        w = pow(a, (p - 1) // L, p)
        if all(pow(w, L // q, p) != 1 for q in qs):
            return p, w
    raise AssertionError("no element of order L")


def _rank_mod_p(rows, p: int, w: int) -> int | None:
    M = []
    for r in rows:
        out = []
        for x in r:
            v = x.residue(p, w)
            if v is None:
                return None
            out.append(v)
        M.append(out)
    rk, ncols = 0, len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(rk, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = pow(M[rk][c], -1, p)
        prow = [x * inv % p for x in M[rk]]
        M[rk] = prow
        for i in range(rk + 1, len(M)):
            f = M[i][c]
            if f:
                M[i] = [(x - f * y) % p for x, y in zip(M[i], prow)]
        rk += 1
        if rk == len(M):
            break
    return rk

