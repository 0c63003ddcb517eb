"""Exact linear algebra over the rationals (and integer helpers for the
cone routines)."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[Fraction]]


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def scale(t, u: Sequence) -> tuple:
    return tuple(t * a for a in u)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence]) -> tuple:
    n = len(vectors[0])
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i in range(n):
                out[i] += c * v[i]
    return tuple(out)


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form. Zero rows are dropped.

    Returns the nonzero rows and their pivot columns.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(m):
            break
        sel = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        pv = m[r][col]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r:
                f = m[i][col]
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], prow)]
        pivots.append(col)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """One exact solution of ``A x = b`` (free variables set to 0), or None."""
    ncols = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    red, piv = rref(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[ncols]
    return tuple(x)


def inverse(A: Sequence[Sequence]) -> Optional[Matrix]:
    n = len(A)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in red]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*B))
    return [[dot(r, c) for c in cols] for r in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> tuple[Fraction, ...]:
    return tuple(dot(r, x) for r in A)


def transpose(A: Sequence[Sequence]) -> Matrix:
    return [list(c) for c in zip(*A)]


def is_parallel(u: Sequence, v: Sequence) -> bool:
    """True iff u and v are nonzero and linearly dependent."""
    if not any(u) or not any(v):
        return False
    return rank([u, v]) == 1


# -- integer helpers -------------------------------------------------------

def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, v, 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def integer_row(row: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive multiple of ``row`` with coprime integer entries."""
    den = 1
    for x in row:
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    return primitive([int(Fraction(x) * den) for x in row])


def idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))
