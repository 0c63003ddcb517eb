"""Seeded generators for rationals, points and bodies.

Every randomized routine takes a ``numpy.random.Generator`` obtained from
:func:`stream`, which derives an independent stream from one integer seed,
a stream name and a trial index. Serial and parallel runs therefore draw
identical data for the same (seed, name, index).
"""

from __future__ import annotations

import zlib
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .geometry import ConvexBody, convex_hull
from .linalg import rank, sub
from .rational import Point

NUMERATORS = (-8, 8)
DENOMINATORS = (1, 2, 4)


def stream(seed: int, name: str, index: int = 0) -> np.random.Generator:
    key = zlib.crc32(name.encode("utf-8"))
    ss = np.random.SeedSequence(entropy=seed & (2**64 - 1), spawn_key=(key, index))
    return np.random.default_rng(ss)


def rational(rng: np.random.Generator, lo: int = NUMERATORS[0], hi: int = NUMERATORS[1],
             denominators: Sequence[int] = DENOMINATORS) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.choice(denominators)))


def unit_fraction(rng: np.random.Generator, max_den: int = 8) -> Fraction:
    """Rational strictly inside (0, 1)."""
    q = int(rng.integers(2, max_den + 1))
    return Fraction(int(rng.integers(1, q)), q)


def point(rng: np.random.Generator, n: int, **kw) -> Point:
    return tuple(rational(rng, **kw) for _ in range(n))


def nonzero_vector(rng: np.random.Generator, n: int, **kw) -> Point:
    while True:
        v = point(rng, n, **kw)
        if any(v):
            return v


def body(rng: np.random.Generator, n: int, min_vertices: int = 1, max_vertices: int = 6) -> ConvexBody:
    k = int(rng.integers(min_vertices, max_vertices + 1))
    return convex_hull([point(rng, n) for _ in range(k)])


def body_pair(rng: np.random.Generator, n: int, share: float = 1 / 3) -> tuple[ConvexBody, ConvexBody]:
    """Two random bodies; with probability ``share`` the second one is built
    around a vertex of the first so that meets are often nonempty."""
    C = body(rng, n)
    k = int(rng.integers(1, 7))
    pts = [point(rng, n) for _ in range(k)]
    if rng.random() < share:
        pts[0] = C.vertices[int(rng.integers(len(C.vertices)))]
    return C, convex_hull(pts)


def body_of_dim(rng: np.random.Generator, n: int, k: int, extra: int = 2) -> ConvexBody:
    """Random body of dimension exactly ``k`` (``-1`` gives the empty body)."""
    if k < 0:
        return ConvexBody.empty(n)
    while True:
        pts = [point(rng, n) for _ in range(k + 1)]
        if rank([sub(p, pts[0]) for p in pts[1:]]) == k:
            break
    for _ in range(int(rng.integers(0, extra + 1))):
        if k == 0:
            break
        coeffs = [unit_fraction(rng) - Fraction(1, 2) + Fraction(1, k + 1) for _ in range(k)]
        q = list(pts[0])
        for c, p in zip(coeffs, pts[1:]):
            for j in range(n):
                q[j] += c * (p[j] - pts[0][j])
        pts.append(tuple(q))
    return convex_hull(pts)


def point_in(rng: np.random.Generator, C: ConvexBody) -> Optional[Point]:
    """Random convex combination of the vertices of ``C``."""
    if C.is_empty:
        return None
    w = [int(rng.integers(0, 4)) for _ in C.vertices]
    if not any(w):
        w[int(rng.integers(len(w)))] = 1
    s = sum(w)
    return tuple(sum((Fraction(wi, s) * v[j] for wi, v in zip(w, C.vertices)), Fraction(0))
                 for j in range(C.ambient_dim))
