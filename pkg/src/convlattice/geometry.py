"""Exact polytopes and the lattice operations on them.

A :class:`ConvexBody` is a polytope stored by its vertex set, minimal and
sorted lexicographically, so ``==`` on bodies is equality of point sets.
Meets go through an H-representation: facets are enumerated from the
vertices, the two inequality systems are concatenated, and vertices are
enumerated again. Both conversions run the integer double description
routine in :mod:`convlattice.cone`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .cone import extreme_rays
from .errors import DimensionMismatchError, InsufficientPointsError
from .linalg import dot, integer_row, nullspace, rank, rref, sub
from .rational import Point, as_point

IntRow = tuple[int, ...]


@dataclass(frozen=True)
class HRep:
    """``row . x == rhs`` for every equality, ``row . x <= rhs`` for every
    inequality; rows and right-hand sides are integers."""
    equalities: tuple[tuple[IntRow, int], ...]
    inequalities: tuple[tuple[IntRow, int], ...]

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        for row, rhs in self.equalities:
            if dot(row, x) != rhs:
                return False
        for row, rhs in self.inequalities:
            if dot(row, x) > rhs:
                return False
        return True


@dataclass(frozen=True)
class ConvexBody:
    ambient_dim: int
    vertices: tuple[Point, ...] = ()

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be positive")
        for v in self.vertices:
            if len(v) != self.ambient_dim:
                raise DimensionMismatchError(
                    f"vertex {v} does not live in dimension {self.ambient_dim}")

    @classmethod
    def empty(cls, n: int) -> "ConvexBody":
        return cls(n, ())

    @classmethod
    def point(cls, p: Iterable) -> "ConvexBody":
        p = as_point(p)
        return cls(len(p), (p,))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @cached_property
    def dim(self) -> int:
        if not self.vertices:
            return -1
        p0 = self.vertices[0]
        return rank([sub(v, p0) for v in self.vertices[1:]]) if len(self.vertices) > 1 else 0

    @cached_property
    def hrep(self) -> HRep:
        if not self.vertices:
            return HRep((((0,) * self.ambient_dim, 1),), ())
        _, h, _ = _analyse(list(self.vertices), self.ambient_dim)
        return h

    def contains(self, x: Sequence) -> bool:
        x = as_point(x)
        if len(x) != self.ambient_dim:
            raise DimensionMismatchError("point and body dimensions differ")
        if not self.vertices:
            return False
        if len(self.vertices) == 1:
            return x == self.vertices[0]
        return self.hrep.satisfied_by(x)

    def issubset(self, other: "ConvexBody") -> bool:
        _check_same(self, other)
        return all(other.contains(v) for v in self.vertices)

    def __repr__(self) -> str:
        vs = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in self.vertices)
        return f"ConvexBody({self.ambient_dim}, [{vs}])"


@dataclass(frozen=True)
class AffineSubspace:
    ambient_dim: int
    base: Optional[Point]
    directions: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        if self.base is None and self.directions:
            raise ValueError("the empty subspace has no directions")
        if self.directions and rank(self.directions) != len(self.directions):
            raise ValueError("directions must be linearly independent")

    @classmethod
    def empty(cls, n: int) -> "AffineSubspace":
        return cls(n, None, ())

    @property
    def is_empty(self) -> bool:
        return self.base is None

    @property
    def dim(self) -> int:
        return -1 if self.base is None else len(self.directions)

    def normals(self) -> list[tuple[Fraction, ...]]:
        return nullspace(list(self.directions), self.ambient_dim)

    def contains(self, x: Sequence) -> bool:
        if self.base is None:
            return False
        d = sub(as_point(x), self.base)
        return all(dot(nv, d) == 0 for nv in self.normals())

    def contains_subspace(self, other: "AffineSubspace") -> bool:
        if other.base is None:
            return True
        if not self.contains(other.base):
            return False
        return all(dot(nv, d) == 0 for nv in self.normals() for d in other.directions)


@dataclass(frozen=True)
class RadonPartition:
    red: tuple[Point, ...]
    blue: tuple[Point, ...]
    witness: Point
    coefficients: tuple[Fraction, ...] = field(default=(), compare=False)


# -- internals -------------------------------------------------------------

def _check_same(C: ConvexBody, D: ConvexBody) -> None:
    if C.ambient_dim != D.ambient_dim:
        raise DimensionMismatchError(
            f"bodies live in dimensions {C.ambient_dim} and {D.ambient_dim}")


def _facets_full(points: list[tuple[Fraction, ...]], k: int) -> list[tuple[IntRow, int]]:
    """Facets ``a . z <= beta`` of a full-dimensional point set in Q^k."""
    if k == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        return [((lo.denominator * -1,), -lo.numerator), ((hi.denominator,), hi.numerator)]
    rows = [integer_row(p + (Fraction(-1),)) for p in points]
    rays, lines = extreme_rays(rows, k + 1)
    assert not lines, "point set is not full-dimensional"
    return [(r[:-1], r[-1]) for r in rays if any(r[:-1])]


def _analyse(points: list[Point], n: int):
    """Minimal vertices, H-representation and dimension of conv(points)."""
    pts = sorted(set(points))
    p0 = pts[0]
    diffs = [sub(p, p0) for p in pts[1:]]
    red, piv = rref(diffs, n) if diffs else ([], [])
    k = len(piv)
    eqs = []
    for nv in nullspace(red, n):
        row = integer_row(nv + (dot(nv, p0),))
        eqs.append((row[:-1], row[-1]))
    if k == 0:
        return [p0], HRep(tuple(eqs), ()), 0
    proj = [tuple(p[j] for j in piv) for p in pts]
    facets = _facets_full(proj, k)
    masks = []
    for w in proj:
        m = 0
        for fi, (a, beta) in enumerate(facets):
            if dot(a, w) == beta:
                m |= 1 << fi
        masks.append(m)
    verts = [pts[i] for i, m in enumerate(masks)
             if not any(j != i and masks[j] & m == m for j in range(len(pts)))]
    ineqs = []
    for a, beta in facets:
        row = [0] * n
        for j, aj in zip(piv, a):
            row[j] = aj
        ineqs.append((tuple(row), beta))
    return verts, HRep(tuple(eqs), tuple(ineqs)), k


def vertices_from_hrep(n: int, equalities: Sequence[tuple[Sequence, object]],
                       inequalities: Sequence[tuple[Sequence, object]]) -> list[Point]:
    """Vertices of the bounded polyhedron given by exact constraints.

    Raises ``ValueError`` if the polyhedron turns out to be unbounded.
    """
    if equalities:
        aug = [list(r) + [b] for r, b in equalities]
        red, piv = rref(aug, n + 1)
        if piv and piv[-1] == n:
            return []
    else:
        red, piv = [], []
    free = [j for j in range(n) if j not in piv]
    x0 = [Fraction(0)] * n
    for row, p in zip(red, piv):
        x0[p] = row[n]

    def lift(z: Sequence[Fraction]) -> Point:
        x = list(x0)
        for f, zf in zip(free, z):
            x[f] += zf
            for row, p in zip(red, piv):
                x[p] -= row[f] * zf
        return tuple(x)

    if not free:
        return [tuple(x0)] if all(dot(r, x0) <= b for r, b in inequalities) else []

    k = len(free)
    rows = [(0,) * k + (-1,)]
    for r, b in inequalities:
        g = [r[f] - sum((r[p] * row[f] for row, p in zip(red, piv)), Fraction(0)) for f in free]
        h = dot(r, x0) - b
        rows.append(integer_row(g + [h]))
    rays, lines = extreme_rays(rows, k + 1)
    if lines:
        raise ValueError("polyhedron is unbounded")
    out = []
    for ray in rays:
        t = ray[-1]
        if t <= 0:
            raise ValueError("polyhedron is unbounded")
        out.append(lift([Fraction(c, t) for c in ray[:-1]]))
    return sorted(set(out))


def _body(n: int, verts: Iterable[Point]) -> ConvexBody:
    return ConvexBody(n, tuple(sorted(verts)))


# -- public operations -----------------------------------------------------

def convex_hull(points: Iterable, ambient_dim: Optional[int] = None) -> ConvexBody:
    """Convex hull of finitely many points, as a canonical body.

    ``ambient_dim`` is only needed when ``points`` is empty.
    """
    pts = [as_point(p) for p in points]
    if not pts:
        if ambient_dim is None:
            raise ValueError("ambient_dim is required for an empty point list")
        return ConvexBody.empty(ambient_dim)
    n = len(pts[0])
    if any(len(p) != n for p in pts) or (ambient_dim is not None and ambient_dim != n):
        raise DimensionMismatchError("points of different dimensions")
    verts, h, k = _analyse(pts, n)
    body = _body(n, verts)
    body.__dict__["hrep"] = h
    body.__dict__["dim"] = k
    return body


def meet(C: ConvexBody, D: ConvexBody) -> ConvexBody:
    """``C ∩ D``."""
    _check_same(C, D)
    n = C.ambient_dim
    if C.is_empty or D.is_empty:
        return ConvexBody.empty(n)
    if C == D:
        return C
    if len(C.vertices) == 1:
        return C if D.contains(C.vertices[0]) else ConvexBody.empty(n)
    if len(D.vertices) == 1:
        return D if C.contains(D.vertices[0]) else ConvexBody.empty(n)
    hc, hd = C.hrep, D.hrep
    verts = vertices_from_hrep(n, hc.equalities + hd.equalities, hc.inequalities + hd.inequalities)
    return _body(n, verts)


def join(C: ConvexBody, D: ConvexBody) -> ConvexBody:
    """``conv(C ∪ D)``."""
    _check_same(C, D)
    if C.is_empty:
        return D
    if D.is_empty:
        return C
    return convex_hull(C.vertices + D.vertices)


def meet_all(bodies: Sequence[ConvexBody]) -> ConvexBody:
    out = bodies[0]
    for b in bodies[1:]:
        out = meet(out, b)
    return out


def join_all(bodies: Sequence[ConvexBody], ambient_dim: Optional[int] = None) -> ConvexBody:
    pts = [v for b in bodies for v in b.vertices]
    if ambient_dim is None:
        ambient_dim = bodies[0].ambient_dim
    if any(b.ambient_dim != ambient_dim for b in bodies):
        raise DimensionMismatchError("bodies of different dimensions")
    return convex_hull(pts, ambient_dim)


def dim(C: ConvexBody) -> int:
    """Dimension of ``C``; -1 for the empty body."""
    return C.dim


def affine_hull(C: ConvexBody) -> AffineSubspace:
    if C.is_empty:
        return AffineSubspace.empty(C.ambient_dim)
    p0 = C.vertices[0]
    red, _ = rref([sub(v, p0) for v in C.vertices[1:]], C.ambient_dim) if len(C.vertices) > 1 else ([], [])
    return AffineSubspace(C.ambient_dim, p0, tuple(tuple(r) for r in red))


def _circuit(lifted: Sequence[tuple], idx: tuple[int, ...]) -> Optional[tuple[Fraction, ...]]:
    cols = [lifted[i] for i in idx]
    rows = [[c[j] for c in cols] for j in range(len(cols[0]))]
    ker = nullspace(rows, len(idx))
    if len(ker) != 1 or any(x == 0 for x in ker[0]):
        return None
    return ker[0]


def radon_partition(points: Sequence) -> RadonPartition:
    """Split ``points`` into two parts whose hulls meet.

    Uses the affine dependence supported on the lexicographically smallest
    circuit among the first n+2 points. Points with zero coefficient go to
    ``blue``.
    """
    pts = [as_point(p) for p in points]
    if not pts:
        raise InsufficientPointsError("no points given")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionMismatchError("points of different dimensions")
    if len(pts) < n + 2:
        raise InsufficientPointsError(f"need at least {n + 2} points in dimension {n}, got {len(pts)}")
    head = pts[: n + 2]
    lifted = [p + (Fraction(1),) for p in head]
    best = None
    for size in range(2, n + 3):
        for idx in combinations(range(n + 2), size):
            if best is not None and idx > best[0]:
                continue
            lam = _circuit(lifted, idx)
            if lam is not None and (best is None or idx < best[0]):
                best = (idx, lam)
    idx, lam = best
    if lam[0] < 0:
        lam = tuple(-x for x in lam)
    coeff = [Fraction(0)] * len(pts)
    for i, c in zip(idx, lam):
        coeff[i] = c
    red = tuple(p for p, c in zip(pts, coeff) if c < 0)
    blue = tuple(p for p, c in zip(pts, coeff) if c >= 0)
    total = sum(c for c in coeff if c > 0)
    witness = tuple(sum((c * p[j] for p, c in zip(pts, coeff) if c > 0), Fraction(0)) / total
                    for j in range(n))
    return RadonPartition(red, blue, witness, tuple(coeff))
