"""Hyperplane transversals of segment families.

Two structured positions are handled:

* rays mode: every segment lies on a ray from a common apex ``o``. With
  ``o`` moved to the origin a hyperplane avoiding ``o`` is written
  ``<a, y> = 1`` and identified with its pole ``a``. It meets the segment
  ``{s u : s_lo <= s <= s_hi}`` iff ``1/s_hi <= <a, u> <= 1/s_lo``, so the
  set of transversals is a polyhedron in pole space.
* parallel mode: all segments are vertical, ``[(x, lo), (x, hi)]`` with x in
  Q^(d-1). Non-vertical hyperplanes are graphs of affine functionals psi and
  the condition is ``lo <= psi(x) <= hi``.

Both reduce to exact LP feasibility with d unknowns, so an infeasible family
always contains an infeasible subfamily of at most d + 1 members.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (DegenerateFamilyError, DimensionMismatchError, NotFoundError,
                     SizeLimitError, UndefinedPoleError)
from .geometry import AffineSubspace, ConvexBody, join_all, meet, radon_partition
from .linalg import dot, integer_row, matvec, rank, rref, scale, sub
from .lp import feasible_combination, max_margin, solve_standard
from .rational import Point, as_point, to_fraction
from . import sampling

log = logging.getLogger(__name__)

HELLY_FAMILY_LIMIT = 25


@dataclass(frozen=True)
class RaySegment:
    """``{s u : s_lo <= s <= s_hi}`` relative to the apex."""
    direction: Point
    s_lo: Fraction
    s_hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "direction", as_point(self.direction))
        object.__setattr__(self, "s_lo", to_fraction(self.s_lo))
        object.__setattr__(self, "s_hi", to_fraction(self.s_hi))
        if not any(self.direction):
            raise ValueError("segment direction must be nonzero")
        if not 0 < self.s_lo <= self.s_hi:
            raise ValueError("need 0 < s_lo <= s_hi")

    @property
    def dim(self) -> int:
        return len(self.direction)

    def point(self, s, o: Optional[Sequence] = None) -> Point:
        p = scale(to_fraction(s), self.direction)
        return p if o is None else tuple(a + b for a, b in zip(p, as_point(o)))


@dataclass(frozen=True)
class ParallelSegment:
    """``[(base, lo), (base, hi)]``: the common direction is the last axis."""
    base: Point
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", as_point(self.base))
        object.__setattr__(self, "lo", to_fraction(self.lo))
        object.__setattr__(self, "hi", to_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError("need lo <= hi")

    @property
    def dim(self) -> int:
        return len(self.base) + 1


Segment = Union[RaySegment, ParallelSegment]


def _exact(x):
    """Coerce plain numbers to Fraction; leave other field elements alone."""
    return to_fraction(x) if isinstance(x, (int, str, Fraction)) else x


@dataclass(frozen=True)
class Hyperplane:
    """``{y : <normal, y> = offset}``.

    Entries are kept as given so that the pole formulas also work over
    other exact fields (e.g. algebraic numbers)."""
    normal: tuple
    offset: object

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(_exact(x) for x in self.normal))
        object.__setattr__(self, "offset", _exact(self.offset))
        if all(x == 0 for x in self.normal):
            raise ValueError("hyperplane normal must be nonzero")

    def value(self, y: Sequence):
        return sum(a * b for a, b in zip(self.normal, y)) - self.offset

    def contains(self, y: Sequence) -> bool:
        return self.value(y) == 0


def pole(H: Hyperplane, o: Sequence):
    """The vector a with ``H = {y : <a, y - o> = 1}``."""
    delta = H.offset - sum(a * _exact(b) for a, b in zip(H.normal, o))
    if delta == 0:
        raise UndefinedPoleError("the hyperplane passes through the apex")
    return tuple(x / delta for x in H.normal)


def hyperplane_from_pole(a: Sequence, o: Sequence) -> Hyperplane:
    a = tuple(_exact(x) for x in a)
    return Hyperplane(a, sum(x * _exact(y) for x, y in zip(a, o)) + 1)


@dataclass(frozen=True)
class Band:
    """``{a : lo <= <a, u> <= hi}`` with u a primitive integer vector."""
    u: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    def contains(self, a: Sequence) -> bool:
        return self.lo <= dot(self.u, a) <= self.hi


def segment_constraint(I: RaySegment) -> Band:
    u = integer_row(I.direction)
    # direction = lam * u with lam > 0
    j = next(j for j, x in enumerate(u) if x)
    lam = I.direction[j] / u[j]
    return Band(u, 1 / (I.s_hi * lam), 1 / (I.s_lo * lam))


def segment_meets(H: Hyperplane, I: RaySegment, o: Sequence) -> bool:
    """Direct test whether H meets the segment (no pole involved)."""
    lo, hi = H.value(I.point(I.s_lo, o)), H.value(I.point(I.s_hi, o))
    return (lo <= 0 <= hi) or (hi <= 0 <= lo)


@dataclass(frozen=True)
class HyperplaneCert:
    """A transversal hyperplane with the point where it meets each segment.

    rays mode: ``pole`` is a and ``hits`` holds ``s_I = 1/<a, u_I>``.
    parallel mode: ``psi = (slope, constant)`` and ``hits`` holds ``psi(x_I)``.
    ``span_dim`` is the dimension spanned by the data; when it is below the
    ambient dimension the transversal is one of a family of solutions.
    """
    mode: str
    hyperplane: Hyperplane
    hits: tuple[Fraction, ...]
    span_dim: int
    pole: Optional[Point] = None
    psi: Optional[tuple[Point, Fraction]] = None


@dataclass(frozen=True)
class TransversalResult:
    feasible: bool
    certificate: Optional[HyperplaneCert] = None
    infeasible_subfamily: tuple[int, ...] = ()


def _family_dim(family: Sequence[Segment]) -> int:
    if not family:
        raise DegenerateFamilyError("empty family: only the zero pole satisfies it")
    dims = {I.dim for I in family}
    if len(dims) != 1:
        raise DimensionMismatchError("segments live in different dimensions")
    return dims.pop()


def _rows(family: Sequence[Segment]) -> tuple[list, list]:
    """Inequality rows (two per segment) over the d unknowns."""
    A, b = [], []
    for I in family:
        if isinstance(I, RaySegment):
            band = segment_constraint(I)
            row = list(band.u)
            lo, hi = band.lo, band.hi
        else:
            row = list(I.base) + [Fraction(1)]
            lo, hi = I.lo, I.hi
        A.append(row)
        b.append(hi)
        A.append([-x for x in row])
        b.append(-lo)
    return A, b


def _feasible(family: Sequence[Segment], d: int):
    A, b = _rows(family)
    return max_margin(A, b, nvars=d)


def _minimal_infeasible(family: Sequence[Segment], d: int, support: Sequence[int]) -> tuple[int, ...]:
    """Deletion filter starting from the Farkas support."""
    keep = sorted({i // 2 for i in support})
    for i in list(keep):
        trial = [j for j in keep if j != i]
        if trial and not _feasible([family[j] for j in trial], d).feasible:
            keep = trial
    return tuple(keep)


def _span_dim(family: Sequence[Segment]) -> int:
    if isinstance(family[0], RaySegment):
        return rank([I.direction for I in family])
    return rank([I.base + (Fraction(1),) for I in family])


def _solve(family: Sequence[Segment], mode_type) -> TransversalResult:
    d = _family_dim(family)
    if not all(isinstance(I, mode_type) for I in family):
        raise ValueError(f"every segment must be a {mode_type.__name__}")
    res = _feasible(family, d)
    if not res.feasible:
        return TransversalResult(False, None, _minimal_infeasible(family, d, res.support))
    x = res.x
    span = _span_dim(family)
    if mode_type is RaySegment:
        hits = tuple(1 / dot(x, I.direction) for I in family)
        for I, s in zip(family, hits):
            assert I.s_lo <= s <= I.s_hi
        cert = HyperplaneCert("rays", hyperplane_from_pole(x, (0,) * d), hits, span, pole=x)
    else:
        slope, const = x[:-1], x[-1]
        hits = tuple(dot(slope, I.base) + const for I in family)
        for I, h in zip(family, hits):
            assert I.lo <= h <= I.hi
        cert = HyperplaneCert("parallel", Hyperplane(tuple(-s for s in slope) + (Fraction(1),), const),
                              hits, span, psi=(slope, const))
    return TransversalResult(True, cert)


def transversal_rays(family: Sequence[RaySegment]) -> TransversalResult:
    """Hyperplane avoiding the apex that meets every segment, or a minimal
    infeasible subfamily (indices into ``family``)."""
    return _solve(family, RaySegment)


def transversal_parallel(family: Sequence[ParallelSegment]) -> TransversalResult:
    """Non-vertical hyperplane meeting every vertical segment, or a minimal
    infeasible subfamily."""
    return _solve(family, ParallelSegment)


def transversal(family: Sequence[Segment]) -> TransversalResult:
    if family and isinstance(family[0], ParallelSegment):
        return transversal_parallel(family)
    return transversal_rays(family)


@dataclass(frozen=True)
class HellyReport:
    global_feasible: bool
    subfamilies_feasible: bool
    subfamily_size: int
    subfamilies_checked: int
    bounded: bool
    implication_ok: bool
    minimal_infeasible: tuple[int, ...] = ()


def helly_check(family: Sequence[Segment], subfamily_size: Optional[int] = None) -> HellyReport:
    """Compare global feasibility with feasibility of all small subfamilies.

    Subfamilies of a feasible family are feasible, so enumeration only runs
    when the whole family is infeasible; it stops at the first infeasible
    subfamily. ``bounded`` records whether the solution region is bounded,
    which holds iff the segment data span the full unknown space.
    """
    if len(family) > HELLY_FAMILY_LIMIT:
        raise SizeLimitError(f"helly_check enumerates subfamilies; at most {HELLY_FAMILY_LIMIT} segments")
    d = _family_dim(family)
    k = d + 1 if subfamily_size is None else subfamily_size
    if k < 1:
        raise ValueError("subfamily size must be positive")
    res = _feasible(family, d)
    bounded = _span_dim(family) == d
    if res.feasible:
        return HellyReport(True, True, k, 0, bounded, True)
    checked = 0
    all_ok = True
    for idx in itertools.combinations(range(len(family)), min(k, len(family))):
        checked += 1
        if not _feasible([family[i] for i in idx], d).feasible:
            all_ok = False
            break
    minimal = _minimal_infeasible(family, d, res.support)
    implication_ok = not (all_ok and k >= d + 1)
    return HellyReport(False, all_ok, k, checked, bounded, implication_ok, minimal)


# -- affine dependence -----------------------------------------------------

def meets_subspace(C: ConvexBody, S: AffineSubspace) -> bool:
    """Exact LP test for ``C`` meeting the affine subspace ``S``."""
    if C.is_empty or S.is_empty:
        return False
    normals = S.normals()
    verts = C.vertices
    A = [[dot(nv, v) for v in verts] for nv in normals] + [[1] * len(verts)]
    b = [dot(nv, S.base) for nv in normals] + [1]
    return solve_standard([0] * len(verts), A, b).ok


def _decompose(y: Point, bodies: Sequence[ConvexBody]) -> list[Point]:
    """Points p_i in bodies[i] with y a convex combination of them."""
    owners, pts = [], []
    for i, B in enumerate(bodies):
        for v in B.vertices:
            owners.append(i)
            pts.append(v)
    w = feasible_combination(pts, y)
    if w is None:
        raise NotFoundError("shared point is not in the hull of the part", step="decompose")
    out = []
    for i, B in enumerate(bodies):
        mass = sum((wi for wi, o in zip(w, owners) if o == i), Fraction(0))
        if mass == 0:
            out.append(B.vertices[0])
            continue
        acc = [Fraction(0)] * len(y)
        for wi, o, p in zip(w, owners, pts):
            if o == i and wi:
                for j in range(len(y)):
                    acc[j] += wi * p[j]
        out.append(tuple(a / mass for a in acc))
    return out


def _split_from_sources(sources: Sequence[Sequence]) -> tuple[list[int], list[int]]:
    sources = [as_point(x) for x in sources]
    part = radon_partition(sources)
    red_set = set(part.red)
    red = [i for i, x in enumerate(sources) if x in red_set]
    return red, [i for i in range(len(sources)) if i not in red]


def _split_by_search(images: Sequence[ConvexBody]) -> tuple[list[int], list[int], ConvexBody]:
    m = len(images)
    for mask in range(1, 2 ** (m - 1)):
        red = [i for i in range(m) if mask >> i & 1]
        blue = [i for i in range(m) if not mask >> i & 1]
        shared = meet(join_all([images[i] for i in red]), join_all([images[i] for i in blue]))
        if not shared.is_empty:
            return red, blue, shared
    raise NotFoundError("no bipartition of the images has intersecting hulls", step="partition")


def affine_dependence_hyperplane(images: Sequence[ConvexBody],
                                 sources: Optional[Sequence[Sequence]] = None) -> AffineSubspace:
    """A c-dimensional affine subspace meeting all c + 2 given bodies.

    The bodies are split into two parts whose hulls share a point y0 (a
    Radon split of ``sources`` when given, otherwise the first bipartition
    found). Writing y0 as a convex combination of points p_i of the bodies
    in each part, the affine hull of all p_i has dimension at most c; it is
    padded with coordinate directions up to dimension c.
    """
    m = len(images)
    if m < 3:
        raise ValueError("need c + 2 >= 3 bodies")
    c = m - 2
    dims = {B.ambient_dim for B in images}
    if len(dims) != 1:
        raise DimensionMismatchError("bodies live in different dimensions")
    d = dims.pop()
    if d < c:
        raise DimensionMismatchError("need ambient dimension >= c")
    if any(B.is_empty for B in images):
        raise ValueError("all bodies must be nonempty")

    if sources is not None:
        if len(sources) != m:
            raise ValueError("need one source point per body")
        red, blue = _split_from_sources(sources)
        shared = meet(join_all([images[i] for i in red]), join_all([images[i] for i in blue]))
        if shared.is_empty:
            raise NotFoundError("images of the Radon parts have disjoint hulls", step="radon-meet")
    else:
        red, blue, shared = _split_by_search(images)
    y0 = shared.vertices[0]

    pts = {}
    for part in (red, blue):
        for i, p in zip(part, _decompose(y0, [images[i] for i in part])):
            pts[i] = p
    diffs = [sub(pts[i], y0) for i in range(m)]
    basis, _ = rref(diffs, d)
    directions = [tuple(r) for r in basis]
    if len(directions) > c:
        raise NotFoundError("spanned subspace exceeds dimension c", step="span")
    for j in range(d):
        if len(directions) == c:
            break
        e = tuple(Fraction(int(i == j)) for i in range(d))
        if rank(directions + [e]) > len(directions):
            directions.append(e)
    H = AffineSubspace(d, y0, tuple(directions))
    for i, B in enumerate(images):
        if not meets_subspace(B, H):
            raise NotFoundError(f"body {i} misses the constructed subspace", step="verify")
    return H


# -- planted instances -----------------------------------------------------

def _positive_fraction(rng, lo: Fraction, hi: Fraction) -> Fraction:
    t = sampling.unit_fraction(rng)
    return lo + t * (hi - lo)


def planted_rays(rng, d: int, n: int, pole_vector: Optional[Sequence] = None) -> tuple[list[RaySegment], Point]:
    """n segments fattened around the points where random rays cross the
    hyperplane with the given (or a random) pole."""
    if pole_vector is None:
        pole_vector = sampling.nonzero_vector(rng, d, lo=-4, hi=4)
    a = as_point(pole_vector)
    fam = []
    while len(fam) < n:
        u = sampling.nonzero_vector(rng, d, lo=-4, hi=4)
        t = dot(a, u)
        if t <= 0:
            continue
        s = 1 / t
        lo = s * (1 - _positive_fraction(rng, Fraction(0), Fraction(1, 2))) if rng.random() < 0.8 else s
        hi = s * (1 + _positive_fraction(rng, Fraction(0), Fraction(1))) if rng.random() < 0.8 else s
        fam.append(RaySegment(u, lo, hi))
    return fam, a


def helly_configuration(d: int) -> list[RaySegment]:
    """d + 1 segments, every d of which have a transversal but not all.

    Coordinate bands force each a_i into [1, 2]; the last segment forces
    a_1 + ... + a_d below d."""
    if d < 2:
        raise ValueError("need d >= 2")
    fam = [RaySegment(tuple(Fraction(int(i == j)) for i in range(d)), Fraction(1, 2), Fraction(1))
           for j in range(d)]
    fam.append(RaySegment((Fraction(1),) * d, Fraction(2, 2 * d - 1), Fraction(1, d - 1)))
    return fam


def _transform(fam: Sequence[RaySegment], T) -> list[RaySegment]:
    return [RaySegment(matvec(T, I.direction), I.s_lo, I.s_hi) for I in fam]


def planted_infeasible_rays(rng, d: int, n: int) -> list[RaySegment]:
    """Infeasible family of n >= d + 1 segments: either two disjoint pieces
    of one ray or a transformed Helly configuration, padded with random
    segments and shuffled."""
    if rng.random() < 0.5:
        u = sampling.nonzero_vector(rng, d)
        s1 = _positive_fraction(rng, Fraction(1, 4), Fraction(2))
        s2 = s1 + _positive_fraction(rng, Fraction(0), Fraction(1))
        lam = _positive_fraction(rng, Fraction(1, 2), Fraction(2))
        core = [RaySegment(u, s1 * Fraction(3, 4), s1),
                RaySegment(scale(lam, u), s2 / lam, (s2 + 1) / lam)]
    else:
        while True:
            T = [sampling.point(rng, d, lo=-3, hi=3, denominators=(1, 2)) for _ in range(d)]
            if rank(T) == d:
                break
        core = _transform(helly_configuration(d), T)
    fam = list(core)
    while len(fam) < n:
        u = sampling.nonzero_vector(rng, d)
        lo = _positive_fraction(rng, Fraction(0), Fraction(2))
        fam.append(RaySegment(u, lo, lo + _positive_fraction(rng, Fraction(0), Fraction(2))))
    order = rng.permutation(len(fam))
    return [fam[int(i)] for i in order]


def planted_parallel(rng, d: int, n: int) -> tuple[list[ParallelSegment], tuple[Point, Fraction]]:
    slope = sampling.point(rng, d - 1)
    const = sampling.rational(rng)
    fam = []
    for _ in range(n):
        x = sampling.point(rng, d - 1)
        h = dot(slope, x) + const
        fam.append(ParallelSegment(x, h - _positive_fraction(rng, Fraction(0), Fraction(1)),
                                   h + _positive_fraction(rng, Fraction(0), Fraction(1))))
    return fam, (slope, const)
