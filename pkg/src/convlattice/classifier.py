"""Recover the canonical form of a homomorphism from finitely many values.

The input is the image of the empty body plus the images of a handful of
singletons. Which case applies is forced by the shape of those images:

* a nonempty image of the empty body must be a single apex ``o`` (case ii);
* point images give case i;
* segments whose supporting lines are all parallel give case iii;
* segments on lines through one common point give case iv.

In every case the endpoint map ``phi`` is then fitted from ``c + 1``
affinely independent sources and checked exactly on the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .errors import (DimensionMismatchError, InconsistentSampleError, InsufficientPointsError,
                     NonAffineDataError, NotCanonicalHomomorphismError, RankDeficientError,
                     UnsupportedOpenCaseError)
from .geometry import ConvexBody
from .homomorphism import AffineMap, Case, HomomorphismSpec, apply_point
from .linalg import add, inverse, is_parallel, matvec, rank, scale, solve, sub, transpose
from .rational import Point, as_point
from . import sampling


@dataclass(frozen=True)
class OracleSample:
    c: int
    d: int
    empty_image: ConvexBody
    point_images: tuple[tuple[Point, ConvexBody], ...]

    def __post_init__(self):
        pairs = tuple((as_point(x), img) for x, img in self.point_images)
        object.__setattr__(self, "point_images", pairs)
        if self.empty_image.ambient_dim != self.d:
            raise DimensionMismatchError("empty_image is not in the target space")
        for x, img in pairs:
            if len(x) != self.c:
                raise DimensionMismatchError(f"sample point {x} is not in dimension {self.c}")
            if img.ambient_dim != self.d:
                raise DimensionMismatchError("sample image is not in the target space")
            if img.is_empty or len(img.vertices) > 2:
                raise NotCanonicalHomomorphismError(
                    "every point image must be a single point or a segment")


@dataclass(frozen=True)
class ClassifiedForm:
    spec: HomomorphismSpec
    residual_ok: bool


def _pick_independent(sources: Sequence[Point], c: int) -> Optional[list[int]]:
    """Indices of c + 1 affinely independent sources (greedy), or None."""
    chosen = [0]
    diffs: list[Point] = []
    for i in range(1, len(sources)):
        cand = diffs + [sub(sources[i], sources[0])]
        if rank(cand) == len(cand):
            chosen.append(i)
            diffs = cand
            if len(chosen) == c + 1:
                return chosen
    return None


def fit_affine_map(pairs: Sequence[tuple[Sequence, Sequence]], c: int, d: int) -> AffineMap:
    """Exact affine map through the given correspondences.

    The first c + 1 affinely independent sources determine the map; every
    other pair must then be reproduced exactly.
    """
    pairs = [(as_point(x), as_point(y)) for x, y in pairs]
    for x, y in pairs:
        if len(x) != c or len(y) != d:
            raise DimensionMismatchError("pair dimensions do not match (c, d)")
    if len(pairs) < c + 1:
        raise InsufficientPointsError(f"need at least {c + 1} pairs, got {len(pairs)}")
    idx = _pick_independent([x for x, _ in pairs], c)
    if idx is None:
        raise RankDeficientError("sources are affinely dependent")
    A = [pairs[i][0] + (Fraction(1),) for i in idx]
    Ainv = inverse(A)
    # rows of [M | t] solve A @ [M | t]^T = Y
    Y = [pairs[i][1] for i in idx]
    sol = transpose([matvec(Ainv, col) for col in transpose(Y)])
    coef = transpose(sol)
    matrix = tuple(tuple(r[:c]) for r in coef)
    offset = tuple(r[c] for r in coef)
    for x, y in pairs:
        if add(matvec(matrix, x), offset) != y:
            raise NonAffineDataError(f"pair {x} -> {y} is not reproduced by the fitted affine map")
    return AffineMap(matrix, offset)


def _line_meet(p1: Point, w1: Point, p2: Point, w2: Point) -> Optional[Point]:
    """Intersection point of two non-parallel lines, or None if skew."""
    n = len(p1)
    st = solve([[w1[j], -w2[j]] for j in range(n)], sub(p2, p1))
    if st is None:
        return None
    return add(p1, scale(st[0], w1))


def _ratio(u: Point, w: Point) -> Optional[Fraction]:
    """The scalar t with u = t w, if any."""
    j = next(j for j, x in enumerate(w) if x != 0)
    t = u[j] / w[j]
    return t if scale(t, w) == u else None


def _fit(pairs, c, d) -> AffineMap:
    try:
        return fit_affine_map(pairs, c, d)
    except RankDeficientError as exc:
        raise InsufficientPointsError(
            f"samples need {c + 1} affinely independent points: {exc}") from exc


def _build(**kw) -> HomomorphismSpec:
    try:
        return HomomorphismSpec(**kw)
    except (ValueError, RankDeficientError) as exc:
        raise NotCanonicalHomomorphismError(f"recovered parameters are not canonical: {exc}") from exc


def _case_ii(sample: OracleSample) -> HomomorphismSpec:
    c, d = sample.c, sample.d
    if len(sample.empty_image.vertices) != 1:
        raise NotCanonicalHomomorphismError("image of the empty body must be empty or a single point")
    if d != c + 1:
        raise DimensionMismatchError("a nonempty image of the empty body needs d = c + 1")
    (o,) = sample.empty_image.vertices
    pairs = []
    for x, img in sample.point_images:
        if len(img.vertices) != 2 or o not in img.vertices:
            raise InconsistentSampleError(f"image of {x} is not a segment ending at the apex")
        a, b = img.vertices
        pairs.append((x, b if a == o else a))
    return _build(tag=Case.II, source_dim=c, target_dim=d, phi=_fit(pairs, c, d), o=o)


def _case_iii(sample: OracleSample) -> HomomorphismSpec:
    c, d = sample.c, sample.d
    v = None
    pairs = []
    for x, img in sample.point_images:
        a, b = img.vertices
        w = sub(b, a)
        # orient so that the offset vector starts with a positive entry
        if next(t for t in w if t != 0) < 0:
            a, b, w = b, a, scale(-1, w)
        if v is None:
            v = w
        elif w != v:
            raise InconsistentSampleError("parallel image segments differ by translation vector")
        pairs.append((x, a))
    return _build(tag=Case.III, source_dim=c, target_dim=d, phi=_fit(pairs, c, d), v=v)


def _case_iv(sample: OracleSample) -> HomomorphismSpec:
    c, d = sample.c, sample.d
    segs = [img.vertices for _, img in sample.point_images]
    dirs = [sub(b, a) for a, b in segs]
    j = next(j for j in range(1, len(dirs)) if not is_parallel(dirs[0], dirs[j]))
    o = _line_meet(segs[0][0], dirs[0], segs[j][0], dirs[j])
    if o is None:
        raise InconsistentSampleError("image segments neither parallel nor concurrent")
    gamma = None
    pairs = []
    for (x, _), (a, b) in zip(sample.point_images, segs):
        ta = _ratio(sub(a, o), sub(b, o)) if b != o else None
        if ta is None or ta == 0:
            raise InconsistentSampleError(f"image of {x} is not on a ray from the common point")
        # a - o = ta (b - o); the far endpoint is phi(x)
        far, g = (b, ta) if abs(ta) < 1 else (a, 1 / ta)
        if not 0 < g < 1:
            raise InconsistentSampleError(f"image of {x} straddles the common point")
        if gamma is None:
            gamma = g
        elif g != gamma:
            raise InconsistentSampleError("ratio gamma is not constant across samples")
        pairs.append((x, far))
    return _build(tag=Case.IV, source_dim=c, target_dim=d, phi=_fit(pairs, c, d), o=o, gamma=gamma)


def classify(sample: OracleSample) -> ClassifiedForm:
    c, d = sample.c, sample.d
    if d not in (c, c + 1):
        raise DimensionMismatchError("classification needs d in {c, c + 1}")
    if len(sample.point_images) < c + 2:
        raise InsufficientPointsError(f"need at least {c + 2} sample points")
    sizes = {len(img.vertices) for _, img in sample.point_images}

    if not sample.empty_image.is_empty:
        spec = _case_ii(sample)
    elif sizes == {1}:
        pairs = [(x, img.vertices[0]) for x, img in sample.point_images]
        spec = _build(tag=Case.I, source_dim=c, target_dim=d, phi=_fit(pairs, c, d))
    elif sizes == {2}:
        if c < 3:
            raise UnsupportedOpenCaseError(
                "segment-valued homomorphisms are not characterized for c < 3")
        if d != c + 1:
            raise DimensionMismatchError("segment images need d = c + 1")
        dirs = [sub(*reversed(img.vertices)) for _, img in sample.point_images]
        if all(is_parallel(dirs[0], w) for w in dirs[1:]):
            spec = _case_iii(sample)
        else:
            spec = _case_iv(sample)
    else:
        raise InconsistentSampleError("points and segments mixed while the empty body maps to itself")

    residual_ok = all(apply_point(spec, x) == img for x, img in sample.point_images)
    if not residual_ok:
        raise NotCanonicalHomomorphismError("recovered spec does not reproduce the samples")
    return ClassifiedForm(spec, residual_ok)


# -- order preservation ----------------------------------------------------

def _segment_parameter(p: Point, a: Point, b: Point) -> Optional[Fraction]:
    """t with p = a + t (b - a), or None when p is off the line (a != b)."""
    return _ratio(sub(p, a), sub(b, a))


def _as_image_point(val) -> Point:
    if isinstance(val, ConvexBody):
        if len(val.vertices) != 1:
            raise ValueError("order preservation is defined on point images")
        return val.vertices[0]
    return as_point(val)


def check_order_preservation(point_images: Union[Mapping, Sequence[tuple]],
                             triples: Sequence[tuple[Sequence, Sequence, Sequence]]) -> bool:
    """True iff every middle point of a source triple maps strictly between
    the images of the outer two. ``triples`` are ``(x, y, z)`` with y the
    middle point; images may be points or one-point bodies."""
    items = point_images.items() if isinstance(point_images, Mapping) else point_images
    images = {as_point(x): _as_image_point(img) for x, img in items}
    for x, y, z in triples:
        x, y, z = as_point(x), as_point(y), as_point(z)
        if len({x, y, z}) < 3:
            raise ValueError("degenerate triple: repeated points")
        t = _segment_parameter(y, x, z)
        if t is None or not 0 < t < 1:
            raise ValueError("triple is not collinear with the middle point strictly inside")
        try:
            fx, fy, fz = images[x], images[y], images[z]
        except KeyError as exc:
            raise ValueError(f"no image recorded for {exc.args[0]}") from exc
        if fx == fz:
            return False
        s = _segment_parameter(fy, fx, fz)
        if s is None or not 0 < s < 1:
            return False
    return True


# -- sample generation -----------------------------------------------------

def sample_points(rng, c: int, extra: int = 1) -> list[Point]:
    """c + 1 affinely independent points followed by ``extra`` affine
    combinations of them with every weight nonzero."""
    while True:
        base = [sampling.point(rng, c) for _ in range(c + 1)]
        if rank([sub(p, base[0]) for p in base[1:]]) == c:
            break
    pts = list(base)
    for _ in range(extra):
        while True:
            w = [sampling.rational(rng, -3, 3, (1, 2, 3)) for _ in range(c)]
            last = 1 - sum(w)
            if all(w) and last != 0:
                break
        w.append(last)
        pts.append(tuple(sum((wi * p[j] for wi, p in zip(w, base)), Fraction(0)) for j in range(c)))
    return pts


def oracle_sample(spec: HomomorphismSpec, points: Sequence[Sequence]) -> OracleSample:
    pairs = tuple((as_point(x), apply_point(spec, x)) for x in points)
    return OracleSample(spec.source_dim, spec.target_dim, spec.empty_image, pairs)
