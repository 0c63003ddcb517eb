"""Polyhedral convex functions and exact Legendre-Fenchel conjugation.

Two representations are used, one on each side of the transform:

* ``TruncatedEpigraph``: a function f with values in [0, kappa] on a
  compact polytope domain (and +inf elsewhere) stored as the polytope
  ``{(x, t) : f(x) <= t <= kappa}``. The empty body is the constant +inf.
* ``MaxAffineFunction``: ``g(y) = max_i <a_i, y> - b_i`` with a canonical,
  irredundant piece set. No pieces means the constant -inf.

The conjugate of f is the max-affine function whose pieces are the
vertices ``(x_j, t_j)`` of its truncated epigraph, and the conjugate of a
max-affine g is the lower convex hull of its pieces. Both transforms are
therefore exact vertex manipulations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import DimensionMismatchError, NotInClassError, RankDeficientError
from .geometry import ConvexBody, convex_hull, join, meet
from .homomorphism import AffineMap
from .linalg import dot
from .rational import Point, as_point, to_fraction
from . import sampling

INF = math.inf
Value = Union[Fraction, float]


def _lifts(points: Sequence[Point], height: Fraction) -> list[Point]:
    return [p[:-1] + (height,) for p in points]


@dataclass(frozen=True)
class TruncatedEpigraph:
    body: ConvexBody
    kappa: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "kappa", to_fraction(self.kappa))
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.body.ambient_dim < 2:
            raise DimensionMismatchError("a truncated epigraph lives in dimension c + 1 >= 2")
        for v in self.body.vertices:
            if not 0 <= v[-1] <= self.kappa:
                raise ValueError(f"vertex {v} leaves the band [0, kappa]")
            if v[-1] < self.kappa and not self.body.contains(v[:-1] + (self.kappa,)):
                raise ValueError("body is not closed upward to height kappa")

    @classmethod
    def from_points(cls, points: Sequence[Sequence], kappa=1) -> "TruncatedEpigraph":
        """Smallest band-closed body containing the given (x, t) points."""
        pts = [as_point(p) for p in points]
        kappa = to_fraction(kappa)
        return cls(convex_hull(pts + _lifts(pts, kappa)), kappa)

    @classmethod
    def plus_infinity(cls, c: int, kappa=1) -> "TruncatedEpigraph":
        return cls(ConvexBody.empty(c + 1), kappa)

    @property
    def c(self) -> int:
        return self.body.ambient_dim - 1

    @property
    def is_plus_infinity(self) -> bool:
        return self.body.is_empty

    @property
    def in_class(self) -> bool:
        """Member of the [0, kappa] lattice: +inf, or attains the value 0."""
        return self.is_plus_infinity or min(v[-1] for v in self.body.vertices) == 0

    def domain(self) -> ConvexBody:
        return convex_hull([v[:-1] for v in self.body.vertices], self.c)

    def __call__(self, x: Sequence) -> Value:
        x = as_point(x)
        if len(x) != self.c:
            raise DimensionMismatchError(f"expected a point of dimension {self.c}")
        if self.is_plus_infinity or not self.body.contains(x + (self.kappa,)):
            return INF
        best = None
        for row, rhs in self.body.hrep.inequalities:
            tau = row[-1]
            if tau < 0:
                bound = Fraction(dot(row[:-1], x) - rhs, -tau)
                if best is None or bound > best:
                    best = bound
        return best


@dataclass(frozen=True)
class MaxAffineFunction:
    """``y -> max_i <a_i, y> - b_i``; pieces are canonicalized on creation."""
    c: int
    pieces: tuple[tuple[Point, Fraction], ...] = field(default=())

    def __post_init__(self):
        raw = [(as_point(a), to_fraction(b)) for a, b in self.pieces]
        for a, _ in raw:
            if len(a) != self.c:
                raise DimensionMismatchError(f"slope {a} is not in dimension {self.c}")
        object.__setattr__(self, "pieces", _canonical_pieces(raw))

    @classmethod
    def minus_infinity(cls, c: int) -> "MaxAffineFunction":
        return cls(c, ())

    @property
    def is_minus_infinity(self) -> bool:
        return not self.pieces

    def __call__(self, y: Sequence) -> Value:
        y = as_point(y)
        if len(y) != self.c:
            raise DimensionMismatchError(f"expected a point of dimension {self.c}")
        if not self.pieces:
            return -INF
        return max(dot(a, y) - b for a, b in self.pieces)


def _canonical_pieces(raw: list[tuple[Point, Fraction]]) -> tuple[tuple[Point, Fraction], ...]:
    """Irredundant pieces: lower-hull vertices of the points (a_i, b_i)."""
    if len(raw) <= 1:
        return tuple(raw)
    top = max(b for _, b in raw) + 1
    pts = [a + (b,) for a, b in raw]
    hull = convex_hull(pts + _lifts(pts, top))
    return tuple((v[:-1], v[-1]) for v in hull.vertices if v[-1] < top)


@dataclass(frozen=True)
class SandwichCert:
    """``h_C - kappa <= g <= h_C`` checked at sample points; gaps are
    ``g - (h_C - kappa)`` and ``h_C - g``."""
    C: ConvexBody
    lower_gaps: tuple[Fraction, ...]
    upper_gaps: tuple[Fraction, ...]

    @property
    def ok(self) -> bool:
        return all(x >= 0 for x in self.lower_gaps + self.upper_gaps)


def _same_c(f, g) -> None:
    if f.c != g.c:
        raise DimensionMismatchError("functions live on spaces of different dimension")


def _same_kappa(f: TruncatedEpigraph, g: TruncatedEpigraph) -> None:
    _same_c(f, g)
    if f.kappa != g.kappa:
        raise ValueError("kappa values differ")


# -- constructors ----------------------------------------------------------

def indicator(C: ConvexBody, kappa=1) -> TruncatedEpigraph:
    """0 on C, +inf off C."""
    kappa = to_fraction(kappa)
    if C.is_empty:
        return TruncatedEpigraph.plus_infinity(C.ambient_dim, kappa)
    return TruncatedEpigraph.from_points([v + (Fraction(0),) for v in C.vertices], kappa)


def support_function(C: ConvexBody) -> MaxAffineFunction:
    return MaxAffineFunction(C.ambient_dim, tuple((v, Fraction(0)) for v in C.vertices))


# -- conjugation -----------------------------------------------------------

def fenchel(f: TruncatedEpigraph) -> MaxAffineFunction:
    if f.is_plus_infinity:
        return MaxAffineFunction.minus_infinity(f.c)
    return MaxAffineFunction(f.c, tuple((v[:-1], v[-1]) for v in f.body.vertices))


def check_class(g: MaxAffineFunction, kappa) -> None:
    """Raise unless g is -inf or squeezed between h_C - kappa and h_C."""
    kappa = to_fraction(kappa)
    if g.is_minus_infinity:
        return
    heights = [b for _, b in g.pieces]
    if min(heights) != 0:
        raise NotInClassError(f"g(0) = {-min(heights)}, not 0")
    if max(heights) > kappa:
        raise NotInClassError(f"a piece has offset {max(heights)} above kappa = {kappa}")


def fenchel_inverse(g: MaxAffineFunction, kappa=1, strict: bool = True) -> TruncatedEpigraph:
    """Conjugate of g as a truncated epigraph.

    With ``strict=False`` the requirement g(0) = 0 is dropped; piece offsets
    must still lie in [0, kappa] so that the result fits in the band (this
    covers shifted support functions such as ``h_C - kappa``).
    """
    kappa = to_fraction(kappa)
    if g.is_minus_infinity:
        return TruncatedEpigraph.plus_infinity(g.c, kappa)
    if strict:
        check_class(g, kappa)
    elif not all(0 <= b <= kappa for _, b in g.pieces):
        raise NotInClassError("piece offsets must lie in [0, kappa]")
    return TruncatedEpigraph.from_points([a + (b,) for a, b in g.pieces], kappa)


def sandwich_certificate(g: MaxAffineFunction, kappa, samples: Sequence[Sequence]) -> SandwichCert:
    """The body C is the hull of the slopes of g."""
    kappa = to_fraction(kappa)
    check_class(g, kappa)
    C = convex_hull([a for a, _ in g.pieces], g.c)
    h = support_function(C)
    lower, upper = [], []
    for y in samples:
        gy, hy = g(y), h(y)
        lower.append(gy - (hy - kappa))
        upper.append(hy - gy)
    return SandwichCert(C, tuple(lower), tuple(upper))


# -- lattice operations ----------------------------------------------------

def meet_plus(f: TruncatedEpigraph, g: TruncatedEpigraph) -> TruncatedEpigraph:
    """Least upper bound within the [0, kappa] lattice (pointwise max,
    or +inf when the maximum no longer attains 0)."""
    _same_kappa(f, g)
    body = meet(f.body, g.body)
    if body.is_empty or min(v[-1] for v in body.vertices) > 0:
        return TruncatedEpigraph.plus_infinity(f.c, f.kappa)
    return TruncatedEpigraph(body, f.kappa)


def join_plus(f: TruncatedEpigraph, g: TruncatedEpigraph) -> TruncatedEpigraph:
    """Greatest lower bound: the convex envelope of the pointwise min."""
    _same_kappa(f, g)
    return TruncatedEpigraph(join(f.body, g.body), f.kappa)


def meet_minus(g1: MaxAffineFunction, g2: MaxAffineFunction) -> MaxAffineFunction:
    """Pointwise max; -inf is neutral."""
    _same_c(g1, g2)
    return MaxAffineFunction(g1.c, g1.pieces + g2.pieces)


def join_minus(g1: MaxAffineFunction, g2: MaxAffineFunction) -> MaxAffineFunction:
    """Largest function below both that still vanishes at 0, else -inf.

    The convex envelope of min(g1, g2) is the conjugate of the max of the
    two conjugates, whose epigraph is the intersection of the epigraphs.
    Those are cut at a height above every piece offset, which leaves all
    lower vertices intact.
    """
    _same_c(g1, g2)
    c = g1.c
    if g1.is_minus_infinity or g2.is_minus_infinity:
        return MaxAffineFunction.minus_infinity(c)
    top = max(b for _, b in g1.pieces + g2.pieces) + 1

    def epi(g):
        pts = [a + (b,) for a, b in g.pieces]
        return convex_hull(pts + _lifts(pts, top))

    body = meet(epi(g1), epi(g2))
    pieces = tuple((v[:-1], v[-1]) for v in body.vertices if v[-1] < top)
    if not pieces or min(b for _, b in pieces) != 0:
        return MaxAffineFunction.minus_infinity(c)
    return MaxAffineFunction(c, pieces)


# -- canonical (anti-)homomorphisms ----------------------------------------

def _require_bijective(phi: AffineMap) -> None:
    if phi.source_dim != phi.target_dim:
        raise RankDeficientError("phi must be an affine bijection of Q^c")


def canonical_function_homomorphism(phi: AffineMap, kappa=1) -> Callable[[ConvexBody], TruncatedEpigraph]:
    """``C -> indicator of phi(C)``."""
    _require_bijective(phi)
    kappa = to_fraction(kappa)
    return lambda C: indicator(phi.apply_body(C), kappa)


def canonical_anti_homomorphism(phi: AffineMap, kappa=1) -> Callable[[ConvexBody], MaxAffineFunction]:
    """``C -> support function of phi(C)``, the conjugate of the indicator."""
    _require_bijective(phi)
    return lambda C: support_function(phi.apply_body(C))


@dataclass(frozen=True)
class FunctionCounterexample:
    identity: str
    C: ConvexBody
    D: ConvexBody
    lhs: object
    rhs: object
    at: Optional[Point] = None


@dataclass(frozen=True)
class FunctionVerificationReport:
    meet_ok: bool
    join_ok: bool
    trials: int
    counterexample: Optional[FunctionCounterexample] = None

    @property
    def ok(self) -> bool:
        return self.meet_ok and self.join_ok


def _pointwise_mismatch(f, g, samples) -> Optional[Point]:
    return next((y for y in samples if f(y) != g(y)), None)


def _verify(subject, c, trials, seed, stream_name, meet_op, join_op, swap, samples_per_trial):
    flags = {"meet": True, "join": True}
    first: list[FunctionCounterexample] = []
    for t in range(trials):
        rng = sampling.stream(seed, stream_name, t)
        C, D = sampling.body_pair(rng, c)
        HC, HD = subject(C), subject(D)
        samples = [sampling.point(rng, c) for _ in range(samples_per_trial)]
        checks = (("meet", subject(meet(C, D)), (join_op if swap else meet_op)(HC, HD)),
                  ("join", subject(join(C, D)), (meet_op if swap else join_op)(HC, HD)))
        for name, lhs, rhs in checks:
            at = _pointwise_mismatch(lhs, rhs, samples)
            if lhs != rhs or at is not None:
                flags[name] = False
                if not first:
                    first.append(FunctionCounterexample(name, C, D, lhs, rhs, at))
    return FunctionVerificationReport(flags["meet"], flags["join"], trials, first[0] if first else None)


def verify_function_homomorphism(subject: Callable[[ConvexBody], TruncatedEpigraph], c: int,
                                 trials: int = 50, seed: int = 0,
                                 samples_per_trial: int = 10) -> FunctionVerificationReport:
    """Check ``H(C ^ D) = H(C) meet_plus H(D)`` and ``H(C v D) = H(C) join_plus H(D)``
    by canonical form and at sample points."""
    return _verify(subject, c, trials, seed, "func-hom", meet_plus, join_plus, False, samples_per_trial)


def verify_anti_homomorphism(subject: Callable[[ConvexBody], MaxAffineFunction], c: int,
                             trials: int = 50, seed: int = 0,
                             samples_per_trial: int = 10) -> FunctionVerificationReport:
    """Check ``L(C ^ D) = L(C) join_minus L(D)`` and ``L(C v D) = L(C) meet_minus L(D)``."""
    return _verify(subject, c, trials, seed, "func-anti-hom", meet_minus, join_minus, True,
                   samples_per_trial)


# -- random members --------------------------------------------------------

def random_function(rng, c: int, kappa=1, max_points: int = 6) -> TruncatedEpigraph:
    """Random polyhedral member of the [0, kappa] lattice (never +inf)."""
    kappa = to_fraction(kappa)
    k = int(rng.integers(1, max_points + 1))
    pts = []
    for i in range(k):
        x = sampling.point(rng, c)
        h = Fraction(0) if i == 0 else kappa * Fraction(int(rng.integers(0, 9)), 8)
        pts.append(x + (h,))
    return TruncatedEpigraph.from_points(pts, kappa)
