"""Canonical lattice homomorphisms from bodies in Q^c to bodies in Q^d.

Besides the constant (trivial) maps there are four families, all built
from an injective affine map ``phi`` whose image is a hyperplane ``H``
(or all of Q^c when d = c):

    i    x -> {phi(x)}
    ii   x -> [phi(x), o]                      o off H, empty set -> {o}
    iii  x -> [phi(x), phi(x) + v]             v not parallel to H
    iv   x -> [phi(x), g phi(x) + (1 - g) o]   o off H, 0 < g < 1

A body is mapped to the hull of the images of its vertices; every segment
endpoint depends affinely on x, so this equals the union of the point
images.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import DimensionMismatchError, MalformedSubjectError, RankDeficientError
from .geometry import AffineSubspace, ConvexBody, convex_hull, join, meet
from .linalg import add, matvec, rank, rref, scale, sub
from .rational import Point, as_point, to_fraction
from . import sampling

log = logging.getLogger(__name__)


class Case(str, Enum):
    TRIVIAL = "trivial"
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + offset`` with an injective linear part."""
    matrix: tuple[tuple[Fraction, ...], ...]
    offset: Point

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(as_point(r) for r in self.matrix))
        object.__setattr__(self, "offset", as_point(self.offset))
        if len(self.matrix) != len(self.offset):
            raise DimensionMismatchError("matrix rows and offset length differ")
        widths = {len(r) for r in self.matrix}
        if len(widths) != 1:
            raise DimensionMismatchError("ragged matrix")
        if rank(self.matrix) != self.source_dim:
            raise RankDeficientError("affine map is not injective")

    @property
    def source_dim(self) -> int:
        return len(self.matrix[0])

    @property
    def target_dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, c: int) -> "AffineMap":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(c)) for i in range(c)),
                   (Fraction(0),) * c)

    @classmethod
    def embedding(cls, c: int, height=1) -> "AffineMap":
        """``x -> (x, height)`` into Q^(c+1)."""
        rows = [tuple(Fraction(int(i == j)) for j in range(c)) for i in range(c)]
        rows.append((Fraction(0),) * c)
        return cls(tuple(rows), (Fraction(0),) * c + (to_fraction(height),))

    def __call__(self, x: Sequence) -> Point:
        x = as_point(x)
        if len(x) != self.source_dim:
            raise DimensionMismatchError(f"expected a point of dimension {self.source_dim}")
        return add(matvec(self.matrix, x), self.offset)

    def columns(self) -> list[Point]:
        return [tuple(r[j] for r in self.matrix) for j in range(self.source_dim)]

    def image(self) -> AffineSubspace:
        red, _ = rref(self.columns(), self.target_dim)
        return AffineSubspace(self.target_dim, self.offset, tuple(tuple(r) for r in red))

    def apply_body(self, C: ConvexBody) -> ConvexBody:
        if C.is_empty:
            return ConvexBody.empty(self.target_dim)
        return convex_hull([self(v) for v in C.vertices])

    def translated(self, v: Sequence) -> "AffineMap":
        return AffineMap(self.matrix, add(self.offset, as_point(v)))


@dataclass(frozen=True)
class HomomorphismSpec:
    tag: Case
    source_dim: int
    target_dim: int
    phi: Optional[AffineMap] = None
    o: Optional[Point] = None
    v: Optional[Point] = None
    gamma: Optional[Fraction] = None
    fixed_body: Optional[ConvexBody] = None

    def __post_init__(self):
        object.__setattr__(self, "tag", Case(self.tag))
        if self.o is not None:
            object.__setattr__(self, "o", as_point(self.o))
        if self.v is not None:
            object.__setattr__(self, "v", as_point(self.v))
        if self.gamma is not None:
            object.__setattr__(self, "gamma", to_fraction(self.gamma))
        self._validate()

    def _validate(self) -> None:
        c, d, tag = self.source_dim, self.target_dim, self.tag
        if tag is Case.TRIVIAL:
            if self.fixed_body is None or self.fixed_body.ambient_dim != d:
                raise ValueError("trivial spec needs a fixed body in the target space")
            return
        phi = self.phi
        if phi is None:
            raise ValueError(f"case {tag.value} needs phi")
        if (phi.source_dim, phi.target_dim) != (c, d):
            raise DimensionMismatchError("phi does not map Q^c to Q^d")
        if tag is Case.I:
            if d < c:
                raise ValueError("case i needs d >= c")
            return
        if d != c + 1:
            raise ValueError(f"case {tag.value} needs d = c + 1")
        H = phi.image()
        if tag in (Case.II, Case.IV):
            if self.o is None or len(self.o) != d:
                raise ValueError("apex o missing or of wrong dimension")
            if H.contains(self.o):
                raise ValueError("apex o lies on the image hyperplane")
        if tag is Case.III:
            if self.v is None or len(self.v) != d or not any(self.v):
                raise ValueError("case iii needs a nonzero vector v")
            if rank(phi.columns() + [self.v]) == c:
                raise ValueError("v is parallel to the image hyperplane")
        if tag is Case.IV:
            if self.gamma is None or not (0 < self.gamma < 1):
                raise ValueError("gamma must lie strictly between 0 and 1")

    @property
    def empty_image(self) -> ConvexBody:
        if self.tag is Case.TRIVIAL:
            return self.fixed_body
        if self.tag is Case.II:
            return ConvexBody.point(self.o)
        return ConvexBody.empty(self.target_dim)

    def normalized(self) -> "HomomorphismSpec":
        """Canonical representative. Only case iii has a choice to make:
        ``(phi, v)`` and ``(phi + v, -v)`` give the same map; keep the one
        whose v has a positive leading nonzero coordinate."""
        if self.tag is Case.III:
            lead = next(x for x in self.v if x != 0)
            if lead < 0:
                return HomomorphismSpec(Case.III, self.source_dim, self.target_dim,
                                        phi=self.phi.translated(self.v), v=scale(-1, self.v))
        return self

    def __call__(self, C: ConvexBody) -> ConvexBody:
        return apply_body(self, C)


def _require_characterized(c: int, allow_low_dim: bool) -> None:
    if c < 3 and not allow_low_dim:
        raise ValueError("the dimension-raising cases are characterized for c >= 3 only "
                         "(pass allow_low_dim=True to build one anyway)")


def trivial(fixed_body: ConvexBody, c: int) -> HomomorphismSpec:
    return HomomorphismSpec(Case.TRIVIAL, c, fixed_body.ambient_dim, fixed_body=fixed_body)


def case_i(phi: AffineMap) -> HomomorphismSpec:
    return HomomorphismSpec(Case.I, phi.source_dim, phi.target_dim, phi=phi)


def case_ii(phi: AffineMap, o: Sequence, *, allow_low_dim: bool = False) -> HomomorphismSpec:
    _require_characterized(phi.source_dim, allow_low_dim)
    return HomomorphismSpec(Case.II, phi.source_dim, phi.target_dim, phi=phi, o=o)


def case_iii(phi: AffineMap, v: Sequence, *, allow_low_dim: bool = False) -> HomomorphismSpec:
    _require_characterized(phi.source_dim, allow_low_dim)
    return HomomorphismSpec(Case.III, phi.source_dim, phi.target_dim, phi=phi, v=v)


def case_iv(phi: AffineMap, o: Sequence, gamma, *, allow_low_dim: bool = False) -> HomomorphismSpec:
    _require_characterized(phi.source_dim, allow_low_dim)
    return HomomorphismSpec(Case.IV, phi.source_dim, phi.target_dim, phi=phi, o=o, gamma=gamma)


def endpoints(spec: HomomorphismSpec, x: Sequence) -> tuple[Point, ...]:
    """The one or two points whose hull is the image of ``{x}``."""
    x = as_point(x)
    if len(x) != spec.source_dim:
        raise DimensionMismatchError(f"expected a point of dimension {spec.source_dim}")
    tag = spec.tag
    if tag is Case.TRIVIAL:
        return spec.fixed_body.vertices
    p = spec.phi(x)
    if tag is Case.I:
        return (p,)
    if tag is Case.II:
        return (p, spec.o)
    if tag is Case.III:
        return (p, add(p, spec.v))
    g = spec.gamma
    return (p, add(scale(g, p), scale(1 - g, spec.o)))


def apply_point(spec: HomomorphismSpec, x: Sequence) -> ConvexBody:
    if spec.tag is Case.TRIVIAL:
        if len(as_point(x)) != spec.source_dim:
            raise DimensionMismatchError(f"expected a point of dimension {spec.source_dim}")
        return spec.fixed_body
    return convex_hull(endpoints(spec, x))


def apply_body(spec: HomomorphismSpec, C: ConvexBody) -> ConvexBody:
    if C.ambient_dim != spec.source_dim:
        raise DimensionMismatchError(f"body lives in dimension {C.ambient_dim}, "
                                     f"expected {spec.source_dim}")
    if spec.tag is Case.TRIVIAL or C.is_empty:
        return spec.empty_image
    return convex_hull([p for x in C.vertices for p in endpoints(spec, x)])


# -- verification ----------------------------------------------------------

Subject = Union[HomomorphismSpec, Callable[[ConvexBody], ConvexBody]]


@dataclass(frozen=True)
class Counterexample:
    check: str
    C: ConvexBody
    D: Optional[ConvexBody]
    lhs: ConvexBody
    rhs: ConvexBody


@dataclass(frozen=True)
class VerificationReport:
    axiom_meet_ok: bool
    axiom_join_ok: bool
    cond_i_ok: bool
    cond_ii_ok: bool
    cond_iii_ok: bool
    cond_iv_ok: bool
    trials: int
    counterexample: Optional[Counterexample] = None

    @property
    def ok(self) -> bool:
        return all((self.axiom_meet_ok, self.axiom_join_ok, self.cond_i_ok,
                    self.cond_ii_ok, self.cond_iii_ok, self.cond_iv_ok))


class _Checked:
    """Wraps a subject and validates the dimension of everything it returns."""

    def __init__(self, subject: Subject, c: int):
        self.fn = subject if callable(subject) else None
        self.c = c
        self.d: Optional[int] = None

    def __call__(self, C: ConvexBody) -> ConvexBody:
        out = self.fn(C)
        if not isinstance(out, ConvexBody):
            raise MalformedSubjectError(f"subject returned {type(out).__name__}, not a ConvexBody")
        if self.d is None:
            self.d = out.ambient_dim
        elif out.ambient_dim != self.d:
            raise MalformedSubjectError(
                f"subject returned a body in dimension {out.ambient_dim}, expected {self.d}")
        return out

    def point(self, x: Point) -> ConvexBody:
        return self(ConvexBody.point(x))


def verify_homomorphism(subject: Subject, trials: int = 100, seed: int = 0,
                        c: Optional[int] = None, check_conditions: bool = True) -> VerificationReport:
    """Randomized exact check of the lattice axioms and of the four
    sufficient conditions (membership, separation, hull surrogate for
    convexity of the union, covering).

    Condition three, convexity of the union of all point images, is
    replaced by its finite consequence ``x in (y, z) => Phi(x) <= Phi(y) v Phi(z)``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if isinstance(subject, HomomorphismSpec):
        if c is not None and c != subject.source_dim:
            raise DimensionMismatchError("c disagrees with the spec's source dimension")
        c = subject.source_dim
    elif c is None:
        raise ValueError("c is required for a callable subject")
    phi = _Checked(subject, c)
    flags = dict(meet=True, join=True, i=True, ii=True, iii=True, iv=True)
    first: list[Counterexample] = []

    def fail(check, C, D, lhs, rhs):
        flags[check] = False
        if not first:
            first.append(Counterexample(check, C, D, lhs, rhs))

    empty_img = phi(ConvexBody.empty(c))
    for t in range(trials):
        rng = sampling.stream(seed, "hom-verify", t)
        C, D = sampling.body_pair(rng, c)
        PC, PD = phi(C), phi(D)
        lhs, rhs = phi(meet(C, D)), meet(PC, PD)
        if lhs != rhs:
            fail("meet", C, D, lhs, rhs)
        lhs, rhs = phi(join(C, D)), join(PC, PD)
        if lhs != rhs:
            fail("join", C, D, lhs, rhs)
        if not check_conditions:
            continue

        x = sampling.point_in(rng, C)
        Px = phi.point(x)
        if not Px.issubset(PC):
            fail("i", C, ConvexBody.point(x), Px, PC)

        x = sampling.point(rng, c)
        if not C.contains(x):
            Px = phi.point(x)
            got = meet(Px, PC)
            if got != empty_img:
                fail("ii", C, ConvexBody.point(x), got, empty_img)

        y, z = sampling.point(rng, c), sampling.point(rng, c)
        if y != z:
            lam = sampling.unit_fraction(rng)
            x = add(scale(lam, y), scale(1 - lam, z))
            Px, hull_yz = phi.point(x), join(phi.point(y), phi.point(z))
            if not Px.issubset(hull_yz):
                fail("iii", convex_hull([y, z]), ConvexBody.point(x), Px, hull_yz)

        xs = [sampling.point(rng, c) for _ in range(int(rng.integers(1, 5)))]
        outer = convex_hull(xs)
        inner = convex_hull([sampling.point_in(rng, outer) for _ in range(int(rng.integers(1, 4)))])
        cover = convex_hull([p for x in xs for p in phi.point(x).vertices], phi.d)
        Pin = phi(inner)
        if not Pin.issubset(cover):
            fail("iv", inner, outer, Pin, cover)

    return VerificationReport(flags["meet"], flags["join"], flags["i"], flags["ii"],
                              flags["iii"], flags["iv"], trials, first[0] if first else None)


# -- dimension laws --------------------------------------------------------

@dataclass(frozen=True)
class DimensionReport:
    rows: tuple[tuple[int, int], ...]
    lower_bound_ok: bool
    small_dim_bound_ok: bool
    profile_ok: bool
    failures: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.lower_bound_ok and self.small_dim_bound_ok and self.profile_ok


def expected_dim(spec: HomomorphismSpec, k: int) -> int:
    """Dimension of the image of a k-dimensional body under a canonical spec."""
    if spec.tag is Case.I:
        return k
    if spec.tag is Case.II:
        return k + 1
    return -1 if k < 0 else k + 1


def check_dimension_laws(spec: HomomorphismSpec, bodies: Iterable[ConvexBody]) -> DimensionReport:
    if spec.tag is Case.TRIVIAL:
        raise ValueError("dimension laws are stated for non-trivial homomorphisms")
    c, d = spec.source_dim, spec.target_dim
    empty_to_empty = spec.empty_image.is_empty
    rows, failures = [], []
    lower = small = profile = True
    for C in bodies:
        k = C.dim
        m = apply_body(spec, C).dim
        rows.append((k, m))
        if empty_to_empty and m < k:
            lower = False
            failures.append(f"dim {k} body mapped to dim {m}: below the source dimension")
        if k <= c - 2 and m > k + d - c:
            small = False
            failures.append(f"dim {k} body mapped to dim {m}: exceeds dim + (d - c)")
        if m != expected_dim(spec, k):
            profile = False
            failures.append(f"dim {k} body mapped to dim {m}; case {spec.tag.value} "
                            f"predicts {expected_dim(spec, k)}")
    return DimensionReport(tuple(rows), lower, small, profile, tuple(failures))


# -- random specs ----------------------------------------------------------

def random_affine_map(rng, c: int, d: int) -> AffineMap:
    while True:
        M = tuple(sampling.point(rng, c, lo=-3, hi=3, denominators=(1, 1, 2)) for _ in range(d))
        if rank(M) == c:
            return AffineMap(M, sampling.point(rng, d))


def random_spec(rng, case: Case, c: int = 3, d: Optional[int] = None) -> HomomorphismSpec:
    """Random canonical spec of the given case (case iii is normalized)."""
    case = Case(case)
    if d is None:
        d = c + 1
    if case is Case.TRIVIAL:
        return trivial(sampling.body(rng, d, min_vertices=0), c)
    phi = random_affine_map(rng, c, d)
    if case is Case.I:
        return case_i(phi)
    H = phi.image()
    allow = c < 3
    while True:
        o = sampling.point(rng, d)
        v = sampling.nonzero_vector(rng, d)
        try:
            if case is Case.II and not H.contains(o):
                return case_ii(phi, o, allow_low_dim=allow)
            if case is Case.III and rank(phi.columns() + [v]) > c:
                return case_iii(phi, v, allow_low_dim=allow).normalized()
            if case is Case.IV and not H.contains(o):
                return case_iv(phi, o, sampling.unit_fraction(rng), allow_low_dim=allow)
        except ValueError:
            log.debug("rejected random parameters for case %s", case.value)
