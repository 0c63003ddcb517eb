from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from convlattice import sampling
from convlattice.convex_functions import (INF, MaxAffineFunction, TruncatedEpigraph,
                                          canonical_anti_homomorphism,
                                          canonical_function_homomorphism, check_class, fenchel,
                                          fenchel_inverse, indicator, join_minus, join_plus,
                                          meet_minus, meet_plus, random_function,
                                          sandwich_certificate, support_function,
                                          verify_anti_homomorphism, verify_function_homomorphism)
from convlattice.errors import NotInClassError, RankDeficientError
from convlattice.geometry import ConvexBody, convex_hull, meet
from convlattice.homomorphism import AffineMap

import oracles

seeds = st.integers(0, 10 ** 6)


def unit_square():
    return convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])


def interval(a, b):
    return convex_hull([(a,), (b,)])


def generated(seed, c, kappa=1, max_points=5):
    """A random function together with the points that generate it."""
    rng = sampling.stream(seed, "gen-fn")
    k = int(rng.integers(1, max_points + 1))
    pts = [sampling.point(rng, c) + ((F(0) if i == 0 else F(kappa) * F(int(rng.integers(0, 9)), 8)),)
           for i in range(k)]
    return TruncatedEpigraph.from_points(pts, kappa), pts


def samples(seed, c, n=12):
    rng = sampling.stream(seed, "fn-samples")
    return [sampling.point(rng, c) for _ in range(n)] + [(F(0),) * c]


# -- constructors ------------------------------------------------------------

def test_indicator_of_square_is_cube():
    f = indicator(unit_square(), 1)
    cube = convex_hull([(a, b, t) for a in (0, 1) for b in (0, 1) for t in (0, 1)])
    assert f.body == cube


def test_indicator_of_empty():
    assert indicator(ConvexBody.empty(2)).is_plus_infinity


def test_indicator_of_point():
    f = indicator(ConvexBody.point((3, -1)), 2)
    assert f.body == convex_hull([(3, -1, 0), (3, -1, 2)])
    assert f((3, -1)) == 0 and f((3, 0)) == INF


def test_support_function_examples():
    box = convex_hull([(-1, -1), (1, -1), (-1, 1), (1, 1)])
    assert support_function(box)((1, 1)) == 2
    assert support_function(ConvexBody.empty(2)).is_minus_infinity
    zero = support_function(ConvexBody.point((0, 0)))
    assert zero.pieces == (((0, 0), 0),)


def test_band_and_ceiling_validated():
    with pytest.raises(ValueError):
        TruncatedEpigraph(convex_hull([(0, 0), (0, 2)]), 1)
    with pytest.raises(ValueError):
        TruncatedEpigraph(convex_hull([(0, 0), (1, 0)]), 1)


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 2))
def test_evaluation_matches_envelope_oracle(seed, c):
    f, pts = generated(seed, c)
    for x in samples(seed, c, 6) + [p[:-1] for p in pts]:
        assert f(x) == oracles.envelope_value(pts, x)


# -- conjugation ---------------------------------------------------------------

def test_conjugate_of_indicator_is_support():
    C = convex_hull([(0, 0), (2, 1), (1, 3)])
    assert fenchel(indicator(C)) == support_function(C)


def test_conjugate_of_raised_indicator():
    C = unit_square()
    raised = TruncatedEpigraph.from_points([v + (F(1),) for v in C.vertices], 1)
    g = fenchel(raised)
    h = support_function(C)
    for y in samples(0, 2):
        assert g(y) == h(y) - 1


def test_conjugate_of_origin_point():
    f = TruncatedEpigraph.from_points([(0, 0)], 1)
    assert fenchel(f).pieces == (((0,), 0),)


def test_inverse_of_support_is_indicator():
    C = convex_hull([(0, 0), (2, 1), (1, 3)])
    assert fenchel_inverse(support_function(C), 2) == indicator(C, 2)


def test_inverse_of_shifted_support():
    C = unit_square()
    g = MaxAffineFunction(2, [(v, 1) for v in C.vertices])
    with pytest.raises(NotInClassError):
        fenchel_inverse(g, 1)
    f = fenchel_inverse(g, 1, strict=False)
    assert f.body == convex_hull([v + (1,) for v in C.vertices])
    back = fenchel(f)
    for y in samples(3, 2, 20):
        assert back(y) == g(y)


def test_inverse_of_minus_infinity():
    assert fenchel_inverse(MaxAffineFunction.minus_infinity(2)).is_plus_infinity
    assert fenchel(TruncatedEpigraph.plus_infinity(2)).is_minus_infinity


def test_class_check():
    with pytest.raises(NotInClassError):
        check_class(MaxAffineFunction(1, [((1,), F(1, 2))]), 1)
    with pytest.raises(NotInClassError):
        check_class(MaxAffineFunction(1, [((1,), 0), ((2,), 3)]), 1)
    check_class(MaxAffineFunction(1, [((1,), 0), ((2,), 1)]), 1)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_conjugate_matches_point_formula(seed, c):
    f, pts = generated(seed, c)
    g = fenchel(f)
    for y in samples(seed, c, 8):
        assert g(y) == oracles.conjugate_of_points(pts, y)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_involution(seed, c):
    f = random_function(sampling.stream(seed, "inv"), c)
    back = fenchel_inverse(fenchel(f), f.kappa)
    assert back == f
    dom = f.domain()
    pts = samples(seed, c) + list(dom.vertices)
    for x in pts:
        assert back(x) == f(x)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 2))
def test_conjugate_vanishes_at_origin(seed, c):
    f = random_function(sampling.stream(seed, "zero"), c)
    assert fenchel(f)((F(0),) * c) == 0


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 2))
def test_order_reversal(seed, c):
    rng = sampling.stream(seed, "order")
    f = random_function(rng, c)
    g = random_function(rng, c)
    upper = meet_plus(f, g)  # pointwise max, so upper >= f
    ys = samples(seed, c)
    for y in ys:
        assert upper(y) >= f(y) or upper.is_plus_infinity
        assert fenchel(upper)(y) <= fenchel(f)(y)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_sandwich(seed, c):
    f = random_function(sampling.stream(seed, "sand"), c, kappa=F(3, 2))
    g = fenchel(f)
    cert = sandwich_certificate(g, f.kappa, samples(seed, c))
    assert cert.ok
    assert cert.C == f.domain()


# -- lattice operations --------------------------------------------------------

def test_meet_plus_of_disjoint_indicators():
    assert meet_plus(indicator(interval(0, 1)), indicator(interval(2, 3))).is_plus_infinity


def test_meet_plus_of_indicators_is_indicator_of_meet():
    assert meet_plus(indicator(interval(0, 2)), indicator(interval(1, 3))) == indicator(interval(1, 2))


def test_meet_minus_abs():
    g = meet_minus(support_function(interval(0, 1)), support_function(interval(-1, 0)))
    assert set(g.pieces) == {((1,), 0), ((-1,), 0)}
    assert g((-3,)) == 3


def test_join_minus_of_supports():
    C = convex_hull([(0, 0), (2, 0), (0, 2)])
    D = convex_hull([(1, 1), (3, 1), (1, -1)])
    got = join_minus(support_function(C), support_function(D))
    assert got == support_function(meet(C, D))


def test_join_minus_below_zero():
    g1 = MaxAffineFunction(1, [((1,), 0)])
    g2 = MaxAffineFunction(1, [((-1,), 0)])
    assert join_minus(g1, g2).is_minus_infinity
    assert join_minus(g1, MaxAffineFunction.minus_infinity(1)).is_minus_infinity


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 2))
def test_join_minus_matches_perspective_oracle(seed, c):
    rng = sampling.stream(seed, "persp")
    g1, g2 = fenchel(random_function(rng, c)), fenchel(random_function(rng, c))
    got = join_minus(g1, g2)
    at_zero = oracles.envelope_of_min(g1.pieces, g2.pieces, (F(0),) * c)
    if abs(at_zero) > 1e-9:
        assert got.is_minus_infinity
        return
    for y in samples(seed, c, 6):
        assert abs(float(got(y)) - oracles.envelope_of_min(g1.pieces, g2.pieces, y)) < 1e-9


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 3))
def test_conjugation_swaps_operations(seed, c):
    rng = sampling.stream(seed, "swap")
    f, g = random_function(rng, c), random_function(rng, c)
    ys = samples(seed, c)
    lhs, rhs = fenchel(meet_plus(f, g)), join_minus(fenchel(f), fenchel(g))
    assert lhs == rhs and all(lhs(y) == rhs(y) for y in ys)
    lhs, rhs = fenchel(join_plus(f, g)), meet_minus(fenchel(f), fenchel(g))
    assert lhs == rhs and all(lhs(y) == rhs(y) for y in ys)


# -- canonical maps ------------------------------------------------------------

def test_canonical_maps_on_simple_bodies():
    H = canonical_function_homomorphism(AffineMap.identity(1), 2)
    assert H(interval(0, 1)).body == convex_hull([(0, 0), (1, 0), (0, 2), (1, 2)])
    assert H(ConvexBody.empty(1)).is_plus_infinity
    L = canonical_anti_homomorphism(AffineMap.identity(2))
    assert L(ConvexBody.empty(2)).is_minus_infinity


def test_anti_homomorphism_on_join():
    L = canonical_anti_homomorphism(AffineMap(((2, 1), (0, 1)), (1, 0)))
    C, D = unit_square(), convex_hull([(3, 3), (4, 2)])
    from convlattice.geometry import join
    assert L(join(C, D)) == meet_minus(L(C), L(D))


def test_canonical_maps_need_bijection():
    with pytest.raises(RankDeficientError):
        canonical_function_homomorphism(AffineMap.embedding(2))
    with pytest.raises(RankDeficientError):
        canonical_anti_homomorphism(AffineMap.embedding(2))


@pytest.mark.parametrize("c", [1, 2])
def test_function_homomorphisms_verify(c):
    phi = AffineMap(tuple(tuple(F(int(i == j) * 2 + (j > i)) for j in range(c)) for i in range(c)),
                    (F(1),) * c)
    assert verify_function_homomorphism(canonical_function_homomorphism(phi, 1), c, trials=10).ok
    assert verify_anti_homomorphism(canonical_anti_homomorphism(phi, 1), c, trials=10).ok


def test_canonical_maps_through_conjugation():
    # recovering H as the inverse conjugate of support functions gives the same map
    rep = verify_function_homomorphism(
        lambda C: fenchel_inverse(support_function(C), 1) if not C.is_empty
        else TruncatedEpigraph.plus_infinity(2), 2, trials=10)
    assert rep.ok
    assert verify_anti_homomorphism(support_function, 2, trials=10).ok


def _box_support(C):
    if C.is_empty:
        return MaxAffineFunction.minus_infinity(2)
    xs, ys = [v[0] for v in C.vertices], [v[1] for v in C.vertices]
    return support_function(convex_hull([(x, y) for x in (min(xs), max(xs)) for y in (min(ys), max(ys))]))


def test_bounding_box_support_is_not_anti_homomorphic():
    rep = verify_anti_homomorphism(_box_support, 2, trials=20)
    assert not rep.ok and rep.counterexample is not None


@pytest.mark.parametrize("seed", range(6))
def test_join_minus_of_overlapping_supports_matches_oracle(seed):
    rng = sampling.stream(seed, "overlap")
    C, D = sampling.body_pair(rng, 2)
    M = meet(C, D)
    g1, g2 = support_function(C), support_function(D)
    got = join_minus(g1, g2)
    if M.is_empty:
        assert got.is_minus_infinity
        return
    assert got == support_function(M)
    for y in samples(seed, 2, 6):
        assert abs(float(got(y)) - oracles.envelope_of_min(g1.pieces, g2.pieces, y)) < 1e-9
