from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from convlattice import sampling
from convlattice.errors import MalformedSubjectError, RankDeficientError
from convlattice.geometry import ConvexBody, convex_hull, join, meet
from convlattice.homomorphism import (AffineMap, Case, HomomorphismSpec, apply_body, apply_point,
                                      case_i, case_ii, case_iii, case_iv, check_dimension_laws,
                                      endpoints, random_spec, trivial, verify_homomorphism)
from convlattice.linalg import is_parallel, rank, sub

import oracles

EMBED3 = AffineMap.embedding(3)
ORIGIN4 = (0, 0, 0, 0)


def spec_iv(gamma=F(1, 2)):
    return case_iv(EMBED3, ORIGIN4, gamma)


def random_specs(case, n, seed=0):
    return [random_spec(sampling.stream(seed, f"test-spec-{case}", i), Case(case)) for i in range(n)]


# -- construction ------------------------------------------------------------

def test_affine_map_rank_checked():
    with pytest.raises(RankDeficientError):
        AffineMap(((1, 0), (2, 0), (0, 0)), (0, 0, 0))


def test_case_iv_requires_apex_off_image():
    with pytest.raises(ValueError):
        case_iv(EMBED3, (0, 0, 0, 1), F(1, 2))


@pytest.mark.parametrize("gamma", [0, 1, F(3, 2), -1])
def test_case_iv_gamma_range(gamma):
    with pytest.raises(ValueError):
        case_iv(EMBED3, ORIGIN4, gamma)


def test_case_iii_rejects_vector_in_image_directions():
    with pytest.raises(ValueError):
        case_iii(EMBED3, (1, 0, 0, 0))


def test_low_dimension_needs_opt_in():
    with pytest.raises(ValueError):
        case_ii(AffineMap.embedding(2), (0, 0, 0))
    case_ii(AffineMap.embedding(2), (0, 0, 0), allow_low_dim=True)


def test_case_iii_normalization_identifies_both_readings():
    v = (0, 0, 0, -2)
    a = case_iii(EMBED3, v).normalized()
    b = case_iii(EMBED3.translated(v), (0, 0, 0, 2)).normalized()
    assert a == b
    assert a.v == (0, 0, 0, 2)


# -- application -------------------------------------------------------------

def test_apply_point_case_iv():
    got = apply_point(spec_iv(), (2, 0, 0))
    assert got == convex_hull([(2, 0, 0, 1), (1, 0, 0, F(1, 2))])


def test_apply_point_case_ii_plane():
    spec = case_ii(AffineMap.embedding(2), (0, 0, 0), allow_low_dim=True)
    assert apply_point(spec, (1, 1)) == convex_hull([(1, 1, 1), (0, 0, 0)])


def test_apply_point_case_i_identity():
    spec = case_i(AffineMap.identity(3))
    assert apply_point(spec, (1, F(2, 3), -4)) == ConvexBody.point((1, F(2, 3), -4))


def test_apply_body_case_iii_box():
    spec = case_iii(AffineMap.embedding(3, height=0), (0, 0, 0, 1))
    C = convex_hull([(0, 0, 0), (1, 0, 0)])
    expected = convex_hull([(0, 0, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (1, 0, 0, 1)])
    assert apply_body(spec, C) == expected


def test_empty_images():
    assert apply_body(case_ii(EMBED3, ORIGIN4), ConvexBody.empty(3)) == ConvexBody.point(ORIGIN4)
    assert apply_body(spec_iv(), ConvexBody.empty(3)).is_empty
    fixed = convex_hull([(0, 0), (1, 1)])
    t = trivial(fixed, 3)
    assert apply_body(t, ConvexBody.empty(3)) == fixed
    assert apply_point(t, (5, 5, 5)) == fixed


def test_case_i_is_vertexwise_image():
    phi = AffineMap(((1, 2, 0), (0, 1, 0), (3, 0, 1), (0, 0, 2)), (1, 0, 0, 0))
    C = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert apply_body(case_i(phi), C) == convex_hull([phi(v) for v in C.vertices])


@pytest.mark.parametrize("case", ["i", "ii", "iii", "iv"])
def test_apply_body_against_dense_union(case):
    """Hull of the images of many points of C (vertices included) equals
    the image of C; every single image lies inside it."""
    for i, spec in enumerate(random_specs(case, 3)):
        rng = sampling.stream(i, "dense-union")
        C = sampling.body(rng, 3, min_vertices=2, max_vertices=4)
        img = apply_body(spec, C)
        xs = list(C.vertices) + [sampling.point_in(rng, C) for _ in range(50)]
        union = [p for x in xs for p in endpoints(spec, x)]
        assert convex_hull(union, 4) == img
        for x in xs[-10:]:
            assert apply_point(spec, x).issubset(img)


# -- structural invariants -----------------------------------------------------

@pytest.mark.parametrize("case", ["i", "ii", "iii", "iv"])
def test_injective_on_points_and_empty_image_proper(case):
    for i, spec in enumerate(random_specs(case, 4)):
        rng = sampling.stream(i, "inj")
        xs = list({sampling.point(rng, 3) for _ in range(8)})
        imgs = [apply_point(spec, x) for x in xs]
        assert len(set(imgs)) == len(xs)
        E = spec.empty_image
        for img in imgs:
            assert E.issubset(img) and E != img


@pytest.mark.parametrize("case", ["iii", "iv"])
def test_segments_of_distinct_points_are_disjoint(case):
    for i, spec in enumerate(random_specs(case, 4)):
        rng = sampling.stream(i, "disjoint")
        xs = list({sampling.point(rng, 3) for _ in range(6)})
        imgs = [apply_point(spec, x) for x in xs]
        for a in range(len(imgs)):
            for b in range(a + 1, len(imgs)):
                assert meet(imgs[a], imgs[b]).is_empty


def test_case_iv_segments_on_distinct_rays_between_two_hyperplanes():
    for i, spec in enumerate(random_specs("iv", 4)):
        rng = sampling.stream(i, "rays")
        xs = list({sampling.point(rng, 3) for _ in range(6)})
        o = spec.o
        far, near = [], []
        dirs = []
        for x in xs:
            p, q = endpoints(spec, x)
            assert is_parallel(sub(p, o), sub(q, o))  # collinear with o
            dirs.append(sub(p, o))
            far.append(p)
            near.append(q)
        for a in range(len(dirs)):
            for b in range(a + 1, len(dirs)):
                assert not is_parallel(dirs[a], dirs[b])
        # both endpoint families are affinely 3-dimensional: two hyperplanes of E^4
        assert oracles.affine_rank(far) <= 3 and oracles.affine_rank(near) <= 3
        assert oracles.affine_rank(far + near) == 4


def test_case_iii_segments_are_translates():
    for spec in random_specs("iii", 4):
        for x in [(0, 0, 0), (1, 2, 3), (F(-1, 2), 4, 0)]:
            p, q = endpoints(spec, x)
            assert sub(q, p) == spec.v


# -- verifier ----------------------------------------------------------------

def test_verify_case_iv_spec():
    report = verify_homomorphism(spec_iv(), trials=20, seed=7)
    assert report.ok and report.counterexample is None


def test_verify_trivial_spec():
    report = verify_homomorphism(trivial(convex_hull([(0, 0, 0, 0), (1, 0, 0, 0)]), 3), trials=10)
    assert report.ok


@pytest.mark.parametrize("case", ["i", "ii", "iii", "iv"])
def test_verify_random_canonical_specs(case):
    for i, spec in enumerate(random_specs(case, 2, seed=11)):
        report = verify_homomorphism(spec, trials=8, seed=i)
        assert report.ok, report.counterexample


def _bounding_box_lift(C):
    if C.is_empty:
        return ConvexBody.empty(4)
    lo = [min(v[j] for v in C.vertices) for j in range(3)]
    hi = [max(v[j] for v in C.vertices) for j in range(3)]
    corners = [(a, b, c, 1) for a in (lo[0], hi[0]) for b in (lo[1], hi[1]) for c in (lo[2], hi[2])]
    return convex_hull(corners, 4)


def test_bounding_box_fails_join_axiom():
    report = verify_homomorphism(_bounding_box_lift, c=3, trials=30, seed=1, check_conditions=False)
    assert not report.axiom_join_ok
    cx = report.counterexample
    assert cx is not None and cx.lhs != cx.rhs
    assert not report.ok


def test_all_true_report_iff_no_counterexample():
    for subject, c in [(spec_iv(), 3), (_bounding_box_lift, 3)]:
        r = verify_homomorphism(subject, c=c, trials=10, seed=3)
        assert r.ok == (r.counterexample is None)


def test_malformed_subject_detected():
    def bad(C):
        return ConvexBody.empty(4) if C.is_empty else ConvexBody.point((0,) * (3 + len(C.vertices) % 2))

    with pytest.raises(MalformedSubjectError):
        verify_homomorphism(bad, c=3, trials=20)


def test_verify_is_deterministic():
    a = verify_homomorphism(_bounding_box_lift, c=3, trials=10, seed=5)
    b = verify_homomorphism(_bounding_box_lift, c=3, trials=10, seed=5)
    assert a == b


# -- dimension laws ----------------------------------------------------------

def _bodies(seed, n=12, c=3):
    return [sampling.body_of_dim(sampling.stream(seed, "dims", i), c, i % (c + 2) - 1) for i in range(n)]


def test_dimension_profiles():
    bodies = _bodies(0)
    assert {b.dim for b in bodies} == {-1, 0, 1, 2, 3}
    for case, shift in [("i", 0), ("ii", 1)]:
        spec = random_specs(case, 1)[0]
        rep = check_dimension_laws(spec, bodies)
        assert rep.ok
        assert all(m == k + shift for k, m in rep.rows)
    for case in ("iii", "iv"):
        rep = check_dimension_laws(random_specs(case, 1)[0], bodies)
        assert rep.ok
        assert all(m == (-1 if k == -1 else k + 1) for k, m in rep.rows)
        assert 0 not in {m for _, m in rep.rows}


def test_point_rises_in_case_ii():
    spec = case_ii(EMBED3, ORIGIN4)
    assert apply_body(spec, ConvexBody.point((1, 2, 3))).dim == 1


def test_dimension_laws_reject_trivial():
    with pytest.raises(ValueError):
        check_dimension_laws(trivial(ConvexBody.empty(4), 3), _bodies(0, 3))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_meet_axiom_property(seed):
    rng = sampling.stream(seed, "hyp-hom")
    spec = random_spec(rng, Case(["i", "ii", "iii", "iv"][seed % 4]))
    C, D = sampling.body_pair(rng, 3)
    assert apply_body(spec, meet(C, D)) == meet(apply_body(spec, C), apply_body(spec, D))
    assert apply_body(spec, join(C, D)) == join(apply_body(spec, C), apply_body(spec, D))
