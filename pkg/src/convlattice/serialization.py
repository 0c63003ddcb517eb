"""JSON codecs. Rationals travel as ``"p/q"`` strings, never as floats."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Optional, Sequence

from .classifier import ClassifiedForm, OracleSample
from .convex_functions import (FunctionVerificationReport, MaxAffineFunction, SandwichCert,
                               TruncatedEpigraph)
from .errors import ConvLatticeError
from .geometry import AffineSubspace, ConvexBody, RadonPartition, convex_hull
from .homomorphism import (AffineMap, Case, Counterexample, DimensionReport, HomomorphismSpec,
                           VerificationReport)
from .rational import format_fraction, format_point, to_fraction
from .transversal import (Band, HellyReport, Hyperplane, ParallelSegment, RaySegment,
                          TransversalResult, hyperplane_from_pole)


class SchemaError(ConvLatticeError):
    """Well-formed JSON that does not match the expected schema."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def require(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", path)
    return obj[key]


def scalar_from_json(x, path: str = "$") -> Fraction:
    if isinstance(x, float):
        raise SchemaError(f"floating point value {x!r} refused; write rationals as \"p/q\"", path)
    try:
        return to_fraction(x)
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), path) from None


def scalar_to_json(x) -> Any:
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return format_fraction(x)


def point_from_json(obj, path: str = "$", dim: Optional[int] = None) -> tuple[Fraction, ...]:
    if not isinstance(obj, list):
        raise SchemaError("expected an array of rationals", path)
    p = tuple(scalar_from_json(x, f"{path}[{i}]") for i, x in enumerate(obj))
    if dim is not None and len(p) != dim:
        raise SchemaError(f"expected {dim} coordinates, got {len(p)}", path)
    return p


def points_from_json(obj, path: str = "$", dim: Optional[int] = None) -> list[tuple[Fraction, ...]]:
    if not isinstance(obj, list):
        raise SchemaError("expected an array of points", path)
    return [point_from_json(p, f"{path}[{i}]", dim) for i, p in enumerate(obj)]


# -- geometry --------------------------------------------------------------

def body_to_json(C: ConvexBody) -> dict:
    return {"dim": C.ambient_dim, "vertices": [format_point(v) for v in C.vertices]}


def body_from_json(obj, path: str = "$") -> ConvexBody:
    n = require(obj, "dim", path)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError("'dim' must be a positive integer", path + ".dim")
    pts = points_from_json(require(obj, "vertices", path), path + ".vertices", n)
    return convex_hull(pts, n)


def subspace_to_json(S: AffineSubspace) -> dict:
    return {"ambient_dim": S.ambient_dim, "dim": S.dim,
            "base": None if S.base is None else format_point(S.base),
            "directions": [format_point(d) for d in S.directions]}


def radon_to_json(R: RadonPartition) -> dict:
    return {"red": [format_point(p) for p in R.red], "blue": [format_point(p) for p in R.blue],
            "witness": format_point(R.witness)}


# -- homomorphisms ---------------------------------------------------------

def affine_map_to_json(phi: AffineMap) -> dict:
    return {"matrix": [format_point(r) for r in phi.matrix], "offset": format_point(phi.offset)}


def affine_map_from_json(obj, path: str = "$") -> AffineMap:
    rows = points_from_json(require(obj, "matrix", path), path + ".matrix")
    offset = point_from_json(require(obj, "offset", path), path + ".offset")
    if not rows:
        raise SchemaError("empty matrix", path + ".matrix")
    return AffineMap(tuple(rows), offset)


def spec_to_json(spec: HomomorphismSpec) -> dict:
    out = {"case": spec.tag.value, "c": spec.source_dim, "d": spec.target_dim}
    if spec.phi is not None:
        out["phi"] = affine_map_to_json(spec.phi)
    if spec.o is not None:
        out["o"] = format_point(spec.o)
    if spec.v is not None:
        out["v"] = format_point(spec.v)
    if spec.gamma is not None:
        out["gamma"] = format_fraction(spec.gamma)
    if spec.fixed_body is not None:
        out["fixed_body"] = body_to_json(spec.fixed_body)
    return out


def spec_from_json(obj, path: str = "$") -> HomomorphismSpec:
    try:
        tag = Case(require(obj, "case", path))
    except ValueError:
        raise SchemaError("'case' must be one of trivial, i, ii, iii, iv", path + ".case") from None
    c, d = require(obj, "c", path), require(obj, "d", path)
    if tag in (Case.II, Case.III, Case.IV) and c < 3 and not obj.get("allow_low_dim", False):
        raise SchemaError("cases ii-iv need c >= 3 (set \"allow_low_dim\": true to override)", path)
    kw = {}
    if "phi" in obj:
        kw["phi"] = affine_map_from_json(obj["phi"], path + ".phi")
    if "o" in obj:
        kw["o"] = point_from_json(obj["o"], path + ".o", d)
    if "v" in obj:
        kw["v"] = point_from_json(obj["v"], path + ".v", d)
    if "gamma" in obj:
        kw["gamma"] = scalar_from_json(obj["gamma"], path + ".gamma")
    if "fixed_body" in obj:
        kw["fixed_body"] = body_from_json(obj["fixed_body"], path + ".fixed_body")
    return HomomorphismSpec(tag, c, d, **kw)


def _counterexample_to_json(cx: Optional[Counterexample]) -> Optional[dict]:
    if cx is None:
        return None
    return {"check": cx.check, "C": body_to_json(cx.C),
            "D": None if cx.D is None else body_to_json(cx.D),
            "lhs": body_to_json(cx.lhs), "rhs": body_to_json(cx.rhs)}


def report_to_json(r: VerificationReport) -> dict:
    return {"axiom_meet_ok": r.axiom_meet_ok, "axiom_join_ok": r.axiom_join_ok,
            "cond_i_ok": r.cond_i_ok, "cond_ii_ok": r.cond_ii_ok,
            "cond_iii_ok": r.cond_iii_ok, "cond_iv_ok": r.cond_iv_ok,
            "ok": r.ok, "trials": r.trials, "counterexample": _counterexample_to_json(r.counterexample)}


def dimension_report_to_json(r: DimensionReport) -> dict:
    return {"rows": [{"dim": k, "image_dim": m} for k, m in r.rows],
            "lower_bound_ok": r.lower_bound_ok, "small_dim_bound_ok": r.small_dim_bound_ok,
            "profile_ok": r.profile_ok, "ok": r.ok, "failures": list(r.failures)}


def sample_from_json(obj, path: str = "$") -> OracleSample:
    c, d = require(obj, "c", path), require(obj, "d", path)
    empty = body_from_json(require(obj, "empty_image", path), path + ".empty_image")
    pts = require(obj, "points", path)
    if not isinstance(pts, list):
        raise SchemaError("expected an array", path + ".points")
    pairs = []
    for i, item in enumerate(pts):
        p = f"{path}.points[{i}]"
        pairs.append((point_from_json(require(item, "x", p), p + ".x", c),
                      body_from_json(require(item, "image", p), p + ".image")))
    return OracleSample(c, d, empty, tuple(pairs))


def classified_to_json(form: ClassifiedForm) -> dict:
    out = spec_to_json(form.spec)
    out["residual_ok"] = form.residual_ok
    return out


# -- transversals ----------------------------------------------------------

def instance_from_json(obj, path: str = "$"):
    """Returns ``(mode, family, o)``; o is None in parallel mode."""
    mode = require(obj, "mode", path)
    d = require(obj, "dim", path)
    segs = require(obj, "segments", path)
    if not isinstance(segs, list):
        raise SchemaError("expected an array", path + ".segments")
    if mode == "rays":
        o = point_from_json(obj.get("o", ["0"] * d), path + ".o", d)
        fam = []
        for i, s in enumerate(segs):
            p = f"{path}.segments[{i}]"
            lo, hi = pair_from_json(require(s, "s", p), p + ".s")
            fam.append(RaySegment(point_from_json(require(s, "u", p), p + ".u", d), lo, hi))
        return mode, fam, o
    if mode == "parallel":
        fam = []
        for i, s in enumerate(segs):
            p = f"{path}.segments[{i}]"
            lo, hi = pair_from_json(require(s, "band", p), p + ".band")
            fam.append(ParallelSegment(point_from_json(require(s, "x", p), p + ".x", d - 1), lo, hi))
        return mode, fam, None
    raise SchemaError("'mode' must be 'rays' or 'parallel'", path + ".mode")


def pair_from_json(obj, path: str) -> tuple[Fraction, Fraction]:
    if not isinstance(obj, list) or len(obj) != 2:
        raise SchemaError("expected [lo, hi]", path)
    return scalar_from_json(obj[0], path + "[0]"), scalar_from_json(obj[1], path + "[1]")


def hyperplane_to_json(H: Hyperplane) -> dict:
    return {"normal": format_point(H.normal), "offset": format_fraction(H.offset)}


def hyperplane_from_json(obj, path: str = "$") -> Hyperplane:
    return Hyperplane(point_from_json(require(obj, "normal", path), path + ".normal"),
                      scalar_from_json(require(obj, "offset", path), path + ".offset"))


def band_to_json(b: Band) -> dict:
    return {"u": [str(x) for x in b.u], "lo": format_fraction(b.lo), "hi": format_fraction(b.hi)}


def transversal_to_json(res: TransversalResult, o: Optional[Sequence] = None) -> dict:
    if not res.feasible:
        return {"feasible": False, "infeasible_subfamily": list(res.infeasible_subfamily)}
    cert = res.certificate
    out = {"feasible": True, "mode": cert.mode, "hits": [format_fraction(h) for h in cert.hits],
           "span_dim": cert.span_dim}
    if cert.mode == "rays":
        out["pole"] = format_point(cert.pole)
        out["hyperplane"] = hyperplane_to_json(hyperplane_from_pole(cert.pole, o or (0,) * len(cert.pole)))
    else:
        slope, const = cert.psi
        out["psi"] = {"slope": format_point(slope), "constant": format_fraction(const)}
        out["hyperplane"] = hyperplane_to_json(cert.hyperplane)
    return out


def helly_to_json(r: HellyReport) -> dict:
    return {"global_feasible": r.global_feasible, "subfamilies_feasible": r.subfamilies_feasible,
            "subfamily_size": r.subfamily_size, "subfamilies_checked": r.subfamilies_checked,
            "bounded": r.bounded, "implication_ok": r.implication_ok,
            "minimal_infeasible": list(r.minimal_infeasible)}


# -- functions -------------------------------------------------------------

def function_to_json(f, kappa: Optional[Fraction] = None) -> dict:
    if isinstance(f, TruncatedEpigraph):
        if f.is_plus_infinity:
            return {"kind": "plus_inf", "c": f.c, "kappa": format_fraction(f.kappa)}
        return {"kind": "trunc_epi", "kappa": format_fraction(f.kappa), "body": body_to_json(f.body)}
    if f.is_minus_infinity:
        out = {"kind": "minus_inf", "c": f.c}
    else:
        out = {"kind": "max_affine", "c": f.c,
               "pieces": [{"a": format_point(a), "b": format_fraction(b)} for a, b in f.pieces]}
    if kappa is not None:
        out["kappa"] = format_fraction(kappa)
    return out


def function_from_json(obj, path: str = "$"):
    kind = require(obj, "kind", path)
    if kind == "trunc_epi":
        body = body_from_json(require(obj, "body", path), path + ".body")
        return TruncatedEpigraph(body, scalar_from_json(obj.get("kappa", "1"), path + ".kappa"))
    if kind == "plus_inf":
        return TruncatedEpigraph.plus_infinity(require(obj, "c", path),
                                               scalar_from_json(obj.get("kappa", "1"), path + ".kappa"))
    if kind == "minus_inf":
        return MaxAffineFunction.minus_infinity(require(obj, "c", path))
    if kind == "max_affine":
        items = require(obj, "pieces", path)
        if not isinstance(items, list) or not items:
            raise SchemaError("expected a nonempty array of pieces", path + ".pieces")
        pieces = []
        for i, it in enumerate(items):
            p = f"{path}.pieces[{i}]"
            pieces.append((point_from_json(require(it, "a", p), p + ".a"),
                           scalar_from_json(require(it, "b", p), p + ".b")))
        c = obj.get("c", len(pieces[0][0]))
        return MaxAffineFunction(c, tuple(pieces))
    raise SchemaError("'kind' must be trunc_epi, max_affine, plus_inf or minus_inf", path + ".kind")


def sandwich_to_json(s: SandwichCert) -> dict:
    return {"C": body_to_json(s.C), "ok": s.ok,
            "lower_gaps": [format_fraction(x) for x in s.lower_gaps],
            "upper_gaps": [format_fraction(x) for x in s.upper_gaps]}


def function_report_to_json(r: FunctionVerificationReport) -> dict:
    cx = r.counterexample
    out = {"meet_ok": r.meet_ok, "join_ok": r.join_ok, "ok": r.ok, "trials": r.trials,
           "counterexample": None}
    if cx is not None:
        out["counterexample"] = {"identity": cx.identity, "C": body_to_json(cx.C), "D": body_to_json(cx.D),
                                 "lhs": function_to_json(cx.lhs), "rhs": function_to_json(cx.rhs),
                                 "at": None if cx.at is None else format_point(cx.at)}
    return out
