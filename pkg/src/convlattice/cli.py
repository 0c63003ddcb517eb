"""``convlattice`` command line: JSON in, JSON out.

Exit codes: 0 success / feasible / verified, 1 verified-false or
infeasible (the JSON explains why), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import classifier, convex_functions as cf, geometry, homomorphism as hom, sampling, transversal as tv
from .errors import ConvLatticeError, NotCanonicalHomomorphismError
from .rational import format_point
from . import serialization as ser

# verb -> module operations it exposes; every operation appears once
VERBS: dict[str, tuple[str, ...]] = {
    "hull": ("geometry.convex_hull",),
    "meet": ("geometry.meet",),
    "join": ("geometry.join",),
    "dim": ("geometry.dim", "geometry.affine_hull"),
    "radon": ("geometry.radon_partition", "transversal.affine_dependence_hyperplane"),
    "hom-apply": ("homomorphism.apply_point", "homomorphism.apply_body"),
    "hom-verify": ("homomorphism.verify_homomorphism",),
    "hom-classify": ("classifier.classify", "classifier.fit_affine_map",
                     "classifier.check_order_preservation"),
    "dim-laws": ("homomorphism.check_dimension_laws",),
    "transversal": ("transversal.transversal_rays", "transversal.transversal_parallel",
                    "transversal.pole", "transversal.hyperplane_from_pole",
                    "transversal.segment_constraint"),
    "helly": ("transversal.helly_check",),
    "fenchel": ("convex_functions.fenchel",),
    "fenchel-inv": ("convex_functions.fenchel_inverse",),
    "support": ("convex_functions.support_function", "convex_functions.indicator"),
    "func-lattice": ("convex_functions.meet_plus", "convex_functions.join_plus",
                     "convex_functions.meet_minus", "convex_functions.join_minus"),
    "anti-hom-verify": ("convex_functions.canonical_function_homomorphism",
                        "convex_functions.canonical_anti_homomorphism"),
}


class InputError(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("error", "input error"))
        self.payload = payload


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError({"error": f"cannot read {path}: {exc.strerror}", "file": path}) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError({"error": f"malformed JSON: {exc.msg}", "file": path,
                          "line": exc.lineno, "column": exc.colno, "position": exc.pos}) from None


def _fraction(text: str) -> Fraction:
    try:
        return ser.scalar_from_json(text)
    except ConvLatticeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- handlers: each returns (exit code, JSON object) -----------------------

def _hull(a):
    obj = _load(a.input)
    pts = obj.get("points") if isinstance(obj, dict) else obj
    dim = obj.get("dim") if isinstance(obj, dict) else None
    return 0, ser.body_to_json(geometry.convex_hull(ser.points_from_json(pts, "$.points"), dim))


def _binary_bodies(a):
    return ser.body_from_json(_load(a.first)), ser.body_from_json(_load(a.second))


def _meet(a):
    return 0, ser.body_to_json(geometry.meet(*_binary_bodies(a)))


def _join(a):
    return 0, ser.body_to_json(geometry.join(*_binary_bodies(a)))


def _dim(a):
    C = ser.body_from_json(_load(a.input))
    return 0, {"dim": geometry.dim(C), "affine_hull": ser.subspace_to_json(geometry.affine_hull(C))}


def _radon(a):
    obj = _load(a.input)
    if isinstance(obj, dict) and "images" in obj:
        images = [ser.body_from_json(b, f"$.images[{i}]") for i, b in enumerate(obj["images"])]
        sources = ser.points_from_json(obj["sources"], "$.sources") if "sources" in obj else None
        return 0, {"subspace": ser.subspace_to_json(tv.affine_dependence_hyperplane(images, sources))}
    pts = ser.points_from_json(obj.get("points") if isinstance(obj, dict) else obj, "$.points")
    part = geometry.radon_partition(pts)
    return 0, ser.radon_to_json(part)


def _hom_apply(a):
    spec = ser.spec_from_json(_load(a.spec))
    obj = _load(a.input)
    if isinstance(obj, dict) and "x" in obj:
        return 0, ser.body_to_json(hom.apply_point(spec, ser.point_from_json(obj["x"], "$.x")))
    return 0, ser.body_to_json(hom.apply_body(spec, ser.body_from_json(obj)))


def _hom_verify(a):
    spec = ser.spec_from_json(_load(a.spec))
    report = hom.verify_homomorphism(spec, trials=a.trials, seed=a.seed)
    return (0 if report.ok else 1), ser.report_to_json(report)


def _hom_classify(a):
    obj = _load(a.input)
    if isinstance(obj, dict) and "pairs" in obj:
        pairs = [(ser.point_from_json(p["x"], f"$.pairs[{i}].x"), ser.point_from_json(p["y"], f"$.pairs[{i}].y"))
                 for i, p in enumerate(obj["pairs"])]
        return 0, ser.affine_map_to_json(classifier.fit_affine_map(pairs, obj["c"], obj["d"]))
    if isinstance(obj, dict) and "triples" in obj:
        images = [(ser.point_from_json(p["x"], f"$.point_images[{i}].x"),
                   ser.point_from_json(p["y"], f"$.point_images[{i}].y"))
                  for i, p in enumerate(obj["point_images"])]
        triples = [tuple(ser.points_from_json(t, f"$.triples[{i}]")) for i, t in enumerate(obj["triples"])]
        ok = classifier.check_order_preservation(images, triples)
        return (0 if ok else 1), {"order_preserved": ok}
    return 0, ser.classified_to_json(classifier.classify(ser.sample_from_json(obj)))


def _dim_laws(a):
    spec = ser.spec_from_json(_load(a.spec))
    if a.bodies:
        obj = _load(a.bodies)
        bodies = [ser.body_from_json(b, f"$.bodies[{i}]") for i, b in enumerate(obj["bodies"])]
    else:
        c = spec.source_dim
        bodies = [sampling.body_of_dim(sampling.stream(a.seed, "dim-laws", i), c, i % (c + 2) - 1)
                  for i in range(a.trials)]
    report = hom.check_dimension_laws(spec, bodies)
    return (0 if report.ok else 1), ser.dimension_report_to_json(report)


def _transversal(a):
    obj = _load(a.input)
    mode = obj.get("mode") if isinstance(obj, dict) else None
    if mode == "pole":
        o = ser.point_from_json(obj["o"], "$.o")
        if "hyperplane" in obj:
            return 0, {"pole": format_point(tv.pole(ser.hyperplane_from_json(obj["hyperplane"], "$.hyperplane"), o))}
        H = tv.hyperplane_from_pole(ser.point_from_json(obj["pole"], "$.pole"), o)
        return 0, {"hyperplane": ser.hyperplane_to_json(H)}
    if mode == "band":
        lo, hi = ser.pair_from_json(obj["s"], "$.s")
        band = tv.segment_constraint(tv.RaySegment(ser.point_from_json(obj["u"], "$.u"), lo, hi))
        return 0, ser.band_to_json(band)
    mode, fam, o = ser.instance_from_json(obj)
    res = tv.transversal_rays(fam) if mode == "rays" else tv.transversal_parallel(fam)
    return (0 if res.feasible else 1), ser.transversal_to_json(res, o)


def _helly(a):
    _, fam, _ = ser.instance_from_json(_load(a.input))
    report = tv.helly_check(fam, a.subfamily_size)
    return (0 if report.implication_ok else 1), ser.helly_to_json(report)


def _expect(f, kind, what):
    if not isinstance(f, kind):
        raise ser.SchemaError(f"expected {what}")
    return f


def _fenchel(a):
    f = _expect(ser.function_from_json(_load(a.input)), cf.TruncatedEpigraph, "a trunc_epi or plus_inf function")
    return 0, ser.function_to_json(cf.fenchel(f), kappa=f.kappa)


def _fenchel_inv(a):
    obj = _load(a.input)
    g = _expect(ser.function_from_json(obj), cf.MaxAffineFunction, "a max_affine or minus_inf function")
    kappa = a.kappa if a.kappa is not None else ser.scalar_from_json(obj.get("kappa", "1"), "$.kappa")
    return 0, ser.function_to_json(cf.fenchel_inverse(g, kappa))


def _support(a):
    C = ser.body_from_json(_load(a.input))
    if a.indicator:
        return 0, ser.function_to_json(cf.indicator(C, a.kappa if a.kappa is not None else 1))
    return 0, ser.function_to_json(cf.support_function(C))


def _func_lattice(a):
    f, g = ser.function_from_json(_load(a.first)), ser.function_from_json(_load(a.second))
    op = {"meet_plus": cf.meet_plus, "join_plus": cf.join_plus,
          "meet_minus": cf.meet_minus, "join_minus": cf.join_minus}[a.op]
    kind = cf.TruncatedEpigraph if a.op.endswith("plus") else cf.MaxAffineFunction
    _expect(f, kind, f"{kind.__name__} operands for {a.op}")
    _expect(g, kind, f"{kind.__name__} operands for {a.op}")
    return 0, ser.function_to_json(op(f, g))


def _anti_hom_verify(a):
    obj = _load(a.input)
    phi = ser.affine_map_from_json(ser.require(obj, "phi", "$"), "$.phi")
    kappa = ser.scalar_from_json(obj.get("kappa", "1"), "$.kappa")
    c = phi.source_dim
    H = cf.canonical_function_homomorphism(phi, kappa)
    L = cf.canonical_anti_homomorphism(phi, kappa)
    rh = cf.verify_function_homomorphism(H, c, trials=a.trials, seed=a.seed)
    rl = cf.verify_anti_homomorphism(L, c, trials=a.trials, seed=a.seed)
    out = {"homomorphism": ser.function_report_to_json(rh),
           "anti_homomorphism": ser.function_report_to_json(rl), "ok": rh.ok and rl.ok}
    return (0 if out["ok"] else 1), out


HANDLERS: dict[str, Callable] = {
    "hull": _hull, "meet": _meet, "join": _join, "dim": _dim, "radon": _radon,
    "hom-apply": _hom_apply, "hom-verify": _hom_verify, "hom-classify": _hom_classify,
    "dim-laws": _dim_laws, "transversal": _transversal, "helly": _helly,
    "fenchel": _fenchel, "fenchel-inv": _fenchel_inv, "support": _support,
    "func-lattice": _func_lattice, "anti-hom-verify": _anti_hom_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convlattice", description="Exact convex-body lattice toolkit.")
    p.add_argument("--format", choices=["json"], default="json")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, help_text, inputs=("input",), randomized=False):
        sp = sub.add_parser(name, help=help_text)
        for inp in inputs:
            sp.add_argument(inp, help="JSON file ('-' for stdin)")
        if randomized:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--trials", type=int, default=100)
        return sp

    verb("hull", "convex hull of {\"points\": [...]}")
    verb("meet", "intersection of two bodies", ("first", "second"))
    verb("join", "hull of the union of two bodies", ("first", "second"))
    verb("dim", "dimension and affine hull of a body")
    verb("radon", "Radon partition, or affine-dependence subspace for {\"images\": ...}")
    verb("hom-apply", "apply a homomorphism spec to a body or {\"x\": point}", ("spec", "input"))
    verb("hom-verify", "randomized exact check of the homomorphism axioms", ("spec",), randomized=True)
    verb("hom-classify", "recover a canonical spec (or fit pairs / check triples)")
    dl = verb("dim-laws", "dimension laws on given or random bodies", ("spec",), randomized=True)
    dl.add_argument("--bodies", help="JSON file {\"bodies\": [...]}; random bodies when omitted")
    verb("transversal", "hyperplane transversal of a segment family (or pole/band queries)")
    hp = verb("helly", "compare global and subfamily feasibility")
    hp.add_argument("--subfamily-size", type=int, default=None)
    verb("fenchel", "conjugate of a truncated epigraph")
    fi = verb("fenchel-inv", "conjugate of a max-affine function")
    fi.add_argument("--kappa", type=_fraction, default=None)
    sp = verb("support", "support function (or --indicator) of a body")
    sp.add_argument("--indicator", action="store_true")
    sp.add_argument("--kappa", type=_fraction, default=None)
    fl = verb("func-lattice", "lattice operation on two functions", ("first", "second"))
    fl.add_argument("--op", required=True, choices=["meet_plus", "join_plus", "meet_minus", "join_minus"])
    verb("anti-hom-verify", "check the canonical function (anti-)homomorphisms of {\"phi\": ...}",
         randomized=True)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        code, payload = HANDLERS[args.verb](args)
    except InputError as exc:
        code, payload = 2, exc.payload
    except NotCanonicalHomomorphismError as exc:
        code, payload = 1, {"error": str(exc), "kind": type(exc).__name__}
    except (ConvLatticeError, ValueError, KeyError, TypeError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        code, payload = 2, {"error": msg, "kind": type(exc).__name__}
    out.write(ser.dumps(payload))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
