import importlib
import io
import json
from pathlib import Path

import pytest

from convlattice import cli, sampling, serialization as ser
from convlattice.classifier import oracle_sample, sample_points
from convlattice.homomorphism import Case, random_spec
from convlattice.transversal import helly_configuration

SAMPLES = Path(__file__).resolve().parents[1] / "samples"

SPEC_OPERATIONS = {
    "geometry.convex_hull", "geometry.meet", "geometry.join", "geometry.dim",
    "geometry.radon_partition", "geometry.affine_hull",
    "homomorphism.apply_point", "homomorphism.apply_body", "homomorphism.verify_homomorphism",
    "homomorphism.check_dimension_laws",
    "classifier.classify", "classifier.fit_affine_map", "classifier.check_order_preservation",
    "transversal.pole", "transversal.segment_constraint", "transversal.transversal_rays",
    "transversal.transversal_parallel", "transversal.helly_check",
    "transversal.affine_dependence_hyperplane",
    "convex_functions.indicator", "convex_functions.support_function", "convex_functions.fenchel",
    "convex_functions.fenchel_inverse", "convex_functions.meet_plus", "convex_functions.join_plus",
    "convex_functions.meet_minus", "convex_functions.join_minus",
    "convex_functions.canonical_function_homomorphism",
    "convex_functions.canonical_anti_homomorphism",
}


def run(*argv):
    out = io.StringIO()
    code = cli.run([str(a) for a in argv], out)
    text = out.getvalue()
    return code, json.loads(text), text


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


# -- coverage ----------------------------------------------------------------

def test_verbs_and_handlers_agree():
    assert set(cli.VERBS) == set(cli.HANDLERS)
    assert len(cli.VERBS) == 16


def test_every_operation_reachable_once():
    ops = [op for names in cli.VERBS.values() for op in names]
    assert len(ops) == len(set(ops))
    assert SPEC_OPERATIONS <= set(ops)
    for dotted in ops:
        mod, fn = dotted.split(".")
        assert callable(getattr(importlib.import_module(f"convlattice.{mod}"), fn))


def test_unknown_verb():
    out = io.StringIO()
    assert cli.run(["frobnicate", "x.json"], out) == 2


# -- geometry verbs ------------------------------------------------------------

def test_hull_sample():
    code, obj, _ = run("hull", SAMPLES / "points.json")
    assert code == 0
    assert sorted(map(tuple, obj["vertices"])) == [("0/1", "0/1"), ("0/1", "2/1"), ("2/1", "0/1")]


def test_meet_and_join_samples():
    code, obj, _ = run("meet", SAMPLES / "square.json", SAMPLES / "shifted_square.json")
    assert code == 0 and len(obj["vertices"]) == 4
    code, obj, _ = run("join", SAMPLES / "square.json", SAMPLES / "shifted_square.json")
    assert code == 0 and len(obj["vertices"]) == 6


def test_dim_reports_affine_hull(tmp_path):
    p = write(tmp_path, "seg.json", {"dim": 3, "vertices": [["0", "0", "0"], ["1", "1", "0"]]})
    code, obj, _ = run("dim", p)
    assert code == 0 and obj["dim"] == 1 and obj["affine_hull"]["dim"] == 1


def test_radon_sample():
    code, obj, _ = run("radon", SAMPLES / "points.json")
    assert code == 0 and obj["red"] == [["1/1", "1/1"]]


def test_radon_too_few_points(tmp_path):
    p = write(tmp_path, "p.json", {"points": [["0", "0"], ["1", "0"]]})
    code, obj, _ = run("radon", p)
    assert code == 2 and obj["kind"] == "InsufficientPointsError"


# -- homomorphism verbs --------------------------------------------------------

def test_hom_apply_point():
    code, obj, _ = run("hom-apply", SAMPLES / "spec_iv.json", SAMPLES / "point_x.json")
    assert code == 0
    assert sorted(map(tuple, obj["vertices"])) == [("1/1", "0/1", "0/1", "1/2"), ("2/1", "0/1", "0/1", "1/1")]


def test_hom_verify_is_byte_stable():
    args = ("hom-verify", SAMPLES / "spec_iv.json", "--trials", "15", "--seed", "7")
    code, obj, first = run(*args)
    assert code == 0 and obj["ok"]
    assert run(*args)[2] == first


def test_hom_classify_round_trip(tmp_path):
    rng = sampling.stream(0, "cli-classify")
    spec = random_spec(rng, Case.IV)
    sample = oracle_sample(spec, sample_points(rng, 3))
    payload = {"c": 3, "d": 4, "empty_image": ser.body_to_json(sample.empty_image),
               "points": [{"x": [str(v) for v in x], "image": ser.body_to_json(img)}
                          for x, img in sample.point_images]}
    code, obj, _ = run("hom-classify", write(tmp_path, "s.json", payload))
    assert code == 0 and obj.pop("residual_ok") is True
    assert ser.spec_from_json(obj) == spec


def test_hom_classify_inconsistent_exits_one(tmp_path):
    seg = lambda a, b: {"dim": 4, "vertices": [a, b]}
    z = ["0", "0", "0", "0"]
    payload = {"c": 3, "d": 4, "empty_image": {"dim": 4, "vertices": []},
               "points": [{"x": ["0", "0", "0"], "image": seg(["0", "0", "0", "1"], ["0", "0", "0", "2"])},
                          {"x": ["1", "0", "0"], "image": {"dim": 4, "vertices": [["1", "0", "0", "1"]]}},
                          {"x": ["0", "1", "0"], "image": seg(["0", "1", "0", "1"], ["0", "1", "0", "2"])},
                          {"x": ["0", "0", "1"], "image": seg(["0", "0", "1", "1"], ["0", "0", "1", "2"])},
                          {"x": ["1", "1", "1"], "image": seg(["1", "1", "1", "1"], z)}]}
    code, obj, _ = run("hom-classify", write(tmp_path, "s.json", payload))
    assert code == 1 and obj["kind"] == "InconsistentSampleError"


def test_hom_classify_fit_pairs(tmp_path):
    pairs = [{"x": x, "y": [str(2 * int(x[0]) + 1), str(2 * int(x[1]))]}
             for x in (["0", "0"], ["1", "0"], ["0", "1"], ["3", "5"])]
    code, obj, _ = run("hom-classify", write(tmp_path, "p.json", {"pairs": pairs, "c": 2, "d": 2}))
    assert code == 0 and obj["matrix"] == [["2/1", "0/1"], ["0/1", "2/1"]]


def test_dim_laws():
    code, obj, _ = run("dim-laws", SAMPLES / "spec_iv.json", "--trials", "10")
    assert code == 0 and obj["ok"]
    assert {r["image_dim"] for r in obj["rows"] if r["dim"] == -1} == {-1}


# -- transversal verbs ---------------------------------------------------------

def test_transversal_feasible():
    code, obj, _ = run("transversal", SAMPLES / "rays_feasible.json")
    assert code == 0 and obj["feasible"]


def test_transversal_disjoint_pair():
    code, obj, _ = run("transversal", SAMPLES / "rays_disjoint.json")
    assert code == 1 and obj == {"feasible": False, "infeasible_subfamily": [0, 1]}


def test_transversal_parallel():
    code, obj, _ = run("transversal", SAMPLES / "parallel.json")
    assert code == 0 and obj["mode"] == "parallel"


def test_pole_query(tmp_path):
    p = write(tmp_path, "q.json", {"mode": "pole", "o": ["1", "0"],
                                   "hyperplane": {"normal": ["-1", "0"], "offset": "1"}})
    code, obj, _ = run("transversal", p)
    assert code == 0 and obj["pole"] == ["-1/2", "0/1"]


def test_band_query(tmp_path):
    p = write(tmp_path, "b.json", {"mode": "band", "u": ["3", "0"], "s": ["1/3", "2/3"]})
    code, obj, _ = run("transversal", p)
    assert code == 0 and obj == {"u": ["1", "0"], "lo": "1/2", "hi": "1/1"}


def test_helly_configuration_via_cli(tmp_path):
    fam = helly_configuration(3)
    p = write(tmp_path, "h.json", {"mode": "rays", "dim": 3, "segments": [
        {"u": [str(x) for x in I.direction], "s": [str(I.s_lo), str(I.s_hi)]} for I in fam]})
    code, obj, _ = run("helly", p)
    assert code == 0 and not obj["global_feasible"] and len(obj["minimal_infeasible"]) == 4


# -- function verbs ------------------------------------------------------------

def test_fenchel_round_trip(tmp_path):
    code, g, _ = run("fenchel", SAMPLES / "f.json")
    assert code == 0 and g["kind"] == "max_affine"
    code, back, _ = run("fenchel-inv", write(tmp_path, "g.json", g))
    assert code == 0
    original = ser.function_from_json(json.loads((SAMPLES / "f.json").read_text()))
    assert ser.function_from_json(back) == original


def test_fenchel_inv_class_violation(tmp_path):
    g = {"kind": "max_affine", "pieces": [{"a": ["1"], "b": "1/2"}]}
    code, obj, _ = run("fenchel-inv", write(tmp_path, "g.json", g))
    assert code == 2 and obj["kind"] == "NotInClassError"


def test_support_and_indicator(tmp_path):
    box = write(tmp_path, "box.json", {"dim": 2, "vertices": [["-1", "-1"], ["1", "1"], ["-1", "1"], ["1", "-1"]]})
    code, obj, _ = run("support", box)
    assert code == 0 and len(obj["pieces"]) == 4
    code, obj, _ = run("support", box, "--indicator", "--kappa", "2")
    assert code == 0 and obj["kind"] == "trunc_epi" and obj["kappa"] == "2/1"


def test_func_lattice_meet_minus(tmp_path):
    f = write(tmp_path, "f.json", {"kind": "max_affine", "pieces": [{"a": ["1"], "b": "0"}, {"a": ["0"], "b": "0"}]})
    g = write(tmp_path, "g.json", {"kind": "max_affine", "pieces": [{"a": ["-1"], "b": "0"}, {"a": ["0"], "b": "0"}]})
    code, obj, _ = run("func-lattice", f, g, "--op", "meet_minus")
    assert code == 0
    assert sorted(p["a"][0] for p in obj["pieces"]) == ["-1/1", "1/1"]


def test_func_lattice_wrong_kind(tmp_path):
    f = write(tmp_path, "f.json", {"kind": "plus_inf", "c": 1})
    code, obj, _ = run("func-lattice", f, f, "--op", "meet_minus")
    assert code == 2


def test_anti_hom_verify():
    code, obj, _ = run("anti-hom-verify", SAMPLES / "phi_identity.json", "--trials", "4")
    assert code == 0 and obj["ok"]


# -- input errors --------------------------------------------------------------

def test_malformed_json_position():
    code, obj, _ = run("hull", SAMPLES / "bad.json")
    assert code == 2 and obj["line"] == 2 and "column" in obj and "position" in obj


def test_missing_file(tmp_path):
    code, obj, _ = run("hull", tmp_path / "nope.json")
    assert code == 2 and "cannot read" in obj["error"]


def test_float_rejected(tmp_path):
    code, obj, _ = run("hull", write(tmp_path, "f.json", {"points": [[0.5, 1]]}))
    assert code == 2 and "floating point" in obj["error"]


def test_missing_field(tmp_path):
    code, obj, _ = run("meet", write(tmp_path, "a.json", {"dim": 2}), SAMPLES / "square.json")
    assert code == 2


def test_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO((SAMPLES / "points.json").read_text()))
    code, obj, _ = run("hull", "-")
    assert code == 0 and len(obj["vertices"]) == 3


@pytest.mark.parametrize("name", sorted(p.name for p in SAMPLES.glob("*.json")))
def test_samples_are_valid_json_or_intentionally_broken(name):
    text = (SAMPLES / name).read_text()
    if name == "bad.json":
        with pytest.raises(json.JSONDecodeError):
            json.loads(text)
    else:
        json.loads(text)
