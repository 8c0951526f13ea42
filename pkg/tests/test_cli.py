"""CLI commands, exit codes, JSON schemas and byte-determinism."""

import json

import pytest

from twisthom.cli import main
from twisthom.complexes import catalog_complex
from twisthom.groups import PermAction, GroupPresentation
from twisthom.jsonio import (InputError, complex_from_json, complex_to_json,
                             cyclo_from_json, cyclo_to_json, laurent_from_json,
                             laurent_to_json, rep_from_json, rep_to_json,
                             action_to_json)
from twisthom.numbers import Cyclo, Laurent
from twisthom.reps import permutation_rep, torsion_characters


def run_cli(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(list(argv) + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


def test_homology_lens_character(tmp_path):
    code, data = run_cli(tmp_path, "homology", "--catalog", "lens:5,1",
                         "--character", "5:1")
    assert code == 0
    assert data == {"dims": [0, 0, 0, 0], "euler": 0, "acyclic": True}


def test_homology_t3_trivial(tmp_path):
    code, data = run_cli(tmp_path, "homology", "--catalog", "t3", "--trivial", "1")
    assert code == 0 and data["dims"] == [1, 3, 3, 1]


def test_homology_trivial_character(tmp_path):
    code, data = run_cli(tmp_path, "homology", "--catalog", "lens:5,1",
                         "--character", "5:0")
    assert code == 0 and data["dims"] == [1, 0, 0, 1]


def test_homology_bad_inputs(tmp_path):
    code, _ = run_cli(tmp_path, "homology", "--catalog", "lens:0,1",
                      "--trivial", "1")
    assert code == 1
    code, _ = run_cli(tmp_path, "homology", "--catalog", "lens:5,1")
    assert code == 1  # no representation given
    code, _ = run_cli(tmp_path, "homology", "--catalog", "lens:5,1",
                      "--character", "3:1")
    assert code == 1  # character violates the relator x^5


def test_acyclify_certificates(tmp_path):
    code, data = run_cli(tmp_path, "acyclify", "--catalog", "s1xs2", "--phi", "1")
    assert code == 0
    assert data["z_order"] == 2 and data["dims"] == [0, 0, 0, 0]
    assert data["verified"] is True
    code, data = run_cli(tmp_path, "acyclify", "--catalog", "trefoil_exterior",
                         "--phi", "1,1")
    assert code == 0 and data["z_order"] == 2
    assert data["torsion"]["1"]["polys"] == [
        {"terms": {"0": "1", "1": "-1", "2": "1"}}]


def test_acyclify_obstruction_exit2(tmp_path):
    code, data = run_cli(tmp_path, "acyclify", "--catalog", "handlebody:2",
                         "--phi", "1,0")
    assert code == 2
    assert data["obstruction"] == {"degree": 1, "free_rank": 1}


def test_acyclify_bad_grading_exit1(tmp_path):
    code, _ = run_cli(tmp_path, "acyclify", "--catalog", "lens:5,1", "--phi", "1")
    assert code == 1
    code, _ = run_cli(tmp_path, "acyclify", "--catalog", "s1xs2", "--phi", "2")
    assert code == 1  # non-surjective


def test_search_lens(tmp_path):
    code, data = run_cli(tmp_path, "search", "--catalog", "lens:5,1")
    assert code == 0
    assert data["characters_tested"] == 5 and len(data["acyclifying"]) == 4


def test_search_t3_negative(tmp_path):
    code, data = run_cli(tmp_path, "search", "--catalog", "t3")
    assert code == 2 and data["acyclifying"] == []


def test_search_quaternion(tmp_path):
    code, data = run_cli(tmp_path, "search", "--catalog", "quaternion_q8")
    assert code == 0
    assert len(data["acyclifying"]) == 3  # the nontrivial abelian characters


def test_verify_single_suite(tmp_path):
    code, data = run_cli(tmp_path, "verify", "--suite", "shapiro", "--seed", "7")
    assert code == 0
    assert data["seed"] == 7
    assert [s["suite"] for s in data["suites"]] == ["shapiro"]
    assert data["suites"][0]["fail"] == 0


def test_verify_unknown_suite(tmp_path):
    code, _ = run_cli(tmp_path, "verify", "--suite", "nonsense")
    assert code == 1


def test_verify_corrupt_fixture_fails_euler(tmp_path):
    code, data = run_cli(tmp_path, "verify", "--suite", "euler",
                         "--corrupt-fixture")
    assert code == 1
    assert data["ok"] is False
    euler = [s for s in data["suites"] if s["suite"] == "euler"][0]
    assert euler["fail"] > 0


def test_catalog_listing_and_dump(tmp_path):
    code, data = run_cli(tmp_path, "catalog")
    assert code == 0 and "lens" in data["names"]
    code, data = run_cli(tmp_path, "catalog", "--catalog", "lens:5,1")
    assert code == 0
    assert data["expected_trivial_dims"] == [1, 0, 0, 1]
    cx = complex_from_json(data["complex"])
    assert cx.ranks == (1, 1, 1, 1)


def test_cli_byte_determinism(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["verify", "--suite", "h0", "--seed", "3",
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_complex_json_round_trip():
    cx = catalog_complex("trefoil_exterior").complex
    again = complex_from_json(json.loads(json.dumps(complex_to_json(cx))))
    assert again.group == cx.group
    assert again.ranks == cx.ranks
    assert all(again.boundaries[k] == cx.boundaries[k]
               for k in range(len(cx.boundaries)))


def test_rep_json_round_trip(tmp_path):
    p = GroupPresentation(1)
    rep = permutation_rep(p, PermAction(p, [(1, 0)]))
    blob = rep_to_json(rep)
    again = rep_from_json(json.loads(json.dumps(blob)), p)
    assert again.dim == 2
    assert again.generator_images == rep.generator_images
    # and it can be fed back through the CLI
    lens = catalog_complex("lens", [5, 1])
    chars = torsion_characters(lens.complex.group)
    rep_file = tmp_path / "rep.json"
    rep_file.write_text(json.dumps(rep_to_json(chars[1])))
    code, data = run_cli(tmp_path, "homology", "--catalog", "lens:5,1",
                         "--rep", str(rep_file))
    assert code == 0 and data["dims"] == [0, 0, 0, 0]


def test_scalar_json_round_trips():
    x = Cyclo.root_of_unity(12, 7) + Cyclo.from_rational(3)
    assert cyclo_from_json(cyclo_to_json(x)) == x
    p = Laurent({-2: 3, 5: -1})
    assert laurent_from_json(laurent_to_json(p)) == p
    with pytest.raises(InputError):
        cyclo_from_json({"conductor": 4, "coeffs": ["1"]})
    with pytest.raises(InputError):
        laurent_from_json({"terms": {"x": "1"}})


def test_action_json():
    p = GroupPresentation(2)
    a = PermAction(p, [(1, 0), (0, 1)])
    assert action_to_json(a) == [[1, 0], [0, 1]]


def test_rep_file_group_mismatch(tmp_path):
    p = GroupPresentation(2)
    rep = permutation_rep(p, PermAction(p, [(1, 0), (0, 1)]))
    rep_file = tmp_path / "rep.json"
    rep_file.write_text(json.dumps(rep_to_json(rep)))
    code, _ = run_cli(tmp_path, "homology", "--catalog", "lens:5,1",
                      "--rep", str(rep_file))
    assert code == 1  # two matrices for a one-generator group
