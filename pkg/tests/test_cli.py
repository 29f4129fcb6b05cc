"""End-to-end command tests: formats, exit codes, reproducibility."""

import json
import math

import pytest

from cubemix import coupling_upper_bound_steps, cyclic_step_bound, simulate_coupling, WalkSpec
from cubemix.cli import main


def _lines(path):
    return path.read_text().splitlines()


def test_tv_csv_frozen_values(tmp_path):
    out = tmp_path / "tv.csv"
    assert main(["tv", "--n", "2", "--k", "1", "--steps", "1", "--output", str(out)]) == 0
    lines = _lines(out)
    assert lines[0] == "l,tv,l2_sq,tv_exact,l2_sq_exact"
    assert lines[1] == "0,0.75,3,3/4,3/1"
    assert lines[2] == "1,0.25,0.5,1/4,1/2"
    assert out.read_text().endswith("\n")


def test_tv_json_structure(tmp_path):
    out = tmp_path / "tv.json"
    assert main(["tv", "--n", "2", "--k", "1", "--steps", "1", "--format", "json", "--output", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["walk"] == {"kind": "cube", "n": 2, "k": 1, "p": "1/2"}
    assert payload["backend"] == "exact"
    assert payload["rows"][1]["tv_exact"] == "1/4"
    assert payload["rows"][1]["l2_sq_exact"] == "1/2"
    assert payload["rows"][1]["tv"] == 0.25


def test_tv_float_backend(tmp_path):
    out = tmp_path / "tv.csv"
    code = main(
        ["tv", "--n", "20", "--k", "3", "--steps", "2", "--backend", "float", "--output", str(out)]
    )
    assert code == 0
    lines = _lines(out)
    assert lines[0] == "l,tv,l2_sq"
    assert len(lines) == 4


def test_tv_cyclic_curve(tmp_path):
    out = tmp_path / "tvc.csv"
    code = main(["tv", "--n", "3", "--k", "1", "--m", "2", "--steps", "2", "--output", str(out)])
    assert code == 0
    lines = _lines(out)
    assert lines[0] == "l,tv,separation_tail,l2_sq_bound,tv_exact,separation_tail_exact"
    # l = 0: the start is a point mass, so TV = 1 - 1/8 and nothing touched.
    assert lines[1].split(",")[4] == "7/8"
    assert lines[1].split(",")[5] == "1/1"
    # The cyclic curve has no float backend.
    assert main(["tv", "--n", "3", "--k", "1", "--m", "2", "--steps", "2", "--backend", "float", "--output", str(out)]) == 1


def test_spectrum_csv_exact(tmp_path):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--n", "6", "--k", "3", "--output", str(out)]) == 0
    lines = _lines(out)
    assert lines[0] == "level,eigenvalue,multiplicity"
    assert lines[1] == "0,1/1,1"
    assert lines[3] == "2,2/5,15"
    assert lines[7] == "6,0/1,1"


def test_spectrum_accepts_rational_p(tmp_path):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--n", "4", "--k", "1", "--p", "1/4", "--output", str(out)]) == 0
    # Top level: p + (1-p)(-1) = -1/2.
    assert _lines(out)[5] == "4,-1/2,1"


def test_spectrum_float_backend_and_json(tmp_path):
    out = tmp_path / "spec.json"
    code = main(
        ["spectrum", "--n", "6", "--k", "3", "--backend", "float", "--format", "json", "--output", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["backend"] == "float"
    assert payload["rows"][2]["eigenvalue"] == pytest.approx(0.4)
    assert payload["non_ergodic"] is False
    assert payload["max_nontrivial_magnitude"] == "3/5"


def test_spectrum_cyclic(tmp_path):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--n", "4", "--k", "2", "--m", "3", "--output", str(out)]) == 0
    lines = _lines(out)
    # Multiplicities C(4,w) 2^w for m = 3.
    assert [row.split(",")[2] for row in lines[1:]] == ["1", "8", "24", "32", "16"]


def test_bounds_json_reports(tmp_path):
    out = tmp_path / "bounds.json"
    code = main(
        ["bounds", "--n", "54", "--k", "27", "--eps", "0.01", "--output", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    ops = [(r.get("op"), r.get("variant", r.get("skipped"))) for r in payload["reports"]]
    assert ("coupling-upper", "stated") in ops
    assert ("coupling-upper", "summary") in ops
    by_key = {(r.get("op"), r.get("variant")): r for r in payload["reports"]}
    assert by_key[("half-flip", "stated")]["steps"] == 147
    stated = by_key[("coupling-upper", "stated")]
    assert stated["steps"] == coupling_upper_bound_steps(54, 27, 1.0).steps
    assert ("cyclic", "requires --m") in ops
    assert ("comparison", "requires --m") in ops
    table = payload["reported_steps_comparison"]["rows"]
    assert len(table) == 6
    assert {(r["n"], r["k"]): r["computed"] for r in table}[(54, 27)] == 76
    assert all(r["difference"] > 0 for r in table)
    assert payload["log_convention"] == "natural (ln)"


def test_bounds_with_modulus(tmp_path):
    out = tmp_path / "bounds.json"
    code = main(["bounds", "--n", "3", "--k", "1", "--m", "2", "--c", "0", "--output", str(out)])
    assert code == 1  # c = 0 violates the second-moment precondition guard?
    # c=0 is rejected per-family, not globally: rerun without --c.
    code = main(["bounds", "--n", "3", "--k", "1", "--m", "2", "--output", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    by_key = {(r.get("op"), r.get("variant")): r for r in payload["reports"]}
    assert by_key[("cyclic", "stated")]["steps"] == cyclic_step_bound(3, 2, 1, 1.0).steps
    assert ("comparison", "conservative") in by_key


def test_bounds_csv_flatten(tmp_path):
    out = tmp_path / "bounds.csv"
    code = main(["bounds", "--n", "54", "--k", "27", "--format", "csv", "--output", str(out)])
    assert code == 0
    lines = _lines(out)
    assert lines[0] == "op,variant,steps,raw_steps,bound,bound_metric,notes"
    ops = [row.split(",")[0] for row in lines[1:]]
    assert ops.count("coupling-upper") == 2
    assert ops.count("reported-comparison") == 6
    assert any(row.startswith("half-flip,skipped") for row in lines[1:])


def test_couple_outputs_and_consistency(tmp_path):
    out = tmp_path / "couple.csv"
    code = main(
        ["couple", "--n", "4", "--k", "3", "--trials", "60", "--steps", "5", "--seed", "7", "--output", str(out)]
    )
    assert code == 0
    lines = _lines(out)
    assert lines[0] == "l,mc_survivors,mc_tail,exact_tail,exact_tail_exact"
    assert len(lines) == 7
    report = simulate_coupling(WalkSpec(4, 3), 60, 5, 7)
    assert int(lines[1].split(",")[1]) == report.survivors[0]
    out_json = tmp_path / "couple.json"
    code = main(
        ["couple", "--n", "4", "--k", "3", "--trials", "60", "--steps", "5", "--seed", "7", "--format", "json", "--output", str(out_json)]
    )
    assert code == 0
    payload = json.loads(out_json.read_text())
    assert payload["censored"] == report.censored
    assert payload["mc_mean_time"] == report.mean_time
    assert payload["rows"][0]["mc_survivors"] == report.survivors[0]


def test_verify_exit_codes_and_key_order(tmp_path):
    ok = tmp_path / "eig.json"
    assert main(["verify", "--lemma", "eig34", "--n", "6", "--output", str(ok)]) == 0
    payload = json.loads(ok.read_text())
    assert list(payload)[:2] == ["lemma", "counterexamples_found"]
    assert payload["counterexamples_found"] is False
    assert payload["max_abs"] == "3/5"

    # probineq at n = 6 has odd-y counterexamples: exit 2, file still written.
    bad = tmp_path / "probineq.json"
    assert main(["verify", "--lemma", "probineq", "--n", "6", "--output", str(bad)]) == 2
    payload = json.loads(bad.read_text())
    assert payload["counterexamples_found"] is True
    assert payload["min_part1"] == ["1/4", 3]

    assert main(["verify", "--lemma", "marginal", "--n", "6", "--k", "3", "--output", str(tmp_path / "m.json")]) == 0
    assert main(["verify", "--lemma", "symmetry", "--n", "10", "--output", str(tmp_path / "s.json")]) == 0


def test_verify_general_parts_filter(tmp_path):
    out = tmp_path / "g.json"
    assert main(["verify", "--lemma", "general", "--n-max", "12", "--parts", "2,3", "--output", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["parts"] == [2, 3]
    assert main(["verify", "--lemma", "general", "--n-max", "12", "--output", str(out)]) == 2
    payload = json.loads(out.read_text())
    assert payload["counterexamples_found"] is True


def test_verify_kv_csv(tmp_path):
    out = tmp_path / "eig.csv"
    code = main(["verify", "--lemma", "eig34", "--n", "6", "--format", "csv", "--output", str(out)])
    assert code == 0
    lines = _lines(out)
    assert lines[0] == "field,value"
    fields = [row.split(",")[0] for row in lines[1:]]
    assert fields[:2] == ["lemma", "counterexamples_found"]


def test_invalid_arguments_exit_one(tmp_path, capsys):
    assert main(["tv", "--n", "2", "--k", "1"]) == 1  # missing --steps
    assert main(["nosuchcommand"]) == 1
    assert main(["tv", "--n", "x", "--k", "1", "--steps", "1"]) == 1
    assert main(["verify", "--lemma", "probineq"]) == 1  # missing --n
    assert main(["tv", "--n", "2", "--k", "5", "--steps", "1", "--output", str(tmp_path / "x.csv")]) == 1
    err = capsys.readouterr().err
    assert "error" in err


def test_output_dir_environment_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("CUBEMIX_OUTPUT_DIR", str(tmp_path))
    assert main(["tv", "--n", "2", "--k", "1", "--steps", "1"]) == 0
    assert (tmp_path / "tv.csv").exists()
    assert main(["verify", "--lemma", "eig34", "--n", "6"]) == 0
    assert (tmp_path / "verify_eig34.json").exists()


def test_reruns_are_byte_identical(tmp_path):
    pairs = []
    for name, argv in [
        ("tv", ["tv", "--n", "6", "--k", "3", "--steps", "8"]),
        ("bounds", ["bounds", "--n", "54", "--k", "27", "--eps", "0.01", "--format", "json"]),
        ("couple", ["couple", "--n", "5", "--k", "3", "--trials", "40", "--steps", "6", "--seed", "5"]),
        ("verify", ["verify", "--lemma", "probineq", "--n", "10"]),
    ]:
        a = tmp_path / f"{name}_a"
        b = tmp_path / f"{name}_b"
        assert main(argv + ["--output", str(a)]) in (0, 2)
        assert main(argv + ["--output", str(b)]) in (0, 2)
        pairs.append((a.read_bytes(), b.read_bytes()))
    for left, right in pairs:
        assert left == right


def test_float_formatting_is_17_significant_digits(tmp_path):
    out = tmp_path / "tv.csv"
    assert main(["tv", "--n", "6", "--k", "3", "--steps", "3", "--output", str(out)]) == 0
    row = _lines(out)[4].split(",")
    # Reparsing the printed float reproduces the double exactly.
    from cubemix import WalkSpec as WS, spectral_dist, tv_to_uniform

    tv = float(tv_to_uniform(spectral_dist(WS(6, 3), 3)))
    assert float(row[1]) == tv
