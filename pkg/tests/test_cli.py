"""Command-line surface: exit codes, JSON determinism, round trips."""

from __future__ import annotations

import json

import pytest

from huaops.cli import run


def _run_json(capsys, argv):
    code = run(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_verify_gl_lemma_passes(capsys):
    code, report = _run_json(capsys, ["verify", "gl-lemma", "--n", "2", "--m", "3"])
    assert code == 0
    assert report["pass"]


def test_verify_perturbed_theorem_fails(capsys):
    code, report = _run_json(
        capsys,
        ["verify", "upq-theorem", "--p", "1", "--q", "1", "--blocks", "1", "--perturb"],
    )
    assert code == 1
    assert not report["pass"]
    assert any(c["residue"] != "0" for c in report["checks"])


def test_degrees_example(capsys):
    code, report = _run_json(capsys, ["degrees", "--diagram", "A_n^1", "--n", "4"])
    assert code == 0
    assert report["degrees"] == [2, 2, 2, 2]


def test_ideal_restricted_columns_count(capsys):
    code, report = _run_json(
        capsys,
        ["ideal", "--form", "upq", "--p", "2", "--q", "2", "--blocks", "1,2", "--restrict-columns"],
    )
    assert code == 0
    assert len(report["entries"]) == 8
    assert sorted({e["col"] for e in report["entries"]}) == [3, 4]


def test_round_trip_ideal_reduce(tmp_path, capsys):
    blob = tmp_path / "gens.json"
    code = run(
        [
            "ideal", "--form", "upq", "--p", "2", "--q", "1", "--blocks", "1",
            "--restrict-columns", "--out", str(blob),
        ]
    )
    capsys.readouterr()
    assert code == 0
    code, reduced = _run_json(
        capsys,
        ["reduce", "--form", "upq", "--p", "2", "--q", "1", "--blocks", "1", "--in", str(blob)],
    )
    assert code == 0
    assert reduced["allZero"]
    # matches the one-shot verifier on the same case
    code, verified = _run_json(
        capsys, ["verify", "upq-theorem", "--p", "2", "--q", "1", "--blocks", "1"]
    )
    assert code == 0
    got = {(e["row"], e["col"]): e["residue"] for e in reduced["entries"]}
    want = {}
    for check in verified["checks"]:
        name = check["name"]
        row, col = name[name.index("[") + 1 : name.index("]")].split(",")
        want[(int(row), int(col))] = check["residue"]
    assert got == want


def test_json_output_is_byte_identical(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "sp-hua", "--n", "1"]
    assert run(argv + ["--out", str(out1)]) == 0
    assert run(argv + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert "wallTime" not in json.dumps(doc)


def test_cfun_default_is_rho(capsys):
    code, report = _run_json(capsys, ["cfun", "--form", "glnr", "--n", "2"])
    assert code == 0
    assert report["c"]["value"] == 1.0


def test_cfun_bound_point(capsys):
    code, report = _run_json(
        capsys,
        ["cfun", "--form", "glnr", "--n", "2", "--bind", "lambda_1=1", "--bind", "lambda_2=-1"],
    )
    assert code == 0
    assert 0.6 < report["c"]["value"] < 0.7


def test_cfun_line_bundle_reject_three_classes(capsys):
    code = run(
        ["cfun", "--form", "upq", "--p", "3", "--q", "2", "--bind", "ell=1"]
    )
    captured = capsys.readouterr()
    assert code == 2
    assert "error:" in captured.err


def test_unknown_bind_coordinate_is_usage_error(capsys):
    code = run(["cfun", "--form", "glnr", "--n", "2", "--bind", "bogus=1"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_upq_ideal_rejects_barred_variant(capsys):
    code = run(
        ["ideal", "--form", "upq", "--p", "1", "--q", "1", "--blocks", "1", "--variant", "theta-bar"]
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_bad_diagram_label_is_usage_error(capsys):
    code = run(["degrees", "--diagram", "Z_n^9", "--n", "3"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_missing_p_is_usage_error(capsys):
    code = run(["ideal", "--form", "upq", "--q", "1", "--blocks", "1"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_missing_required_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["ideal", "--form", "upq", "--p", "1", "--q", "1"])
    capsys.readouterr()
    assert exc.value.code == 2


def test_malformed_blocks_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["ideal", "--form", "upq", "--p", "1", "--q", "1", "--blocks", "one"])
    capsys.readouterr()
    assert exc.value.code == 2


def test_spnr_barred_variant_ideal(capsys):
    code, report = _run_json(
        capsys,
        ["ideal", "--form", "spnr", "--n", "2", "--blocks", "1,2", "--variant", "theta-bar"],
    )
    assert code == 0
    assert report["metadata"]["variant"] == "theta-bar"
    assert len(report["entries"]) == 16


def test_human_summary_mentions_pass(capsys):
    code = run(["verify", "gl-lemma", "--n", "2", "--m", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out
