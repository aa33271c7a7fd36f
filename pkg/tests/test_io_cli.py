from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

import golden as g
from perronpos import matrix as mx
from perronpos.cli import main
from perronpos.criterion import AnalysisConfig, Verdict, VerdictKind, analyze
from perronpos.fileio import (
    EXIT_CODES,
    InputError,
    load_datum,
    load_matrix,
    matrix_json,
    render_report,
    scalar_json,
)


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# --- file formats ---------------------------------------------------------------

def test_load_matrix_with_eigendata(data_dir):
    mf = load_matrix(data_dir / "lambda15.json")
    assert mf.mode == "exact" and mx.equal(mf.a, g.LAMBDA15)
    lam, v, u = mf.eigendata
    assert lam == 15 and mx.equal(v, g.LAMBDA15_V) and mx.equal(u, g.LAMBDA15_U)


def test_load_matrix_float_override(data_dir):
    mf = load_matrix(data_dir / "lambda15.json", mode="float")
    assert mf.a.dtype == float and mf.eigendata[0] == 15.0


@pytest.mark.parametrize("payload, message", [
    ({"n": 2, "entries": [["1/0", "1"], ["0", "1"]]}, "invalid matrix entry"),
    ({"n": 2, "entries": [["1", "1"]]}, "not an 2x2"),
    ({"n": 2, "mode": "complex", "entries": [["1"]]}, "unknown mode"),
    ({"n": 2, "entries": [["1", "2"], ["3", "4"]], "eigendata": {"lambda": "1", "v": ["1", "1"]}},
     "eigendata rejected"),
    ({"n": 2, "entries": [["1", "0"], ["0", "1"]], "eigendata": {"v": ["1", "1"]}}, "needs 'lambda'"),
    ({"entries": []}, "nonempty"),
])
def test_load_matrix_errors(payload, message):
    with pytest.raises(InputError, match=message):
        load_matrix(payload)


def test_float_file_cannot_run_exact():
    with pytest.raises(InputError):
        load_matrix({"n": 1, "mode": "float", "entries": [[0.5]]}, mode="exact")


def test_exact_mode_reads_json_decimals_as_decimals():
    mf = load_matrix({"n": 1, "entries": [[0.1]]})
    assert mf.a[0, 0] == Fraction(1, 10)


def test_load_datum_files(data_dir):
    assert load_datum(data_dir / "rank3.json") == g.RANK3
    assert load_datum(data_dir / "rank4.json") == g.RANK4
    assert load_datum(data_dir / "rank5.json") == g.RANK5
    assert load_datum(data_dir / "affine2.json") == g.AFFINE


@pytest.mark.parametrize("payload", [
    {"m": [[1, "inf"], ["inf", 1]], "c": [[None, None], [None, None]]},
    {"m": [[1, 3], [4, 1]]},
    {"n": 3, "m": [[1, 3], [3, 1]]},
    {"c": []},
])
def test_load_datum_errors(payload):
    with pytest.raises(InputError):
        load_datum(payload)


def test_unreadable_file(tmp_path):
    with pytest.raises(InputError):
        load_matrix(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        load_matrix(bad)


# --- serialization --------------------------------------------------------------

def test_scalar_json():
    assert scalar_json(Fraction(-7, 20)) == "-7/20"
    assert scalar_json(Fraction(15)) == "15"
    assert scalar_json(397.99748742132453) == 397.997487421
    assert scalar_json(None) is None


def test_round_trip_exact_matrix():
    for a in (g.LAMBDA15_Z, g.NONEXAMPLE, g.MULT2, g.STOCHASTIC):
        payload = {"n": a.shape[0], "mode": "exact", "entries": matrix_json(a)}
        back = load_matrix(json.loads(json.dumps(payload))).a
        assert mx.equal(back, a)


def test_render_simple_dominant_json():
    report = json.loads(render_report(analyze(g.LAMBDA15), "json"))
    assert report["schema_version"] == "1.0"
    assert report["kind"] == "simple_dominant" and report["k_positive"] == 1
    assert report["lambda"] == "15"
    assert report["z"] == [["36/5", "21/5"], ["39/5", "54/5"]]


def test_render_multiplicity_json_carries_uv():
    report = json.loads(render_report(analyze(g.MULT2), "json"))
    assert report["kind"] == "multiplicity_at_least_two"
    assert report["certificate"] == {"type": "orthogonal_eigenvectors", "uv": "0"}


def test_render_inconclusive_json():
    v = analyze(mx.exact([[0, 1, 0], [0, 0, 1], [1, 1, 0]]), AnalysisConfig(k_max=2))
    assert v.kind is VerdictKind.INCONCLUSIVE
    report = json.loads(render_report(v, "json"))
    assert report["k_max_reached"] is True


def test_render_text_and_bad_format():
    text = render_report(analyze(g.LAMBDA15))
    assert "simple_dominant" in text and "36/5" in text
    with pytest.raises(ValueError):
        render_report(analyze(g.LAMBDA15), "xml")


def test_exit_codes_depend_only_on_kind():
    assert set(EXIT_CODES) == set(VerdictKind)
    assert EXIT_CODES[VerdictKind.SIMPLE_DOMINANT] == 0
    for kind in (VerdictKind.NOT_SIMPLE_DOMINANT_CERTIFIED, VerdictKind.MULTIPLICITY_AT_LEAST_TWO,
                 VerdictKind.SEMISIMPLE_DOMINANT):
        assert EXIT_CODES[kind] == 2
    for kind in (VerdictKind.WEAK_PERRON, VerdictKind.NO_REAL_DOMINANT_CANDIDATE,
                 VerdictKind.INCONCLUSIVE):
        assert EXIT_CODES[kind] == 3
    assert json.loads(render_report(Verdict(VerdictKind.INCONCLUSIVE), "json"))["exit_code"] == 3


# --- command line ----------------------------------------------------------------

def test_cli_analyze_lambda15(data_dir, capsys):
    code, out, _ = run(["analyze", data_dir / "lambda15.json"], capsys)
    assert code == 0
    assert "lambda: 15" in out and "36/5" in out and "54/5" in out


def test_cli_analyze_nonexample(data_dir, capsys):
    code, out, _ = run(["analyze", data_dir / "nonexample.json", "--output", "json"], capsys)
    report = json.loads(out)
    assert code == 2 and report["certificate"]["type"]
    assert report["z"] == [["3", "-2"], ["-2", "3"]]


def test_cli_analyze_row_stochastic(data_dir, capsys, tmp_path):
    path = tmp_path / "stochastic.json"
    path.write_text(json.dumps({"n": 2, "entries": [["-11/15", "26/15"], ["-14/15", "29/15"]]}))
    code, out, _ = run(["analyze", path, "--row-stochastic"], capsys)
    assert code == 0 and "3/5" in out
    code, _, err = run(["analyze", data_dir / "lambda15.json", "--row-stochastic"], capsys)
    assert code == 1 and "row sums" in err


def test_cli_analyze_bad_entry(data_dir, capsys):
    code, out, err = run(["analyze", data_dir / "bad_entry.json"], capsys)
    assert code == 1 and out == "" and "1/0" in err


def test_cli_regime_mismatch(tmp_path, capsys):
    path = tmp_path / "float.json"
    path.write_text(json.dumps({"n": 1, "mode": "float", "entries": [[2.5]]}))
    assert run(["analyze", path, "--mode", "exact"], capsys)[0] == 1
    assert run(["analyze", path], capsys)[0] == 0


def test_cli_float_mode(data_dir, capsys):
    code, out, _ = run(["analyze", data_dir / "lambda15.json", "--mode", "float", "--output", "json"],
                       capsys)
    report = json.loads(out)
    assert code == 0 and report["regime"] == "float" and abs(report["lambda"] - 15) < 1e-9


def test_cli_eps_pos_warning_in_exact_mode(data_dir, capsys):
    code, _, err = run(["analyze", data_dir / "lambda15.json", "--eps-pos", "1e-9"], capsys)
    assert code == 0 and "ignored" in err


def test_cli_rejects_nonpositive_tolerance(data_dir):
    with pytest.raises(SystemExit):
        main(["analyze", str(data_dir / "lambda15.json"), "--tol", "0"])


def test_cli_json_is_byte_identical(data_dir, capsys):
    argv = ["coxeter", data_dir / "rank4.json", "1,3,2,4,2,3", "--output", "json", "--seed", "3"]
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert first == second and json.loads(first)["schema_version"]


def test_cli_coxeter_rank3(data_dir, capsys):
    code, out, _ = run(["coxeter", data_dir / "rank3.json", "1,2,3,2", "--output", "json"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["verdict"]["kind"] == "simple_dominant"
    assert abs(report["verdict"]["lambda"] - 397.9974) < 1e-3
    assert report["element"][0] == ["399", "-76", "284"]
    assert report["form_signature"] == [2, 1, 0]
    assert report["sanity"] == {"form_invariant": True, "column_signs": True}


def test_cli_coxeter_affine(data_dir, capsys):
    code, out, _ = run(["coxeter", data_dir / "affine2.json", "s1 s2"], capsys)
    assert code == 2 and "multiplicity_at_least_two" in out and "Lehmer" in out


def test_cli_coxeter_index_out_of_range(data_dir, capsys):
    code, _, err = run(["coxeter", data_dir / "rank5.json", "1,7"], capsys)
    assert code == 1 and "out of range" in err


def test_cli_coxeter_irrational_datum_needs_float(tmp_path, capsys):
    path = tmp_path / "h3.json"
    path.write_text(json.dumps({"m": [[1, 5], [5, 1]]}))
    assert run(["coxeter", path, "1,2", "--mode", "exact"], capsys)[0] == 1
    code, out, _ = run(["coxeter", path, "1,2"], capsys)
    assert code in (2, 3) and "verdict" in out


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "perronpos", "analyze", str(data_dir / "lambda15.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "simple_dominant" in proc.stdout
