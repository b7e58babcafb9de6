import csv
import io
import json
import math

import numpy as np
import pytest

from strataforge.cli import main
from strataforge.reporting import RunConfig, TimeGrid

R2 = 1 / math.sqrt(2)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def write_json(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


# -- synth ----------------------------------------------------------------

def test_synth_m2(capsys):
    code, doc, _ = run_json(capsys, "synth", "--m", "2", "--t", "1", "--theta", "0", "--sign", "+",
                            "--offsets", "0,0,0")
    assert code == 0
    np.testing.assert_allclose(doc["J"], [0, 0, -math.pi / 4], atol=1e-12)
    assert doc["closed_form"]["expressions"] == ["-theta/t", "0", "-pi/(4t)"]
    np.testing.assert_allclose(doc["closed_form"]["values"], doc["J"], atol=1e-12)
    assert doc["max_residual"] < 1e-12


def test_synth_m3(capsys):
    code, doc, _ = run_json(capsys, "synth", "--m", "3", "--t", "1", "--theta", "0", "--offsets", "0,0,0,0")
    assert code == 0
    np.testing.assert_allclose(doc["J"], [0, 0, 0, -math.pi / 4], atol=1e-12)


def test_synth_time_scaling(capsys):
    base = ["synth", "--m", "2", "--theta", "0.3", "--offsets", "0,1,1"]
    _, d1, _ = run_json(capsys, *base, "--t", "1")
    _, d2, _ = run_json(capsys, *base, "--t", "2")
    np.testing.assert_allclose(np.array(d2["J"]), np.array(d1["J"]) / 2, atol=1e-12)


def test_synth_minus_branch(capsys):
    _, doc, _ = run_json(capsys, "synth", "--m", "2", "--t", "1", "--sign", "-")
    np.testing.assert_allclose(doc["J"], [0, 0, math.pi / 4], atol=1e-12)


@pytest.mark.parametrize("argv", [
    ["synth", "--m", "0", "--t", "1"],
    ["synth", "--m", "2", "--t", "0"],
    ["synth", "--m", "2", "--t", "-1"],
    ["synth", "--m", "2"],
    ["synth", "--m", "2", "--t", "1", "--offsets", "0,0"],
    ["synth", "--m", "2", "--t", "1", "--sign", "x"],
    ["synth", "--m", "2", "--t", "1", "--tol", "0.1"],
    ["bogus"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2
    assert capsys.readouterr().err


def test_size_cap_and_env_override(capsys, monkeypatch):
    code, _, err = run(capsys, "synth", "--m", "7", "--t", "1")
    assert code == 2 and "outside supported range" in err
    monkeypatch.setenv("STRATAFORGE_MAX_M", "7")
    code, doc, _ = run_json(capsys, "synth", "--m", "7", "--t", "1")
    assert code == 0 and len(doc["J"]) == 8


# -- evolve -------------------------------------------------------------------

def test_evolve_csv(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, stdout, _ = run(capsys, "evolve", "--m", "2", "--t", "1", "--times", "0:1:0.25",
                          "--csv", str(tmp_path / "s.csv"), "--out", str(out))
    assert code == 0 and stdout == ""
    rows = list(csv.DictReader(io.StringIO((tmp_path / "s.csv").read_text())))
    assert list(rows[0]) == ["t", "re_f0", "im_f0", "re_f1", "im_f1", "re_f2", "im_f2", "ghz_fidelity"]
    ts = [float(r["t"]) for r in rows]
    assert ts == sorted(ts) and ts == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert float(rows[0]["re_f0"]) == 1.0 and float(rows[0]["im_f0"]) == 0.0
    assert abs(float(rows[-1]["ghz_fidelity"]) - 1) < 1e-9
    doc = json.loads(out.read_text())
    assert abs(doc["design"]["ghz_fidelity"] - 1) < 1e-9
    assert doc["rows"] == 5


def test_evolve_stdout_is_pure_csv(capsys):
    code, stdout, _ = run(capsys, "evolve", "--m", "3", "--t", "1.5")
    assert code == 0
    rows = list(csv.reader(io.StringIO(stdout)))
    assert rows[0][0] == "t" and len(rows) == 12


def test_evolve_from_couplings_file(capsys, tmp_path):
    path = tmp_path / "J.json"
    assert main(["synth", "--m", "2", "--t", "2", "--out", str(path)]) == 0
    code, stdout, _ = run(capsys, "evolve", "--couplings", str(path), "--times", "0:2:1")
    assert code == 0
    last = list(csv.DictReader(io.StringIO(stdout)))[-1]
    assert float(last["t"]) == 2.0 and abs(float(last["ghz_fidelity"]) - 1) < 1e-9


def test_evolve_missing_couplings_file(capsys, tmp_path):
    code, _, err = run(capsys, "evolve", "--couplings", str(tmp_path / "nope.json"))
    assert code == 2 and "nope.json" in err


# -- verify -------------------------------------------------------------------

def test_verify_m2_passes(capsys):
    code, doc, err = run_json(capsys, "verify", "--m", "2", "--t", "1", "--times", "0:1:0.5")
    assert code == 0 and doc["passed"] and not doc["failed"]
    names = [c["name"] for c in doc["checks"]]
    assert "oracle: spectral vs dense amplitudes" in names
    assert "oracle: Pauli Hamiltonian vs graph Hamiltonian" in names
    assert "FAILED" not in err


@pytest.mark.parametrize("index, failing", [
    (1, "constraint: stratum 1 amplitude"),
    # shifting the last coupling keeps the two-term form but moves |f|, |f'|
    (2, "constraint: recovered f_mag"),
])
def test_verify_corrupted_couplings_fails(capsys, tmp_path, index, failing):
    path = tmp_path / "J.json"
    assert main(["synth", "--m", "2", "--t", "1", "--out", str(path)]) == 0
    doc = json.loads(path.read_text())
    doc["J"][index] += 0.05
    path.write_text(json.dumps(doc))
    capsys.readouterr()
    code, report, err = run_json(capsys, "verify", "--couplings", str(path))
    assert code == 1 and not report["passed"]
    assert failing in report["failed"]
    assert f"FAILED {failing}" in err


def test_verify_m6_skips_pauli(capsys):
    code, doc, err = run_json(capsys, "verify", "--m", "6", "--t", "1", "--oracle", "pauli")
    assert code == 0
    assert any("Pauli" in s and "skipped" in s for s in doc["skipped"])
    assert "SKIPPED" in err


# -- measure -------------------------------------------------------------------

def test_measure_ghz_file(capsys, tmp_path):
    path = write_json(tmp_path / "ghz.json", {"1100": [R2, 0], "0011": [R2, 0]})
    code, doc, _ = run_json(capsys, "measure", "--state", path)
    ent = doc["entanglement"]
    assert code == 0
    assert abs(ent["Q"] - 1) < 1e-12 and abs(ent["tau"] - 1) < 1e-12


def test_measure_product_file(capsys, tmp_path):
    path = write_json(tmp_path / "zero.json", {"0000": [1, 0]})
    _, doc, _ = run_json(capsys, "measure", "--state", path)
    ent = doc["entanglement"]
    values = [ent["Q"], ent["tau"], ent["rho_bar"], ent["rho_bar_mean"],
              *ent["negativities"].values(), *ent["pre"].values(), *ent["pre_prime"].values()]
    assert all(abs(v) < 1e-15 for v in values)


def test_measure_two_term_file(capsys, tmp_path):
    path = write_json(tmp_path / "s.json", {"1100": [1 / math.sqrt(3), 0], "0011": [0, math.sqrt(2 / 3)]})
    _, doc, _ = run_json(capsys, "measure", "--state", path)
    assert abs(doc["entanglement"]["Q"] - 8 / 9) < 1e-12


def test_measure_unnormalized_file(capsys, tmp_path):
    path = write_json(tmp_path / "bad.json", {"1100": [1, 0], "0011": [1, 0]})
    code, _, err = run(capsys, "measure", "--state", path)
    assert code == 2 and "normalized" in err


def test_measure_synthesized_output(capsys):
    _, doc, _ = run_json(capsys, "measure", "--m", "3", "--t", "1", "--theta", "0.4")
    ent = doc["entanglement"]
    assert abs(ent["Q"] - 1) < 1e-9 and abs(ent["tau"] - 1) < 1e-9
    support = {b for b, (re, im) in doc["state"].items() if abs(complex(re, im)) > 1e-12}
    assert support == {"111000", "000111"}


# -- report contracts -------------------------------------------------------

def test_determinism(capsys, tmp_path):
    argv = ["sweep", "--m", "3", "--times", "0:2:0.5", "--offsets", "0,0,0,0", "--offsets", "0,1,1,0"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--workers", "4")
    assert a.replace('"workers": 4', '"workers": 1') == b.replace('"workers": 4', '"workers": 1')
    path = tmp_path / "J.json"
    main(["synth", "--m", "2", "--t", "1.5", "--out", str(path)])
    first = path.read_bytes()
    main(["synth", "--m", "2", "--t", "1.5", "--out", str(path)])
    assert path.read_bytes() == first
    assert b"\r" not in first


def test_timing_only_on_request(capsys):
    _, doc, _ = run_json(capsys, "synth", "--m", "2", "--t", "1")
    assert "duration_s" not in doc and doc["version"]
    _, doc, _ = run_json(capsys, "synth", "--m", "2", "--t", "1", "--timing")
    assert doc["duration_s"] >= 0


def test_config_echo_round_trip(capsys):
    argv = ["verify", "--m", "2", "--t", "1.25", "--theta", "0.5", "--sign", "-", "--offsets", "1,0,0",
            "--times", "0:1:0.5", "--tol", "1e-8", "--oracle", "dense"]
    _, doc, _ = run_json(capsys, *argv)
    cfg = RunConfig.from_dict(doc["config"])
    assert cfg == RunConfig(command="verify", m=2, t=1.25, theta=0.5, sign_branch=-1, offsets=((1, 0, 0),),
                            time_grid=TimeGrid(0.0, 1.0, 0.5), oracle="dense", tol=1e-8)
    # re-running from the echo reproduces the numbers
    _, again, _ = run_json(capsys, *argv)
    assert again == doc


def test_sweep_ordering_and_pass(capsys):
    code, doc, _ = run_json(capsys, "sweep", "--m", "2", "--times", "0:1:0.5", "--offsets", "0,0,0",
                            "--offsets", "1,0,0", "--workers", "3")
    assert code == 0 and doc["failed"] == []
    keys = [(tuple(p["offsets"]), p["t"]) for p in doc["points"]]
    assert keys == [((0, 0, 0), 0.5), ((0, 0, 0), 1.0), ((1, 0, 0), 0.5), ((1, 0, 0), 1.0)]
    assert all(abs(p["ghz_fidelity"] - 1) < 1e-9 for p in doc["points"])


def test_time_grid_parse():
    assert list(TimeGrid.parse("0:1:0.1").values()) == pytest.approx([i / 10 for i in range(11)])
    assert list(TimeGrid.parse("0:1:0.3").values()) == pytest.approx([0, 0.3, 0.6, 0.9])
    for bad in ("0:1", "0:1:0", "1:0:0.1", "a:b:c", "-1:1:1"):
        with pytest.raises(ValueError):
            TimeGrid.parse(bad)
