"""Command-line interface: reports, determinism, exit codes."""

import json

import numpy as np
import pytest

from algpaths.cli import EXIT_CERTIFICATION, EXIT_PRECONDITION, EXIT_USAGE, main


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _matrix(entries):
    a = np.asarray(entries, dtype=complex)
    return {
        "dim": a.shape[0],
        "entries": [[float(z.real), float(z.imag)] for z in a.reshape(-1)],
    }


@pytest.fixture
def proj_pair(tmp_path):
    a = _write(tmp_path / "a.json", _matrix([[1, 0], [0, 0]]))
    b = _write(tmp_path / "b.json", _matrix([[1, 0.5], [0, 0]]))
    return a, b


def test_sample_and_decompose_roundtrip(tmp_path):
    out = tmp_path / "el.json"
    assert main(["sample", "--roots", "0,1", "--sig", "1,2", "--seed", "7",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["tool"] == "algpaths" and rep["version"]
    out2 = tmp_path / "part.json"
    assert main(["decompose", "--a", str(out), "--out", str(out2)]) == 0
    part = json.loads(out2.read_text())["result"]
    assert part["signature"]["ranks"] == [1, 2]
    assert part["worst_residual"] <= 1e-9


def test_connect_exp_local_matches_hand_generator(tmp_path, proj_pair, capsys):
    a, b = proj_pair
    assert main(["connect", "--a", a, "--b", b, "--roots", "0,1",
                 "--method", "exp-local"]) == 0
    rep = json.loads(capsys.readouterr().out)
    gen = rep["result"]["path"]["generators"][0]["entries"]
    assert gen == [[0.0, 0.0], [-0.5, 0.0], [0.0, 0.0], [0.0, 0.0]]


def test_connect_then_verify(tmp_path, proj_pair):
    a, b = proj_pair
    out = tmp_path / "path.json"
    assert main(["connect", "--a", a, "--b", b, "--roots", "0,1",
                 "--method", "polygonal", "--out", str(out)]) == 0
    assert main(["verify", "--path", str(out), "--roots", "0,1"]) == 0


def test_mindeg_reports_degree(tmp_path, proj_pair, capsys):
    a, b = proj_pair
    assert main(["mindeg", "--a", a, "--b", b, "--roots", "0,1", "--seed", "0",
                 "--dmax", "3", "--budget", "4"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["result"]["degree"] == 1


def test_distance_json_and_csv(tmp_path):
    out = tmp_path / "scan.json"
    args = ["distance", "--roots", "0,1", "--sig", "1,2", "--sig2", "2,1",
            "--seed", "3", "--budget", "20", "--self-adjoint"]
    assert main(args + ["--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["result"]["best_distance"] >= 1.0 - 1e-6
    csv_out = tmp_path / "scan.csv"
    assert main(args + ["--format", "csv", "--out", str(csv_out)]) == 0
    lines = csv_out.read_text().splitlines()
    assert lines[0] == "sig1,sig2,roots,m,seed,budget,best_distance,bound"
    assert lines[1].startswith("1:2,2:1,")
    # batches append rows without repeating the header
    assert main(args + ["--format", "csv", "--out", str(csv_out)]) == 0
    lines = csv_out.read_text().splitlines()
    assert len(lines) == 3 and lines[1] == lines[2]


def test_reports_are_byte_identical_for_fixed_seed(tmp_path):
    outs = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        assert main(["distance", "--roots", "0,1", "--sig", "1,1", "--sig2", "0,2",
                     "--seed", "11", "--budget", "10", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_line_command(tmp_path, capsys):
    a = _write(tmp_path / "m.json", _matrix([[0, 0], [0, 1]]))
    assert main(["line", "--a", a, "--roots", "0,1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["result"]["direction"]["entries"] == [[0.0, 0.0], [1.0, 0.0], [0.0, -0.0], [0.0, -0.0]]


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfgfile = _write(tmp_path / "cfg.json", {"roots": "0,1", "sig": "1,1", "seed": 5})
    assert main(["sample", "--config", str(cfgfile), "--roots", "0,1", "--sig", "1,1",
                 "--seed", "5"]) == 0
    baseline = capsys.readouterr().out
    # flags win over the config file: different seed via flag changes the draw
    cfgfile2 = _write(tmp_path / "cfg2.json", {"seed": 999})
    assert main(["sample", "--config", str(cfgfile2), "--roots", "0,1", "--sig", "1,1",
                 "--seed", "5"]) == 0
    assert capsys.readouterr().out == baseline


def test_exit_code_precondition(tmp_path):
    a = _write(tmp_path / "a.json", _matrix([[1, 0], [0, 0]]))
    b = _write(tmp_path / "b.json", _matrix([[1, 0], [0, 1]]))
    code = main(["connect", "--a", a, "--b", b, "--roots", "0,1", "--method", "exp-local"])
    assert code == EXIT_PRECONDITION


def test_exit_code_certification(tmp_path):
    a = _write(tmp_path / "a.json", _matrix([[1, 0], [0, 0]]))
    b = _write(tmp_path / "b.json", _matrix([[0, 0], [0, 1]]))
    code = main(["mindeg", "--a", a, "--b", b, "--roots", "0,1", "--seed", "0",
                 "--dmax", "2", "--budget", "2", "--self-adjoint", "--min-motion", "0.1"])
    assert code == EXIT_CERTIFICATION


def test_exit_code_usage():
    with pytest.raises(SystemExit) as err:
        main(["connect", "--method", "nope"])
    assert err.value.code == EXIT_USAGE


def test_suite_quick_run_deterministic_and_sensitive_to_tolerance(tmp_path, capsys):
    outs = []
    for name in ("s1.json", "s2.json"):
        out = tmp_path / name
        assert main(["suite", "--seed", "1", "--samples", "6", "--budget", "20",
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["result"]["all_passed"] is True
    assert len(rep["result"]["items"]) == 11
    # a corrupted tolerance makes certificates unattainable: nonzero exit
    code = main(["suite", "--seed", "1", "--samples", "6", "--budget", "20",
                 "--tol", "1e-30", "--out", str(tmp_path / "bad.json")])
    capsys.readouterr()
    assert code != 0
