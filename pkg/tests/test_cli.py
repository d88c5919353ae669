import json
import subprocess
import sys

import numpy as np
import pytest

from zetaflow import (
    EigenSpectrum,
    TruncationPolicy,
    ValidationError,
    load_length_spectrum,
    save,
    selberg_log,
)
from zetaflow.cli import JobConfig, main, run
from zetaflow.tables import read_table


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    rc = main([
        "gen-spectrum", "--d", "3", "--count", "40", "--systole", "0.6",
        "--seed", "7", "--output", str(root / "spectrum.json"),
    ])
    assert rc == 0
    save(EigenSpectrum(entries=((2.0 + 0j, 2), (5.0 + 0j, 1))), root / "eig.json")
    return root


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_spectrum_is_byte_identical(tmp_path, capsys):
    outs = []
    for name in ("a.json", "b.json"):
        rc = main([
            "gen-spectrum", "--d", "3", "--count", "12", "--systole", "0.5",
            "--seed", "3", "--output", str(tmp_path / name),
        ])
        assert rc == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["d"] == 3 and len(doc["classes"]) == 12


def test_selberg_matches_library(workdir, capsys):
    code, out, err = _run(capsys, [
        "selberg", "--spectrum", str(workdir / "spectrum.json"),
        "--sigma", "0", "--s", "3.5", "--s", "4+1j", "--lmax", "30",
    ])
    assert code == 0, err
    path = workdir / "sel.csv"
    path.write_text(out)
    rows = read_table(path)
    ls = load_length_spectrum(workdir / "spectrum.json")
    tp = TruncationPolicy(lmax=30.0)
    for row in rows:
        ref = selberg_log(row.s, (0,), ls, tp)
        assert row.value == ref.value
        assert row.tail_bound == ref.tail_bound
    assert [r.s for r in rows] == [3.5 + 0j, 4 + 1j]


def test_empty_spectrum_yields_zero_rows(tmp_path, capsys):
    rc = main([
        "gen-spectrum", "--d", "3", "--count", "0",
        "--output", str(tmp_path / "empty.json"),
    ])
    assert rc == 0
    code, out, _ = _run(capsys, [
        "selberg", "--spectrum", str(tmp_path / "empty.json"), "--s", "2.0",
    ])
    assert code == 0
    (tmp_path / "z.csv").write_text(out)
    rows = read_table(tmp_path / "z.csv")
    assert len(rows) == 1
    assert rows[0].value == 0j and rows[0].tail_bound == 0.0


def test_json_format_and_output_file(workdir, capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = _run(capsys, [
        "ruelle", "--spectrum", str(workdir / "spectrum.json"),
        "--s", "4.2", "--format", "json", "--output", str(target),
    ])
    assert code == 0 and out == ""
    records = json.loads(target.read_text())
    assert len(records) == 1
    assert records[0]["s_re"] == 4.2


def test_plancherel_rows(capsys):
    code, out, _ = _run(capsys, [
        "plancherel", "--d", "5", "--sigma", "1,0", "--s", "2", "--s", "3",
    ])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    assert float(lines[1].split(",")[2]) == pytest.approx(0.0, abs=1e-12)
    assert float(lines[2].split(",")[2]) == pytest.approx(15.0)


def test_heat_trace_uses_time_column(workdir, capsys):
    code, out, _ = _run(capsys, [
        "heat-trace", "--spectrum", str(workdir / "spectrum.json"),
        "--t", "0.05", "--t", "0.2", "--lmax", "12",
    ])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    assert [float(l.split(",")[0]) for l in lines[1:]] == [0.05, 0.2]


def test_resolvent_spectrum_route_prints_both_routes(workdir, capsys):
    code, out, _ = _run(capsys, [
        "resolvent", "--spectrum", str(workdir / "spectrum.json"),
        "--anchor", "2", "--anchor", "3", "--lmax", "36", "--tail-eps", "1e-5",
    ])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3  # geometric route, then the heat route
    geo = float(lines[1].split(",")[2])
    heat = float(lines[2].split(",")[2])
    assert abs(geo - heat) < 1e-5 * abs(geo)


def test_resolvent_eigen_route(workdir, capsys):
    code, out, _ = _run(capsys, [
        "resolvent", "--eigen", str(workdir / "eig.json"),
        "--anchor", "1", "--anchor", "2",
    ])
    assert code == 0
    val = float(out.splitlines()[1].split(",")[2])
    assert val == pytest.approx(2 / ((2 + 1) * (2 + 4)) + 1 / ((5 + 1) * (5 + 4)), rel=1e-12)


def test_continue_and_residues(workdir, capsys):
    code, out, _ = _run(capsys, [
        "continue", "--eigen", str(workdir / "eig.json"), "--d", "3",
        "--volume", "1", "--s", "0.5", "--s", "1.5",
    ])
    assert code == 0
    assert len(out.splitlines()) == 3
    code, out, _ = _run(capsys, ["residues", "--eigen", str(workdir / "eig.json"), "--d", "3"])
    assert code == 0
    lines = out.splitlines()[1:]
    # one row per pole: +-i sqrt(2) carrying 2, +-i sqrt(5) carrying 1
    vals = sorted(round(float(l.split(",")[2])) for l in lines)
    assert vals == [1, 1, 2, 2]
    assert all(float(l.split(",")[4]) < 1e-6 for l in lines)


def test_factorization_check_passes(workdir, capsys):
    code, out, err = _run(capsys, [
        "factorization-check", "--spectrum", str(workdir / "spectrum.json"),
        "--s", "4.5", "--s", "5.1", "--lmax", "24", "--tail-eps", "1e-2",
    ])
    assert code == 0
    assert "OK" in err


def test_verify_suite_command(capsys):
    code, out, _ = _run(capsys, ["verify", "--suite", "lemma6"])
    assert code == 0
    assert "ok" in out
    code, _, err = _run(capsys, ["verify", "--suite", "unheard-of"])
    assert code == 1
    assert "error:" in err


def test_validation_failures_exit_one(capsys, tmp_path):
    code, _, err = _run(capsys, ["selberg", "--s", "3.0"])
    assert code == 1 and "error:" in err
    code, _, err = _run(capsys, ["selberg", "--spectrum", str(tmp_path / "nope.json"), "--s", "3"])
    assert code == 1 and "error:" in err
    code, _, err = _run(capsys, ["gen-spectrum", "--count", "4"])
    assert code == 1 and "--d" in err
    code, _, err = _run(capsys, ["unknown-command"])
    assert code == 1


def test_domain_failures_exit_two(workdir, capsys):
    # below the abscissa of convergence: the offending point is named
    code, _, err = _run(capsys, [
        "selberg", "--spectrum", str(workdir / "spectrum.json"), "--s", "0.25",
    ])
    assert code == 2
    assert "domain error:" in err and "0.25" in err
    code, _, err = _run(capsys, [
        "continue", "--eigen", str(workdir / "eig.json"), "--d", "3",
        "--s", "0+1.4142135623730951j",
    ])
    assert code == 2
    assert "t_k" in err


def test_config_file_merge(workdir, capsys, tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"sigma": "0", "s_grid": ["3.5"], "lmax": 25.0}))
    code, base, _ = _run(capsys, [
        "selberg", "--spectrum", str(workdir / "spectrum.json"), "--config", str(conf),
    ])
    assert code == 0
    # flags win over the file
    code, out, _ = _run(capsys, [
        "selberg", "--spectrum", str(workdir / "spectrum.json"), "--config", str(conf),
        "--s", "4.0",
    ])
    assert code == 0
    assert out != base
    assert out.splitlines()[1].startswith("4.0,")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"no_such_option": 1}))
    code, _, err = _run(capsys, [
        "selberg", "--spectrum", str(workdir / "spectrum.json"), "--config", str(bad),
        "--s", "3",
    ])
    assert code == 1 and "no_such_option" in err


def test_deterministic_flag_and_worker_invariance(workdir, capsys, monkeypatch):
    argv = [
        "selberg", "--spectrum", str(workdir / "spectrum.json"),
        "--sigma", "0", "--s", "3.5", "--s", "4+1j", "--deterministic",
    ]
    outputs = set()
    for workers in ("1", "4", "8"):
        monkeypatch.setenv("ZETAFLOW_THREADS", workers)
        for _ in range(2):
            code, out, _ = _run(capsys, argv)
            assert code == 0
            outputs.add(out)
    assert len(outputs) == 1


def test_run_accepts_job_config(workdir):
    cfg = JobConfig(
        command="ruelle",
        spectrum_path=str(workdir / "spectrum.json"),
        sigma=(0,),
        s_grid=(4.4 + 0j,),
        lmax=20.0,
    )
    assert run(cfg) == 0
    with pytest.raises(ValidationError):
        run(JobConfig(command="ruelle", spectrum_path=str(workdir / "spectrum.json")))
    with pytest.raises(ValidationError):
        run(JobConfig(command="no-such-thing"))


def test_console_entry_point_smoke(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "zetaflow.cli", "gen-spectrum", "--d", "3",
         "--count", "3", "--output", str(tmp_path / "s.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads((tmp_path / "s.json").read_text())["d"] == 3
