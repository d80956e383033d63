import json
import math
import subprocess
import sys

import pytest

from oscimax.cli import main

PROFILE = '{"dimension":1,"bands":[{"lo":0.0,"hi":6.283185307179586,"amplitude":1.0}]}'


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cantor_dim_stdout(capsys):
    code, out, _ = _run(["cantor-dim", "--r", "0.3333333333333333", "--k-max", "10"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "j,delta,N_delta,slope"
    assert len(lines) == 11
    assert lines[1].split(",")[2] == "2"
    assert float(lines[1].split(",")[3]) == pytest.approx(math.log(2) / math.log(3), abs=0.02)


def test_propagate_unit_mass(capsys):
    code, out, _ = _run(["propagate", "--profile", PROFILE, "--m", "2", "--x", "0", "--t", "0"], capsys)
    assert code == 0
    head, row = out.strip().splitlines()
    assert head == "x,t,re,im,abs"
    assert float(row.split(",")[4]) == pytest.approx(1.0, abs=1e-12)


def test_manifest_written(tmp_path, capsys):
    out = tmp_path / "dim.csv"
    assert main(["cantor-dim", "--r", "0.2", "--k-max", "8", "--out", str(out)]) == 0
    man = json.loads((tmp_path / "dim.csv.manifest.json").read_text())
    for key in ("tool_version", "subcommand", "params", "seed", "backend", "started",
                "finished", "outputs", "slope"):
        assert key in man
    assert man["subcommand"] == "cantor-dim"
    assert man["params"]["r"] == 0.2


@pytest.mark.parametrize("argv", [
    ["cantor-dim", "--r", "0.2"],
    ["scaling", "--k-min", "2", "--k-max", "4"],
    ["vdc", "--phase", "cubic", "--lambda-min", "10", "--lambda-max", "1000"],
    ["scaling", "--scenario", "no-such", "--k-min", "2", "--k-max", "4"],
    ["cantor-dim", "--r", "0.7", "--k-max", "6"],
    ["maximal", "--profile", PROFILE, "--m", "2", "--path", "spiral", "--q", "2"],
    ["maximal", "--profile", PROFILE, "--m", "2", "--path", "vertical", "--q", "100"],
    ["propagate", "--profile", "{not json", "--m", "2", "--x", "0", "--t", "0"],
    ["ineq", "--mode", "hls", "--rho", "0.9", "--trials", "2", "--resolutions", "16"],
    ["frobnicate"],
])
def test_validation_exit_code(argv, capsys):
    assert main(argv) == 2


def test_budget_exit_code(capsys):
    big = '{"dimension":1,"bands":[{"lo":0.0,"hi":1e7,"amplitude":1.0}]}'
    argv = ["propagate", "--profile", big, "--m", "3", "--x", "0.5", "--t", "0.5", "--method", "panel"]
    assert main(argv) == 3


def test_config_merges_below_flags(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"r": 0.2, "k-max": 6}))
    code, out, _ = _run(["cantor-dim", "--config", str(cfg)], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 7
    code, out, _ = _run(["cantor-dim", "--config", str(cfg), "--k-max", "5"], capsys)
    assert len(out.strip().splitlines()) == 6


def test_scaling_replay_is_byte_identical(tmp_path, capsys):
    first = tmp_path / "a.csv"
    argv = ["scaling", "--scenario", "fractal-lines-1d", "--theta", "point", "--q", "4",
            "--r", "0.2", "--k-min", "2", "--k-max", "4", "--out", str(first)]
    assert main(argv) == 0
    replay = tmp_path / "b.csv"
    assert main(["--threads", "1", "scaling", "--config", str(first) + ".manifest.json",
                 "--out", str(replay)]) == 0
    assert first.read_bytes() == replay.read_bytes()
    man = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert man["theoretical_slope"] == 0.25


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "oscimax", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("oscimax ")
