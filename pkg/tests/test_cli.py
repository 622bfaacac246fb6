import json
import subprocess
import sys

import pytest

from slicemax.cli import ConfigError, main, parse_config, run_experiment


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run_cli(args):
    return main(list(args))


def test_list_experiments(capsys):
    assert run_cli(["--list-experiments"]) == 0
    out = capsys.readouterr().out
    for name in ("count", "verify_slicing", "sharpness", "framework_check"):
        assert name in out


def test_parse_config_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_config("just some words\n")
    with pytest.raises(ConfigError):
        parse_config("a = 1\na = 2\n")


def test_count_experiment(tmp_path, capsys):
    conf = write(tmp_path, "c.conf", """
experiment = count
family = ball
d = 2
ell = 1
k = 2
lambdas = 0:10
""")
    out = tmp_path / "out"
    assert run_cli(["--config", conf, "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["experiment"] == "count"
    assert summary["claim"] == "Thm 1"
    lines = (out / "detail.csv").read_text().splitlines()
    assert lines[0] == "claim,lam,count"
    assert lines[1] == "Thm 1,0,1"
    assert lines[3] == "Thm 1,2,9"  # the 9 points of the 2-ball at height 2


def test_malformed_progression_names_field(tmp_path, capsys):
    conf = write(tmp_path, "bad.conf", """
experiment = progressions
progressions = 5 mod
ambient = 10 mod 24
""")
    code = run_cli(["--config", conf, "--out", str(tmp_path / "o")])
    assert code == 2
    err = capsys.readouterr().err
    assert "progressions" in err


def test_unknown_field_rejected(tmp_path, capsys):
    conf = write(tmp_path, "u.conf", """
experiment = count
family = ball
d = 1
ell = 1
lambdas = 1:5
typo_field = 3
""")
    assert run_cli(["--config", conf, "--out", str(tmp_path / "o")]) == 2
    assert "typo_field" in capsys.readouterr().err


def test_slicing_experiment_and_worker_determinism(tmp_path):
    conf = write(tmp_path, "s.conf", """
experiment = verify_slicing
plan = ball_bilinear
instances = 6
seed = 11
""")
    outputs = {}
    for workers in (1, 4, 8):
        out = tmp_path / f"w{workers}"
        assert run_cli(["--config", conf, "--out", str(out), "--workers", str(workers)]) == 0
        outputs[workers] = (
            (out / "summary.json").read_bytes(),
            (out / "detail.csv").read_bytes(),
        )
    assert outputs[1] == outputs[4] == outputs[8]
    summary = json.loads(outputs[1][0])
    assert summary["summary"]["all_dominated"] is True
    assert summary["claim"] == "Thm 1"


def test_sharpness_experiment(tmp_path):
    conf = write(tmp_path, "sh.conf", """
experiment = sharpness
family = sphere
d = 5
ell = 2
k = 2
r_grid = 9/20, 11/20, 5/8, 7/10, 4/5
""")
    out = tmp_path / "out"
    assert run_cli(["--config", conf, "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["claim"] == "Thm 2"
    assert summary["summary"]["critical_r"] == "5/8"
    assert summary["summary"]["bracket_contains_critical"] is True
    header = (out / "detail.csv").read_text().splitlines()[0]
    assert header == "claim,family,d,k,ell,theta,r,R,partial_sum,shell_ratio,verdict"


def test_framework_experiment(tmp_path):
    conf = write(tmp_path, "f.conf", """
experiment = framework_check
family = ball
d = 2
ell = 2
k = 2
lam_max = 80
""")
    out = tmp_path / "out"
    assert run_cli(["--config", conf, "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["claim"] == "Thm 7"
    assert summary["summary"]["passed"] is True

    conf2 = write(tmp_path, "m.conf", """
experiment = framework_check
surface = multiplicative
d = 2
lam_max = 40
""")
    out2 = tmp_path / "out2"
    assert run_cli(["--config", conf2, "--out", str(out2)]) == 0
    rows = (out2 / "detail.csv").read_text().splitlines()
    cond2 = rows[2].split(",")
    assert cond2[1] == "2" and cond2[3] == "False"


def test_evaluate_operator_average(tmp_path):
    grid = tmp_path / "delta.grid"
    grid.write_text("0 1/1\n")
    conf = write(tmp_path, "e.conf", f"""
experiment = evaluate_operator
family = ball
d = 1
ell = 2
k = 2
normalization = exact_count
inputs = {grid}, {grid}
lam = 2
x = 0
""")
    out = tmp_path / "out"
    assert run_cli(["--config", conf, "--out", str(out)]) == 0
    rows = (out / "detail.csv").read_text().splitlines()
    assert rows[1].split(",")[3] == "1/9"


def test_missing_input_file_is_config_error(tmp_path, capsys):
    conf = write(tmp_path, "e.conf", """
experiment = evaluate_operator
family = ball
d = 1
ell = 1
inputs = /nonexistent.grid
lam = 2
x = 0
""")
    assert run_cli(["--config", conf, "--out", str(tmp_path / "o")]) == 2
    assert "inputs" in capsys.readouterr().err


def test_progressions_experiment(tmp_path):
    conf = write(tmp_path, "p.conf", """
experiment = progressions
progressions = 5 mod 24; 5 mod 24
ambient = 10 mod 24
lam_max = 30
parity_lam = 70
parity_bound = 7
""")
    out = tmp_path / "out"
    assert run_cli(["--config", conf, "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["summary"]["sumset_ok"] is True
    assert summary["summary"]["parity"]["ok"] is True


def test_module_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "slicemax", "--list-experiments"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "verify_slicing" in proc.stdout
