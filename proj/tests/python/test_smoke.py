import os
import subprocess

import pytest

import frdw


def test_physical_spaces():
    e4 = frdw.physical_space("e4")
    assert len(e4["boundary"]) == 4
    assert len(e4["obstacles"]) == 4
    assert frdw.clearance("e1", 0.0, 0.0) == pytest.approx(2.0)
    assert frdw.raycast("e1", 0.0, 0.0, 0.0) == pytest.approx(2.0)


def test_run_trial_is_deterministic():
    a = frdw.run_trial("e4", "f-tapf", 3, {"sim.distance_budget": 20})
    b = frdw.run_trial("e4", "f-tapf", 3, {"sim.distance_budget": 20})
    assert a == b
    assert a["virtual_distance"] >= 20
    assert a["clamp_violations"] == 0


def test_bad_settings_raise():
    with pytest.raises(ValueError, match="mu"):
        frdw.run_trial("e1", "f-s2c", 1, {"mu": 1.5})
    with pytest.raises(ValueError, match="unknown key"):
        frdw.run_trial("e1", "s2c", 1, {"nope": 1})


def test_experiment_csv_schema():
    out = frdw.run_experiment("e1", "s2c", {"trials": 3, "sim.distance_budget": 10})
    trial_lines = out["trials_csv"].splitlines()
    assert trial_lines[0] == frdw.TRIAL_CSV_HEADER
    assert len(trial_lines) == 7
    summary = out["summary_csv"].splitlines()
    assert summary[0] == frdw.SUMMARY_CSV_HEADER
    assert [row.split(",")[5] for row in summary[1:]] == ["resets", "mdbr"]


def test_stats():
    t = frdw.paired_t_test([2, 4, 6], [1, 2, 3])
    assert t["statistic"] == pytest.approx(3.4641, abs=1e-3)
    w = frdw.wilcoxon_signed_rank([1, 2, 3, 4, 5, 6], [0] * 6)
    assert w["p"] == pytest.approx(2 / 64)
    assert frdw.compute_mdbr([10, 30, 60], 100) == (pytest.approx(20.0), False)
    assert frdw.compute_mdbr([], 100) == (100.0, True)


def test_render_svg():
    svg = frdw.render_svg("e1", "f-s2c", 1, {"sim.distance_budget": 10})
    assert svg.count('class="boundary"') == 1
    assert "<path " in svg


def test_config_keys_cover_the_documented_constants():
    keys = dict(frdw.config_keys())
    for k in ("mu.f-tapf", "f_t", "mde_mean", "dir_accuracy", "mpc_depth", "mpc_alpha", "gains.gt_max"):
        assert k in keys
    assert keys["mu.f-tapf"] == "0.7"


CLI = os.environ.get("FRDW_CLI")


@pytest.mark.skipif(not CLI, reason="FRDW_CLI not set")
def test_cli_run_writes_csvs(tmp_path):
    out = tmp_path / "res"
    r = subprocess.run(
        [CLI, "run", "--experiment", "e1", "--pairs", "tapf", "--trials", "2", "--set", "sim.distance_budget=5",
         "--out", str(out)],
        capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (out / "trials.csv").read_text().splitlines()[0] == frdw.TRIAL_CSV_HEADER
    assert len((out / "summary.csv").read_text().splitlines()) == 3


@pytest.mark.skipif(not CLI, reason="FRDW_CLI not set")
def test_cli_exit_codes(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("experiment = e4\npairs = tapf\ntrials = 50\n")
    ok = subprocess.run([CLI, "validate", "--config", str(cfg), "--out", str(tmp_path / "x")],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    assert not (tmp_path / "x").exists()
    bad = subprocess.run([CLI, "validate", "--mu", "1.5"], capture_output=True, text=True)
    assert bad.returncode == 1
    assert "mu" in bad.stderr
    cfg.write_text("trials = 50\nwho = me\n")
    assert subprocess.run([CLI, "run", "--config", str(cfg)], capture_output=True).returncode == 1


@pytest.mark.skipif(not CLI, reason="FRDW_CLI not set")
def test_cli_sweep_and_render(tmp_path):
    r = subprocess.run(
        [CLI, "sweep", "--param", "mu", "--grid", "0,0.7", "--controller", "f-tapf", "--experiment", "e4",
         "--trials", "2", "--set", "sim.distance_budget=5", "--out", str(tmp_path)],
        capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == frdw.SWEEP_CSV_HEADER
    assert len(lines) == 1 + 2 * 2
    svg = tmp_path / "t.svg"
    r = subprocess.run([CLI, "render", "--experiment", "e4", "--controller", "f-tapf", "--seed", "2",
                        "--set", "sim.distance_budget=10", "--out", str(svg)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert svg.read_text().startswith("<svg")
