import json
import os

import numpy as np
import pytest

from mutsel import build_grid
from mutsel.cli import main
from mutsel.config import ExperimentConfig
from mutsel.harness import random_positive_field, run, seeded_rng


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


EIG_CFG = """\
scenario = eig
grid.n = 128
coefficients.r = const(2)
coefficients.A = const(1)
"""

SIM_CFG = """\
scenario = simulate
grid.n = 64
coefficients.r = const(2)
coefficients.p = 1
kernel = blind(const(1))
dynamics.u0 = const(0.1)
dynamics.dt = 1e-2
dynamics.t_end = 10
dynamics.record_every = 10
convergence.target = steady_blind
convergence.tol = 1e-3
output.snapshots = true
"""


def test_seeded_rng_reproducible():
    g = build_grid(0.0, 1.0, 64)
    f1 = random_positive_field(g, seeded_rng(42))
    f2 = random_positive_field(g, seeded_rng(42))
    assert np.array_equal(f1.values, f2.values)
    assert np.min(f1.values) > 0


def test_seeded_rng_distinct_seeds():
    g = build_grid(0.0, 1.0, 64)
    pairs = [(random_positive_field(g, seeded_rng(s)),
              random_positive_field(g, seeded_rng(s + 1000))) for s in range(10)]
    for a, b in pairs:
        assert np.max(np.abs(a.values - b.values)) > 0.01


def test_random_field_resolution_independent():
    # same seed on a refined grid samples the same underlying function
    gc = build_grid(0.0, 1.0, 32)
    gf = build_grid(0.0, 1.0, 256)
    coarse = random_positive_field(gc, seeded_rng(7))
    fine = random_positive_field(gf, seeded_rng(7))
    interp = np.interp(gc.centers, gf.centers, fine.values)
    assert np.max(np.abs(interp - coarse.values)) < 1e-3 * np.max(coarse.values)


def test_eig_scenario_writes_report(tmp_path):
    cfg = ExperimentConfig.from_file(write(tmp_path, "eig.cfg", EIG_CFG))
    report = run(cfg, out_dir=tmp_path / "out")
    assert report.passed()
    assert abs(report.measured["lambda1"] + 2.0) < 1e-9
    payload = json.loads((tmp_path / "out" / "eig_report.json").read_text())
    assert abs(payload["lambda1"] + 2.0) < 1e-9


def test_determinism_identical_bytes(tmp_path):
    for d in ("a", "b"):
        cfg = ExperimentConfig.from_file(write(tmp_path, f"{d}.cfg", SIM_CFG))
        run(cfg, out_dir=tmp_path / d)
    for name in ("timeseries.csv", "snapshots.csv", "simulate_report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_eig_exit_code(tmp_path, capsys):
    path = write(tmp_path, "eig.cfg", EIG_CFG)
    code = main(["eig", "--config", str(path), "--out", str(tmp_path / "out")])
    assert code == 0
    out = capsys.readouterr().out
    payload = json.loads(out.strip().splitlines()[-1])
    assert abs(payload["lambda1"] + 2.0) < 1e-9


def test_cli_rejects_mismatched_scenario(tmp_path):
    path = write(tmp_path, "eig.cfg", EIG_CFG)
    assert main(["gap", "--config", str(path), "--out", str(tmp_path / "o")]) == 2


def test_cli_simulate_then_entropy(tmp_path, capsys):
    sim_cfg = write(tmp_path, "sim.cfg", SIM_CFG)
    assert main(["simulate", "--config", str(sim_cfg), "--out", str(tmp_path / "s")]) == 0
    ent_cfg = write(tmp_path, "ent.cfg", """\
scenario = entropy_check
grid.n = 64
coefficients.r = const(2)
coefficients.p = 1
kernel = blind(const(1))
""")
    code = main(["entropy", "--config", str(ent_cfg),
                 "--traj", str(tmp_path / "s" / "snapshots.csv"),
                 "--out", str(tmp_path / "e")])
    assert code == 0
    payload = json.loads((tmp_path / "e" / "entropy_report.json").read_text())
    assert payload["F_monotone"] is True
    assert payload["gap_bound_ok"] is True


def test_cli_dichotomy(tmp_path):
    cfg = write(tmp_path, "d.cfg", """\
scenario = dichotomy
grid.n = 64
dichotomy.c_values = -1,-0.5,0.5,1,2
""")
    assert main(["dichotomy", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    rows = (tmp_path / "o" / "dichotomy.csv").read_text().strip().splitlines()[1:]
    exists = [row.split(",")[2] == "True" for row in rows]
    assert exists == [False, False, True, True, True]


def test_unknown_config_key_fails(tmp_path):
    cfg = write(tmp_path, "bad.cfg", EIG_CFG + "extra.knob = 1\n")
    assert main(["eig", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2


SWEEP_CFG = """\
scenario = epsilon_sweep
grid.n = 48
coefficients.r = const(2) + cos(1,0,0.5)
sweep.k0 = const(1)
sweep.k1 = sepcos(1)
sweep.eps = 0.1,0.05
sweep.p = 1
sweep.seeds = 101,102
dynamics.dt = 5e-3
dynamics.t_end = 15
"""


def test_sweep_thread_merge_deterministic(tmp_path):
    outputs = {}
    for name, threads in (("seq", "1"), ("par", "3")):
        cfg = ExperimentConfig.from_file(write(tmp_path, f"{name}.cfg", SWEEP_CFG))
        os.environ["MUTSEL_THREADS"] = threads
        try:
            report = run(cfg, out_dir=tmp_path / name)
        finally:
            del os.environ["MUTSEL_THREADS"]
        assert report.passed()
        outputs[name] = (tmp_path / name / "members.csv").read_bytes()
    assert outputs["seq"] == outputs["par"]
