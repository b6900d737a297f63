"""Experiment orchestration: scenario runners, reports, seeded data, file output.

Every scenario consumes a strict flat-key config (see config module),
composes the numerical modules, writes CSV/JSON artifacts into an output
directory and returns a Report whose verdicts decide the process exit
code. Reports embed the config hash; identical config and seed reproduce
identical bytes.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .coefficients import sample
from .dynamics import (Coefficients, Convergence, SimConfig, SimResult,
                       simulate)
from .entropy import (check_stationary_reference, decompose, h_dirichlet_form,
                      identity_residual, lyapunov_F)
from .errors import ConfigError, NoPositiveSteadyState
from .grid import Field, Grid1D, build_grid, norm2, quadrature
from .selection import BlindKernel, Kernel, PerturbedKernel, make_kernel, sample2d
from .spectral import principal_eigenpair, spectral_gap
from .steady import SteadyState, blind_steady, homotopy_steady, stationary_residual

# ---------------------------------------------------------------------------
# seeded data
# ---------------------------------------------------------------------------

def seeded_rng(seed: int) -> np.random.Generator:
    """Deterministic random stream; identical seed, identical draws."""
    return np.random.default_rng(seed)


def random_positive_field(grid: Grid1D, rng: np.random.Generator,
                          modes: int = 6, amplitude: float = 0.4) -> Field:
    """Strictly positive random field, exp of a low-order cosine series.

    The coefficients are drawn once and the series is evaluated at cell
    centers, so the same seed yields the same function at any resolution.
    """
    coeff = rng.standard_normal(modes) * (amplitude / np.arange(1, modes + 1))
    scale = rng.uniform(math.log(0.25), math.log(1.5))
    xhat = (grid.centers - grid.a) / (grid.b - grid.a)
    z = np.full(grid.n, scale)
    for m, c in enumerate(coeff, start=1):
        z += c * np.cos(m * math.pi * xhat)
    return Field(grid, np.exp(z))


# ---------------------------------------------------------------------------
# reports and file output
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


@dataclass
class Report:
    scenario: str
    config_hash: str
    seed: int
    verdicts: dict[str, bool] = dc_field(default_factory=dict)
    measured: dict = dc_field(default_factory=dict)
    files: list[str] = dc_field(default_factory=list)

    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> str:
        payload = {
            "scenario": self.scenario,
            "config_sha256": self.config_hash,
            "seed": self.seed,
            "verdicts": self.verdicts,
            "measured": self.measured,
            "files": self.files,
            "passed": self.passed(),
        }
        return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x)}")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")


# ---------------------------------------------------------------------------
# shared config loading
# ---------------------------------------------------------------------------

def _load_grid(cfg: ExperimentConfig) -> Grid1D:
    return build_grid(cfg.get_float("grid.a", 0.0), cfg.get_float("grid.b", 1.0),
                      cfg.get_int("grid.n", 128))


def _load_coeffs(cfg: ExperimentConfig, grid: Grid1D) -> Coefficients:
    r = sample(cfg.get_str("coefficients.r", "const(1)"), grid)
    a = sample(cfg.get_str("coefficients.A", "const(1)"), grid)
    p = cfg.get_float("coefficients.p", 1.0)
    return Coefficients.build(grid, r, a, p)


def _load_kernel(cfg: ExperimentConfig, grid: Grid1D, default: str = "blind(const(1))") -> Kernel:
    return make_kernel(cfg.get_str("kernel", default), grid)


def _load_u0(cfg: ExperimentConfig, grid: Grid1D, key: str = "dynamics.u0") -> Field:
    spec = cfg.get_str(key, "const(1)")
    if spec.startswith("random(") and spec.endswith(")"):
        seed = int(spec[len("random("):-1])
        return random_positive_field(grid, seeded_rng(seed))
    return sample(spec, grid)


def _load_simconfig(cfg: ExperimentConfig, grid: Grid1D, coeffs: Coefficients,
                    kernel: Kernel, target_field: Field | None = None) -> SimConfig:
    conv = Convergence(
        target=cfg.get_str("convergence.target", "none"),
        tol=cfg.get_float("convergence.tol", 0.0),
        target_field=target_field,
    )
    q_list = tuple(sorted(set([1.0, 2.0] + cfg.get_floats("entropy.q_list", [4.0]))))
    return SimConfig(
        grid=grid, coeffs=coeffs, kernel=kernel,
        u0=_load_u0(cfg, grid),
        dt=cfg.get_float("dynamics.dt", 1e-3),
        t_end=cfg.get_float("dynamics.t_end", 10.0),
        record_every=cfg.get_int("dynamics.record_every", 1),
        convergence=conv, q_list=q_list,
    )


def write_timeseries(path: Path, result: SimResult) -> None:
    header = ["t", "mass", "sup_u", "H1", "H2", "F", "lambda", "h_norm2"]
    rows = []
    for state, s in zip(result.trajectory, result.samples):
        rows.append([state.t, quadrature(state.u), float(np.max(state.u.values)),
                     s.h1, s.h_q.get(2.0, float("nan")), s.f, s.lam, s.h_norm2])
    write_csv(path, header, rows)


def write_snapshots(path: Path, result: SimResult) -> None:
    n = result.trajectory[0].u.grid.n
    header = ["t"] + [f"u{i}" for i in range(n)]
    rows = [[st.t, *st.u.values] for st in result.trajectory]
    write_csv(path, header, rows)


def read_snapshots(path: Path, grid: Grid1D) -> list[tuple[float, Field]]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != grid.n + 1:
        raise ConfigError(f"trajectory file has {data.shape[1] - 1} cells, grid has {grid.n}")
    return [(float(row[0]), Field(grid, row[1:])) for row in data]


def uniform_prefix(traj: list[tuple[float, Field]]) -> list[tuple[float, Field]]:
    """Longest leading stretch with a constant recording interval.

    A run that stops on a convergence test appends its final state
    off-stride; the identity check needs the uniform part only.
    """
    if len(traj) < 3:
        return traj
    times = np.array([t for t, _ in traj])
    dts = np.diff(times)
    keep = len(traj)
    for i in range(1, len(dts)):
        if abs(dts[i] - dts[0]) > 1e-9 * max(1.0, dts[0]):
            keep = i + 1
            break
    return traj[:keep]


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def run_eig(cfg: ExperimentConfig, out: Path, seed: int) -> Report:
    grid = _load_grid(cfg)
    coeffs = _load_coeffs(cfg, grid)
    tol = cfg.get_float("tolerances.eig", 1e-10)
    eig = principal_eigenpair(coeffs.op, coeffs.r, tol_eig=tol)
    payload = {"lambda1": eig.lambda1, "min_phi1": float(np.min(eig.phi1.values)),
               "residual": eig.residual}
    report = Report("eig", cfg.sha256, seed, measured=payload)
    _write_json(out / "eig_report.json", payload)
    report.files.append("eig_report.json")
    print(json.dumps(payload, sort_keys=True, default=_json_default))
    return report


def run_gap(cfg: ExperimentConfig, out: Path, seed: int) -> Report:
    grid = _load_grid(cfg)
    a = sample(cfg.get_str("coefficients.A", "const(1)"), grid)
    vbar = sample(cfg.get_str("gap.vbar", "const(1)"), grid)
    gap = spectral_gap(vbar, a, tol=cfg.get_float("tolerances.gap", 1e-10), seed=seed)
    payload = {"rho1": gap.rho1, "residual": gap.residual}
    report = Report("gap", cfg.sha256, seed, measured=payload)
    _write_json(out / "gap_report.json", payload)
    report.files.append("gap_report.json")
    print(json.dumps(payload, sort_keys=True, default=_json_default))
    return report


def run_simulate(cfg: ExperimentConfig, out: Path, seed: int) -> Report:
    grid = _load_grid(cfg)
    coeffs = _load_coeffs(cfg, grid)
    kernel = _load_kernel(cfg, grid)
    sim = _load_simconfig(cfg, grid, coeffs, kernel)
    result = simulate(sim)
    write_timeseries(out / "timeseries.csv", result)
    files = ["timeseries.csv"]
    if cfg.get_bool("output.snapshots", False):
        write_snapshots(out / "snapshots.csv", result)
        files.append("snapshots.csv")
    summary = {"converged": result.converged, "target": result.target,
               "t_final": result.t_final, "distance_to_target": result.distance_to_target}
    _write_json(out / "simulate_report.json", summary)
    files.append("simulate_report.json")
    print(json.dumps(summary, sort_keys=True, default=_json_default))
    return Report("simulate", cfg.sha256, seed, measured=summary, files=files)


def run_steady(cfg: ExperimentConfig, out: Path, seed: int) -> Report:
    grid = _load_grid(cfg)
    coeffs = _load_coeffs(cfg, grid)
    kernel = _load_kernel(cfg, grid)
    method = cfg.get_str("steady.method", "blind" if isinstance(kernel, BlindKernel) else "homotopy")
    if method == "blind":
        if not isinstance(kernel, BlindKernel):
            raise ConfigError("steady.method=blind requires a blind kernel", cfg.path)
        eig = principal_eigenpair(coeffs.op, coeffs.r)
        state = blind_steady(eig, kernel.k, coeffs.p, coeffs)
    elif method == "homotopy":
        schedule = cfg.get_floats("steady.schedule", list(np.linspace(0, 1, 11)))
        x0 = cfg.get_int("steady.x0_index", grid.n // 2)
        state = homotopy_steady(kernel, coeffs, grid, schedule=np.asarray(schedule),
                                x0_index=x0, tol=cfg.get_float("steady.tol", 1e-8),
                                theta=cfg.get_float("steady.theta", 0.25))
    else:
        raise ConfigError(f"unknown steady.method {method!r}", cfg.path)
    write_csv(out / "ubar.csv", ["x", "ubar"],
              [[x, v] for x, v in zip(grid.centers, state.ubar.values)])
    payload = {"mu": state.mu, "residual": state.residual, "method": state.method,
               "homotopy_trace": state.homotopy_trace}
    _write_json(out / "steady_report.json", payload)
    print(json.dumps(payload, sort_keys=True, default=_json_default))
    return Report("steady", cfg.sha256, seed, measured=payload,
                  files=["ubar.csv", "steady_report.json"])


def _reference_steady(cfg: ExperimentConfig, grid: Grid1D, coeffs: Coefficients,
                      kernel: Kernel) -> SteadyState:
    if isinstance(kernel, BlindKernel):
        eig = principal_eigenpair(coeffs.op, coeffs.r)
        return blind_steady(eig, kernel.k, coeffs.p, coeffs)
    return homotopy_steady(kernel, coeffs, grid)


def run_entropy_check(cfg: ExperimentConfig, out: Path, seed: int,
                      traj_path: str | None = None) -> Report:
    grid = _load_grid(cfg)
    coeffs = _load_coeffs(cfg, grid)
    kernel = _load_kernel(cfg, grid)
    config_traj = cfg.get_str("entropy.traj", None) if traj_path else cfg.get_str("entropy.traj")
    traj_file = traj_path or config_traj
    traj = read_snapshots(Path(traj_file), grid)
    q = cfg.get_float("entropy.q", 2.0)
    q_mono = cfg.get_floats("entropy.q_list", [2.0, 4.0])
    stat_tol = cfg.get_float("entropy.stationarity_tol", 1e-6)
    slack = cfg.get_float("entropy.gap_slack", 0.05)
    step_tol = cfg.get_float("entropy.f_step_tol", 1e-8)
    hfloor = cfg.get_float("entropy.h_floor", 1e-12)

    ref = _reference_steady(cfg, grid, coeffs, kernel)
    ubar = ref.ubar
    uniform = uniform_prefix(traj)
    res = identity_residual(uniform, q, ubar, kernel, coeffs.p, coeffs.op, coeffs.r,
                            stationarity_tol=stat_tol)
    write_csv(out / "residuals.csv", ["t", "residual"],
              [[uniform[i + 1][0], r] for i, r in enumerate(res)])

    f_monotone = True
    for qq in q_mono:
        fvals = np.array([lyapunov_F(qq, ubar, u) for _, u in traj])
        if np.max(np.diff(fvals)) > step_tol:
            f_monotone = False
    gap = spectral_gap(ubar, coeffs.a)
    gap_ok = True
    for _, u in traj:
        dec = decompose(u, ubar)
        hn = norm2(dec.h)
        if hn <= hfloor:
            continue  # below the cancellation floor both sides are noise
        if h_dirichlet_form(dec.h, ubar, coeffs.op) < gap.rho1 * hn * hn * (1.0 - slack):
            gap_ok = False
    verdict = {"max_residual": float(np.max(res)), "F_monotone": bool(f_monotone),
               "gap_bound_ok": bool(gap_ok)}
    _write_json(out / "entropy_report.json", verdict)
    print(json.dumps(verdict, sort_keys=True, default=_json_default))
    return Report("entropy_check", cfg.sha256, seed,
                  verdicts={"F_monotone": f_monotone, "gap_bound_ok": gap_ok},
                  measured=verdict, files=["residuals.csv", "entropy_report.json"])


def _sweep_member(args) -> dict:
    """One (p, eps, seed) run against the precomputed steady state."""
    grid, coeffs, kernel, ubar_eps, member_seed, dt, t_end, tol = args
    u0 = random_positive_field(grid, seeded_rng(member_seed))
    sim = SimConfig(grid=grid, coeffs=coeffs, kernel=kernel, u0=u0, dt=dt, t_end=t_end,
                    record_every=max(1, int(round(t_end / dt)) // 50),
                    convergence=Convergence("steady_general", tol, ubar_eps))
    result = simulate(sim)
    return {"seed": member_seed, "converged": result.converged,
            "t_final": result.t_final, "distance": result.distance_to_target,
            "final": result.trajectory[-1].u.values}


def run_epsilon_sweep(cfg: ExperimentConfig, out: Path, seed: int) -> Report:
    grid = _load_grid(cfg)
    r = sample(cfg.get_str("coefficients.r", "const(2)"), grid)
    a = sample(cfg.get_str("coefficients.A", "const(1)"), grid)
    k0 = sample(cfg.get_str("sweep.k0", "const(1)"), grid)
    k1 = sample2d(cfg.get_str("sweep.k1", "sepcos(1)"), grid)
    eps_list = cfg.get_floats("sweep.eps", [0.1, 0.05, 0.025])
    p_list = cfg.get_floats("sweep.p", [1.0, 2.0])
    seeds = cfg.get_ints("sweep.seeds", [101, 102, 103])
    dt = cfg.get_float("dynamics.dt", 1e-3)
    t_end = cfg.get_float("dynamics.t_end", 30.0)
    tol = cfg.get_float("sweep.tol", 1e-4)
    pair_tol = cfg.get_float("sweep.pairwise_tol", 2.0 * tol)
    slope_band = cfg.get_float("sweep.slope_band", 0.25)
    gap_factor = cfg.get_float("sweep.gap_factor", 0.9)
    threads = int(os.environ.get("MUTSEL_THREADS", "1"))

    verdicts: dict[str, bool] = {}
    measured: dict = {}
    rows = []
    for p in p_list:
        coeffs = Coefficients.build(grid, r, a, p)
        eig = principal_eigenpair(coeffs.op, coeffs.r)
        base = blind_steady(eig, k0, p, coeffs)
        gap0 = spectral_gap(base.ubar, a).rho1
        slopes = []
        gaps = []
        for eps in eps_list:
            kernel = PerturbedKernel(k0=k0, k1=k1, eps=eps)
            ub_eps = homotopy_steady(kernel, coeffs, grid, eig=eig).ubar
            slopes.append(float(np.max(np.abs(ub_eps.values - base.ubar.values))) / eps)
            gaps.append(spectral_gap(ub_eps, a).rho1)
            jobs = [(grid, coeffs, kernel, ub_eps, s, dt, t_end, tol) for s in seeds]
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    members = list(pool.map(_sweep_member, jobs))
            else:
                members = [_sweep_member(j) for j in jobs]
            finals = [m["final"] for m in members]
            pairwise = max(
                float(np.max(np.abs(fa - fb)))
                for i, fa in enumerate(finals) for fb in finals[i + 1:]
            )
            verdicts[f"pairwise_p{p:g}_eps{eps:g}"] = pairwise <= pair_tol
            measured[f"pairwise_p{p:g}_eps{eps:g}"] = pairwise
            for m in members:
                rows.append([p, eps, m["seed"], m["converged"], m["t_final"],
                             m["distance"], float(np.max(m["final"]))])
        sl = np.array(slopes)
        variation = float((sl.max() - sl.min()) / sl.mean())
        verdicts[f"slope_band_p{p:g}"] = variation <= slope_band
        measured[f"slopes_p{p:g}"] = slopes
        measured[f"slope_variation_p{p:g}"] = variation
        min_gap = float(np.min(gaps))
        verdicts[f"gap_uniform_p{p:g}"] = min_gap >= gap_factor * gap0
        measured[f"gap0_p{p:g}"] = gap0
        measured[f"gaps_p{p:g}"] = gaps

    write_csv(out / "members.csv",
              ["p", "eps", "seed", "converged", "t_final", "distance", "final_sup"], rows)
    report = Report("epsilon_sweep", cfg.sha256, seed, verdicts=verdicts,
                    measured=measured, files=["members.csv"])
    return report


def operator_consistency_errors(ns: list[int]) -> list[float]:
    """Manufactured solution A = 1 + x, u = cos(pi x) on [0, 1]; interior sup error."""
    errors = []
    for n in ns:
        grid = build_grid(0.0, 1.0, n)
        coeffs = Coefficients.build(grid, sample("const(1)", grid), sample("poly(1,1)", grid), 1.0)
        x = grid.centers
        u = np.cos(np.pi * x)
        exact = -np.pi * np.sin(np.pi * x) - (1.0 + x) * np.pi**2 * np.cos(np.pi * x)
        approx = coeffs.op.apply(u)
        errors.append(float(np.max(np.abs(approx - exact)[1:-1])))
    return errors


def time_order_errors(dts: list[float], t_end: float = 5.0, n: int = 64) -> list[float]:
    """Constant-case logistic benchmark: r = 2, k = 1, p = 1, u0 = 0.1."""
    errors = []
    grid = build_grid(0.0, 1.0, n)
    coeffs = Coefficients.build(grid, sample("const(2)", grid), sample("const(1)", grid), 1.0)
    kernel = BlindKernel(sample("const(1)", grid))
    exact = 2.0 / (1.0 + 19.0 * math.exp(-2.0 * t_end))
    for dt in dts:
        sim = SimConfig(grid=grid, coeffs=coeffs, kernel=kernel,
                        u0=sample("const(0.1)", grid), dt=dt, t_end=t_end)
        result = simulate(sim)
        errors.append(float(np.max(np.abs(result.trajectory[-1].u.values - exact))))
    return errors


def identity_ladder_residuals(ladder: list[tuple[int, float]],
                              t_end: float = 2.0) -> list[float]:
    """Max q=2 identity residual on the nonconstant blind benchmark."""
    out = []
    for n, dt in ladder:
        grid = build_grid(0.0, 1.0, n)
        coeffs = Coefficients.build(grid, sample("const(2) + cos(1,0)", grid),
                                    sample("poly(1,1)", grid), 2.0)
        kernel = BlindKernel(sample("poly(1,1)", grid))
        eig = principal_eigenpair(coeffs.op, coeffs.r)
        ubar = blind_steady(eig, kernel.k, 2.0, coeffs).ubar
        u0 = random_positive_field(grid, seeded_rng(7))
        sim = SimConfig(grid=grid, coeffs=coeffs, kernel=kernel, u0=u0, dt=dt, t_end=t_end)
        result = simulate(sim)
        traj = [(st.t, st.u) for st in result.trajectory]
        res = identity_residual(traj, 2.0, ubar, kernel, 2.0, coeffs.op, coeffs.r,
                                stationarity_tol=1e-6)
        out.append(float(np.max(res)))
    return out


def observed_orders(errors: list[float], factors: list[float]) -> list[float]:
    return [math.log(errors[i] / errors[i + 1]) / math.log(factors[i])
            for i in range(len(errors) - 1)]


def run_convergence_study(cfg: ExperimentConfig, out: Path, seed: int) -> Report:
    ns = cfg.get_ints("study.operator_ns", [64, 128, 256])
    dts = cfg.get_floats("study.time_dts", [1e-2, 5e-3, 2.5e-3])
    ladder_raw = cfg.get_str("study.identity_ladder", "128:0.001,256:0.0005")
    ladder = []
    for part in ladder_raw.split(","):
        n_str, dt_str = part.split(":")
        ladder.append((int(n_str), float(dt_str)))

    op_errors = operator_consistency_errors(ns)
    op_orders = observed_orders(op_errors, [ns[i + 1] / ns[i] for i in range(len(ns) - 1)])
    t_errors = time_order_errors(dts)
    t_orders = observed_orders(t_errors, [dts[i] / dts[i + 1] for i in range(len(dts) - 1)])
    id_res = identity_ladder_residuals(ladder)

    verdicts = {
        "operator_order": min(op_orders) >= 1.9,
        "time_order": min(t_orders) >= 0.9,
        "identity_decreasing": all(id_res[i + 1] < id_res[i] for i in range(len(id_res) - 1)),
    }
    measured = {
        "operator_errors": op_errors, "operator_orders": op_orders,
        "time_errors": t_errors, "time_orders": t_orders,
        "identity_ladder": [[n, dt] for n, dt in ladder],
        "identity_residuals": id_res,
    }
    write_csv(out / "convergence.csv", ["quantity", "value"],
              [["operator_order_min", min(op_orders)],
               ["time_order_min", min(t_orders)],
               ["identity_residual_first", id_res[0]],
               ["identity_residual_last", id_res[-1]]])
    return Report("convergence_study", cfg.sha256, seed, verdicts=verdicts,
                  measured=measured, files=["convergence.csv"])


def run_dichotomy(cfg: ExperimentConfig, out: Path, seed: int) -> Report:
    grid = _load_grid(cfg)
    c_values = cfg.get_floats("dichotomy.c_values", [-1.0, -0.5, 0.5, 1.0, 2.0])
    a = sample(cfg.get_str("coefficients.A", "const(1)"), grid)
    k = sample(cfg.get_str("dichotomy.k", "const(1)"), grid)
    p = cfg.get_float("coefficients.p", 1.0)
    rows = []
    all_match = True
    for c in c_values:
        coeffs = Coefficients.build(grid, sample(f"const({c})", grid), a, p)
        eig = principal_eigenpair(coeffs.op, coeffs.r)
        try:
            blind_steady(eig, k, p, coeffs)
            exists = True
        except NoPositiveSteadyState:
            exists = False
        match = exists == (eig.lambda1 < 0)
        all_match = all_match and match
        rows.append([c, eig.lambda1, exists, match])
    write_csv(out / "dichotomy.csv", ["c", "lambda1", "steady_exists", "match"], rows)
    return Report("dichotomy", cfg.sha256, seed,
                  verdicts={"dichotomy": all_match},
                  measured={"rows": rows}, files=["dichotomy.csv"])


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

SCENARIOS = {
    "eig": run_eig,
    "gap": run_gap,
    "simulate": run_simulate,
    "steady": run_steady,
    "entropy_check": run_entropy_check,
    "epsilon_sweep": run_epsilon_sweep,
    "convergence_study": run_convergence_study,
    "dichotomy": run_dichotomy,
}


def run(cfg: ExperimentConfig, out_dir: str | Path = ".", seed: int | None = None,
        traj_path: str | None = None) -> Report:
    """Execute the scenario named by the config; returns the Report."""
    scenario = cfg.get_str("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}", cfg.path)
    if seed is None:
        seed = cfg.get_int("seed", 0)
    else:
        cfg.get_int("seed", 0)  # consume the key if present; CLI overrides
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if scenario == "entropy_check":
        report = run_entropy_check(cfg, out, seed, traj_path=traj_path)
    else:
        report = SCENARIOS[scenario](cfg, out, seed)
    cfg.require_all_consumed()
    report_path = out / f"{scenario}_full_report.json"
    report_path.write_text(report.to_json())
    report.files.append(report_path.name)
    return report
