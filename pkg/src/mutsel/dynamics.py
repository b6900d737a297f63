"""Time integration of the mutation-selection dynamics.

One step splits the flow into an exactly integrated reaction with the
selection pressure frozen at the current state,

    u* = u exp(dt (r - Psi(x, u))),

followed by implicit diffusion (I - dt L) u_new = u*. Both substeps map
nonnegative states to nonnegative states for every dt, so positivity is
unconditional. The appendix-style construction that freezes Psi along the
whole previous trajectory is provided as an alternate integrator for
cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BlowUp, NonFiniteState
from .entropy import EntropySample, collect_sample
from .grid import (DiffusionOperator, Field, Grid1D, ShiftedSolver,
                   assemble_diffusion)
from .selection import BlindKernel, Kernel, psi

SUP_BLOWUP = 1e12

TARGETS = ("steady_blind", "steady_general", "extinction", "none")


@dataclass(frozen=True)
class Coefficients:
    """Growth rate r, diffusion coefficient A (cells + assembled operator), exponent p."""

    r: Field
    a: Field
    p: float
    op: DiffusionOperator

    @staticmethod
    def build(grid: Grid1D, r: Field, a: Field, p: float) -> "Coefficients":
        return Coefficients(r=r, a=a, p=float(p), op=assemble_diffusion(grid, a))


@dataclass(frozen=True)
class Convergence:
    """Stopping rule: a named target with tolerance, or stationarity fallback.

    target_field supplies the reference state explicitly; otherwise
    steady_blind computes the closed form and steady_general runs the
    homotopy solver once at startup.
    """

    target: str = "none"
    tol: float = 0.0
    target_field: Field | None = None

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown convergence target {self.target!r}")


@dataclass(frozen=True)
class SimConfig:
    grid: Grid1D
    coeffs: Coefficients
    kernel: Kernel
    u0: Field
    dt: float
    t_end: float
    record_every: int = 1
    convergence: Convergence = dc_field(default_factory=Convergence)
    q_list: tuple[float, ...] = (1.0, 2.0, 4.0)

    def __post_init__(self):
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        u0 = self.u0.values
        if np.min(u0) < 0 or not np.any(u0 > 0):
            raise ValueError("u0 must be nonnegative and not identically zero")


@dataclass(frozen=True)
class SimState:
    t: float
    u: Field
    step: int


@dataclass
class SimResult:
    trajectory: list[SimState]
    samples: list[EntropySample]
    converged: bool
    target: str
    t_final: float
    distance_to_target: float
    reference: Field | None


def _step_values(u: np.ndarray, rv: np.ndarray, psi_values: np.ndarray,
                 dt: float, solver: ShiftedSolver) -> np.ndarray:
    ustar = u * np.exp(dt * (rv - psi_values))
    unew = solver.solve(ustar / dt)
    if not np.all(np.isfinite(unew)):
        raise NonFiniteState("state contains NaN or Inf after step")
    return unew


def step_imex(state: SimState, cfg: SimConfig) -> SimState:
    """Advance one step; splitting error O(dt), positivity exact."""
    solver = ShiftedSolver(cfg.coeffs.op, 1.0 / cfg.dt)
    pv = psi(cfg.kernel, state.u, cfg.coeffs.p).values
    unew = _step_values(state.u.values, cfg.coeffs.r.values, pv, cfg.dt, solver)
    return SimState(t=state.t + cfg.dt, u=Field(cfg.grid, unew), step=state.step + 1)


def _resolve_reference(cfg: SimConfig) -> tuple[Field | None, Field | None]:
    """(target field for stopping, positive reference for diagnostics)."""
    from . import steady, spectral  # local import: steady depends on this module's types

    conv = cfg.convergence
    target_field = conv.target_field
    if target_field is None and conv.target == "steady_blind":
        eig = spectral.principal_eigenpair(cfg.coeffs.op, cfg.coeffs.r)
        if not isinstance(cfg.kernel, BlindKernel):
            raise ValueError("steady_blind target needs a blind kernel")
        target_field = steady.blind_steady(eig, cfg.kernel.k, cfg.coeffs.p, cfg.coeffs).ubar
    elif target_field is None and conv.target == "steady_general":
        target_field = steady.homotopy_steady(cfg.kernel, cfg.coeffs, cfg.grid).ubar

    if target_field is not None and np.min(target_field.values) > 0:
        return target_field, target_field

    # diagnostics still need a positive reference: the blind steady state
    # when it exists, the principal eigenfunction otherwise
    eig = spectral.principal_eigenpair(cfg.coeffs.op, cfg.coeffs.r)
    if eig.lambda1 < 0 and isinstance(cfg.kernel, BlindKernel):
        reference = steady.blind_steady(eig, cfg.kernel.k, cfg.coeffs.p, cfg.coeffs).ubar
    else:
        reference = eig.phi1
    return target_field, reference


def simulate(cfg: SimConfig) -> SimResult:
    """Integrate to t_end or until the convergence target is met."""
    target_field, reference = _resolve_reference(cfg)
    conv = cfg.convergence
    rv = cfg.coeffs.r.values
    p = cfg.coeffs.p
    solver = ShiftedSolver(cfg.coeffs.op, 1.0 / cfg.dt)
    n_steps = int(round(cfg.t_end / cfg.dt))

    trajectory: list[SimState] = []
    samples: list[EntropySample] = []

    def record(t, u_arr, k):
        fld = Field(cfg.grid, u_arr.copy())
        trajectory.append(SimState(t=t, u=fld, step=k))
        if reference is not None:
            samples.append(collect_sample(t, fld, reference, cfg.kernel, p,
                                          cfg.coeffs.op, cfg.q_list))

    u = cfg.u0.values.copy()
    t = 0.0
    k = 0
    record(t, u, 0)
    converged = False
    distance = np.inf
    last_change = np.inf
    for k in range(1, n_steps + 1):
        pv = psi(cfg.kernel, Field(cfg.grid, u), p).values
        unew = _step_values(u, rv, pv, cfg.dt, solver)
        last_change = float(np.max(np.abs(unew - u))) / cfg.dt
        u = unew
        t = k * cfg.dt
        sup = float(np.max(np.abs(u)))
        if sup > SUP_BLOWUP:
            raise BlowUp(f"sup |u| = {sup:.3e} at t = {t}")
        if k % cfg.record_every == 0:
            record(t, u, k)
        if conv.target in ("steady_blind", "steady_general") and target_field is not None:
            distance = float(np.max(np.abs(u - target_field.values)))
            if distance <= conv.tol:
                converged = True
        elif conv.target == "extinction":
            distance = sup
            if sup <= conv.tol:
                converged = True
        elif conv.target == "none" and conv.tol > 0:
            distance = last_change
            if last_change <= conv.tol:
                converged = True
        if converged:
            break
    if trajectory[-1].step != k:
        record(t, u, k)
    return SimResult(trajectory=trajectory, samples=samples, converged=converged,
                     target=conv.target, t_final=t, distance_to_target=float(distance),
                     reference=reference)


def frozen_nonlocal_iteration(cfg: SimConfig, n_outer: int) -> list[Field]:
    """Outer iteration freezing Psi along the previous iterate's trajectory.

    Round n+1 integrates the linear equation
        du/dt = L u + u (r - Psi(x, u_n(t, .)))
    from the same initial datum; the zeroth trajectory is the initial
    datum held constant in time. Returns each outer iterate at t_end.
    The nonlinear integrator's discrete trajectory is an exact fixed
    point of this map.
    """
    if n_outer < 1:
        raise ValueError("n_outer must be >= 1")
    rv = cfg.coeffs.r.values
    p = cfg.coeffs.p
    solver = ShiftedSolver(cfg.coeffs.op, 1.0 / cfg.dt)
    n_steps = int(round(cfg.t_end / cfg.dt))
    n = cfg.grid.n

    psi_prev = np.tile(psi(cfg.kernel, cfg.u0, p).values, (n_steps, 1))
    finals: list[Field] = []
    for _ in range(n_outer):
        u = cfg.u0.values.copy()
        psi_next = np.empty((n_steps, n))
        for k in range(n_steps):
            psi_next[k] = psi(cfg.kernel, Field(cfg.grid, u), p).values
            u = _step_values(u, rv, psi_prev[k], cfg.dt, solver)
            if float(np.max(np.abs(u))) > SUP_BLOWUP:
                raise BlowUp(f"outer iterate exceeded {SUP_BLOWUP:.0e}")
        psi_prev = psi_next
        finals.append(Field(cfg.grid, u))
    return finals
