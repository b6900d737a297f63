"""Relative-entropy functionals, dissipation, and the orthogonal decomposition.

For a positive stationary reference ubar, trajectories are monitored via

    H_q[ubar, u] = int ubar^2 (u/ubar)^q,
    D(u)         = int ubar^2 H''(u/ubar) (d(u/ubar))' A (d(u/ubar)),
    F(u)         = log(H_q / H_1^q),
    Gamma(x)     = Psi(x, ubar) - Psi(x, u),

together with the splitting u = lambda(t) ubar + h, <h, ubar>_w = 0.
The balance  dH_q/dt = -D + int ubar H'(u/ubar) Gamma u  holds exactly for
solutions; its discrete residual is the consistency check of record.

Discrete detail that matters: the dissipation pairs ubar at faces as the
product ubar_i ubar_{i+1}. With that pairing the q = 2 summation-by-parts
identity holds exactly on the grid, and the quadratic form coincides with
the weighted-gap operator of the spectral module, so the Poincare bound
D_h >= rho1 ||h||^2 carries no quadrature slack.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import (DegenerateState, NotPositiveReference,
                     NotStationaryReference, UnsupportedExponent, ZeroReference)
from .grid import DiffusionOperator, Field, inner, norm2
from .selection import BlindKernel, Kernel, psi


def _require_positive_reference(ubar: Field) -> None:
    if np.min(ubar.values) <= 0:
        raise NotPositiveReference(f"reference must be positive, min = {np.min(ubar.values)}")


def entropy_H(q: float, ubar: Field, u: Field) -> float:
    """H_q[ubar, u] = sum_i w_i ubar_i^2 (u_i/ubar_i)^q."""
    _require_positive_reference(ubar)
    ratio = u.values / ubar.values
    return float(u.grid.dx * np.sum(ubar.values**2 * ratio**q))


def dissipation_D(q: float, ubar: Field, u: Field, op: DiffusionOperator) -> float:
    """Discrete Dirichlet form draining H_q, with H(s) = s^q.

    Face values: A from the assembled operator's interior faces, the
    ubar^2 weight as the product of adjacent cell values, and H''(u/ubar)
    as the mean of the adjacent cell values. Requires u > 0 when q < 2
    (H'' is singular at zero ratio).
    """
    _require_positive_reference(ubar)
    if q == 1.0:
        return 0.0
    grid = u.grid
    ratio = u.values / ubar.values
    hdd = q * (q - 1.0) * ratio ** (q - 2.0)
    a_face = op.face_coefficients[1:-1]
    w_face = ubar.values[:-1] * ubar.values[1:]
    h_face = 0.5 * (hdd[:-1] + hdd[1:])
    dr = np.diff(ratio)
    return float(np.sum(a_face * w_face * h_face * dr * dr) / grid.dx)


def h_dirichlet_form(h: Field, ubar: Field, op: DiffusionOperator) -> float:
    """int ubar^2 (d(h/ubar))' A (d(h/ubar)) with the same face pairing as D."""
    _require_positive_reference(ubar)
    ratio = h.values / ubar.values
    a_face = op.face_coefficients[1:-1]
    w_face = ubar.values[:-1] * ubar.values[1:]
    dr = np.diff(ratio)
    return float(np.sum(a_face * w_face * dr * dr) / h.grid.dx)


def lyapunov_F(q: float, ubar: Field, u: Field) -> float:
    """Scale-invariant functional log(H_q / H_1^q); requires q > 1."""
    h1 = entropy_H(1.0, ubar, u)
    if h1 <= 0:
        raise DegenerateState(f"H_1 = {h1} is not positive")
    hq = entropy_H(q, ubar, u)
    return float(np.log(hq) - q * np.log(h1))


def gamma_range(ubar: Field, u: Field, kernel: Kernel, p: float) -> tuple[float, float]:
    """Componentwise range of Gamma = Psi(x, ubar) - Psi(x, u)."""
    g = psi(kernel, ubar, p).values - psi(kernel, u, p).values
    return float(np.min(g)), float(np.max(g))


@dataclass(frozen=True)
class Decomposition:
    """u = lam * ubar + h with h orthogonal to ubar in the weighted inner product."""

    lam: float
    h: Field


def decompose(u: Field, ubar: Field) -> Decomposition:
    denom = inner(ubar, ubar)
    if denom == 0.0:
        raise ZeroReference("reference field has zero norm")
    lam = inner(u, ubar) / denom
    return Decomposition(lam=lam, h=Field(u.grid, u.values - lam * ubar.values))


@dataclass(frozen=True)
class EntropySample:
    """Per-snapshot record of the entropy diagnostics."""

    t: float
    h_q: dict[float, float]
    h1: float
    d: float
    f: float
    gamma_min: float
    gamma_max: float
    lam: float
    h_norm2: float


def collect_sample(t: float, u: Field, ubar: Field, kernel: Kernel, p: float,
                   op: DiffusionOperator,
                   q_list: tuple[float, ...] = (1.0, 2.0, 4.0),
                   f_q: float = 2.0) -> EntropySample:
    """Evaluate every EntropySample entry at one snapshot."""
    h_q = {float(q): entropy_H(q, ubar, u) for q in q_list}
    h1 = h_q.get(1.0, entropy_H(1.0, ubar, u))
    gmin, gmax = gamma_range(ubar, u, kernel, p)
    dec = decompose(u, ubar)
    f = lyapunov_F(f_q, ubar, u) if h1 > 0 else float("nan")
    return EntropySample(
        t=t, h_q=h_q, h1=h1,
        d=dissipation_D(2.0, ubar, u, op),
        f=f, gamma_min=gmin, gamma_max=gmax,
        lam=dec.lam, h_norm2=norm2(dec.h),
    )


def check_stationary_reference(ubar: Field, r: Field, kernel: Kernel, p: float,
                               op: DiffusionOperator, tol: float) -> float:
    res = op.apply(ubar.values) + ubar.values * (r.values - psi(kernel, ubar, p).values)
    resnorm = float(np.max(np.abs(res)))
    if resnorm > tol:
        raise NotStationaryReference(
            f"reference stationary residual {resnorm:.3e} exceeds {tol:.1e}"
        )
    return resnorm


def identity_residual(traj: list[tuple[float, Field]], q: float, ubar: Field,
                      kernel: Kernel, p: float, op: DiffusionOperator, r: Field,
                      stationarity_tol: float = 1e-6) -> np.ndarray:
    """Residual of the entropy balance at each interior snapshot.

    traj holds (t, u) pairs at a uniform recording interval. The time
    derivative of H_q is centered; the dissipation and the Gamma term are
    evaluated at the middle snapshot.
    """
    check_stationary_reference(ubar, r, kernel, p, op, stationarity_tol)
    if len(traj) < 3:
        raise ValueError("need at least 3 snapshots for a centered difference")
    times = np.array([t for t, _ in traj])
    dts = np.diff(times)
    if np.max(np.abs(dts - dts[0])) > 1e-9 * max(1.0, abs(dts[0])):
        raise ValueError("snapshots are not uniformly spaced in time")
    dt = dts[0]
    hq = np.array([entropy_H(q, ubar, u) for _, u in traj])
    res = np.empty(len(traj) - 2)
    ub = ubar.values
    for k in range(1, len(traj) - 1):
        u = traj[k][1]
        dH = (hq[k + 1] - hq[k - 1]) / (2.0 * dt)
        d = dissipation_D(q, ubar, u, op)
        gamma = psi(kernel, ubar, p).values - psi(kernel, u, p).values
        ratio = u.values / ub
        gterm = u.grid.dx * np.sum(ub * q * ratio ** (q - 1.0) * gamma * u.values)
        res[k - 1] = abs(dH + d - gterm)
    return res


def lambda_ode_rhs(lam: float, h: Field, ubar: Field, kernel: Kernel,
                   p: int) -> tuple[float, float, float]:
    """Pieces of the projection ODE lambda' = main + R1 + R2 for p in {1, 2}.

    main carries the logistic structure (1 - lambda^p); R1 collects the
    Gamma-weighted h component; R2 the binomial cross terms in h. The
    three pieces sum exactly to <Gamma ubar u> / ||ubar||^2 with
    u = lam ubar + h, which is the projected time derivative.
    """
    if p not in (1, 2):
        raise UnsupportedExponent(f"p must be 1 or 2, got {p}")
    _require_positive_reference(ubar)
    grid = ubar.grid
    ub = ubar.values
    nb2 = inner(ubar, ubar)
    u = Field(grid, lam * ub + h.values)
    psi_bar = psi(kernel, ubar, p).values
    psi_u = psi(kernel, u, p).values
    psitilde = grid.dx * float(np.sum(psi_bar * ub * ub))
    main = psitilde * lam * (1.0 - lam**p) / nb2
    r1 = grid.dx * float(np.sum((psi_bar - psi_u) * ub * h.values)) / nb2
    blind = isinstance(kernel, BlindKernel)
    kmat = None if blind else kernel.matrix()
    w = grid.dx
    inner_sum = np.zeros(grid.n)
    for k in range(1, p + 1):
        moment = ub ** (p - k) * h.values**k * w
        if blind:
            contrib = float(np.dot(kernel.k.values, moment)) * np.ones(grid.n)
        else:
            contrib = kmat @ moment
        inner_sum += comb(p, k) * lam ** (p - k) * contrib
    r2 = -lam * w * float(np.sum(inner_sum * ub * ub)) / nb2
    return main, r1, r2
