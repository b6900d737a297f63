"""Principal eigenpair of the linearized operator and the weighted spectral gap.

The sign convention follows the persistence criterion: lambda1 is the
number with  d/dx(A d/dx phi1) + r phi1 = -lambda1 phi1,  so lambda1 < 0
means growth at low density. For a strictly positive weight vbar the gap
constant rho1 is the second eigenvalue of

    g -> -(1/vbar^2) d/dx(A vbar^2 d/dx g),

whose ground state is (0, constant); in h = vbar * g coordinates the
ground pair is (0, vbar) and rho1 gives the Poincare inequality

    rho1 ||h||_2^2 <= int vbar^2 (d(h/vbar))' A (d(h/vbar))
                              for all h with <h, vbar>_w = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGap, NoConvergence, NotPositiveWeight
from .grid import (DiffusionOperator, Field, Grid1D, ShiftedSolver,
                   bands_from_faces)


@dataclass(frozen=True)
class EigenPair:
    """Principal eigenvalue with its positive, sup-normalized eigenfunction."""

    lambda1: float
    phi1: Field
    residual: float
    iterations: int


@dataclass(frozen=True)
class SpectralGap:
    """Gap constant rho1 = lambda2 of the weighted problem, with eigenfunction."""

    rho1: float
    psi2: Field
    residual: float
    iterations: int


def principal_eigenpair(op: DiffusionOperator, r: Field, tol_eig: float = 1e-10,
                        max_iterations: int = 10000,
                        start: np.ndarray | None = None) -> EigenPair:
    """Compute (lambda1, phi1) by shifted inverse power iteration.

    The shift sigma0 = max(r) + 1 dominates the spectrum of L + diag(r),
    so (sigma0 I - L - diag(r)) is an M-matrix and its inverse maps
    positive vectors to positive vectors; the iteration converges to the
    Perron eigenvector from any positive start.

    The stored residual is ||L phi + r phi + lambda1 phi||_inf for the
    sup-normalized phi, divided by the operator sup-norm scale: float64
    cannot evaluate the raw residual below eps * ||L|| (about 2e-10 at
    n = 512 already), so the tolerance is scale-relative.
    """
    if tol_eig <= 0:
        raise ValueError("tol_eig must be positive")
    rv = r.values
    sigma0 = float(np.max(rv)) + 1.0
    solver = ShiftedSolver(op, sigma0, extra_diagonal=rv)
    scale = max(1.0, float(np.max(op.lower + op.upper + np.abs(op.diag + rv))))

    def advance(x):
        y = solver.solve(x)
        y /= np.linalg.norm(y)
        my = op.apply(y) + rv * y
        lam = float(np.dot(y, my))
        res = float(np.max(np.abs(my - lam * y))) / float(np.max(np.abs(y))) / scale
        return y, lam, res

    x = np.ones(op.grid.n) if start is None else np.asarray(start, dtype=float)
    if np.min(x) <= 0:
        raise ValueError("start vector must be positive")
    x = x / np.linalg.norm(x)
    residual = np.inf
    for it in range(1, max_iterations + 1):
        x, lam, residual = advance(x)
        if residual <= tol_eig:
            break
    else:
        raise NoConvergence(
            f"eigen-residual {residual:.3e} > {tol_eig:.1e} after {max_iterations} iterations"
        )
    # polish to the rounding floor so different starts coincide to rounding,
    # not merely to the tolerance
    for _ in range(50):
        y, lam2, res2 = advance(x)
        if res2 >= 0.5 * residual:
            break
        x, lam, residual = y, lam2, res2
    phi = x / np.max(np.abs(x))
    return EigenPair(lambda1=-lam, phi1=Field(op.grid, phi),
                     residual=residual, iterations=it)


def weighted_operator_bands(a_cells: np.ndarray, vbar: np.ndarray,
                            grid: Grid1D) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bands of S = -diag(1/vbar) L_w diag(1/vbar) acting in h-coordinates.

    L_w is the flux-form operator with interior face coefficient
    mean(A) * vbar_i vbar_{i+1}. The product pairing (rather than the mean
    of vbar^2) makes the quadratic form <S h, h> agree exactly with the
    discrete entropy dissipation, so the gap inequality holds with no
    quadrature slack.
    """
    n = grid.n
    faces = np.zeros(n + 1)
    faces[1:-1] = 0.5 * (a_cells[:-1] + a_cells[1:]) * (vbar[:-1] * vbar[1:])
    lower, diag, upper = bands_from_faces(grid, faces)
    iv = 1.0 / vbar
    s_lower = np.zeros(n)
    s_upper = np.zeros(n)
    s_lower[1:] = -lower[1:] * iv[1:] * iv[:-1]
    s_upper[:-1] = -upper[:-1] * iv[:-1] * iv[1:]
    s_diag = -diag * iv * iv
    return s_lower, s_diag, s_upper


def _apply_bands(bands: tuple[np.ndarray, np.ndarray, np.ndarray],
                 u: np.ndarray) -> np.ndarray:
    lower, diag, upper = bands
    out = diag * u
    out[1:] += lower[1:] * u[:-1]
    out[:-1] += upper[:-1] * u[1:]
    return out


def spectral_gap(vbar: Field, a_cells: Field | np.ndarray, tol: float = 1e-10,
                 max_iterations: int = 20000, seed: int = 0) -> SpectralGap:
    """Second eigenvalue of the vbar-weighted problem by deflated inverse iteration.

    The known ground state (eigenvalue 0, eigenvector vbar in h-coordinates)
    is projected out every iteration; a small diagonal shift keeps the
    factorization positive definite.
    """
    grid = vbar.grid
    vv = vbar.values
    if np.min(vv) <= 0:
        raise NotPositiveWeight(f"weight must be strictly positive, min = {np.min(vv)}")
    av = a_cells.values if isinstance(a_cells, Field) else np.asarray(a_cells, float)
    bands = weighted_operator_bands(av, vv, grid)
    n = grid.n
    z1 = vv / np.linalg.norm(vv)
    scale = float(np.max(np.abs(bands[1])))
    shift = 1e-8 * scale
    from scipy.linalg import cholesky_banded, cho_solve_banded

    ab = np.zeros((2, n))
    ab[0, 1:] = bands[2][:-1]
    ab[1, :] = bands[1] + shift
    fac = cholesky_banded(ab, check_finite=False)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x -= np.dot(x, z1) * z1
    x /= np.linalg.norm(x)
    rho = 0.0
    for it in range(1, max_iterations + 1):
        y = cho_solve_banded((fac, False), x, check_finite=False)
        y -= np.dot(y, z1) * z1
        y /= np.linalg.norm(y)
        sy = _apply_bands(bands, y)
        rho = float(np.dot(y, sy))
        residual = float(np.max(np.abs(sy - rho * y)))
        x = y
        if residual <= tol * max(1.0, abs(rho)):
            break
    else:
        raise NoConvergence(
            f"gap residual {residual:.3e} > {tol:.1e} after {max_iterations} iterations"
        )
    if rho <= tol * scale:
        raise DegenerateGap(f"second eigenvalue {rho:.3e} is not positive")
    return SpectralGap(rho1=rho, psi2=Field(grid, x), residual=residual, iterations=it)
