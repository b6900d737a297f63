"""Numerical laboratory for a nonlocal mutation-selection equation on [a, b].

Core objects: a cell-centered grid with a conservative Neumann diffusion
operator, competition kernels with the selection functional, the principal
eigenpair driving persistence vs extinction, positivity-preserving IMEX
dynamics, relative-entropy diagnostics, and steady-state solvers (blind
closed form and homotopy continuation), orchestrated by an experiment
harness with a `mutsel` CLI.
"""

from .coefficients import sample
from .dynamics import (Coefficients, Convergence, SimConfig, SimResult,
                       SimState, frozen_nonlocal_iteration, simulate, step_imex)
from .entropy import (Decomposition, EntropySample, collect_sample, decompose,
                      dissipation_D, entropy_H, gamma_range, h_dirichlet_form,
                      identity_residual, lambda_ode_rhs, lyapunov_F)
from .grid import (DiffusionOperator, Field, Grid1D, assemble_diffusion,
                   build_grid, inner, norm2, quadrature, solve_shifted)
from .harness import Report, random_positive_field, run, seeded_rng
from .selection import (BlindKernel, GeneralKernel, Kernel, PerturbedKernel,
                        alpha_bounds, make_kernel, psi)
from .spectral import EigenPair, SpectralGap, principal_eigenpair, spectral_gap
from .steady import (AprioriReport, SteadyState, apriori_check, blind_steady,
                     homotopy_steady, stationary_residual)

__all__ = [
    "AprioriReport", "BlindKernel", "Coefficients", "Convergence",
    "Decomposition", "DiffusionOperator", "EigenPair", "EntropySample",
    "Field", "GeneralKernel", "Grid1D", "Kernel", "PerturbedKernel",
    "Report", "SimConfig", "SimResult", "SimState", "SpectralGap",
    "SteadyState", "alpha_bounds", "apriori_check", "assemble_diffusion",
    "blind_steady", "build_grid", "collect_sample", "decompose",
    "dissipation_D", "entropy_H", "frozen_nonlocal_iteration", "gamma_range",
    "h_dirichlet_form", "homotopy_steady", "identity_residual", "inner",
    "lambda_ode_rhs", "lyapunov_F", "make_kernel", "norm2",
    "principal_eigenpair", "psi", "quadrature", "random_positive_field",
    "run", "sample", "seeded_rng", "simulate", "solve_shifted",
    "spectral_gap", "stationary_residual", "step_imex",
]
