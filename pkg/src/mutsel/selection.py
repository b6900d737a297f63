"""Competition kernels and the nonlocal selection functional.

The selection pressure felt at trait x is

    Psi(x, u) = integral K(x, y) |u(y)|^p dy,

discretized with the grid quadrature. Three kernel forms are supported:
blind k(y) (independent of x), the perturbed family k0(y) + eps k1(x, y),
and a general positive matrix K(x_i, y_j) sampled on the grid tensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotPositiveWeight, UnknownSpec
from .coefficients import sample, split_top_level
from .grid import Field, Grid1D


@dataclass(frozen=True)
class BlindKernel:
    """K(x, y) = k(y); the selection pressure is constant in x."""

    k: Field

    def matrix(self) -> np.ndarray:
        n = self.k.grid.n
        return np.tile(self.k.values, (n, 1))


@dataclass(frozen=True)
class PerturbedKernel:
    """K(x, y) = k0(y) + eps k1(x, y) with k0 + eps k1 > 0 entrywise."""

    k0: Field
    k1: np.ndarray = field(repr=False)  # n x n samples at (x_i, y_j)
    eps: float

    def matrix(self) -> np.ndarray:
        n = self.k0.grid.n
        return np.tile(self.k0.values, (n, 1)) + self.eps * self.k1

    def k1_sup(self) -> float:
        return float(np.max(np.abs(self.k1)))


@dataclass(frozen=True)
class GeneralKernel:
    """Positive kernel sampled on the grid tensor, K[i, j] = K(x_i, y_j)."""

    grid: Grid1D
    K: np.ndarray = field(repr=False)

    def matrix(self) -> np.ndarray:
        return self.K


Kernel = BlindKernel | PerturbedKernel | GeneralKernel


def kernel_grid(kernel: Kernel) -> Grid1D:
    if isinstance(kernel, BlindKernel):
        return kernel.k.grid
    if isinstance(kernel, PerturbedKernel):
        return kernel.k0.grid
    return kernel.grid


def validate_kernel(kernel: Kernel) -> None:
    """Check the entrywise positivity hypotheses."""
    if isinstance(kernel, BlindKernel):
        if np.min(kernel.k.values) <= 0:
            raise NotPositiveWeight("blind kernel k must be positive everywhere")
    elif isinstance(kernel, PerturbedKernel):
        if np.min(kernel.k0.values) <= 0:
            raise NotPositiveWeight("perturbed kernel needs k0 > 0")
        if np.min(kernel.matrix()) <= 0:
            raise NotPositiveWeight("perturbed kernel needs k0 + eps*k1 > 0 entrywise")
    else:
        if np.min(kernel.K) <= 0:
            raise NotPositiveWeight("general kernel must be positive entrywise")


def power_abs(u: np.ndarray, p: float) -> np.ndarray:
    """|u|^p, exact 0 at u = 0, valid for any real p >= 1."""
    return np.abs(u) ** p


def psi(kernel: Kernel, u: Field, p: float) -> Field:
    """Selection functional Psi_i = sum_j w_j K(x_i, y_j) |u_j|^p."""
    grid = u.grid
    up = power_abs(u.values, p) * grid.dx
    if isinstance(kernel, BlindKernel):
        value = float(np.dot(kernel.k.values, up))
        return Field(grid, np.full(grid.n, value))
    if isinstance(kernel, PerturbedKernel):
        base = float(np.dot(kernel.k0.values, up))
        return Field(grid, base + kernel.eps * (kernel.k1 @ up))
    return Field(grid, kernel.K @ up)


def alpha_bounds(kernel: PerturbedKernel, u: Field, p: float) -> tuple[float, float]:
    """Bracketing rates integral (k0 -+ eps ||k1||_inf) |u|^p dy."""
    up = power_abs(u.values, p) * u.grid.dx
    base = float(np.dot(kernel.k0.values, up))
    spread = kernel.eps * kernel.k1_sup() * float(np.sum(up))
    return base - spread, base + spread


# ---------------------------------------------------------------------------
# kernel specs
#
#   blind(<coefficient-spec>)
#   perturbed(<k0 coefficient-spec>, <k1 2-D spec>, eps)
#   general(<2-D spec>)
#
# 2-D specs: const2(c); sepcos(c) meaning 1 + c cos(pi xhat) cos(pi yhat)
# with xhat, yhat normalized to [0, 1]; tabulated2(path) reading a CSV matrix.
# ---------------------------------------------------------------------------

def sample2d(spec: str, grid: Grid1D) -> np.ndarray:
    spec = spec.strip()
    if spec.startswith("const2(") and spec.endswith(")"):
        c = float(spec[len("const2("):-1])
        return np.full((grid.n, grid.n), c)
    if spec.startswith("sepcos(") and spec.endswith(")"):
        c = float(spec[len("sepcos("):-1])
        xhat = (grid.centers - grid.a) / (grid.b - grid.a)
        cx = np.cos(math.pi * xhat)
        return 1.0 + c * np.outer(cx, cx)
    if spec.startswith("tabulated2(") and spec.endswith(")"):
        path = spec[len("tabulated2("):-1].strip()
        mat = np.loadtxt(path, delimiter=",", ndmin=2)
        if mat.shape != (grid.n, grid.n):
            raise UnknownSpec(f"tabulated2 matrix {mat.shape} does not match grid n={grid.n}")
        return mat
    raise UnknownSpec(f"unknown 2-D kernel spec {spec!r}")


def make_kernel(spec: str, grid: Grid1D) -> Kernel:
    """Parse a kernel spec string into a sampled kernel."""
    spec = spec.strip()
    if spec.startswith("blind(") and spec.endswith(")"):
        kernel = BlindKernel(sample(spec[len("blind("):-1], grid))
    elif spec.startswith("general(") and spec.endswith(")"):
        kernel = GeneralKernel(grid, sample2d(spec[len("general("):-1], grid))
    elif spec.startswith("perturbed(") and spec.endswith(")"):
        parts = split_top_level(spec[len("perturbed("):-1])
        if len(parts) != 3:
            raise UnknownSpec(f"perturbed(...) takes 3 arguments, got {len(parts)}")
        k0 = sample(parts[0], grid)
        k1 = sample2d(parts[1], grid)
        kernel = PerturbedKernel(k0=k0, k1=k1, eps=float(parts[2]))
    else:
        raise UnknownSpec(f"unknown kernel spec {spec!r}")
    validate_kernel(kernel)
    return kernel
