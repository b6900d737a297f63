"""Cell-centered discretization of an interval and the Neumann diffusion operator.

The grid partitions [a, b] into n equal cells with midpoint quadrature.
The diffusion operator d/dx(A(x) d/dx .) is discretized in conservative
flux form with zero-flux boundary faces, which makes it exactly
self-adjoint, mass-conserving and negative semidefinite on the discrete
level (constants span its kernel).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky_banded, cho_solve_banded, solve_banded

from .errors import InvalidDomain, LengthMismatch, NotElliptic, SingularSystem


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered partition of [a, b] with n cells.

    Cell centers sit at a + (i + 1/2) dx and every quadrature weight
    equals dx, so the weights sum to b - a exactly up to rounding.
    """

    a: float
    b: float
    n: int
    centers: np.ndarray = field(repr=False)
    dx: float
    weights: np.ndarray = field(repr=False)


def build_grid(a: float, b: float, n: int) -> Grid1D:
    """Build the uniform grid; requires b > a and n >= 2."""
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise InvalidDomain(f"need finite b > a, got [{a}, {b}]")
    if n < 2:
        raise InvalidDomain(f"need at least 2 cells, got n={n}")
    dx = (b - a) / n
    centers = a + (np.arange(n) + 0.5) * dx
    weights = np.full(n, dx)
    return Grid1D(a=float(a), b=float(b), n=int(n), centers=centers, dx=dx, weights=weights)


@dataclass(frozen=True)
class Field:
    """Real-valued function sampled at the cell centers of a grid."""

    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise LengthMismatch(
                f"field has {values.shape} values for a grid of {self.grid.n} cells"
            )
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)


def quadrature(f: Field) -> float:
    """Midpoint-rule integral over the domain, exact for degree <= 1."""
    return float(f.grid.dx * np.sum(f.values))


def inner(f: Field, g: Field) -> float:
    """Weighted inner product <f, g>_w = sum_i w_i f_i g_i."""
    return float(f.grid.dx * np.dot(f.values, g.values))


def norm2(f: Field) -> float:
    """Weighted L2 norm sqrt(<f, f>_w)."""
    return float(np.sqrt(f.grid.dx) * np.linalg.norm(f.values))


@dataclass(frozen=True)
class DiffusionOperator:
    """Discrete d/dx(A d/dx .) with homogeneous Neumann boundary conditions.

    face_coefficients holds A at the n+1 cell faces; the two boundary
    faces carry coefficient zero, which drops the boundary flux terms.
    The tridiagonal action is

        (Lu)_i = [A_{i+1/2}(u_{i+1}-u_i) - A_{i-1/2}(u_i-u_{i-1})] / dx^2.
    """

    grid: Grid1D
    face_coefficients: np.ndarray = field(repr=False)
    lower: np.ndarray = field(repr=False)  # coefficient of u_{i-1}
    diag: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)  # coefficient of u_{i+1}

    def apply(self, u: np.ndarray) -> np.ndarray:
        # flux-difference form: exactly zero on constant fields
        out = np.zeros_like(u)
        du = u[1:] - u[:-1]
        out[1:] += self.lower[1:] * (-du)
        out[:-1] += self.upper[:-1] * du
        return out

    def apply_field(self, u: Field) -> Field:
        return Field(self.grid, self.apply(u.values))

    def dense(self) -> np.ndarray:
        """Dense matrix form; intended for small-n oracles and tests."""
        m = np.diag(self.diag)
        m += np.diag(self.lower[1:], k=-1)
        m += np.diag(self.upper[:-1], k=1)
        return m


def bands_from_faces(grid: Grid1D, faces: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tridiagonal bands of the flux-form operator for given face coefficients.

    The diagonal is the negated sum of the scaled off-diagonals, so
    constants lie in the kernel exactly in floating point.
    """
    inv = 1.0 / grid.dx**2
    lower = faces[:-1] * inv
    upper = faces[1:] * inv
    diag = -(lower + upper)
    return lower, diag, upper


def assemble_diffusion(grid: Grid1D, coefficient: Field | np.ndarray) -> DiffusionOperator:
    """Assemble the Neumann diffusion operator from cell values of A.

    Interior face values are arithmetic means of the adjacent cell values;
    boundary faces are zero (no flux). Raises NotElliptic when any interior
    face coefficient is nonpositive.
    """
    a_cells = coefficient.values if isinstance(coefficient, Field) else np.asarray(coefficient, float)
    if a_cells.shape != (grid.n,):
        raise LengthMismatch(f"coefficient has {a_cells.shape} values, grid has {grid.n} cells")
    faces = np.zeros(grid.n + 1)
    faces[1:-1] = 0.5 * (a_cells[:-1] + a_cells[1:])
    if np.min(faces[1:-1]) <= 0.0:
        raise NotElliptic(f"min interior face coefficient {np.min(faces[1:-1])} <= 0")
    lower, diag, upper = bands_from_faces(grid, faces)
    return DiffusionOperator(grid=grid, face_coefficients=faces,
                             lower=lower, diag=diag, upper=upper)


class ShiftedSolver:
    """Prefactored direct solver for (sigma I - L) x = rhs.

    Uses a banded Cholesky factorization when the shifted matrix is
    positive definite (always the case for sigma > 0 since L <= 0) and
    falls back to banded LU otherwise.
    """

    def __init__(self, op: DiffusionOperator, sigma: float,
                 extra_diagonal: np.ndarray | None = None):
        self.sigma = float(sigma)
        n = op.grid.n
        diag = self.sigma - op.diag
        if extra_diagonal is not None:
            diag = diag - extra_diagonal
        ab = np.zeros((2, n))
        ab[0, 1:] = -op.upper[:-1]
        ab[1, :] = diag
        self._cho = None
        self._lu_ab = None
        try:
            self._cho = cholesky_banded(ab, check_finite=False)
        except np.linalg.LinAlgError:
            full = np.zeros((3, n))
            full[0, 1:] = -op.upper[:-1]
            full[1, :] = diag
            full[2, :-1] = -op.lower[1:]
            self._lu_ab = full

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        try:
            if self._cho is not None:
                x = cho_solve_banded((self._cho, False), rhs, check_finite=False)
            else:
                x = solve_banded((1, 1), self._lu_ab, rhs, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"shifted solve failed: {exc}") from exc
        if not np.all(np.isfinite(x)):
            raise SingularSystem("shifted solve produced non-finite values")
        return x


def solve_shifted(op: DiffusionOperator, sigma: float, rhs: Field) -> Field:
    """Solve (sigma I - L) u = rhs by a direct tridiagonal factorization."""
    solver = ShiftedSolver(op, sigma)
    return Field(op.grid, solver.solve(rhs.values))
