import numpy as np
import pytest
from scipy.linalg import eigh, eigh_tridiagonal

from mutsel import (Coefficients, Field, build_grid, inner, principal_eigenpair,
                    sample, spectral_gap)
from mutsel.errors import NotPositiveWeight
from mutsel.spectral import weighted_operator_bands


def make(grid_n, r_spec, a_spec="const(1)", a=0.0, b=1.0):
    g = build_grid(a, b, grid_n)
    return g, Coefficients.build(g, sample(r_spec, g), sample(a_spec, g), 1.0)


@pytest.mark.parametrize("c", [2.0, -0.5])
def test_constant_rate_eigenvalue(c):
    g, co = make(64, f"const({c})", "poly(1,1)")
    eig = principal_eigenpair(co.op, co.r)
    assert abs(eig.lambda1 + c) < 1e-9
    assert np.max(np.abs(eig.phi1.values - 1.0)) < 1e-9


def test_sine_rate_against_dense_oracle():
    g, co = make(512, "const(0)")
    r = Field(g, np.sin(np.pi * g.centers))
    eig = principal_eigenpair(co.op, r)
    # dense full-spectrum oracle on the same tridiagonal matrix
    d = co.op.diag + r.values
    e = co.op.upper[:-1]
    w = eigh_tridiagonal(d, e, eigvals_only=True)
    lam_dense = -w[-1]
    assert abs(eig.lambda1 - lam_dense) < 1e-8
    assert -1.0 < eig.lambda1 < -2.0 / np.pi


def test_shift_monotonicity():
    g, co = make(128, "cos(1,0)", "poly(1,0.5)")
    base = principal_eigenpair(co.op, co.r).lambda1
    shifted = principal_eigenpair(co.op, Field(g, co.r.values + 0.7)).lambda1
    assert abs(shifted - (base - 0.7)) < 1e-9


def test_positive_eigenfunction_and_start_independence():
    g, co = make(96, "const(2) + cos(2,0,0.7)")
    rng = np.random.default_rng(5)
    e1 = principal_eigenpair(co.op, co.r, start=rng.random(96) + 0.1)
    e2 = principal_eigenpair(co.op, co.r, start=rng.random(96) + 0.1)
    assert np.min(e1.phi1.values) > 0
    assert np.isclose(np.max(e1.phi1.values), 1.0)
    assert np.max(np.abs(e1.phi1.values - e2.phi1.values)) < 1e-8
    assert abs(e1.lambda1 - e2.lambda1) < 1e-10


def test_eigen_residual_contract():
    g, co = make(128, "gaussian(0.5,0.2,2)")
    eig = principal_eigenpair(co.op, co.r, tol_eig=1e-11)
    assert eig.residual <= 1e-11
    # raw residual bounded by the scale-relative tolerance on the operator norm
    resid = co.op.apply(eig.phi1.values) + co.r.values * eig.phi1.values \
        + eig.lambda1 * eig.phi1.values
    scale = np.max(co.op.lower + co.op.upper + np.abs(co.op.diag + co.r.values))
    assert np.max(np.abs(resid)) <= 1e-11 * scale


def test_gap_neumann_laplacian():
    g = build_grid(0.0, 1.0, 256)
    one = sample("const(1)", g)
    gap = spectral_gap(one, one)
    assert abs(gap.rho1 - np.pi**2) / np.pi**2 < 5e-3
    # dense oracle on the same weighted operator
    lo, di, up = weighted_operator_bands(one.values, one.values, g)
    dense = np.diag(di) + np.diag(lo[1:], -1) + np.diag(up[:-1], 1)
    w = np.sort(eigh(dense, eigvals_only=True))
    assert abs(gap.rho1 - w[1]) < 1e-8


def test_gap_scale_invariance():
    g = build_grid(0.0, 1.0, 128)
    a = sample("poly(1,1)", g)
    r1 = spectral_gap(sample("const(1)", g), a).rho1
    r2 = spectral_gap(sample("const(7.3)", g), a).rho1
    assert abs(r1 - r2) < 1e-8 * abs(r1)


def test_gap_ground_state_is_weight():
    g = build_grid(0.0, 1.0, 64)
    vbar = sample("const(2) + cos(1,0,0.5)", g)
    a = sample("poly(1,0.3)", g)
    lo, di, up = weighted_operator_bands(a.values, vbar.values, g)
    sv = di * vbar.values
    sv[1:] += lo[1:] * vbar.values[:-1]
    sv[:-1] += up[:-1] * vbar.values[1:]
    # (0, vbar) solves the h-coordinate problem exactly on the grid
    assert np.max(np.abs(sv)) < 1e-8 * np.max(np.abs(di))


def test_gap_rayleigh_lower_bound():
    g = build_grid(0.0, 1.0, 96)
    vbar = sample("const(1) + gaussian(0.4,0.2,0.8)", g)
    a = sample("poly(1,0.5)", g)
    gap = spectral_gap(vbar, a)
    lo, di, up = weighted_operator_bands(a.values, vbar.values, g)
    rng = np.random.default_rng(6)
    for _ in range(100):
        h = Field(g, rng.standard_normal(g.n))
        coef = inner(h, vbar) / inner(vbar, vbar)
        h = Field(g, h.values - coef * vbar.values)
        sh = di * h.values
        sh[1:] += lo[1:] * h.values[:-1]
        sh[:-1] += up[:-1] * h.values[1:]
        rayleigh = np.dot(sh, h.values) / np.dot(h.values, h.values)
        assert rayleigh >= gap.rho1 * (1 - 1e-8)


def test_gap_requires_positive_weight():
    g = build_grid(0.0, 1.0, 32)
    with pytest.raises(NotPositiveWeight):
        spectral_gap(sample("poly(-1,1)", g), sample("const(1)", g))
