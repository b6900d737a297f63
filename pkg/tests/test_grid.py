import numpy as np
import pytest

from mutsel import (Field, assemble_diffusion, build_grid, inner, quadrature,
                    sample, solve_shifted)
from mutsel.errors import InvalidDomain, LengthMismatch, NotElliptic


def test_build_grid_unit_interval():
    g = build_grid(0.0, 1.0, 4)
    assert np.allclose(g.centers, [0.125, 0.375, 0.625, 0.875])
    assert g.dx == 0.25
    assert np.isclose(np.sum(g.weights), 1.0)


def test_build_grid_nonunit():
    g = build_grid(0.0, 2.0, 3)
    assert np.isclose(g.dx, 2.0 / 3.0)
    assert np.allclose(g.centers, [1.0 / 3.0, 1.0, 5.0 / 3.0])
    assert np.all(g.centers > g.a) and np.all(g.centers < g.b)
    assert np.all(np.diff(g.centers) > 0)


@pytest.mark.parametrize("a,b,n", [(1.0, 1.0, 4), (2.0, 1.0, 4), (0.0, 1.0, 1), (0.0, 1.0, 0)])
def test_build_grid_rejects_bad_domain(a, b, n):
    with pytest.raises(InvalidDomain):
        build_grid(a, b, n)


def test_quadrature_constant_and_linear():
    g = build_grid(0.0, 1.0, 17)
    assert np.isclose(quadrature(Field(g, np.ones(17))), 1.0)
    # midpoint rule is exact for degree <= 1
    f = Field(g, g.centers)
    assert np.isclose(quadrature(f), 0.5, atol=1e-14)


def test_quadrature_quadratic_against_antiderivative():
    # oracle: closed-form antiderivative of x^2 on [0, 1] is 1/3
    g = build_grid(0.0, 1.0, 64)
    approx = quadrature(Field(g, g.centers**2))
    assert abs(approx - 1.0 / 3.0) < 1e-4


def test_field_length_mismatch():
    g = build_grid(0.0, 1.0, 8)
    with pytest.raises(LengthMismatch):
        Field(g, np.ones(7))


def test_diffusion_exact_on_quadratic_interior():
    g = build_grid(0.0, 1.0, 32)
    op = assemble_diffusion(g, sample("const(1)", g))
    lu = op.apply(g.centers**2)
    assert np.allclose(lu[1:-1], 2.0, atol=1e-10)


def test_diffusion_kills_constants():
    g = build_grid(0.0, 1.0, 40)
    op = assemble_diffusion(g, sample("poly(1,2,1)", g))
    assert np.max(np.abs(op.apply(np.full(40, 3.7)))) < 1e-12


def test_diffusion_refinement_order():
    # manufactured solution u = cos(pi x), A = 1 + x; exact operator value
    # d/dx[(1+x)(-pi sin pi x)] computed in closed form
    errors = []
    for n in (64, 128, 256):
        g = build_grid(0.0, 1.0, n)
        op = assemble_diffusion(g, sample("poly(1,1)", g))
        x = g.centers
        approx = op.apply(np.cos(np.pi * x))
        exact = -np.pi * np.sin(np.pi * x) - (1 + x) * np.pi**2 * np.cos(np.pi * x)
        errors.append(np.max(np.abs(approx - exact)[1:-1]))
    orders = [np.log2(errors[i] / errors[i + 1]) for i in range(2)]
    assert min(orders) >= 1.9


def test_not_elliptic():
    g = build_grid(0.0, 1.0, 16)
    with pytest.raises(NotElliptic):
        assemble_diffusion(g, sample("poly(-1,1)", g))  # changes sign on [0,1]


def test_solve_shifted_constant():
    g = build_grid(0.0, 1.0, 24)
    op = assemble_diffusion(g, sample("const(3)", g))
    sigma, c = 1.7, 2.5
    u = solve_shifted(op, sigma, Field(g, np.full(24, sigma * c)))
    assert np.allclose(u.values, c, atol=1e-12)


def test_solve_shifted_residual_contract():
    rng = np.random.default_rng(0)
    g = build_grid(0.0, 1.0, 64)
    op = assemble_diffusion(g, sample("const(1)", g))
    rhs = rng.standard_normal(64)
    u = solve_shifted(op, 1.0, Field(g, rhs)).values
    resid = np.max(np.abs(1.0 * u - op.apply(u) - rhs))
    assert resid <= 1e-12 * np.max(np.abs(rhs))


def test_solve_shifted_roundtrip_dense_oracle():
    # independent dense assembly of (sigma I - L) from the stencil definition
    rng = np.random.default_rng(1)
    g = build_grid(0.0, 2.0, 48)
    op = assemble_diffusion(g, sample("poly(1,0.5)", g))
    sigma = 0.9
    dense = sigma * np.eye(48) - op.dense()
    for _ in range(5):
        v = rng.standard_normal(48)
        back = solve_shifted(op, sigma, Field(g, dense @ v)).values
        assert np.max(np.abs(back - v)) < 1e-10


@pytest.fixture(scope="module")
def random_op():
    g = build_grid(-1.0, 1.5, 80)
    return g, assemble_diffusion(g, sample("gaussian(0,1,2) + const(0.5)", g))


def test_operator_symmetry(random_op):
    g, op = random_op
    rng = np.random.default_rng(2)
    for _ in range(100):
        u = Field(g, rng.standard_normal(g.n))
        v = Field(g, rng.standard_normal(g.n))
        lhs = inner(Field(g, op.apply(u.values)), v)
        rhs = inner(u, Field(g, op.apply(v.values)))
        assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(u.values) * np.linalg.norm(v.values)


def test_operator_conservation(random_op):
    g, op = random_op
    rng = np.random.default_rng(3)
    for _ in range(100):
        u = rng.standard_normal(g.n)
        assert abs(np.sum(g.weights * op.apply(u))) <= 1e-10 * np.linalg.norm(u)


def test_operator_negative_semidefinite(random_op):
    g, op = random_op
    rng = np.random.default_rng(4)
    for _ in range(100):
        u = rng.standard_normal(g.n)
        assert g.dx * np.dot(op.apply(u), u) <= 1e-10
