import numpy as np
import pytest

from mutsel import build_grid, sample
from mutsel.errors import LengthMismatch, UnknownSpec


def test_const():
    g = build_grid(0.0, 1.0, 4)
    assert np.allclose(sample("const(2)", g).values, 2.0)


def test_cos_matches_direct_evaluation():
    g = build_grid(0.0, 1.0, 2)
    got = sample("cos(1,0)", g).values
    assert np.allclose(got, [np.cos(np.pi / 4), np.cos(3 * np.pi / 4)])


def test_cos_amplitude_and_phase():
    g = build_grid(2.0, 4.0, 8)
    got = sample("cos(2,0.5,3)", g).values
    xhat = (g.centers - 2.0) / 2.0
    assert np.allclose(got, 3.0 * np.cos(2 * np.pi * xhat + 0.5))


def test_poly():
    g = build_grid(0.0, 1.0, 16)
    got = sample("poly(1,-2,3)", g).values
    x = g.centers
    assert np.allclose(got, 1 - 2 * x + 3 * x**2)


def test_gaussian():
    g = build_grid(-1.0, 1.0, 32)
    got = sample("gaussian(0.2,0.5,1.5)", g).values
    x = g.centers
    assert np.allclose(got, 1.5 * np.exp(-((x - 0.2) ** 2) / (2 * 0.25)))


def test_sum_of_terms():
    g = build_grid(0.0, 1.0, 64)
    got = sample("const(2) + cos(1,0)", g).values
    assert np.allclose(got, 2.0 + np.cos(np.pi * g.centers))


def test_tabulated_roundtrip():
    g = build_grid(0.0, 1.0, 3)
    assert np.allclose(sample("tabulated(1,2,3)", g).values, [1, 2, 3])


def test_tabulated_length_mismatch():
    g = build_grid(0.0, 1.0, 4)
    with pytest.raises(LengthMismatch):
        sample("tabulated(1,2,3)", g)


@pytest.mark.parametrize("bad", ["sin(1)", "const", "const(1,2)", "cos(1)", "poly()", "1+x"])
def test_unknown_or_malformed(bad):
    g = build_grid(0.0, 1.0, 4)
    with pytest.raises(UnknownSpec):
        sample(bad, g)
