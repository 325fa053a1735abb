import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marcinkiewicz.numerics import (
    DyadicTGrid,
    GammaPoleError,
    GridSpec,
    SampledField,
    StructuralError,
    apply_axis_multipliers,
    as_multi_index,
    complex_gamma,
    forward_fourier,
    inverse_fourier,
    log_gamma,
    log_quadrature,
    log_sin,
)


def gaussian_field(grid, shift=0.0):
    x = grid.x_axis()
    if grid.n == 1:
        return SampledField(grid, np.exp(-np.pi * (x - shift) ** 2))
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    return SampledField(grid, np.exp(-np.pi * ((X1 - shift) ** 2 + X2**2)))


def test_grid_axes():
    g = GridSpec(1, 8.0, 64)
    x, xi = g.x_axis(), g.xi_axis()
    assert x[0] == -8.0 and np.isclose(x[1] - x[0], g.h)
    assert np.isclose(xi[1] - xi[0], 1 / 16)
    assert xi[g.N // 2] == 0.0


@pytest.mark.parametrize("bad", [(0, 8.0, 64), (1, -1.0, 64), (1, 8.0, 63)])
def test_grid_rejects_bad_shapes(bad):
    with pytest.raises(StructuralError):
        GridSpec(*bad)


def test_gaussian_is_its_own_transform():
    g = GridSpec(1, 8.0, 256)
    F = forward_fourier(gaussian_field(g))
    assert np.max(np.abs(F.coefficients - np.exp(-np.pi * g.xi_axis() ** 2))) < 1e-12


def test_shifted_gaussian_phase():
    g = GridSpec(1, 8.0, 256)
    xi = g.xi_axis()
    F = forward_fourier(gaussian_field(g, shift=1.5))
    ref = np.exp(-np.pi * xi**2) * np.exp(-2j * np.pi * 1.5 * xi)
    assert np.max(np.abs(F.coefficients - ref)) < 1e-12


def test_two_dimensional_transform_separates():
    g = GridSpec(2, 8.0, 128)
    F = forward_fourier(gaussian_field(g))
    xi = g.xi_axis()
    ref = np.exp(-np.pi * (xi[:, None] ** 2 + xi[None, :] ** 2))
    assert np.max(np.abs(F.coefficients - ref)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_round_trip_and_parseval(seed):
    g = GridSpec(1, 4.0, 64)
    v = np.random.default_rng(seed).standard_normal(g.N) + 0j
    f = SampledField(g, v)
    F = forward_fourier(f)
    assert np.allclose(inverse_fourier(F).values, v, atol=1e-12)
    lhs = np.sum(np.abs(v) ** 2) * g.h
    rhs = np.sum(np.abs(F.coefficients) ** 2) * g.dxi
    assert math.isclose(lhs, rhs, rel_tol=1e-12)


def test_axis_multipliers_identity_and_tensor():
    g = GridSpec(2, 4.0, 32)
    f = gaussian_field(g)
    same = apply_axis_multipliers(f, [np.ones(g.N), np.ones(g.N)])
    assert np.allclose(same.values, f.values, atol=1e-13)


def test_mismatched_grids_rejected():
    with pytest.raises(StructuralError):
        SampledField(GridSpec(1, 4.0, 32), np.zeros(16))


def test_t_grid_midpoint_nodes():
    tg = DyadicTGrid(0.25, 4.0, 4)
    assert len(tg.nodes) == 16
    assert np.isclose(tg.nodes[0], 0.25 * 2 ** (1 / 8))
    assert np.allclose(tg.weights, np.log(2) / 4)


def test_log_quadrature_of_bump():
    # int_0^inf t^2 e^{-t^2} dt/t = 1/2
    tg = DyadicTGrid(2.0**-20, 2.0**8, 16)
    val = log_quadrature(tg.nodes**2 * np.exp(-tg.nodes**2), tg)
    assert abs(val - 0.5) < 1e-10


def test_t_grid_rejects_bad_ranges():
    with pytest.raises(StructuralError):
        DyadicTGrid(1.0, 0.5, 8)
    with pytest.raises(StructuralError):
        DyadicTGrid(1.0, 3.0, 8)
    with pytest.raises(StructuralError):
        DyadicTGrid(1.0, 2.0, 2)


def test_multi_index_broadcast():
    assert as_multi_index(0.5, 2) == (0.5, 0.5)
    assert as_multi_index((0.5, 1.0), 2) == (0.5, 1.0)
    with pytest.raises(ValueError):
        as_multi_index((0.5, 1.0, 2.0), 2)


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 7.5, 0.3 + 4j, 2 - 10j, -0.5 + 0.25j, -3.7 + 1j, 1 + 80j, 12 + 0.1j])
def test_log_gamma_against_mpmath(z):
    ref = complex(mpmath.loggamma(z))
    got = complex(log_gamma(z))
    assert abs(got.real - ref.real) < 1e-12 * max(1.0, abs(ref.real))
    assert abs(np.exp(1j * (got.imag - ref.imag)) - 1) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(-30.0, 30.0))
def test_gamma_recurrence(x, y):
    z = complex(x, y)
    lhs = log_gamma(z + 1) - log_gamma(z)
    assert abs(np.exp(lhs) / z - 1) < 1e-12


def test_classical_values():
    assert abs(complex_gamma(0.5) - math.sqrt(math.pi)) < 1e-13
    assert abs(complex_gamma(5.0) - 24.0) < 1e-11
    with pytest.raises(GammaPoleError):
        complex_gamma(-2.0)


def test_log_sin_matches_direct():
    w = np.array([0.3 + 0.5j, 2.0 - 1.0j, -1.2 + 3.0j])
    assert np.allclose(np.exp(log_sin(w)), np.sin(w), rtol=1e-13)
    # far from the real axis the log form stays finite
    assert np.isfinite(log_sin(1.0 + 900j))
