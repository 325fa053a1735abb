import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import dawsn

from marcinkiewicz.kernels import poisson_kernel
from marcinkiewicz.numerics import GridSpec, SampledField, StructuralError, forward_fourier
from marcinkiewicz.transforms import (
    MeanNonzeroError,
    antiderivative,
    check_riesz_safe,
    delta_t,
    hilbert,
    poisson_extension,
    poisson_partial,
    riesz_potential,
    s_t_alpha,
    second_difference,
    shift,
    tau_multiplier,
    tau_R_beta,
)

G1 = GridSpec(1, 16.0, 512)


def gauss(x):
    return np.exp(-np.pi * x**2)


def dgauss(x):
    return -2 * np.pi * x * np.exp(-np.pi * x**2)


def field(fn, grid=G1):
    return SampledField(grid, fn(grid.x_axis()))


def at(f, x0):
    return f.values[int(round((x0 + f.grid.L) / f.grid.h))]


def test_hilbert_of_gaussian_is_dawson():
    g = GridSpec(1, 64.0, 4096)
    Hf = hilbert(field(gauss, g))
    x = g.x_axis()
    mask = np.abs(x) <= 4
    ref = 2 / np.sqrt(np.pi) * dawsn(np.sqrt(np.pi) * x[mask])
    assert np.max(np.abs(Hf.values[mask] - ref)) < 1e-3


def test_hilbert_squared_is_minus_identity_on_mean_zero():
    f = field(dgauss)
    HHf = hilbert(hilbert(f))
    assert np.max(np.abs(HHf.values + f.values)) < 1e-12


def test_hilbert_axes_in_two_variables():
    g = GridSpec(2, 8.0, 128)
    x = g.x_axis()
    f = SampledField(g, np.outer(dgauss(x), dgauss(x)))
    both = hilbert(f)
    stepwise = hilbert(hilbert(f, axes=0), axes=1)
    assert np.max(np.abs(both.values - stepwise.values)) < 1e-13


def _riesz_error(alpha, L, x0=0.5):
    g = GridSpec(1, L, int(32 * L))
    If = riesz_potential(field(dgauss, g), alpha)
    ref, _ = quad(lambda s: -4 * np.pi * s ** (1 - alpha) * np.exp(-np.pi * s**2)
                  * np.sin(2 * np.pi * s * x0), 0, np.inf, limit=200)
    return abs(at(If, x0).real - ref)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_riesz_potential_against_quadrature(alpha):
    # the |xi|^(1 - alpha) cusp at the origin limits the Riemann sum to O(dxi^(2 - alpha))
    coarse, fine = _riesz_error(alpha, 32.0), _riesz_error(alpha, 128.0)
    assert coarse < 5e-4
    assert fine < coarse * 4 ** -(2 - alpha) * 1.5


def test_riesz_rejects_nonzero_mean():
    with pytest.raises(MeanNonzeroError):
        riesz_potential(field(gauss), 0.5)
    check_riesz_safe(field(dgauss))


@pytest.mark.parametrize("alpha,t", [(1.0, 0.5), (0.6, 1.3), (2.0, 2.0)])
def test_fractional_average_against_quadrature(alpha, t):
    Sf = s_t_alpha(field(gauss), t, alpha)
    for x0 in (0.0, 0.75):
        def integrand(u, s):
            return alpha * s * gauss(x0 - t * s * u)
        pos, _ = quad(integrand, 0, 1, args=(1.0,), weight="alg", wvar=(0.0, alpha - 1.0))
        neg, _ = quad(integrand, 0, 1, args=(-1.0,), weight="alg", wvar=(0.0, alpha - 1.0))
        assert abs(at(Sf, x0) - (pos + neg)) < 1e-9


def test_poisson_extension_against_quadrature():
    t = 0.4
    u = poisson_extension(field(gauss, GridSpec(1, 64.0, 2048)), t)
    for x0 in (0.0, 1.0):
        ref, _ = quad(lambda y: poisson_kernel(t, y) * gauss(x0 - y), -40, 40, points=[x0], limit=400)
        assert abs(at(u, x0).real - ref) < 1e-4


def test_poisson_partials_match_finite_differences():
    f = field(gauss)
    t, e = 0.7, 1e-5
    dt = poisson_partial(f, t, "t").values
    fd = (poisson_extension(f, t + e).values - poisson_extension(f, t - e).values) / (2 * e)
    assert np.max(np.abs(dt - fd)) < 1e-7
    dy = poisson_partial(f, t, "y").values
    u = poisson_extension(f, t).values
    assert np.max(np.abs(dy - np.gradient(u, G1.h))) < 1e-2
    with pytest.raises(StructuralError):
        poisson_partial(f, t, ["t", "y"])


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 40))
def test_shift_and_delta_on_grid_steps(k):
    a = k * G1.h
    f = field(gauss)
    assert np.max(np.abs(shift(f, a).values - gauss(G1.x_axis() - a))) < 1e-12
    ref = gauss(G1.x_axis() - a) - gauss(G1.x_axis() + a)
    assert np.max(np.abs(delta_t(f, a).values - ref)) < 1e-12


def test_second_difference_of_antiderivative_gives_delta_integral():
    # F(x + t) + F(x - t) - 2F(x) with F' = f, checked against the direct formula
    f = field(dgauss)
    t = 8 * G1.h
    D = second_difference(antiderivative(f), t)
    x = G1.x_axis()
    ref = gauss(x + t) + gauss(x - t) - 2 * gauss(x)
    assert np.max(np.abs(D.values - ref)) < 1e-12


def test_tau_cell_average_stays_finite():
    xi = np.linspace(-2, 2, 401)
    m = tau_multiplier(0.75, 1.0, xi, xi[1] - xi[0])
    assert np.all(np.isfinite(m))
    assert np.all(m[np.abs(xi) > 1.0 + 1e-9] == 0)
    smooth = tau_multiplier(1.5, 1.0, np.array([0.0, 0.5, 1.0]))
    assert np.allclose(smooth, [0.0, 1.5 * 0.5 * np.sqrt(0.5), 0.0])


def test_tau_operator_is_linear_and_band_limited():
    f = field(gauss)
    out = tau_R_beta(f, 0.5, 1.5)
    coef = forward_fourier(out).coefficients
    assert np.max(np.abs(coef[np.abs(G1.xi_axis()) >= 0.5])) < 1e-15
    twice = tau_R_beta(SampledField(G1, 2 * f.values), 0.5, 1.5)
    assert np.allclose(twice.values, 2 * out.values, atol=1e-14)
