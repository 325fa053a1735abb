import numpy as np
import pytest
from scipy.integrate import quad

from marcinkiewicz.kernels import (
    SingularPointError,
    a_beta_direct,
    a_beta_factor,
    f_beta,
    g0_hat_direct,
    g0_hat_factor,
    j_alpha_hat_direct,
    j_alpha_hat_factor,
    k_alpha_frac,
    k_alpha_hat_direct,
    k_alpha_hat_factor,
    mult_A_beta,
    mult_K_alpha_hat,
    multiplier_table,
    phi_alpha,
    phi_alpha_hat,
    phi_one_hat,
    poisson_kernel,
    power_moment,
    table_to_csv,
    verify_lemma1,
)


def phi_hat_quad(alpha, xi):
    # -2i int_0^1 alpha (1-x)^(alpha-1) sin(2 pi x xi) dx with the endpoint weight handled by quad
    val, _ = quad(lambda x: alpha * np.sin(2 * np.pi * x * xi), 0, 1,
                  weight="alg", wvar=(0.0, alpha - 1.0), limit=200)
    return -2j * val


@pytest.mark.parametrize("alpha", [0.25, 0.75, 1.0, 1.5, 2.0])
@pytest.mark.parametrize("xi", [0.0, 0.3, 1.7, 6.25, 20.0])
def test_phi_hat_against_quadrature(alpha, xi):
    got = complex(phi_alpha_hat(alpha, xi))
    ref = phi_hat_quad(alpha, xi)
    assert abs(got - ref) < 1e-9 * max(1.0, abs(ref))


def test_phi_hat_large_frequency_branch_continuous():
    xi = np.linspace(30.0, 200.0, 7)
    for alpha in (0.5, 1.5):
        ref = np.array([phi_hat_quad(alpha, v) for v in xi])
        assert np.max(np.abs(phi_alpha_hat(alpha, xi) - ref)) < 1e-7


def test_phi_one_closed_form():
    xi = np.linspace(-5, 5, 41)
    assert np.max(np.abs(phi_alpha_hat(1.0, xi) - phi_one_hat(xi))) < 1e-12


def test_phi_hat_is_odd_and_imaginary():
    xi = np.linspace(0.1, 4, 9)
    v = phi_alpha_hat(0.7, xi)
    assert np.allclose(phi_alpha_hat(0.7, -xi), -v)
    assert np.max(np.abs(v.real)) == 0.0


def test_phi_alpha_support_and_sign():
    x = np.array([-2.0, -0.5, 0.5, 2.0])
    v = phi_alpha(1.5, x)
    assert v[0] == 0 and v[-1] == 0 and v[1] == -v[2]


def test_power_moment_against_quad():
    for c, w in [(0.0, 3.0), (-0.5, 10.0), (1.5, 0.2)]:
        re, _ = quad(lambda u: np.cos(w * u), 0, 1, weight="alg", wvar=(c, 0.0))
        im, _ = quad(lambda u: -np.sin(w * u), 0, 1, weight="alg", wvar=(c, 0.0))
        assert abs(complex(power_moment(c, w)) - complex(re, im)) < 1e-11


def test_f_beta_against_quad():
    for beta, u in [(1.5, 0.3), (0.75, 2.0), (2.5, -1.1)]:
        ref, _ = quad(lambda t: 2 * beta * t * np.sin(2 * np.pi * u * t), 0, 1,
                      weight="alg", wvar=(0.0, beta - 1.0))
        assert abs(f_beta(beta, u) - ref) < 1e-11


@pytest.mark.parametrize("xi", [0.05, 0.3, 1.0, 2.0])
def test_log_forms_match_direct(xi):
    assert abs(k_alpha_hat_factor(1.5, xi) - k_alpha_hat_direct(1.5, xi)) < 1e-12
    assert abs(a_beta_factor(1.5, xi) - a_beta_direct(1.5, xi)) < 1e-12
    assert abs(j_alpha_hat_factor(0.5, xi) - j_alpha_hat_direct(0.5, xi)) < 1e-11
    assert abs(g0_hat_factor(xi) - g0_hat_direct(xi)) < 1e-12


def test_values_at_zero():
    assert abs(k_alpha_hat_factor(2.0, 0.0) - 1.0) < 1e-14
    assert abs(a_beta_factor(1.5, 0.0) - 1 / np.pi) < 1e-14
    assert abs(g0_hat_factor(0.0) - 1 / np.pi) < 1e-14


def test_factors_finite_far_out():
    xi = np.array([500.0, 2000.0])
    for v in (k_alpha_hat_factor(1.0, xi), a_beta_factor(2.5, xi), j_alpha_hat_factor(0.25, xi)):
        assert np.all(np.isfinite(v)) and np.all(np.abs(v) > 0)
    assert np.all(np.isfinite(g0_hat_factor(xi)))


def test_tensor_products():
    xi = np.array([[0.3, 1.2]])
    ref = k_alpha_hat_factor(1.0, 0.3) * k_alpha_hat_factor(2.0, 1.2)
    assert abs(mult_K_alpha_hat((1.0, 2.0), xi)[0] - ref) < 1e-14
    assert abs(mult_A_beta(1.5, xi)[0] - a_beta_factor(1.5, 0.3) * a_beta_factor(1.5, 1.2)) < 1e-14
    with pytest.raises(ValueError):
        mult_K_alpha_hat((1.0, 2.0, 3.0), xi)


def test_riesz_difference_kernel():
    with pytest.raises(SingularPointError):
        k_alpha_frac(0.5, 1.0)
    with pytest.raises(ValueError):
        k_alpha_frac(1.5, 0.3)
    assert k_alpha_frac(0.5, 0.0) == 0.0
    assert k_alpha_frac(0.5, 0.4) == -k_alpha_frac(0.5, -0.4)


def test_poisson_kernel_mass():
    val, _ = quad(lambda x: poisson_kernel(0.7, x), -np.inf, np.inf)
    assert abs(val - 1.0) < 1e-10


@pytest.mark.parametrize("args", [(0.5, 1.0, 0.0), (1.7, 0.3, -2.0), (2.9, 2.5, 1.4)])
def test_laplace_formula(args):
    assert verify_lemma1(*args) < 1e-8


def test_multiplier_table_csv():
    tab = multiplier_table("Kalpha", 1.0, np.linspace(-2, 2, 5))
    text = table_to_csv(tab)
    assert text.splitlines()[0].startswith("xi")
    assert len(text.splitlines()) == 6
