"""Closed-form kernels and Fourier multipliers.

Every multiplier here is a tensor product of one-variable factors; the
``*_factor`` functions evaluate one factor on an array of frequencies and
the ``mult_*`` functions take the product over the last axis of ``xi``.
Products of gamma functions with exponentially growing ``sinh``/``cosh``
terms are summed in log space.
"""

from __future__ import annotations

import csv
import io
import warnings
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi

from .numerics import log_gamma, log_sin

PI = np.pi
PI2 = np.pi**2
LOG_2PI = np.log(2.0 * np.pi)

# Frequencies below this use a Taylor expansion at removable singularities.
TAYLOR_CUTOFF = 1e-4
# omega above which the endpoint expansion replaces Gauss-Jacobi quadrature.
_ASYMPTOTIC_OMEGA = 200.0
_JACOBI_NODES = 256
_ASYMPTOTIC_TERMS = 24


class SingularPointError(ValueError):
    """Raised when a kernel is evaluated at one of its singular points."""


def phi_alpha(alpha: float, x):
    """The odd kernel ``alpha |1-|x||^(alpha-1) sgn(x)`` on ``[-1, 1]``."""
    x = np.asarray(x, dtype=float)
    if alpha < 1 and np.any(np.abs(x) == 1.0):
        raise SingularPointError(f"phi_alpha({alpha}) is singular at x = +-1")
    ax = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        core = alpha * np.abs(1.0 - ax) ** (alpha - 1.0)
    out = np.where((ax <= 1.0) & (x != 0), np.sign(x) * core, 0.0)
    return out if out.ndim else float(out)


@lru_cache(maxsize=64)
def _jacobi_rule(c: float):
    # weight u^c on [0, 1]
    s, w = roots_jacobi(_JACOBI_NODES, 0.0, c)
    return (s + 1.0) / 2.0, w * 2.0 ** (-c - 1.0)


def _falling_series(c: float, omega: np.ndarray) -> np.ndarray:
    # sum_k c(c-1)...(c-k+1) / (i omega)^(k+1)
    iw = 1j * omega
    term = 1.0 / iw
    total = term.copy()
    coef = 1.0
    for k in range(1, _ASYMPTOTIC_TERMS):
        coef *= c - (k - 1)
        if coef == 0.0:
            break
        term = term / iw
        total = total + coef * term
    return total


def power_moment(c: float, omega):
    """``int_0^1 u^c exp(-i omega u) du`` for ``c > -1`` and ``omega >= 0``."""
    omega = np.asarray(omega, dtype=float)
    flat = omega.ravel()
    out = np.empty(flat.shape, dtype=complex)
    big = flat >= _ASYMPTOTIC_OMEGA
    if np.any(~big):
        u, w = _jacobi_rule(float(c))
        small = flat[~big]
        vals = np.empty(small.shape, dtype=complex)
        step = 4096
        for i in range(0, small.size, step):
            blk = small[i:i + step]
            vals[i:i + step] = np.exp(-1j * np.outer(blk, u)) @ w
        out[~big] = vals
    if np.any(big):
        wb = flat[big]
        whole = np.exp(log_gamma(c + 1.0) - (c + 1.0) * (np.log(wb) + 0.5j * PI))
        out[big] = whole - np.exp(-1j * wb) * _falling_series(c, wb)
    return out.reshape(omega.shape)


def _sine_transform(c: float, omega: np.ndarray) -> np.ndarray:
    # int_0^1 (1-x)^c sin(omega x) dx, any sign of omega
    w = np.abs(omega)
    val = np.imag(np.exp(1j * w) * power_moment(c, w))
    return np.sign(omega) * val


_PHI_CACHE: dict = {}


def phi_alpha_hat(alpha: float, xi):
    """Fourier transform of :func:`phi_alpha`, purely imaginary and odd.

    Computed from ``-2i int_0^1 phi(x) sin(2 pi x xi) dx`` with the endpoint
    singularity absorbed into a Gauss-Jacobi weight; large frequencies use
    the endpoint expansion. Tables are cached per ``(alpha, xi)``.
    """
    xi = np.asarray(xi, dtype=float)
    key = (float(alpha), xi.shape, xi.tobytes())
    hit = _PHI_CACHE.get(key)
    if hit is not None:
        return hit.copy() if hit.ndim else hit[()]
    val = np.asarray(-2j * alpha * _sine_transform(alpha - 1.0, 2.0 * PI * xi))
    if len(_PHI_CACHE) > 32:
        _PHI_CACHE.clear()
    _PHI_CACHE[key] = val
    return val.copy() if val.ndim else val[()]


def phi_one_hat(xi):
    """Closed form of ``phi_alpha_hat(1, xi) = -i (1 - cos 2 pi xi)/(pi xi)``."""
    xi = np.asarray(xi, dtype=float)
    w = 2.0 * PI * xi
    # (1 - cos w)/w = 2 sin^2(w/2)/w, stable near 0
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(xi == 0, 0.0, 2.0 * np.sin(w / 2.0) ** 2 / np.where(xi == 0, 1.0, w))
    return -2j * r


def f_beta(beta: float, u):
    """``F_beta(u) = 2 beta int_0^1 (1-t)^(beta-1) t sin(2 pi u t) dt``."""
    u = np.asarray(u, dtype=float)
    w = 2.0 * PI * u
    aw = np.abs(w)
    m = np.exp(1j * aw) * (power_moment(beta - 1.0, aw) - power_moment(beta, aw))
    out = 2.0 * beta * np.sign(w) * np.imag(m)
    return out if out.ndim else float(out)


def k_alpha_constant(alpha: float) -> float:
    return float(2.0 * (2 * PI) ** (alpha - 1.0) * np.exp(log_gamma(1.0 - alpha).real)
                 * np.cos((1.0 - alpha) * PI / 2.0))


def k_alpha_frac(alpha: float, x):
    """Kernel of the difference of Riesz potentials, ``0 < alpha < 1``."""
    if not 0 < alpha < 1:
        raise ValueError(f"k_alpha needs 0 < alpha < 1, got {alpha}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) == 1.0):
        raise SingularPointError("k_alpha is singular at x = +-1")
    out = k_alpha_constant(alpha) * (np.abs(1 - x) ** (alpha - 1) - np.abs(1 + x) ** (alpha - 1))
    return out if out.ndim else float(out)


def _log_shc(a):
    """``ln(a / sinh a)`` (even, removable at a = 0)."""
    a = np.abs(np.asarray(a, dtype=float))
    small = a < TAYLOR_CUTOFF * PI2
    safe = np.where(small, 1.0, a)
    big = np.log(2.0 * safe) - safe - np.log1p(-np.exp(-2.0 * safe))
    a2 = np.where(small, a, 0.0) ** 2
    taylor = np.log1p(-a2 / 6.0 + 7.0 * a2**2 / 360.0)
    return np.where(small, taylor, big)


def _log_cosh(a):
    a = np.abs(np.asarray(a, dtype=float))
    return a + np.log1p(np.exp(-2.0 * a)) - np.log(2.0)


def k_alpha_hat_factor(alpha: float, xi):
    """``Gamma(a+1) Gamma(1 - 2 pi i xi) / Gamma(a+1 - 2 pi i xi)``."""
    z = 2j * PI * np.asarray(xi, dtype=float)
    return np.exp(log_gamma(alpha + 1.0) + log_gamma(1.0 - z) - log_gamma(alpha + 1.0 - z))


def a_beta_factor(beta: float, xi):
    """Fourier transform of ``e^x F_beta(e^x)``; equals ``1/pi`` at 0."""
    xi = np.asarray(xi, dtype=float)
    z = 2j * PI * xi
    lg = ((z + 1.0) * LOG_2PI + log_gamma(beta + 1.0) - log_gamma(beta + 1.0 + z)
          + _log_shc(PI2 * xi) - np.log(2.0 * PI2))
    return np.exp(lg)


def j_alpha_hat_factor(alpha: float, xi):
    """Fourier transform of ``e^x k_alpha(e^x)``, ``0 < alpha < 1``."""
    if not 0 < alpha < 1:
        raise ValueError(f"J_alpha needs 0 < alpha < 1, got {alpha}")
    xi = np.asarray(xi, dtype=float)
    z = 2j * PI * xi
    lg = (np.log(4.0) + (alpha - 1.0) * LOG_2PI + log_gamma(1.0 - z) + _log_cosh(PI2 * xi)
          + log_gamma(z - alpha) + log_sin(1j * PI2 * xi - alpha * PI / 2.0))
    return np.exp(lg)


def g0_hat_factor(xi):
    """``-pi i xi / sin(-pi^2 i xi) = pi xi / sinh(pi^2 xi)``, ``1/pi`` at 0."""
    xi = np.asarray(xi, dtype=float)
    return np.exp(_log_shc(PI2 * xi)) / PI + 0j


# Direct (overflow-prone) evaluations; used to cross-check the log-space forms
# for moderate |xi|.
def k_alpha_hat_direct(alpha, xi):
    from scipy.special import gamma
    z = 2j * PI * np.asarray(xi, dtype=float)
    return gamma(alpha + 1) * gamma(1 - z) / gamma(alpha + 1 - z)


def a_beta_direct(beta, xi):
    from scipy.special import gamma
    xi = np.asarray(xi, dtype=float)
    z = 2j * PI * xi
    return (2 * PI) ** (z + 1) * 1j * gamma(beta + 1) * xi / (2 * gamma(beta + 1 + z) * np.sin(1j * PI2 * xi))


def j_alpha_hat_direct(alpha, xi):
    from scipy.special import gamma
    z = 2j * PI * np.asarray(xi, dtype=float)
    s = 1j * PI2 * np.asarray(xi, dtype=float)
    return (4 * (2 * PI) ** (alpha - 1) * gamma(1 - z) * np.sin(-s + PI / 2)
            * gamma(-alpha + z) * np.sin(s - alpha * PI / 2))


def g0_hat_direct(xi):
    xi = np.asarray(xi, dtype=float)
    return -PI * 1j * xi / np.sin(-1j * PI2 * xi)


def _tensor(factor, params, xi):
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        xi = xi[None]
    params = (params,) * xi.shape[-1] if np.isscalar(params) else tuple(params)
    if xi.shape[-1] != len(params):
        raise ValueError(f"xi has {xi.shape[-1]} components, parameters have {len(params)}")
    out = np.ones(xi.shape[:-1], dtype=complex)
    for j, p in enumerate(params):
        out = out * factor(p, xi[..., j])
    return out


def mult_K_alpha_hat(alpha, xi):
    return _tensor(k_alpha_hat_factor, alpha, xi)


def mult_A_beta(beta, xi):
    return _tensor(a_beta_factor, beta, xi)


def mult_J_alpha_hat(alpha, xi):
    return _tensor(j_alpha_hat_factor, alpha, xi)


def mult_G0_hat(xi):
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        xi = xi[None]
    return _tensor(lambda _p, x: g0_hat_factor(x), (None,) * xi.shape[-1], xi)


# Envelopes |m(xi)| ~ envelope(xi): log of the normalising factor.
def log_envelope(name: str, param, xi):
    """``ln`` of the factor that makes ``|m(xi)| * factor`` bounded above and below."""
    a = np.log1p(np.abs(np.asarray(xi, dtype=float)))
    if name == "Kalpha":
        return param * a
    if name == "Abeta":
        return (param - 0.5) * a
    if name == "Jalpha":
        return param * a
    if name == "G0":
        return PI2 * np.abs(xi) - a
    if name == "phi-hat":
        return min(1.0, param) * a
    raise ValueError(f"unknown multiplier {name!r}")


_FACTORS = {
    "Kalpha": k_alpha_hat_factor,
    "Abeta": a_beta_factor,
    "Jalpha": j_alpha_hat_factor,
    "G0": lambda _p, x: g0_hat_factor(x),
    "phi-hat": phi_alpha_hat,
}

MULTIPLIER_NAMES = tuple(_FACTORS)


def multiplier_table(name: str, param, xi) -> dict:
    """One-variable multiplier samples with modulus and normalised modulus."""
    if name not in _FACTORS:
        raise ValueError(f"unknown multiplier {name!r}; choose from {MULTIPLIER_NAMES}")
    xi = np.asarray(xi, dtype=float)
    val = np.asarray(_FACTORS[name](param, xi), dtype=complex)
    mod = np.abs(val)
    with np.errstate(divide="ignore"):
        norm = np.exp(np.log(mod) + log_envelope(name, param, xi))
    return {"xi": xi, "re": val.real, "im": val.imag, "modulus": mod, "normalized_modulus": norm}


def table_to_csv(table: dict, digits: int = 10) -> str:
    cols = ["xi", "re", "im", "modulus", "normalized_modulus"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in zip(*(table[c] for c in cols)):
        w.writerow([f"{v:.{digits}g}" for v in row])
    return buf.getvalue()


def poisson_kernel(t, x):
    """Product Poisson kernel ``prod_i t_i / (pi (x_i^2 + t_i^2))``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise ValueError(f"Poisson kernel needs t > 0, got {t}")
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    return np.prod(t / (PI * (x**2 + t**2)), axis=-1)


def verify_lemma1(alpha: float, t: float, x: float) -> float:
    """Residual of the Laplace-transform formula for ``(t - i x)^(-alpha)``.

    The right-hand integral is computed by adaptive quadrature with the
    ``u^(alpha-1)`` endpoint singularity carried by an algebraic weight.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    lhs = np.exp(-alpha * np.log(complex(t, -x)))
    upper = 40.0 / (2 * PI * t)
    opts = dict(weight="alg", wvar=(alpha - 1.0, 0.0), limit=400, epsabs=1e-15, epsrel=1e-13)
    with warnings.catch_warnings():
        # the requested tolerance sits at roundoff level; the residual is what we report
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda u: np.exp(-2 * PI * u * t) * np.cos(2 * PI * x * u), 0, upper,
                            **opts)[0]
        im = integrate.quad(lambda u: np.exp(-2 * PI * u * t) * np.sin(2 * PI * x * u), 0, upper,
                            **opts)[0]
    rhs = np.exp(alpha * LOG_2PI - log_gamma(alpha).real) * complex(re, im)
    return float(abs(lhs - rhs))
