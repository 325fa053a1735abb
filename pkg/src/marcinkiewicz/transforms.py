"""Spectral operators acting on sampled fields.

All operators are tensor products of one-variable Fourier multipliers.
The ``*_multiplier`` helpers return the per-axis multiplier on a frequency
array; the field-level functions apply them on the periodic grid.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .kernels import phi_alpha_hat
from .numerics import (
    SampledField,
    StructuralError,
    apply_axis_multipliers,
    as_multi_index,
    forward_fourier,
)


class MeanNonzeroError(ValueError):
    """Raised when the Riesz potential receives a field with ``f^(0) != 0``."""


def _axes(axes, n: int) -> tuple[int, ...]:
    if axes is None:
        return tuple(range(n))
    axes = (axes,) if np.isscalar(axes) else tuple(axes)
    for a in axes:
        if not 0 <= a < n:
            raise StructuralError(f"axis {a} out of range for n = {n}")
    return axes


def _per_axis(value, n: int, name: str) -> tuple[float, ...]:
    return as_multi_index(value, n, name)


def hilbert_multiplier(xi):
    return -1j * np.sign(xi)


def riesz_multiplier(alpha: float, xi):
    xi = np.asarray(xi, dtype=float)
    ax = np.abs(xi)
    return np.where(ax == 0, 0.0, np.where(ax == 0, 1.0, ax) ** (-alpha))


def s_t_multiplier(alpha: float, t, xi):
    """``phi^(alpha)(t xi)``; ``t`` may be an array (one row per node)."""
    t = np.asarray(t, dtype=float)
    return phi_alpha_hat(alpha, np.multiply.outer(t, np.asarray(xi, dtype=float)))


def _tau_primitive(beta: float, s):
    # antiderivative of beta s (1-s)^(beta-1) on [0, 1]
    s = np.clip(s, 0.0, 1.0)
    v = 1.0 - s
    return -(v**beta) + beta * v ** (beta + 1.0) / (beta + 1.0)


def tau_multiplier(beta: float, R, xi, dxi: float | None = None):
    """Bochner-Riesz type multiplier ``beta s (1-s)^(beta-1)``, ``s = |xi|/R``.

    For ``beta < 1`` the node whose cell ``[xi - dxi/2, xi + dxi/2]`` contains
    ``|xi| = R`` receives the cell average instead of the divergent point
    value. ``R`` may be an array (one row per node).
    """
    R = np.asarray(R, dtype=float)
    xi = np.asarray(xi, dtype=float)
    s = np.abs(np.multiply.outer(1.0 / R, xi))
    inside = s < 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        m = np.where(inside, beta * s * np.abs(1.0 - s) ** (beta - 1.0), 0.0)
    if beta < 1.0:
        if dxi is None:
            dxi = float(np.min(np.diff(np.unique(np.abs(xi))))) if xi.size > 1 else 1.0
        Rb = np.multiply.outer(R, np.ones_like(xi))
        lo = (np.abs(xi) - dxi / 2.0) / Rb
        hi = (np.abs(xi) + dxi / 2.0) / Rb
        cell = (lo < 1.0) & (hi >= 1.0)
        avg = (_tau_primitive(beta, hi) - _tau_primitive(beta, lo)) * Rb / dxi
        m = np.where(cell, avg, m)
    return m


def poisson_multiplier(t, xi):
    return np.exp(-2.0 * np.pi * np.multiply.outer(np.asarray(t, dtype=float), np.abs(xi)))


def poisson_partial_multiplier(t, xi, which: str):
    """``exp(-2 pi t |xi|)`` times ``-2 pi |xi|`` (``'t'``) or ``2 pi i xi`` (``'y'``)."""
    xi = np.asarray(xi, dtype=float)
    base = poisson_multiplier(t, xi)
    if which == "t":
        return base * (-2.0 * np.pi * np.abs(xi))
    if which in ("y", "x"):
        return base * (2j * np.pi * xi)
    raise ValueError(f"which must be 't' or 'y', got {which!r}")


def delta_multiplier(t, xi):
    """``f(x - t) - f(x + t)`` in frequency: ``-2i sin(2 pi t xi)``."""
    return -2j * np.sin(2.0 * np.pi * np.multiply.outer(np.asarray(t, dtype=float), xi))


def second_difference_multiplier(t, xi):
    """``F(x + t) + F(x - t) - 2F(x)`` in frequency."""
    return 2.0 * np.cos(2.0 * np.pi * np.multiply.outer(np.asarray(t, dtype=float), xi)) - 2.0


def antiderivative_multiplier(xi):
    xi = np.asarray(xi, dtype=float)
    return np.where(xi == 0, 0.0, 1.0 / (2j * np.pi * np.where(xi == 0, 1.0, xi)))


def shift_multiplier(a: float, xi):
    return np.exp(-2j * np.pi * a * np.asarray(xi, dtype=float))


def _apply(f: SampledField, per_axis: dict) -> SampledField:
    factors = [per_axis.get(j) for j in range(f.grid.n)]
    return apply_axis_multipliers(f, factors)


def hilbert(f: SampledField, axes: Iterable[int] | int | None = None) -> SampledField:
    """Hilbert transform ``-i sgn(xi_j)`` on each listed axis (all by default)."""
    return _apply(f, {j: hilbert_multiplier for j in _axes(axes, f.grid.n)})


def check_riesz_safe(f: SampledField, rtol: float = 1e-10) -> None:
    """Coefficients on every plane ``xi_j = 0`` must be negligible."""
    coef = np.abs(forward_fourier(f).coefficients)
    peak = coef.max()
    if peak == 0:
        return
    zero = f.grid.N // 2
    for j in range(f.grid.n):
        plane = np.take(coef, zero, axis=j).max()
        if plane >= rtol * peak:
            raise MeanNonzeroError(
                f"Riesz potential needs f^ = 0 on xi_{j} = 0; found |f^| = {plane:.3e} "
                f"({plane / peak:.3e} of the peak)")


def riesz_potential(f: SampledField, alpha) -> SampledField:
    alpha = _per_axis(alpha, f.grid.n, "alpha")
    check_riesz_safe(f)
    return _apply(f, {j: (lambda xi, a=a: riesz_multiplier(a, xi)) for j, a in enumerate(alpha)})


def s_t_alpha(f: SampledField, t, alpha) -> SampledField:
    """Fractional average ``f * phi_t`` applied spectrally."""
    t = _per_axis(t, f.grid.n, "t")
    alpha = _per_axis(alpha, f.grid.n, "alpha")
    return _apply(f, {j: (lambda xi, a=a, s=s: s_t_multiplier(a, s, xi))
                      for j, (a, s) in enumerate(zip(alpha, t))})


def tau_R_beta(f: SampledField, R, beta) -> SampledField:
    R = _per_axis(R, f.grid.n, "R")
    beta = _per_axis(beta, f.grid.n, "beta")
    dxi = f.grid.dxi
    return _apply(f, {j: (lambda xi, b=b, r=r: tau_multiplier(b, r, xi, dxi))
                      for j, (b, r) in enumerate(zip(beta, R))})


def poisson_extension(f: SampledField, t) -> SampledField:
    t = _per_axis(t, f.grid.n, "t")
    return _apply(f, {j: (lambda xi, s=s: poisson_multiplier(s, xi)) for j, s in enumerate(t)})


def poisson_partial(f: SampledField, t, which: Sequence[str] | str) -> SampledField:
    """Mixed derivative of the Poisson extension; ``which[j]`` is ``'t'`` or ``'y'``."""
    t = _per_axis(t, f.grid.n, "t")
    which = [which] * f.grid.n if isinstance(which, str) else list(which)
    if len(which) != f.grid.n:
        raise StructuralError(f"need one derivative choice per axis, got {which}")
    return _apply(f, {j: (lambda xi, s=s, w=w: poisson_partial_multiplier(s, xi, w))
                      for j, (s, w) in enumerate(zip(t, which))})


def delta_t(f: SampledField, t, axes=None) -> SampledField:
    """Odd difference ``f(x - t) - f(x + t)`` on each listed axis."""
    axes = _axes(axes, f.grid.n)
    t = _per_axis(t, f.grid.n, "t")
    return _apply(f, {j: (lambda xi, s=t[j]: delta_multiplier(s, xi)) for j in axes})


def second_difference(f: SampledField, t, axes=None) -> SampledField:
    axes = _axes(axes, f.grid.n)
    t = _per_axis(t, f.grid.n, "t")
    return _apply(f, {j: (lambda xi, s=t[j]: second_difference_multiplier(s, xi)) for j in axes})


def antiderivative(f: SampledField, axes=None) -> SampledField:
    """Spectral antiderivative ``f^/(2 pi i xi)``; meaningful for mean-zero ``f`` only."""
    return _apply(f, {j: antiderivative_multiplier for j in _axes(axes, f.grid.n)})


def shift(f: SampledField, a) -> SampledField:
    """Translate: returns ``f(x - a)``."""
    a = np.broadcast_to(np.asarray(a, dtype=float), (f.grid.n,))
    return _apply(f, {j: (lambda xi, s=s: shift_multiplier(s, xi)) for j, s in enumerate(a)})
