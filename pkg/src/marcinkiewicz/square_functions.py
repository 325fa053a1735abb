"""Square functions as scikit-learn style transformers.

``fit`` takes a grid (or a field living on it) and tabulates the per-axis
multipliers over the scale grid; ``transform`` maps a sampled field to the
square function at the configured evaluation points. ``transform_field``
returns the square function on the whole grid (n <= 2).

Every separable square function here has the form

    Q(f)(x)^2 = sum_s  prod_j w_j[s_j]  |sum_xi prod_j m_j[s_j, xi_j] f^(xi) e^{2 pi i x xi}|^2

with one dyadic scale grid per axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sp_fft
from scipy.special import hyp2f1
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .numerics import (
    DyadicTGrid,
    SampledField,
    _alternating,
    as_multi_index,
    forward_fourier,
    inverse_axis,
)
from .transforms import (
    antiderivative_multiplier,
    check_riesz_safe,
    delta_multiplier,
    hilbert_multiplier,
    poisson_partial_multiplier,
    riesz_multiplier,
    s_t_multiplier,
    second_difference_multiplier,
    tau_multiplier,
)
from .validation import UnsupportedDimensionError, check_field, check_grid, check_points

_CHUNK = 16  # scale rows per batched FFT in the n = 2 full-grid loop

DEFAULT_TMIN = 2.0**-8
DEFAULT_TMAX = 2.0**8
DEFAULT_STEPS = 16


class _SeparableSquareFunction(TransformerMixin, BaseEstimator):

    def _params(self, n):
        """Per-axis parameter tuple (one entry per axis)."""
        return (None,) * n

    def _axis_table(self, param, nodes, xi, grid):
        raise NotImplementedError

    def _axis_weights(self, param, t_grid):
        return t_grid.weights

    def _validate(self, field):
        pass

    def fit(self, X, y=None):
        grid = check_grid(X)
        self.grid_ = grid
        self.t_grid_ = DyadicTGrid(self.tmin, self.tmax, self.steps_per_octave)
        self.points_ = check_points(self.points, grid)
        xi = grid.xi_axis()
        nodes = self.t_grid_.nodes
        params = self._params(grid.n)
        self.tables_ = [np.asarray(self._axis_table(p, nodes, xi, grid), dtype=complex)
                        for p in params]
        self.weights_ = [np.asarray(self._axis_weights(p, self.t_grid_), dtype=float)
                         for p in params]
        return self

    def _coefficients(self, X):
        check_is_fitted(self, "tables_")
        field = check_field(X, self.grid_)
        self._validate(field)
        return forward_fourier(field).coefficients

    def transform(self, X):
        """Square function values at ``points_``, shape ``(P,)``."""
        coef = self._coefficients(X)
        grid = self.grid_
        xi = grid.xi_axis()
        if grid.n == 1:
            E = np.exp(2j * np.pi * np.outer(xi, self.points_[:, 0])) * grid.dxi
            vals = (self.tables_[0] * coef[None, :]) @ E
            sq = self.weights_[0] @ (vals.real**2 + vals.imag**2)
            return np.sqrt(sq)
        if grid.n == 2:
            return self._transform_lattice(coef, xi)
        out = np.empty(len(self.points_))
        for i, p in enumerate(self.points_):
            acc = coef
            for j in range(grid.n):
                mj = self.tables_[j] * (np.exp(2j * np.pi * xi * p[j]) * grid.dxi)[None, :]
                acc = np.moveaxis(np.tensordot(mj, acc, axes=([1], [j])), 0, j)
            sq = acc.real**2 + acc.imag**2
            for j in reversed(range(grid.n)):
                sq = np.tensordot(sq, self.weights_[j], axes=([j], [0]))
            out[i] = np.sqrt(sq)
        return out

    def _transform_lattice(self, coef, xi):
        # evaluate on the lattice spanned by the distinct point coordinates
        grid = self.grid_
        X1, inv1 = np.unique(self.points_[:, 0], return_inverse=True)
        X2, inv2 = np.unique(self.points_[:, 1], return_inverse=True)
        m1, m2 = self.tables_
        w1, w2 = self.weights_
        E1 = np.exp(2j * np.pi * np.outer(xi, X1)) * grid.dxi
        E2 = np.exp(2j * np.pi * np.outer(xi, X2)) * grid.dxi
        S1, S2 = m1.shape[0], m2.shape[0]
        # G[s1, a, k2] = sum_k1 m1[s1, k1] E1[k1, a] coef[k1, k2]
        G = np.einsum("sk,ka,kl->sal", m1, E1, coef, optimize=True)
        B = (m2[:, :, None] * E2[None, :, :]).transpose(1, 0, 2).reshape(grid.N, S2 * len(X2))
        H = (G.reshape(S1 * len(X1), grid.N) @ B).reshape(S1, len(X1), S2, len(X2))
        sq = np.einsum("s,sarb,r->ab", w1, H.real**2 + H.imag**2, w2, optimize=True)
        return np.sqrt(sq[inv1.ravel(), inv2.ravel()])

    def transform_field(self, X):
        """Square function on every grid node (n <= 2)."""
        coef = self._coefficients(X)
        grid = self.grid_
        if grid.n == 1:
            rows = inverse_axis(self.tables_[0] * coef[None, :], 1, grid)
            return np.sqrt(self.weights_[0] @ (rows.real**2 + rows.imag**2))
        if grid.n != 2:
            raise UnsupportedDimensionError("full-grid evaluation supports n <= 2")
        # fold the inverse-transform phase and shift into the tables once
        phase = _alternating(grid.N) / grid.h
        m1, m2 = (np.fft.ifftshift(m * phase[None, :], axes=1) for m in self.tables_)
        c = np.fft.ifftshift(coef)
        w1, w2 = self.weights_
        acc = np.zeros(grid.shape)
        for s in range(m1.shape[0]):
            G = np.fft.ifft(m1[s][:, None] * c, axis=0)
            for lo in range(0, m2.shape[0], _CHUNK):
                H = np.fft.ifft(G[None, :, :] * m2[lo:lo + _CHUNK, None, :], axis=2)
                acc += w1[s] * np.tensordot(w2[lo:lo + _CHUNK], H.real**2 + H.imag**2,
                                            axes=(0, 0))
        return np.sqrt(acc)


class MarcinkiewiczIntegral(_SeparableSquareFunction):
    """Multiparameter Marcinkiewicz integral ``mu_alpha``.

    ``representation='difference'`` (only for ``alpha = 1``) evaluates the
    same quantity as the second difference of the spectral antiderivative,
    ``|Delta_t F| / t``.
    """

    def __init__(self, alpha=1.0, tmin=DEFAULT_TMIN, tmax=DEFAULT_TMAX,
                 steps_per_octave=DEFAULT_STEPS, points=None, representation="average"):
        self.alpha = alpha
        self.tmin = tmin
        self.tmax = tmax
        self.steps_per_octave = steps_per_octave
        self.points = points
        self.representation = representation

    def _params(self, n):
        alpha = as_multi_index(self.alpha, n, "alpha")
        if self.representation == "difference" and any(a != 1.0 for a in alpha):
            raise ValueError("the difference representation only exists for alpha = 1")
        if self.representation not in ("average", "difference"):
            raise ValueError(f"unknown representation {self.representation!r}")
        return alpha

    def _axis_table(self, alpha, nodes, xi, grid):
        if self.representation == "difference":
            return (second_difference_multiplier(nodes, xi) * antiderivative_multiplier(xi)[None, :]
                    / nodes[:, None])
        return s_t_multiplier(alpha, nodes, xi)


class BochnerRieszSquare(_SeparableSquareFunction):
    """``h_beta``; with ``hilbert=True`` the field is first passed through
    the tensor Hilbert transform."""

    def __init__(self, beta=1.5, tmin=DEFAULT_TMIN, tmax=DEFAULT_TMAX,
                 steps_per_octave=DEFAULT_STEPS, points=None, hilbert=False):
        self.beta = beta
        self.tmin = tmin
        self.tmax = tmax
        self.steps_per_octave = steps_per_octave
        self.points = points
        self.hilbert = hilbert

    def _params(self, n):
        return as_multi_index(self.beta, n, "beta")

    def _axis_table(self, beta, nodes, xi, grid):
        m = tau_multiplier(beta, nodes, xi, grid.dxi)
        if self.hilbert:
            m = m * hilbert_multiplier(xi)[None, :]
        return m


class RieszDifferenceSquare(_SeparableSquareFunction):
    """``D_alpha``: odd differences of the Riesz potential, ``0 < alpha_j < 1``."""

    def __init__(self, alpha=0.5, tmin=DEFAULT_TMIN, tmax=DEFAULT_TMAX,
                 steps_per_octave=DEFAULT_STEPS, points=None):
        self.alpha = alpha
        self.tmin = tmin
        self.tmax = tmax
        self.steps_per_octave = steps_per_octave
        self.points = points

    def _params(self, n):
        alpha = as_multi_index(self.alpha, n, "alpha")
        if any(a >= 1 for a in alpha):
            raise ValueError(f"D_alpha needs 0 < alpha_j < 1, got {alpha}")
        return alpha

    def _axis_table(self, alpha, nodes, xi, grid):
        return delta_multiplier(nodes, xi) * riesz_multiplier(alpha, xi)[None, :]

    def _axis_weights(self, alpha, t_grid):
        return t_grid.weights * t_grid.nodes ** (-2.0 * alpha)

    def _validate(self, field):
        check_riesz_safe(field)


class PoissonG0(_SeparableSquareFunction):
    """``g_0``: mixed spatial derivative of the Poisson extension against
    ``t_1 ... t_n dt``."""

    def __init__(self, tmin=DEFAULT_TMIN, tmax=DEFAULT_TMAX, steps_per_octave=DEFAULT_STEPS,
                 points=None):
        self.tmin = tmin
        self.tmax = tmax
        self.steps_per_octave = steps_per_octave
        self.points = points

    def _axis_table(self, _p, nodes, xi, grid):
        return poisson_partial_multiplier(nodes, xi, "y")

    def _axis_weights(self, _p, t_grid):
        return t_grid.weights * t_grid.nodes**2


def _cell_weight_primitive(lam, t, s, form):
    """Odd primitive ``G(s) = int_0^s weight(u) du`` of the y-weight."""
    a = np.abs(s)
    if form == "power":
        # weight (t / (t + |u|))^lam
        if lam == 1.0:
            g = t * np.log1p(a / t)
        else:
            g = t * np.expm1((1.0 - lam) * np.log1p(a / t)) / (1.0 - lam)
    else:
        # weight (t^2 / (t^2 + u^2))^(lam/2)
        g = a * hyp2f1(lam / 2.0, 0.5, 1.5, -(a / t) ** 2)
    return np.sign(s) * g


class GStarFunction(BaseEstimator):
    """Littlewood-Paley ``g*_lambda`` by direct quadrature over ``(y, t)``.

    The y-integral uses the grid's cells with the weight integrated exactly
    over each cell (the weight is far narrower than a cell for small t);
    the y-window is ``|y_j - x_j| <= window`` (default ``L/2``).
    ``weight='quadratic'`` replaces ``t/(t+|x-y|)`` by
    ``t/sqrt(t^2+|x-y|^2)``.

    Cost for n = 2 is ``O(S^2 N^2 log N)`` for S scale nodes per axis;
    keep S and N small there.
    """

    def __init__(self, lam=2.0, tmin=DEFAULT_TMIN, tmax=DEFAULT_TMAX,
                 steps_per_octave=DEFAULT_STEPS, points=None, window=None, weight="power"):
        self.lam = lam
        self.tmin = tmin
        self.tmax = tmax
        self.steps_per_octave = steps_per_octave
        self.points = points
        self.window = window
        self.weight = weight

    def fit(self, X, y=None):
        grid = check_grid(X)
        if grid.n > 2:
            raise UnsupportedDimensionError("g*_lambda is implemented for n <= 2")
        if self.weight not in ("power", "quadratic"):
            raise ValueError(f"unknown weight form {self.weight!r}")
        self.grid_ = grid
        self.lam_ = as_multi_index(self.lam, grid.n, "lambda")
        self.t_grid_ = DyadicTGrid(self.tmin, self.tmax, self.steps_per_octave)
        self.points_ = check_points(self.points, grid)
        W = grid.L / 2 if self.window is None else float(self.window)
        if W <= 0 or np.any(np.abs(self.points_) + W > grid.L):
            raise ValueError(f"window {W} leaves the grid for some evaluation point")
        self.window_ = W
        return self

    def _cell_weights(self, lam, coords):
        """Array ``(S, P, N)`` of cell-integrated weights per scale node."""
        grid = self.grid_
        y = grid.x_axis()
        d = y[None, :] - coords[:, None]
        t = self.t_grid_.nodes[:, None, None]
        lo = d - grid.h / 2
        hi = d + grid.h / 2
        w = (_cell_weight_primitive(lam, t, hi[None], self.weight)
             - _cell_weight_primitive(lam, t, lo[None], self.weight))
        return np.where(np.abs(d)[None] <= self.window_, w, 0.0)

    def transform(self, X):
        check_is_fitted(self, "t_grid_")
        grid = self.grid_
        coef = forward_fourier(check_field(X, grid)).coefficients
        xi = grid.xi_axis()
        nodes = self.t_grid_.nodes
        tw = self.t_grid_.weights * nodes  # dt = t (dt/t)
        branches = {b: poisson_partial_multiplier(nodes, xi, b) for b in ("t", "y")}
        if grid.n == 1:
            Wc = self._cell_weights(self.lam_[0], self.points_[:, 0])
            total = np.zeros(len(self.points_))
            for m in branches.values():
                D = inverse_axis(m * coef[None, :], 1, grid)
                total += np.einsum("s,spy,sy->p", tw, Wc, D.real**2 + D.imag**2)
            return np.sqrt(total)
        X1, inv1 = np.unique(self.points_[:, 0], return_inverse=True)
        X2, inv2 = np.unique(self.points_[:, 1], return_inverse=True)
        W1 = self._cell_weights(self.lam_[0], X1)
        W2 = self._cell_weights(self.lam_[1], X2)
        phase = _alternating(grid.N) / grid.h
        shifted = {b: np.fft.ifftshift(m * phase[None, :], axes=1) for b, m in branches.items()}
        c = np.fft.ifftshift(coef)
        # (r, z, b) weights repeated for the interleaved real/imaginary float view
        W2 = np.repeat(np.transpose(W2 * tw[:, None, None], (0, 2, 1)), 2, axis=1)
        buf = np.empty((_CHUNK, grid.N, grid.N), dtype=complex)
        lattice = np.zeros((len(X1), len(X2)))
        for m1 in shifted.values():
            for s in range(len(nodes)):
                G = sp_fft.ifft(m1[s][:, None] * c, axis=0)
                acc = np.zeros((grid.N, len(X2)))
                for m2 in shifted.values():
                    for lo in range(0, len(nodes), _CHUNK):
                        k = min(_CHUNK, len(nodes) - lo)
                        H = np.multiply(G[None, :, :], m2[lo:lo + k, None, :], out=buf[:k])
                        H = sp_fft.ifft(H, axis=2, overwrite_x=True)
                        V = H.view(np.float64)
                        np.square(V, out=V)
                        acc += np.matmul(V, W2[lo:lo + k]).sum(axis=0)
                lattice += tw[s] * (W1[s] @ acc)
        return np.sqrt(lattice[inv1.ravel(), inv2.ravel()])


@dataclass(frozen=True)
class SquareFunctionConfig:
    """Scale grid, evaluation points and g* window shared by the functional API."""

    tmin: float = DEFAULT_TMIN
    tmax: float = DEFAULT_TMAX
    steps_per_octave: int = DEFAULT_STEPS
    points: object = None
    window: float | None = None

    def kwargs(self):
        return dict(tmin=self.tmin, tmax=self.tmax, steps_per_octave=self.steps_per_octave,
                    points=self.points)


def mu_alpha(f: SampledField, alpha, cfg: SquareFunctionConfig = SquareFunctionConfig()):
    return MarcinkiewiczIntegral(alpha, **cfg.kwargs()).fit(f).transform(f)


def h_beta(f: SampledField, beta, cfg: SquareFunctionConfig = SquareFunctionConfig(),
           hilbert: bool = False):
    return BochnerRieszSquare(beta, hilbert=hilbert, **cfg.kwargs()).fit(f).transform(f)


def d_alpha(f: SampledField, alpha, cfg: SquareFunctionConfig = SquareFunctionConfig()):
    return RieszDifferenceSquare(alpha, **cfg.kwargs()).fit(f).transform(f)


def g0(f: SampledField, cfg: SquareFunctionConfig = SquareFunctionConfig()):
    return PoissonG0(**cfg.kwargs()).fit(f).transform(f)


def g_star_lambda(f: SampledField, lam, cfg: SquareFunctionConfig = SquareFunctionConfig()):
    return GStarFunction(lam, window=cfg.window, **cfg.kwargs()).fit(f).transform(f)
