"""Grids, the continuous-normalised discrete Fourier transform, dyadic
quadrature in dt/t and a log-space complex gamma function."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np


class StructuralError(ValueError):
    """Raised when shapes, grids or dimensions do not line up."""


class GammaPoleError(ValueError):
    """Raised when the gamma function is requested at a pole."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[-L, L)^n`` with ``N`` points per axis.

    Spatial nodes are ``-L + j*h`` and frequency nodes ``k/(2L)`` for
    ``k = -N/2, ..., N/2 - 1`` (stored in ascending order).
    """

    n: int
    L: float
    N: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise StructuralError(f"dimension must be a positive integer, got {self.n}")
        if not (self.L > 0 and np.isfinite(self.L)):
            raise StructuralError(f"half width must be positive, got {self.L}")
        N = int(self.N)
        if N != self.N or N < 8 or N & (N - 1):
            raise StructuralError(f"points per axis must be a power of two >= 8, got {self.N}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def dxi(self) -> float:
        return 1.0 / (2.0 * self.L)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    def x_axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)

    def xi_axis(self) -> np.ndarray:
        return np.arange(-self.N // 2, self.N // 2) * self.dxi

    def mesh(self) -> np.ndarray:
        """Spatial coordinates, shape ``(N,)*n + (n,)``."""
        x = self.x_axis()
        return np.stack(np.meshgrid(*([x] * self.n), indexing="ij"), axis=-1)

    def xi_mesh(self) -> np.ndarray:
        xi = self.xi_axis()
        return np.stack(np.meshgrid(*([xi] * self.n), indexing="ij"), axis=-1)


def _checked_values(grid: GridSpec, values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 1 and grid.n > 1 and arr.size == grid.N**grid.n:
        arr = arr.reshape(grid.shape)
    if arr.shape != grid.shape:
        raise StructuralError(f"{what} has shape {arr.shape}, grid expects {grid.shape}")
    if not np.all(np.isfinite(arr)):
        raise StructuralError(f"{what} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class SampledField:
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _checked_values(self.grid, self.values, "sampled field")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __add__(self, other: SampledField) -> SampledField:
        _same_grid(self.grid, other.grid)
        return SampledField(self.grid, self.values + other.values)

    def __mul__(self, c) -> SampledField:
        return SampledField(self.grid, c * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients ``f^(xi_k)`` on the ascending frequency nodes."""

    grid: GridSpec
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _checked_values(self.grid, self.coefficients, "spectral field")
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)


def _same_grid(a: GridSpec, b: GridSpec) -> None:
    if a != b:
        raise StructuralError(f"grid mismatch: {a} vs {b}")


def _alternating(N: int) -> np.ndarray:
    # (-1)^k for k = -N/2 .. N/2-1; N/2 is even when N >= 8 is a power of two
    return np.where(np.arange(N) % 2 == 0, 1.0, -1.0)


def forward_axis(values: np.ndarray, axis: int, grid: GridSpec) -> np.ndarray:
    """Continuous-normalised forward transform along one axis."""
    out = np.fft.fftshift(np.fft.fft(values, axis=axis), axes=axis)
    shape = [1] * out.ndim
    shape[axis] = grid.N
    return out * (grid.h * _alternating(grid.N)).reshape(shape)


def inverse_axis(coefficients: np.ndarray, axis: int, grid: GridSpec) -> np.ndarray:
    """Inverse of :func:`forward_axis` along one axis."""
    shape = [1] * coefficients.ndim
    shape[axis] = grid.N
    c = coefficients * (_alternating(grid.N) / grid.h).reshape(shape)
    return np.fft.ifft(np.fft.ifftshift(c, axes=axis), axis=axis)


def forward_fourier(f: SampledField) -> SpectralField:
    """``f^(xi) = int f(x) exp(-2 pi i x.xi) dx`` approximated on the grid."""
    out = f.values
    for axis in range(f.grid.n):
        out = forward_axis(out, axis, f.grid)
    return SpectralField(f.grid, out)


def inverse_fourier(F: SpectralField) -> SampledField:
    out = F.coefficients
    for axis in range(F.grid.n):
        out = inverse_axis(out, axis, F.grid)
    return SampledField(F.grid, out)


def apply_axis_multipliers(f: SampledField, factors: Sequence) -> SampledField:
    """Multiply ``f^`` by a tensor product of per-axis factors and invert.

    ``factors[j]`` is ``None`` (identity), a callable of the frequency
    array, or an array of length ``N``.
    """
    if len(factors) != f.grid.n:
        raise StructuralError(f"expected {f.grid.n} axis factors, got {len(factors)}")
    coef = forward_fourier(f).coefficients
    xi = f.grid.xi_axis()
    for axis, fac in enumerate(factors):
        if fac is None:
            continue
        m = np.asarray(fac(xi) if callable(fac) else fac, dtype=complex)
        if m.shape != (f.grid.N,):
            raise StructuralError(f"axis factor {axis} has shape {m.shape}")
        shape = [1] * f.grid.n
        shape[axis] = f.grid.N
        coef = coef * m.reshape(shape)
    return inverse_fourier(SpectralField(f.grid, coef))


@dataclass(frozen=True)
class DyadicTGrid:
    """Log-uniform nodes for integrals against ``dt/t``.

    Nodes sit at the log-midpoints ``t_min * 2**((j + 1/2)/m)`` of the
    cells partitioning ``[t_min, t_max]``; every weight is ``ln 2 / m``.
    ``t_max / t_min`` must be a power of ``2**(1/m)``.
    """

    t_min: float
    t_max: float
    steps_per_octave: int = 8

    def __post_init__(self):
        if not (self.t_min > 0 and self.t_max > self.t_min):
            raise StructuralError(f"need 0 < t_min < t_max, got {self.t_min}, {self.t_max}")
        m = self.steps_per_octave
        if int(m) != m or m < 4:
            raise StructuralError(f"steps_per_octave must be an integer >= 4, got {m}")
        cells = m * np.log2(self.t_max / self.t_min)
        if abs(cells - round(cells)) > 1e-9:
            raise StructuralError("t_max/t_min must be an integer power of 2**(1/m)")

    @property
    def size(self) -> int:
        return int(round(self.steps_per_octave * np.log2(self.t_max / self.t_min)))

    @property
    def nodes(self) -> np.ndarray:
        j = np.arange(self.size) + 0.5
        return self.t_min * 2.0 ** (j / self.steps_per_octave)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, np.log(2.0) / self.steps_per_octave)

    def refined(self) -> DyadicTGrid:
        return DyadicTGrid(self.t_min, self.t_max, 2 * self.steps_per_octave)

    def widened(self, octaves: int = 1) -> DyadicTGrid:
        return DyadicTGrid(self.t_min / 2**octaves, self.t_max * 2**octaves, self.steps_per_octave)


def log_quadrature(samples, grid: DyadicTGrid) -> float:
    samples = np.asarray(samples)
    if samples.shape[:1] != (grid.size,):
        raise StructuralError(f"expected {grid.size} samples, got {samples.shape[:1]}")
    return np.tensordot(grid.weights, samples, axes=(0, 0))


def as_multi_index(value, n: int, name: str = "index") -> tuple[float, ...]:
    """Broadcast a scalar or parse a sequence into ``n`` positive reals."""
    if isinstance(value, str):
        value = [float(v) for v in value.split(",") if v.strip()]
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        arr = np.repeat(arr, n)
    if arr.shape != (n,):
        raise StructuralError(f"{name} needs {n} components, got {arr.size}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} components must be positive, got {tuple(arr)}")
    return tuple(float(v) for v in arr)


# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def log_sin(w):
    """A logarithm of ``sin(w)`` that stays finite for large ``|Im w|``.

    The branch of the imaginary part is arbitrary; ``exp(log_sin(w))`` is
    ``sin(w)``.
    """
    w = np.asarray(w, dtype=complex)
    flip = w.imag < 0
    v = np.where(flip, np.conj(w), w)
    # sin v = exp(-i v) (exp(2 i v) - 1) / (2 i),  |exp(2 i v)| <= 1
    out = -1j * v + np.log((np.exp(2j * v) - 1.0) / 2j)
    return np.where(flip, np.conj(out), out)


def _log_gamma_right(z: np.ndarray) -> np.ndarray:
    z = z - 1.0
    x = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def log_gamma(z):
    """``ln Gamma(z)`` for complex ``z`` (imaginary part modulo 2 pi)."""
    z = np.asarray(z, dtype=complex)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(pole):
        raise GammaPoleError(f"Gamma has a pole at {z[pole].ravel()[0].real:g}")
    left = z.real < 0.5
    zr = np.where(left, 1.0 - z, z)
    out = _log_gamma_right(zr)
    if np.any(left):
        refl = np.log(np.pi) - log_sin(np.pi * z) - out
        out = np.where(left, refl, out)
    return out if out.ndim else out[()]


def complex_gamma(z):
    return np.exp(log_gamma(z))
