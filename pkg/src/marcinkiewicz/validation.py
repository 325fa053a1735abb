"""Input checks shared by the estimators."""

from __future__ import annotations

import numpy as np

from .numerics import GridSpec, SampledField, StructuralError


class UnsupportedDimensionError(ValueError):
    pass


def check_field(X, grid: GridSpec | None = None) -> SampledField:
    """Accept a :class:`SampledField`, or an array when ``grid`` is known."""
    if isinstance(X, SampledField):
        if grid is not None and X.grid != grid:
            raise StructuralError(f"field lives on {X.grid}, estimator was fitted on {grid}")
        return X
    if grid is None:
        raise TypeError(f"expected a SampledField, got {type(X).__name__}")
    return SampledField(grid, X)


def check_grid(X) -> GridSpec:
    if isinstance(X, GridSpec):
        return X
    if isinstance(X, SampledField):
        return X.grid
    raise TypeError(f"expected a GridSpec or SampledField, got {type(X).__name__}")


def default_points(grid: GridSpec) -> np.ndarray:
    """33 points on ``[-L/4, L/4]`` for n = 1, a 9 x 9 lattice for n = 2."""
    per_axis = 33 if grid.n == 1 else 9
    x = np.linspace(-grid.L / 4, grid.L / 4, per_axis)
    mesh = np.meshgrid(*([x] * grid.n), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def check_points(points, grid: GridSpec) -> np.ndarray:
    if points is None:
        return default_points(grid)
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and grid.n == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != grid.n:
        raise StructuralError(f"points must have shape (P, {grid.n}), got {pts.shape}")
    if np.any(np.abs(pts) >= grid.L / 2):
        raise ValueError(f"evaluation points must lie strictly inside [-L/2, L/2)^n (L = {grid.L})")
    return pts
