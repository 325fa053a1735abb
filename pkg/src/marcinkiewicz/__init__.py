"""Multiparameter Marcinkiewicz and Littlewood-Paley square functions on periodic grids."""

from .numerics import (
    DyadicTGrid,
    GammaPoleError,
    GridSpec,
    SampledField,
    SpectralField,
    StructuralError,
    complex_gamma,
    forward_fourier,
    inverse_fourier,
    log_gamma,
)
from .square_functions import (
    BochnerRieszSquare,
    GStarFunction,
    MarcinkiewiczIntegral,
    PoissonG0,
    RieszDifferenceSquare,
    SquareFunctionConfig,
    d_alpha,
    g0,
    g_star_lambda,
    h_beta,
    mu_alpha,
)

__all__ = [
    "BochnerRieszSquare", "DyadicTGrid", "GStarFunction", "GammaPoleError", "GridSpec",
    "MarcinkiewiczIntegral", "PoissonG0", "RieszDifferenceSquare", "SampledField",
    "SpectralField", "SquareFunctionConfig", "StructuralError", "complex_gamma", "d_alpha",
    "forward_fourier", "g0", "g_star_lambda", "h_beta", "inverse_fourier", "log_gamma",
    "mu_alpha",
]
__version__ = "0.1.0"
