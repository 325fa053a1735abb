"""Test functions with closed-form values and Fourier transforms.

A member is a finite sum of separable terms ``c * prod_j p_j(x_j)`` where
each one-variable profile knows both ``p(x)`` and ``p^(xi)``. The closed
forms let the bridge checks evaluate ``f`` off the grid.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .numerics import GridSpec, SampledField, forward_fourier


@dataclass(frozen=True)
class GaussianDerivative:
    """``g^(k)((x - shift)/scale)`` with ``g(x) = exp(-pi x^2)``."""

    order: int = 1
    shift: float = 0.0
    scale: float = 1.0

    def __call__(self, x):
        u = (np.asarray(x, dtype=float) - self.shift) / self.scale
        g = np.exp(-np.pi * u**2)
        if self.order == 0:
            return g
        if self.order == 1:
            return -2 * np.pi * u * g
        if self.order == 2:
            return (4 * np.pi**2 * u**2 - 2 * np.pi) * g
        if self.order == 3:
            return (-8 * np.pi**3 * u**3 + 12 * np.pi**2 * u) * g
        raise ValueError("orders 0..3 are supported")

    def hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        s = self.scale
        return (s * np.exp(-2j * np.pi * self.shift * xi) * (2j * np.pi * s * xi) ** self.order
                * np.exp(-np.pi * (s * xi) ** 2))

    @property
    def mean_zero(self):
        return self.order >= 1


@dataclass(frozen=True)
class ModulatedGaussian:
    """``exp(-pi ((x - shift)/scale)^2) cos(2 pi freq x)``."""

    freq: float = 1.0
    shift: float = 0.0
    scale: float = 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-np.pi * ((x - self.shift) / self.scale) ** 2) * np.cos(2 * np.pi * self.freq * x)

    def hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        s = self.scale

        def g(z):
            return s * np.exp(-2j * np.pi * self.shift * z) * np.exp(-np.pi * (s * z) ** 2)

        return 0.5 * (g(xi - self.freq) + g(xi + self.freq))

    @property
    def mean_zero(self):
        return False


@dataclass(frozen=True)
class HalfLineProfile:
    """Spectrum ``(xi/scale)^k exp(-xi/scale)`` on ``xi >= 0``, zero below.

    ``p(x) = scale k! / (1 - 2 pi i scale (x - shift))^(k+1)``; ``reflect``
    mirrors the spectrum onto ``xi <= 0``.
    """

    power: int = 2
    scale: float = 1.0
    shift: float = 0.0
    reflect: bool = False

    def __call__(self, x):
        u = np.asarray(x, dtype=float) - self.shift
        if self.reflect:
            u = -u
        k = self.power
        return self.scale * factorial(k) / (1 - 2j * np.pi * self.scale * u) ** (k + 1)

    def hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        v = (-xi if self.reflect else xi) / self.scale
        body = np.where(v >= 0, np.abs(v) ** self.power * np.exp(-np.abs(v)), 0.0)
        return np.exp(-2j * np.pi * self.shift * xi) * body

    @property
    def mean_zero(self):
        return self.power >= 1


@dataclass(frozen=True)
class Member:
    """``sum_i coeffs[i] * prod_j terms[i][j](x_j)``."""

    name: str
    terms: tuple
    coeffs: tuple = ()

    @property
    def n(self) -> int:
        return len(self.terms[0])

    def _coeffs(self):
        return self.coeffs or (1.0,) * len(self.terms)

    def __call__(self, x):
        """Evaluate at points of shape ``(..., n)``."""
        x = np.asarray(x, dtype=float)
        out = 0
        for c, term in zip(self._coeffs(), self.terms):
            prod = c
            for j, p in enumerate(term):
                prod = prod * p(x[..., j])
            out = out + prod
        return out

    def hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = 0
        for c, term in zip(self._coeffs(), self.terms):
            prod = c
            for j, p in enumerate(term):
                prod = prod * p.hat(xi[..., j])
            out = out + prod
        return out

    def sample(self, grid: GridSpec) -> SampledField:
        if grid.n != self.n:
            raise ValueError(f"member {self.name} has n = {self.n}, grid has n = {grid.n}")
        return SampledField(grid, np.asarray(self(grid.mesh()), dtype=complex))

    @property
    def riesz_safe(self) -> bool:
        # mean zero along every axis slice: each term has a mean-zero factor per axis
        return all(all(p.mean_zero for p in term) for term in self.terms)

    @property
    def separable(self) -> bool:
        return len(self.terms) == 1

    def scaled(self, c: float) -> Member:
        return Member(f"{c:g}*{self.name}", self.terms, tuple(c * k for k in self._coeffs()))

    def dilated(self, r: float) -> Member:
        """``f(r x)``."""
        terms, coeffs = [], []
        for c, term in zip(self._coeffs(), self.terms):
            pairs = [_dilate(p, r) for p in term]
            terms.append(tuple(p for p, _ in pairs))
            coeffs.append(c * float(np.prod([k for _, k in pairs])))
        return Member(f"{self.name}(r={r:g})", tuple(terms), tuple(coeffs))

    def reflected(self, kappa: Sequence[int]) -> Member:
        """``f(kappa_1 x_1, ..., kappa_n x_n)`` for signs ``kappa_j``."""
        return Member(f"{self.name}(kappa={tuple(kappa)})",
                      tuple(tuple(p if k > 0 else _reflect(p) for p, k in zip(term, kappa))
                            for term in self.terms), self.coeffs)


def _dilate(p, r):
    """Profile ``q`` and factor ``k`` with ``p(r x) = k q(x)``."""
    if isinstance(p, GaussianDerivative):
        return GaussianDerivative(p.order, p.shift / r, p.scale / r), 1.0
    if isinstance(p, ModulatedGaussian):
        return ModulatedGaussian(p.freq * r, p.shift / r, p.scale / r), 1.0
    if isinstance(p, HalfLineProfile):
        # s k!/(1 - 2 pi i s (r x - a))^(k+1) = (1/r) (r s) k!/(1 - 2 pi i (r s)(x - a/r))^(k+1)
        return HalfLineProfile(p.power, p.scale * r, p.shift / r, p.reflect), 1.0 / r
    if isinstance(p, _Reflected):
        q, k = _dilate(p.base, r)
        return _Reflected(q), k
    raise TypeError(type(p))


def _reflect(p):
    if isinstance(p, GaussianDerivative):
        # g^(k)(-u) = (-1)^k g^(k)(u); fold the sign into a shift-reflected copy
        return _Reflected(p)
    if isinstance(p, HalfLineProfile):
        return HalfLineProfile(p.power, p.scale, -p.shift, not p.reflect)
    return _Reflected(p)


@dataclass(frozen=True)
class _Reflected:
    base: object

    def __call__(self, x):
        return self.base(-np.asarray(x, dtype=float))

    def hat(self, xi):
        return self.base.hat(-np.asarray(xi, dtype=float))

    @property
    def mean_zero(self):
        return self.base.mean_zero


@dataclass
class TestFamily:
    """Named list of members with their fields sampled on one grid."""

    __test__ = False  # not a pytest class

    name: str
    grid: GridSpec
    members: list
    fields: list = field(default_factory=list)
    riesz_safe: bool = False
    half_line: bool = False
    seed: int | None = None

    def __post_init__(self):
        if not self.fields:
            self.fields = [m.sample(self.grid) for m in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(zip(self.members, self.fields))


def _gauss_deriv_1d():
    G = GaussianDerivative
    return [
        Member("odd", ((G(1),),)),
        Member("even", ((G(2, 0.0, 1.0),),), (-1.0 / (2 * np.pi),)),
        Member("mixed", ((G(1, 0.25, 0.8),), (G(2, -0.4, 0.7),)), (1.0, 0.3)),
    ]


def gauss_deriv_members(n: int):
    """The default mean-zero family: Gaussian derivatives, shifted and dilated."""
    base = _gauss_deriv_1d()
    if n == 1:
        return base
    if n != 2:
        raise ValueError("gauss-deriv members are defined for n <= 2")
    G = GaussianDerivative
    return [
        Member("odd x odd", ((G(1), G(1)),)),
        Member("even x odd", ((G(2), G(1, 0.2, 0.9)),), (-1.0 / (2 * np.pi),)),
        Member("mixed", ((G(1, 0.25, 0.8), G(2)), (G(2, -0.4, 0.7), G(1, 0.1, 1.2))), (1.0, 0.3)),
    ]


def random_members(n: int, seed: int, count: int = 3, terms: int = 3):
    """Random mean-zero sums of Gaussian derivatives (orders 1..3)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        tt, cc = [], []
        for _ in range(terms):
            tt.append(tuple(GaussianDerivative(int(rng.integers(1, 4)), float(rng.uniform(-1, 1)),
                                               float(rng.uniform(0.6, 1.4))) for _ in range(n)))
            cc.append(float(rng.normal()))
        out.append(Member(f"random{seed}-{i}", tuple(tt), tuple(cc)))
    return out


def modulated_members(n: int):
    M = ModulatedGaussian
    base = [M(0.5), M(1.0, 0.3, 0.8), M(1.5, -0.2, 1.2)]
    return [Member(f"mod{p.freq:g}", (tuple([p] * n),)) for p in base]


def half_line_members(n: int, power: int = 14, scale: float = 0.1):
    """Half-line spectra; ``scale`` sets the spectral peak ``power * scale``."""
    H = HalfLineProfile
    base = [H(power, scale), H(power, scale * 0.8, 0.3), H(power + 2, scale * 0.65, -0.2)]
    if n == 1:
        return [Member(f"halfline-k{p.power}-s{p.scale:.4g}", ((p,),)) for p in base]
    if n != 2:
        raise ValueError("half-line members are defined for n <= 2")
    return [
        Member("halfline a x a", ((base[0], base[0]),)),
        Member("halfline b x c", ((base[1], base[2]),)),
        Member("halfline sum", ((base[0], base[1]), (base[2], base[0])), (1.0, 0.5)),
    ]


def half_line_scale(grid: GridSpec) -> float:
    """Largest scale whose spectrum is negligible at the Nyquist frequency."""
    return 1.0 / (2 * grid.h) / 65.0


FAMILY_NAMES = ("gauss-deriv", "random", "modulated", "half-line")


def spectral_leakage(family: TestFamily) -> dict:
    """Diagnostics for the family invariants.

    ``edge`` is the largest |f| outside ``[-L/2, L/2)^n`` relative to the
    peak; ``negative`` the largest |f^| with some ``xi_j < 0`` relative to
    the spectral peak.
    """
    grid = family.grid
    x = grid.mesh()
    outside = np.any(np.abs(x + grid.h * 0) >= grid.L / 2, axis=-1)
    edge = neg = 0.0
    xi = grid.xi_mesh()
    negative = np.any(xi < 0, axis=-1)
    for f in family.fields:
        v = np.abs(f.values)
        if v.max() == 0:
            continue
        edge = max(edge, v[outside].max() / v.max())
        c = np.abs(forward_fourier(f).coefficients)
        neg = max(neg, c[negative].max() / c.max())
    return {"edge": edge, "negative": neg}


class FamilyInvariantError(ValueError):
    pass


def build_family(name: str, grid: GridSpec, seed: int = 0, check: bool = True,
                 edge_tol: float = 1e-10, negative_tol: float = 1e-12, **kwargs) -> TestFamily:
    """Construct a named family on ``grid`` and enforce its invariants."""
    n = grid.n
    if name == "gauss-deriv":
        fam = TestFamily(name, grid, gauss_deriv_members(n), riesz_safe=True, seed=seed)
    elif name == "random":
        fam = TestFamily(name, grid, random_members(n, seed, **kwargs), riesz_safe=True, seed=seed)
    elif name == "modulated":
        fam = TestFamily(name, grid, modulated_members(n), seed=seed)
    elif name == "half-line":
        kwargs.setdefault("scale", half_line_scale(grid))
        fam = TestFamily(name, grid, half_line_members(n, **kwargs), half_line=True, seed=seed)
    else:
        raise ValueError(f"unknown family {name!r}; choose from {FAMILY_NAMES}")
    if check:
        diag = spectral_leakage(fam)
        if diag["edge"] >= edge_tol:
            raise FamilyInvariantError(
                f"family {name} has relative mass {diag['edge']:.2e} outside [-L/2, L/2)^n; "
                "enlarge L")
        if fam.half_line and diag["negative"] >= negative_tol:
            raise FamilyInvariantError(
                f"family {name} leaks {diag['negative']:.2e} of its spectrum onto xi_j < 0; "
                "refine the grid or enlarge L")
    return fam
