import numpy as np
import pytest

from marcinkiewicz.families import (
    FAMILY_NAMES,
    FamilyInvariantError,
    build_family,
    half_line_scale,
    spectral_leakage,
)
from marcinkiewicz.numerics import GridSpec, forward_fourier
from marcinkiewicz.transforms import check_riesz_safe

G1 = GridSpec(1, 32.0, 1024)
G2 = GridSpec(2, 32.0, 512)


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_sampled_spectrum_matches_closed_form(name):
    fam = build_family(name, G1, seed=3)
    xi = G1.xi_axis()[:, None]
    for m, f in zip(fam.members, fam.fields):
        coef = forward_fourier(f).coefficients
        ref = m.hat(xi)
        assert np.max(np.abs(coef - ref)) < 1e-10 * np.max(np.abs(ref))


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_seed_determinism(name):
    a = build_family(name, G1, seed=11)
    b = build_family(name, G1, seed=11)
    for fa, fb in zip(a.fields, b.fields):
        assert np.array_equal(fa.values, fb.values)


def test_random_family_depends_on_seed():
    a = build_family("random", G1, seed=1).fields[0].values
    b = build_family("random", G1, seed=2).fields[0].values
    assert not np.allclose(a, b)


def test_riesz_safe_members_have_zero_mean():
    for name in ("gauss-deriv", "random"):
        fam = build_family(name, G1)
        assert fam.riesz_safe
        for f in fam.fields:
            check_riesz_safe(f)


@pytest.mark.parametrize("grid", [G1, G2])
def test_half_line_invariants(grid):
    fam = build_family("half-line", grid)
    assert fam.half_line
    leak = spectral_leakage(fam)
    assert leak["edge"] < 1e-10 and leak["negative"] < 1e-12


def test_half_line_scale_tracks_the_grid():
    assert half_line_scale(G1) == pytest.approx(1 / (2 * G1.h) / 65)


def test_half_line_needs_room():
    with pytest.raises(FamilyInvariantError):
        build_family("half-line", GridSpec(1, 16.0, 256))


def test_dilation_and_reflection_of_members():
    m = build_family("gauss-deriv", G1).members[2]
    x = np.linspace(-3, 3, 13)[:, None]
    assert np.allclose(m.dilated(2.0)(x), m(2.0 * x))
    h = build_family("half-line", G1).members[0]
    xi = np.linspace(-2, 2, 41)[:, None]
    assert np.allclose(h.reflected((0,)).hat(xi), h.hat(-xi))
    assert np.allclose(h.dilated(2.0)(x), h(2.0 * x))


def test_two_variable_members_are_tensor_products():
    fam = build_family("gauss-deriv", GridSpec(2, 16.0, 256))
    assert len(fam.members) >= 3
    for f in fam.fields:
        assert f.values.shape == (256, 256)


def test_unknown_family():
    with pytest.raises(ValueError):
        build_family("nope", G1)
