import math

import numpy as np
from numpy.testing import assert_allclose
import pytest

from rotshape.exceptions import GridError
from rotshape.pulse import (DEFAULT_OMEGA0, PhaseProfile, SlmConfig, intensity_fwhm, make_grid,
                            make_pulse, pixel_phase_error_bound, satellite_energy_fraction,
                            sigma_from_intensity_fwhm, slm_discretize, time_field,
                            time_intensity)


def test_default_carrier_is_800nm():
    assert_allclose(DEFAULT_OMEGA0, 2.354564459, rtol=1e-9)


@pytest.mark.parametrize("tau", [30.0, 120.0, 250.0])
def test_transform_limited_duration_round_trip(tau):
    p = make_pulse(sigma=sigma_from_intensity_fwhm(tau))
    t, inten = time_intensity(p, upsample=8)
    assert_allclose(intensity_fwhm(t, inten), tau, rtol=2e-3)


def test_fft_and_direct_time_field_agree(sigma120):
    p = make_pulse(sigma=sigma120, phase=PhaseProfile(2000.0, 3e5))
    t, inten = time_intensity(p)
    pick = np.arange(len(t) // 2 - 40, len(t) // 2 + 40, 7)
    assert_allclose(np.abs(time_field(p, t[pick])) ** 2, inten[pick], rtol=1e-8,
                    atol=1e-10 * inten.max())


def test_phase_profile_derivative():
    prof = PhaseProfile(1.5e4, -2e6)
    x = np.linspace(-0.05, 0.05, 11)
    h = 1e-7
    fd = (prof(x + h) - prof(x - h)) / (2 * h)
    assert_allclose(prof.derivative(x), fd, rtol=1e-6, atol=1e-6)
    with pytest.raises(ValueError):
        PhaseProfile(float("nan"), 0.0)


def test_grid_contract():
    with pytest.raises(GridError):
        make_grid(2.35, 0.01, n_samples=1000)
    with pytest.raises(GridError):
        make_grid(2.35, 0.01, half_span=3.0)
    with pytest.raises(ValueError):
        make_pulse(sigma=0.0)


def test_energy_is_phase_independent(sigma120):
    a = make_pulse(sigma=sigma120)
    b = make_pulse(sigma=sigma120, phase=PhaseProfile(1e4, 1e7))
    assert_allclose(a.energy(), math.sqrt(math.pi) * sigma120, rtol=1e-10)
    assert_allclose(b.energy(), a.energy(), rtol=1e-14)


def test_slm_geometry():
    slm = SlmConfig(4, (0.0, 4.0))
    assert slm.pixel_width == 1.0
    assert_allclose(slm.centers, [0.5, 1.5, 2.5, 3.5])
    with pytest.raises(ValueError):
        SlmConfig(1, (0.0, 1.0))
    with pytest.raises(ValueError):
        SlmConfig(8, (1.0, 1.0))


def test_pixelated_phase_is_piecewise_constant(sigma120):
    p = make_pulse(sigma=sigma120, phase=PhaseProfile(0.0, 4e7))
    slm = SlmConfig.centered(p.omega0, sigma120, 64)
    q = slm_discretize(p, slm)
    edges = slm.edges
    k = 10
    inside = (p.grid > edges[k]) & (p.grid < edges[k + 1])
    vals = q.phase(p.grid[inside])
    assert np.all(vals == vals[0])
    assert_allclose(vals[0], p.phase(slm.centers[k]))
    outside = p.grid < edges[0]
    assert np.all(q.phase(p.grid[outside]) == 0.0)
    assert_allclose(np.abs(q.field), np.abs(p.field))


def test_wrapped_phase_is_blind_to_whole_turns(sigma120):
    base = PhaseProfile(0.0, 3e7)
    p = make_pulse(sigma=sigma120, phase=base)
    shifted = p.with_phase(lambda x: base(x) + 2 * math.pi * 3)
    slm = SlmConfig.centered(p.omega0, sigma120, 640, phase_wrap=True)
    a = slm_discretize(p, slm)
    b = slm_discretize(shifted, slm)
    assert np.array_equal(a.field, b.field)
    assert np.all((a.phase(p.grid) >= 0) & (a.phase(p.grid) < 2 * math.pi))


def test_slm_requires_finer_grid(sigma120):
    p = make_pulse(sigma=sigma120, n_samples=2**12)
    with pytest.raises(GridError):
        slm_discretize(p, SlmConfig.centered(p.omega0, sigma120, 4000))


def test_pixel_error_bound_shrinks_with_pixel_count(sigma120):
    p = make_pulse(sigma=sigma120, phase=PhaseProfile(0.0, 4e7))
    bounds = [pixel_phase_error_bound(p, SlmConfig.centered(p.omega0, sigma120, n))
              for n in (160, 320, 640)]
    assert_allclose(np.array(bounds[:-1]) / np.array(bounds[1:]), 2.0, rtol=1e-9)


def test_pixelation_creates_satellites(sigma120):
    p = make_pulse(sigma=sigma120, phase=PhaseProfile(0.0, 4e7), n_samples=2**16)
    q = slm_discretize(p, SlmConfig.centered(p.omega0, sigma120, 640))
    assert satellite_energy_fraction(p, p) < 2e-6
    assert satellite_energy_fraction(q, p) > 1e-3
