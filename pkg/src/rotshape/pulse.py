"""Spectrally shaped Gaussian pulses and pixelated phase modulators.

Fields are sampled on a uniform angular-frequency grid around omega0 and
carry a phase function of the detuning x = omega - omega0, so that they can
be re-evaluated exactly at shifted frequencies (needed by the Raman overlap).
The time-domain convention is E(t) = int E(omega) exp(+i omega t) d omega.
"""

from dataclasses import dataclass, field
import math
from typing import Callable

import numpy as np

from .exceptions import GridError
from .units import wavelength_nm_to_angular

DEFAULT_OMEGA0 = wavelength_nm_to_angular(800.0)
DEFAULT_SAMPLES = 2**14
DEFAULT_HALF_SPAN = 8.0
MIN_SAMPLES = 2**12
MIN_HALF_SPAN = 6.0


@dataclass(frozen=True)
class PhaseProfile:
    """Polynomial spectral phase a (omega-omega0)^2 + b (omega-omega0)^3.

    a_tilde in fs^2, b_tilde in fs^3.
    """

    a_tilde: float = 0.0
    b_tilde: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.a_tilde) and math.isfinite(self.b_tilde)):
            raise ValueError("phase coefficients must be finite")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x * x * (self.a_tilde + self.b_tilde * x)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return x * (2 * self.a_tilde + 3 * self.b_tilde * x)


@dataclass(frozen=True)
class SlmConfig:
    """Pixelated phase-only modulator.

    Parameters
    ----------
    pixel_count : int
    window : (float, float)
        Angular frequency range (rad/fs) covered by the pixels.
    phase_wrap : bool
        Write the phase modulo 2 pi.
    phase_levels : int or None
        Number of grey levels used for wrapped phase; None keeps the wrapped
        value unquantized.
    """

    pixel_count: int
    window: tuple
    phase_wrap: bool = False
    phase_levels: int | None = 4096

    def __post_init__(self):
        if self.pixel_count < 2:
            raise ValueError("pixel_count must be >= 2")
        lo, hi = self.window
        if not lo < hi:
            raise ValueError("SLM window must satisfy lo < hi")
        object.__setattr__(self, "window", (float(lo), float(hi)))

    @property
    def pixel_width(self):
        lo, hi = self.window
        return (hi - lo) / self.pixel_count

    @property
    def edges(self):
        return np.linspace(self.window[0], self.window[1], self.pixel_count + 1)

    @property
    def centers(self):
        e = self.edges
        return 0.5 * (e[1:] + e[:-1])

    @classmethod
    def centered(cls, omega0, sigma, pixel_count=640, half_width_sigmas=4.0, **kw):
        w = half_width_sigmas * sigma
        return cls(pixel_count, (omega0 - w, omega0 + w), **kw)


@dataclass(frozen=True)
class ShapedPulse:
    omega0: float
    sigma: float
    grid: np.ndarray = field(repr=False)
    phase_fn: Callable = field(repr=False)
    phase_profile: object = "custom"
    field: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "field", self.evaluate(self.grid))

    def envelope(self, omega):
        x = np.asarray(omega, dtype=float) - self.omega0
        return np.exp(-(x * x) / (2.0 * self.sigma**2))

    def phase(self, omega):
        return self.phase_fn(np.asarray(omega, dtype=float) - self.omega0)

    def evaluate(self, omega):
        """Complex spectral amplitude at arbitrary angular frequencies."""
        return self.envelope(omega) * np.exp(1j * self.phase(omega))

    @property
    def d_omega(self):
        return float(self.grid[1] - self.grid[0])

    @property
    def half_span(self):
        return 0.5 * float(self.grid[-1] - self.grid[0])

    def energy(self):
        """Spectral energy int |E|^2 d omega (trapezoidal)."""
        return float(np.trapezoid(np.abs(self.field) ** 2, dx=self.d_omega))

    def with_phase(self, phase_fn, phase_profile="custom"):
        return ShapedPulse(self.omega0, self.sigma, self.grid, phase_fn, phase_profile)

    def describe(self):
        out = {"omega0": self.omega0, "sigma": self.sigma, "samples": len(self.grid),
               "half_span": self.half_span}
        if isinstance(self.phase_profile, PhaseProfile):
            out["a_tilde"] = self.phase_profile.a_tilde
            out["b_tilde"] = self.phase_profile.b_tilde
        else:
            out["phase"] = str(self.phase_profile)
        return out


def sigma_from_intensity_fwhm(duration_fwhm):
    """Spectral width sigma (rad/fs) of a transform-limited Gaussian.

    For intensity FWHM tau (fs) the temporal field width is
    sigma_t = tau / (2 sqrt(ln 2)) and sigma = 1 / sigma_t.
    """
    if not duration_fwhm > 0:
        raise ValueError("duration_fwhm must be > 0")
    return 2.0 * math.sqrt(math.log(2.0)) / duration_fwhm


def make_grid(omega0, sigma, n_samples=DEFAULT_SAMPLES, half_span=DEFAULT_HALF_SPAN):
    if n_samples < MIN_SAMPLES:
        raise GridError(f"grid needs >= {MIN_SAMPLES} samples, got {n_samples}")
    if half_span < MIN_HALF_SPAN:
        raise GridError(f"grid must span omega0 +- {MIN_HALF_SPAN} sigma, got {half_span}")
    return np.linspace(omega0 - half_span * sigma, omega0 + half_span * sigma, n_samples)


def make_pulse(omega0=DEFAULT_OMEGA0, sigma=None, phase=None,
               n_samples=DEFAULT_SAMPLES, half_span=DEFAULT_HALF_SPAN):
    """Gaussian spectrum times exp(i phase(omega - omega0)).

    ``phase`` is a PhaseProfile (default: transform limited) or any callable
    of the detuning.
    """
    if sigma is None or not sigma > 0:
        raise ValueError("sigma must be > 0")
    if phase is None:
        phase = PhaseProfile()
    profile = phase if isinstance(phase, PhaseProfile) else "custom"
    grid = make_grid(omega0, sigma, n_samples, half_span)
    return ShapedPulse(float(omega0), float(sigma), grid, phase, profile)


class _PixelPhase:
    """Piecewise-constant phase sampled at pixel centres (detuning argument)."""

    def __init__(self, source, omega0, slm):
        self.omega0 = omega0
        self.edges = slm.edges
        values = np.asarray(source(slm.centers - omega0), dtype=float)
        if slm.phase_wrap:
            if slm.phase_levels:
                L = slm.phase_levels
                q = np.mod(np.round(values / (2 * math.pi) * L), L)
                values = q * (2 * math.pi / L)
            else:
                values = np.mod(values, 2 * math.pi)
        self.values = values

    def __call__(self, x):
        omega = np.asarray(x, dtype=float) + self.omega0
        idx = np.searchsorted(self.edges, omega, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.values))
        out = np.zeros(omega.shape)
        out[inside] = self.values[idx[inside]]
        return out


def slm_discretize(p, slm):
    """Replace the pulse phase by what a pixelated modulator would apply.

    The envelope is untouched; inside each pixel the phase equals the
    original phase at the pixel centre, and outside the window it is zero.
    """
    if p.d_omega >= slm.pixel_width:
        raise GridError("pulse grid must be finer than the SLM pixel width")
    return p.with_phase(_PixelPhase(p.phase_fn, p.omega0, slm))


def pixel_phase_error_bound(p, slm):
    """max |dPhi/domega| * pixel_width / 2 over the window (rad)."""
    x = np.linspace(slm.window[0], slm.window[1], 4 * slm.pixel_count + 1) - p.omega0
    if isinstance(p.phase_profile, PhaseProfile):
        slope = np.abs(p.phase_profile.derivative(x))
    else:
        slope = np.abs(np.gradient(p.phase_fn(x), x))
    return float(slope.max() * slm.pixel_width / 2)


# time domain ----------------------------------------------------------------

def time_field(p, t, chunk=512):
    """Baseband temporal field E(t) = int E(x) exp(i x t) dx, t in fs."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = p.grid - p.omega0
    out = np.empty(t.shape, dtype=complex)
    for s in range(0, len(t), chunk):
        ph = np.exp(1j * np.outer(t[s:s + chunk], x))
        out[s:s + chunk] = np.trapezoid(ph * p.field, dx=p.d_omega, axis=1)
    return out


def time_intensity(p, upsample=1):
    """(t_fs, |E(t)|^2) on the FFT time grid conjugate to the pulse grid.

    ``upsample`` > 1 zero-pads the spectrum, refining the time step by that
    factor (band-limited interpolation).
    """
    n = len(p.grid)
    field = p.field
    if upsample > 1:
        extra = (upsample - 1) * n
        field = np.pad(field, (extra // 2, extra - extra // 2))
    m = len(field)
    shifted = np.fft.ifftshift(field)
    et = np.fft.fftshift(np.fft.ifft(shifted)) * m * p.d_omega
    t = np.fft.fftshift(np.fft.fftfreq(m, d=p.d_omega)) * 2 * math.pi
    return t, np.abs(et) ** 2


def intensity_fwhm(t, intensity):
    """FWHM of a single-peaked intensity profile with linear interpolation."""
    t = np.asarray(t)
    y = np.asarray(intensity)
    half = y.max() / 2
    above = np.nonzero(y >= half)[0]
    i, j = above[0], above[-1]
    left = t[i - 1] + (half - y[i - 1]) * (t[i] - t[i - 1]) / (y[i] - y[i - 1])
    right = t[j] + (half - y[j]) * (t[j + 1] - t[j]) / (y[j + 1] - y[j])
    return float(right - left)


def main_lobe(t, intensity, coverage=1 - 1e-6):
    """Shortest contiguous time interval holding ``coverage`` of the energy."""
    c = np.cumsum(intensity)
    c = c / c[-1]
    lo_q = (1 - coverage) / 2
    i = int(np.searchsorted(c, lo_q))
    j = int(np.searchsorted(c, 1 - lo_q))
    return float(t[i]), float(t[min(j, len(t) - 1)])


def satellite_energy_fraction(p, reference, coverage=1 - 1e-6):
    """Energy fraction of ``p`` falling outside the main lobe of ``reference``."""
    t_ref, i_ref = time_intensity(reference)
    lo, hi = main_lobe(t_ref, i_ref, coverage)
    t, i = time_intensity(p)
    outside = (t < lo) | (t > hi)
    return float(i[outside].sum() / i.sum())
