"""Two-photon (stimulated Raman) response of a shaped pulse.

R(Omega) = int E(omega) E*(omega - Omega) d omega is the complex amplitude
handed to the Delta J = 2 coherence at Raman shift Omega. It is computed by
quadrature for arbitrary pulses and, for Gaussian spectra with quadratic
and cubic phase, in closed form.

Note on naming: the Gaussian-integral coefficient that multiplies -x^2 in
the exponent is called ``A`` here. It is unrelated to the chirp
coefficient ``a_tilde`` although both are often written with the same letter.
"""

from dataclasses import dataclass
import math

import numpy as np

from .exceptions import GridError
from .pulse import DEFAULT_HALF_SPAN, DEFAULT_SAMPLES, PhaseProfile, make_pulse
from .rotor import raman_frequency

#: log of the tolerated relative aliasing error of the trapezoidal overlap
ALIAS_LOG_TOL = math.log(1e-7)


def _coverage(p):
    return 2.0 * p.half_span - 6.0 * p.sigma


def raman_numeric(p, Omega, chunk=64):
    """Quadrature of int E(omega) E*(omega - Omega) d omega over the pulse grid.

    ``Omega`` may be a scalar or an array (rad/fs).
    """
    Om = np.atleast_1d(np.asarray(Omega, dtype=float))
    if np.any(Om < 0):
        raise GridError("Raman shift must be >= 0")
    if Om.size and Om.max() >= _coverage(p):
        raise GridError(
            f"Raman shift {Om.max():.4g} rad/fs exceeds grid coverage {_coverage(p):.4g}"
        )
    check_sampling(p, Om)
    out = np.empty(Om.shape, dtype=complex)
    for s in range(0, len(Om), chunk):
        shifted = p.evaluate(p.grid[None, :] - Om[s:s + chunk, None])
        out[s:s + chunk] = np.trapezoid(p.field[None, :] * np.conj(shifted), dx=p.d_omega, axis=1)
    return out[0] if np.ndim(Omega) == 0 else out


def alias_log_error(p, Omega):
    """Log relative aliasing error of the trapezoidal overlap on the pulse grid.

    For a polynomial phase the overlap integrand is exp(-A x^2 + B x + C);
    sampling at spacing h folds in its Fourier transform at k = 2 pi / h,
    suppressed by exp(Re[-(2 i B k + k^2) / (4 A)]).
    """
    prof = p.phase_profile
    A, B, _ = gaussian_abc(prof.a_tilde, prof.b_tilde, p.sigma, Omega)
    k = 2 * math.pi / p.d_omega
    return np.maximum(((-2j * B * k - k * k) / (4 * A)).real,
                      ((2j * B * k - k * k) / (4 * A)).real)


def check_sampling(p, Omega):
    if not isinstance(p.phase_profile, PhaseProfile):
        return
    worst = float(np.max(alias_log_error(p, np.atleast_1d(Omega))))
    if worst > ALIAS_LOG_TOL:
        raise GridError(
            f"pulse grid under-resolves the overlap integrand (log alias error {worst:.1f}); "
            "increase n_samples"
        )


def adequate_samples(omega0, sigma, profile, Omega_max, half_span=None,
                     start=None, limit=2**20):
    """Smallest power-of-two grid (>= ``start``) passing the alias check up to Omega_max."""
    n = start or DEFAULT_SAMPLES
    half_span = half_span or DEFAULT_HALF_SPAN
    Om = np.linspace(0.0, Omega_max, 64)
    while n <= limit:
        p = make_pulse(omega0, sigma, profile, n_samples=n, half_span=half_span)
        if float(np.max(alias_log_error(p, Om))) <= ALIAS_LOG_TOL:
            return n
        n *= 2
    raise GridError(f"no grid up to {limit} samples resolves the overlap integrand")


def raman_phase_closed(a_tilde, b_tilde, sigma, Omega):
    """Closed-form Raman phase for a Gaussian pulse with quadratic/cubic phase.

    b W^3 (9 b^2 W^2 s^4 - 12 a^2 s^4 + 1) / (4 (9 b^2 W^2 s^4 + 1))
    + arctan(3 b W s^2) / 2, with W = Omega and s = sigma. The value is the
    smooth (unwrapped) phase, not a principal value.
    """
    W = np.asarray(Omega, dtype=float)
    s4 = sigma**4
    X = 9.0 * b_tilde**2 * W**2 * s4
    cubic = b_tilde * W**3 * (X - 12.0 * a_tilde**2 * s4 + 1.0) / (4.0 * (X + 1.0))
    return cubic + 0.5 * np.arctan(3.0 * b_tilde * W * sigma**2)


def gaussian_abc(a_tilde, b_tilde, sigma, Omega):
    """Coefficients of int exp(-A x^2 + B x + C) dx for the Raman overlap."""
    W = np.asarray(Omega, dtype=float)
    A = 1.0 / sigma**2 - 3j * b_tilde * W
    B = W / sigma**2 + 1j * (2 * a_tilde * W - 3 * b_tilde * W**2)
    C = 1j * (b_tilde * W**3 - a_tilde * W**2) - W**2 / (2 * sigma**2)
    return A, B, C


def raman_gaussian_abc(a_tilde, b_tilde, sigma, Omega):
    """Analytic R(Omega) = sqrt(pi/A) exp(B^2/(4A) + C)."""
    A, B, C = gaussian_abc(a_tilde, b_tilde, sigma, Omega)
    return np.sqrt(math.pi / A) * np.exp(B * B / (4 * A) + C)


def wrap_phase(phi):
    """Map to (-pi, pi]."""
    return -np.mod(-np.asarray(phi) + math.pi, 2 * math.pi) + math.pi


def unwrap_to_reference(phase, reference):
    """Principal-value phase shifted by multiples of 2 pi to lie nearest ``reference``."""
    return reference + wrap_phase(np.asarray(phase) - reference)


@dataclass(frozen=True)
class RamanEntry:
    J: int
    component: str
    Omega: float
    R: complex
    phase: float
    magnitude: float


@dataclass(frozen=True)
class RamanTable:
    """Normalized Raman amplitudes (R(0) = 1) on a molecule's coherence ladder."""

    entries: tuple
    norm: complex = 1.0

    def __len__(self):
        return len(self.entries)

    def for_component(self, label):
        rows = [e for e in self.entries if e.component == label]
        J = np.array([e.J for e in rows], dtype=int)
        Om = np.array([e.Omega for e in rows])
        R = np.array([e.R for e in rows], dtype=complex)
        return J, Om, R

    @property
    def components(self):
        seen = []
        for e in self.entries:
            if e.component not in seen:
                seen.append(e.component)
        return seen


def coherence_ladder(c, J_max):
    """J values whose J -> J+2 coherence exists for component ``c``."""
    J = np.arange(0, J_max - 1)
    return J[c.allowed(J) & c.allowed(J + 2)]


def build_raman_table(p, m, J_max=None):
    """Tabulate normalized R(Omega_J) for every coherence of molecule ``m``."""
    J_max = J_max if J_max is not None else m.J_max
    if J_max is None:
        raise ValueError("J_max must be given when the molecule leaves it unset")
    r0 = raman_numeric(p, 0.0)
    entries = []
    for c in m.components:
        J = coherence_ladder(c, J_max)
        Om = raman_frequency(c, J)
        R = raman_numeric(p, Om) / r0
        for j, om, r in zip(J, Om, R):
            entries.append(RamanEntry(int(j), c.label, float(om), complex(r),
                                      float(np.angle(r)), float(abs(r))))
    return RamanTable(tuple(entries), complex(r0))
