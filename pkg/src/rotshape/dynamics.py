"""Coherent alignment signal of a thermal ensemble after a shaped pulse.

Weak-field (first-order) model: the J -> J+2 coherence of every |J, m>
state is driven in proportion to the population difference between the
two levels, the squared cos^2 matrix element and the normalized Raman
amplitude of the pulse. With E(t) = int E(omega) exp(+i omega t) d omega the
coherence starts with phase -arg R, so that

    signal(t) = sum_J 2 W_J |R_J| sin(Omega_J t + arg R_J)

where W_J = sum_m |<J,m|cos^2|J+2,m>|^2 (rho_J/(2J+1) - rho_{J+2}/(2J+5)).
Only the coherent (time-dependent) part is returned; its absolute scale is
arbitrary.
"""

from dataclasses import dataclass, field
from itertools import combinations
import math

import numpy as np
from scipy.signal import correlate, hilbert

from .angular import offdiag_squared_sum
from .exceptions import AssignmentError, NyquistError, WindowError
from .raman import build_raman_table
from .rotor import revival_period, thermal_populations
from .units import FS_PER_PS

#: minimum samples required inside an analysis window
MIN_WINDOW_SAMPLES = 50
#: hysteresis level (fraction of peak) for counting zero crossings
CROSSING_THRESHOLD = 0.1


@dataclass(frozen=True)
class AlignmentTrace:
    t: np.ndarray = field(repr=False)
    signal: np.ndarray = field(repr=False)
    components_included: tuple = ()
    pulse_descriptor: dict = field(default_factory=dict)
    solo: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True)
class RevivalMetrics:
    window: tuple
    peak_time: float
    peak_amplitude: float
    zero_crossings: int
    envelope_fwhm: float
    cycle_count: int

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def coherence_weights(ensemble, label, J):
    """W_J for the coherences J -> J+2 of one component."""
    rho = ensemble.populations[label]
    J = np.asarray(J)
    diff = rho[J] / (2 * J + 1) - rho[J + 2] / (2 * J + 5)
    return offdiag_squared_sum(J) * diff


def nyquist_limit(table):
    """Largest admissible time step (ps) for a Raman table."""
    om = max(e.Omega for e in table.entries)
    return 1.0 / (4.0 * om) / FS_PER_PS


def check_nyquist(dt, table):
    limit = nyquist_limit(table)
    if not dt < limit:
        raise NyquistError(f"time step {dt:g} ps is not below the limit {limit:.4g} ps")


def _component_signal(ensemble, table, label, t_fs, chunk=2048):
    J, Om, R = table.for_component(label)
    amp = 2.0 * coherence_weights(ensemble, label, J) * np.abs(R)
    ph = np.angle(R)
    out = np.empty(t_fs.shape)
    for s in range(0, len(t_fs), chunk):
        arg = np.outer(t_fs[s:s + chunk], Om) + ph
        out[s:s + chunk] = (np.sin(arg) * amp).sum(axis=1)
    return out


def synthesize_trace(ensemble, table, t, components=None, solo=False,
                     pulse_descriptor=None, check=True):
    """Alignment signal on the time axis ``t`` (ps).

    ``components`` restricts the sum to some labels; with ``solo`` the
    per-component signals are kept on the trace as well.
    """
    t = np.asarray(t, dtype=float)
    labels = tuple(components) if components is not None else tuple(table.components)
    if check and len(t) > 1:
        check_nyquist(float(np.max(np.diff(t))), table)
    t_fs = t * FS_PER_PS
    parts = {lab: _component_signal(ensemble, table, lab, t_fs) for lab in labels}
    total = np.zeros_like(t)
    for lab in labels:
        total = total + parts[lab]
    return AlignmentTrace(t, total, labels, dict(pulse_descriptor or {}),
                          parts if solo else {})


def simulate_alignment(molecule, temperature, pulse, t, solo=False, components=None):
    """Thermal populations, Raman table and trace in one call."""
    ens = thermal_populations(molecule, temperature)
    mol = molecule.with_J_max(ens.J_max)
    table = build_raman_table(pulse, mol)
    return synthesize_trace(ens, table, t, components=components, solo=solo,
                            pulse_descriptor=pulse.describe())


def revival_window(c, n, half_width):
    """(n T_rev - half_width, n T_rev + half_width) in ps."""
    if not half_width > 0:
        raise WindowError("half_width must be > 0")
    center = n * revival_period(c)
    return (center - half_width, center + half_width)


def _select(tr, window):
    lo, hi = window
    if not lo < hi:
        raise WindowError("window must satisfy t_lo < t_hi")
    if lo < tr.t[0] or hi > tr.t[-1]:
        raise WindowError(f"window {window} outside trace span [{tr.t[0]}, {tr.t[-1]}]")
    sel = (tr.t >= lo) & (tr.t <= hi)
    if sel.sum() < MIN_WINDOW_SAMPLES:
        raise WindowError(f"window holds {sel.sum()} samples, need {MIN_WINDOW_SAMPLES}")
    return sel


def count_zero_crossings(y, threshold=CROSSING_THRESHOLD):
    """Sign changes between samples whose magnitude exceeds threshold*max|y|."""
    y = np.asarray(y)
    big = np.abs(y) >= threshold * np.max(np.abs(y))
    s = np.sign(y[big])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def envelope(y):
    return np.abs(hilbert(y))


def outer_fwhm(t, env):
    """Distance between the outermost half-maximum crossings of ``env``."""
    half = env.max() / 2
    above = np.nonzero(env >= half)[0]
    i, j = above[0], above[-1]
    left = t[i]
    if i > 0:
        left = t[i - 1] + (half - env[i - 1]) * (t[i] - t[i - 1]) / (env[i] - env[i - 1])
    right = t[j]
    if j < len(t) - 1:
        right = t[j] + (env[j] - half) * (t[j + 1] - t[j]) / (env[j] - env[j + 1])
    return float(right - left)


def analyze_revival(tr, window, threshold=CROSSING_THRESHOLD):
    """Shape metrics of the revival inside ``window``.

    The envelope is the magnitude of the analytic signal (Hilbert transform)
    of the window-mean-subtracted segment; its FWHM spans the outermost
    half-maximum points, so multi-lobed revivals report their full extent.
    """
    sel = _select(tr, window)
    t = tr.t[sel]
    y = tr.signal[sel]
    k = int(np.argmax(np.abs(y)))
    centered = y - y.mean()
    zc = count_zero_crossings(centered, threshold)
    fwhm = outer_fwhm(t, envelope(centered))
    return RevivalMetrics(tuple(window), float(t[k]), float(abs(y[k])), zc, fwhm,
                          int(math.floor(zc / 2 + 0.5)))


def envelope_peak_time(t, y):
    """Peak of the Hilbert envelope with parabolic sub-sample refinement."""
    env = envelope(y - y.mean())
    k = int(np.argmax(env))
    if 0 < k < len(env) - 1:
        a, b, c = env[k - 1], env[k], env[k + 1]
        den = a - 2 * b + c
        shift = 0.5 * (a - c) / den if den != 0 else 0.0
        return float(t[k] + shift * (t[k + 1] - t[k])), env
    return float(t[k]), env


def component_peak_separation(tr, labels, window, floor_factor=3.0):
    """Pairwise envelope-peak delays t_a - t_b of solo component traces.

    Each solo trace must peak above ``floor_factor`` times its noise floor,
    taken as the median envelope inside the window.
    """
    sel = _select(tr, window)
    t = tr.t[sel]
    peaks = {}
    for lab in labels:
        if lab not in tr.solo:
            raise AssignmentError(f"trace has no solo signal for component {lab!r}")
        tp, env = envelope_peak_time(t, tr.solo[lab][sel])
        if not env.max() > floor_factor * np.median(env):
            raise AssignmentError(f"component {lab!r} has no resolvable peak in {window}")
        peaks[lab] = tp
    return {(a, b): peaks[a] - peaks[b] for a, b in combinations(labels, 2)}


def normalized_cross_correlation(x, y, max_lag=None):
    """Maximum over lags of the mean-removed, norm-normalized correlation."""
    x = np.asarray(x) - np.mean(x)
    y = np.asarray(y) - np.mean(y)
    cc = correlate(x, y, mode="full") / (np.linalg.norm(x) * np.linalg.norm(y))
    if max_lag is not None:
        mid = len(y) - 1
        cc = cc[max(mid - max_lag, 0): mid + max_lag + 1]
    return float(cc.max())
