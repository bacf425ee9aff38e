"""Estimator-style wrappers around the design and synthesis pipeline.

Both classes follow the scikit-learn conventions: constructor arguments are
plain hyper-parameters (so ``get_params``/``set_params``/``clone`` work),
``fit`` takes a MoleculeSpec and stores learned state in attributes with a
trailing underscore.
"""

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _validation as v
from .design import LADDERS, DesignTarget, analytic_cubic, optimize_phase
from .dynamics import nyquist_limit, synthesize_trace
from .pulse import (DEFAULT_OMEGA0, DEFAULT_SAMPLES, PhaseProfile, make_pulse,
                    sigma_from_intensity_fwhm)
from .raman import build_raman_table, raman_phase_closed
from .rotor import MoleculeSpec, thermal_populations


def _resolve_sigma(sigma, duration_fwhm):
    # an explicit sigma overrides the default duration
    if sigma is not None:
        return v.check_positive("sigma", sigma)
    return sigma_from_intensity_fwhm(v.check_positive("duration_fwhm", duration_fwhm))


def _check_molecule(molecule):
    if not isinstance(molecule, MoleculeSpec):
        raise v.ValidationError(f"expected a MoleculeSpec, got {type(molecule).__name__}")
    return molecule


class PhaseDesigner(BaseEstimator):
    """Find the (a_tilde, b_tilde) that pre-compensates centrifugal distortion.

    Parameters
    ----------
    n : float
        Revival index at which the distortion is cancelled.
    component : str or None
        Label of the component to compensate; None takes the first one.
    temperature : float
        Gas temperature (K) for the Boltzmann weighting.
    duration_fwhm, sigma :
        Pulse width, either as intensity FWHM (fs) or spectral sigma
        (rad/fs); sigma takes precedence when both are set.
    method : {"optimize", "analytic"}
        "analytic" skips the least-squares search and uses a_tilde = 0.
    ladder : {"rigid", "exact"}
        Raman frequencies used inside the objective.

    Attributes
    ----------
    a_tilde_, b_tilde_ : float
    b_analytic_ : float
    result_ : DesignResult or None
    """

    def __init__(self, n=1.0, component=None, temperature=293.0, duration_fwhm=120.0,
                 sigma=None, method="optimize", ladder="rigid"):
        self.n = n
        self.component = component
        self.temperature = temperature
        self.duration_fwhm = duration_fwhm
        self.sigma = sigma
        self.method = method
        self.ladder = ladder

    def fit(self, molecule, y=None):
        m = _check_molecule(molecule)
        n = v.check_finite("n", self.n)
        T = v.check_positive("temperature", self.temperature)
        v.check_choice("method", self.method, ("optimize", "analytic"))
        v.check_choice("ladder", self.ladder, LADDERS)
        sigma = _resolve_sigma(self.sigma, self.duration_fwhm)
        c = m.components[0] if self.component is None else m.component(self.component)

        self.sigma_ = sigma
        self.component_ = c.label
        self.b_analytic_ = analytic_cubic(n, c.B, c.D)
        if self.method == "analytic":
            self.result_ = None
            self.a_tilde_, self.b_tilde_ = 0.0, self.b_analytic_
        else:
            self.result_ = optimize_phase(DesignTarget(c, n, T, sigma), m, self.ladder)
            self.a_tilde_, self.b_tilde_ = self.result_.a_opt, self.result_.b_opt
        return self

    @property
    def phase_profile_(self):
        check_is_fitted(self, "b_tilde_")
        return PhaseProfile(self.a_tilde_, self.b_tilde_)

    def predict(self, Omega):
        """Raman phase (rad) imprinted by the fitted pulse at shifts Omega (rad/fs)."""
        check_is_fitted(self, "b_tilde_")
        Om = v.check_frequencies(Omega)
        return raman_phase_closed(self.a_tilde_, self.b_tilde_, self.sigma_, Om)

    def make_pulse(self, omega0=DEFAULT_OMEGA0, n_samples=DEFAULT_SAMPLES):
        return make_pulse(omega0, self.sigma_, self.phase_profile_, n_samples=n_samples)


class AlignmentSimulator(BaseEstimator):
    """Thermal-ensemble alignment signal for a polynomial-phase pulse.

    ``fit`` computes the populations and the Raman table, both of which are
    independent of the time axis; ``predict(t)`` then returns the signal on
    any grid and ``transform(t)`` the full AlignmentTrace.
    """

    def __init__(self, temperature=293.0, duration_fwhm=120.0, sigma=None,
                 a_tilde=0.0, b_tilde=0.0, omega0=DEFAULT_OMEGA0,
                 n_samples=DEFAULT_SAMPLES, components=None, solo=False):
        self.temperature = temperature
        self.duration_fwhm = duration_fwhm
        self.sigma = sigma
        self.a_tilde = a_tilde
        self.b_tilde = b_tilde
        self.omega0 = omega0
        self.n_samples = n_samples
        self.components = components
        self.solo = solo

    def fit(self, molecule, y=None):
        m = _check_molecule(molecule)
        T = v.check_positive("temperature", self.temperature)
        sigma = _resolve_sigma(self.sigma, self.duration_fwhm)
        prof = PhaseProfile(v.check_finite("a_tilde", self.a_tilde),
                            v.check_finite("b_tilde", self.b_tilde))
        self.pulse_ = make_pulse(v.check_positive("omega0", self.omega0), sigma, prof,
                                 n_samples=int(self.n_samples))
        self.ensemble_ = thermal_populations(m, T)
        self.molecule_ = m.with_J_max(self.ensemble_.J_max)
        self.raman_table_ = build_raman_table(self.pulse_, self.molecule_)
        return self

    def transform(self, t):
        check_is_fitted(self, "raman_table_")
        t = v.check_time_axis(t)
        return synthesize_trace(self.ensemble_, self.raman_table_, t,
                                components=self.components, solo=self.solo,
                                pulse_descriptor=self.pulse_.describe())

    def predict(self, t):
        return self.transform(t).signal

    def nyquist_step(self):
        """Largest time step (ps) the fitted table allows."""
        check_is_fitted(self, "raman_table_")
        return nyquist_limit(self.raman_table_)

