"""Cubic spectral-phase pre-compensation of centrifugal distortion in
rotational revivals of laser-aligned molecules."""

__version__ = "0.1.0"

from .angular import cos2_diag, cos2_offdiag, cos2_oracle, coupling_table
from .design import (DesignResult, DesignTarget, analytic_cubic, design_report,
                     optimize_phase)
from .dynamics import (AlignmentTrace, RevivalMetrics, analyze_revival,
                       component_peak_separation, normalized_cross_correlation,
                       revival_window, simulate_alignment, synthesize_trace)
from .estimators import AlignmentSimulator, PhaseDesigner
from .exceptions import *  # noqa: F401,F403
from .pulse import (PhaseProfile, ShapedPulse, SlmConfig, make_pulse,
                    sigma_from_intensity_fwhm, slm_discretize)
from .raman import (RamanTable, build_raman_table, raman_gaussian_abc, raman_numeric,
                    raman_phase_closed)
from .rotor import (MoleculeSpec, RotorComponent, ThermalEnsemble, ch3i, co2, preset,
                    revival_period, thermal_populations)
