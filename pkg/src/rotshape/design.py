"""Spectral-phase design for centrifugal-distortion pre-compensation.

The target is to imprint, through the Raman response of the pulse, a phase
on each J -> J+2 coherence that equals the centrifugal phase the coherence
will accumulate by revival n. Constant and linear-in-Omega parts of the
mismatch do not change the revival shape (they are a global phase and a
time shift) and are projected out of the least-squares objective.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import minimize

from .exceptions import ConvergenceError, ValidationError
from .raman import coherence_ladder, raman_phase_closed
from .rotor import (MoleculeSpec, phi_cdn, raman_frequency, rigid_raman_frequency,
                    thermal_populations)
from .units import K_ANG

LADDERS = ("rigid", "exact")


@dataclass(frozen=True)
class DesignTarget:
    """Compensate ``component`` at revival ``n`` for a pulse of width ``sigma``."""

    component: object
    n: float
    temperature: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValidationError("sigma must be > 0")
        if not self.temperature > 0:
            raise ValidationError("temperature must be > 0")


@dataclass(frozen=True)
class DesignResult:
    b_analytic: float
    a_opt: float
    b_opt: float
    residual_opt: float
    residual_analytic: float
    rel_diff: float
    n: float = 0.0
    component: str = ""
    ladder: str = "rigid"
    iterations: int = 0

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def analytic_cubic(n, B, D):
    """Cubic phase (fs^3) that cancels the centrifugal phase at revival n.

    pi n D / (2 B^4) with B and D converted to angular frequency (rad/fs).
    """
    if not B > 0:
        raise ValidationError("B must be > 0")
    return math.pi * n * (K_ANG * D) / (2.0 * (K_ANG * B) ** 4)


def cdn_target_phase(target, J):
    return phi_cdn(target.component, J, target.n)


class _Objective:
    """Weighted squared phase mismatch with global phase and delay removed."""

    def __init__(self, target, J_max=None, ladder="rigid", tol=None):
        if ladder not in LADDERS:
            raise ValidationError(f"ladder must be one of {LADDERS}")
        c = target.component
        solo = MoleculeSpec(c.label, (c,), J_max)
        kw = {} if tol is None else {"tol": tol}
        ens = thermal_populations(solo, target.temperature, **kw)
        self.J = coherence_ladder(c, ens.J_max)
        self.rho = ens.populations[c.label][self.J]
        self.rho = self.rho / self.rho.sum()
        if ladder == "rigid":
            self.Omega = rigid_raman_frequency(c, self.J)
        else:
            self.Omega = raman_frequency(c, self.J)
        self.target_phase = cdn_target_phase(target, self.J)
        self.sigma = target.sigma
        self.w = np.sqrt(self.rho)
        basis = np.stack([np.ones_like(self.Omega), self.Omega / self.Omega.max()], axis=1)
        self.Q, _ = np.linalg.qr(basis * self.w[:, None])
        self.J_max = ens.J_max

    def mismatch(self, a, b):
        return raman_phase_closed(a, b, self.sigma, self.Omega) - self.target_phase

    def residual_vector(self, a, b):
        r = self.w * self.mismatch(a, b)
        return r - self.Q @ (self.Q.T @ r)

    def __call__(self, a, b):
        r = self.residual_vector(a, b)
        return float(r @ r)

    def shape_mismatch(self, a, b):
        """Per-J mismatch after removing the fitted global phase and delay."""
        raw = self.mismatch(a, b)
        r = self.w * raw
        fit = self.Q @ (self.Q.T @ r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.w > 0, (r - fit) / self.w, raw)


def optimize_phase(target, m=None, ladder="rigid", start=None,
                   grid_b=41, grid_a=81, box_b=0.5, box_a=10.0,
                   xtol=1e-7, max_iter=20000):
    """Brute-force least-squares (a_tilde, b_tilde) for a DesignTarget.

    A coarse grid over b in b_analytic*(1 +- box_b) and a in
    +- box_a * b_analytic * sigma is refined with Nelder-Mead. ``start``
    (a, b) skips the grid and starts the local search there. The objective
    depends on a only through a^2; the non-negative root is reported.
    """
    c = target.component
    J_max = m.J_max if m is not None else None
    obj = _Objective(target, J_max, ladder)
    b_an = analytic_cubic(target.n, c.B, c.D)
    res_an = obj(0.0, b_an)

    if b_an == 0.0:
        return DesignResult(0.0, 0.0, 0.0, res_an, res_an, 0.0, target.n, c.label, ladder)

    a_scale = abs(b_an) * target.sigma

    def f(x):
        return obj(x[0] * a_scale, x[1] * b_an)

    if start is None:
        us = np.linspace(-box_a, box_a, grid_a)
        vs = np.linspace(1 - box_b, 1 + box_b, grid_b)
        vals = np.array([[f((u, v)) for v in vs] for u in us])
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        x0 = np.array([us[i], vs[j]])
    else:
        x0 = np.array([start[0] / a_scale, start[1] / b_an])

    opt = minimize(f, x0, method="Nelder-Mead",
                   options={"xatol": xtol, "fatol": 1e-9 * max(f(x0), 1e-300),
                            "maxiter": max_iter,
                            "maxfev": 2 * max_iter})
    a_opt, b_opt = abs(opt.x[0]) * a_scale, opt.x[1] * b_an
    if not opt.success:
        raise ConvergenceError(f"phase refinement did not converge: {opt.message}",
                               best=(a_opt, b_opt))
    res_opt = obj(a_opt, b_opt)
    rel = float(abs(b_opt - b_an) / abs(b_an))
    return DesignResult(b_an, float(a_opt), float(b_opt), res_opt, res_an, rel,
                        target.n, c.label, ladder, int(opt.nit))


@dataclass(frozen=True)
class DesignReport:
    result: DesignResult
    J: np.ndarray = field(repr=False)
    Omega: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    phi_raman: np.ndarray = field(repr=False)
    phi_cdn: np.ndarray = field(repr=False)
    mismatch: np.ndarray = field(repr=False)

    def rows(self):
        for k in range(len(self.J)):
            yield (int(self.J[k]), float(self.Omega[k]), float(self.rho[k]),
                   float(self.phi_raman[k]), float(self.phi_cdn[k]), float(self.mismatch[k]))


def design_report(target, m=None, ladder="rigid", **kw):
    """Optimized design plus the per-J phase mismatch at the optimum."""
    result = optimize_phase(target, m, ladder, **kw)
    obj = _Objective(target, m.J_max if m is not None else None, ladder)
    a, b = result.a_opt, result.b_opt
    phi_r = raman_phase_closed(a, b, target.sigma, obj.Omega)
    mis = obj.shape_mismatch(a, b) if b != 0.0 else phi_r - obj.target_phase
    return DesignReport(result, obj.J, obj.Omega, obj.rho, phi_r, obj.target_phase, mis)
