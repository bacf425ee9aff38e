"""cos^2(theta) matrix elements between |J, m> rotor states."""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import assoc_legendre_p

from .exceptions import ConvergenceError, DomainError


@dataclass(frozen=True)
class CouplingElement:
    J: int
    m: int
    diag: float
    offdiag: float


def _check(J, m):
    if abs(m) > J:
        raise DomainError(f"|m|={abs(m)} exceeds J={J}")


def cos2_diag(J, m):
    """<J,m|cos^2 theta|J,m>."""
    _check(J, m)
    return 1.0 / 3.0 + (2.0 / 3.0) * (J * (J + 1) - 3 * m * m) / ((2 * J + 3) * (2 * J - 1))


def cos2_offdiag(J, m):
    """<J,m|cos^2 theta|J+2,m>, taken positive."""
    _check(J, m)
    num = (J + 1 - m) * (J + 2 - m) * (J + 1 + m) * (J + 2 + m)
    return math.sqrt(num) / ((2 * J + 3) * math.sqrt((2 * J + 1) * (2 * J + 5)))


def offdiag_squared_sum(J):
    """sum over |m| <= J of <J,m|cos^2|J+2,m>^2, vectorized over J."""
    J = np.asarray(J)
    out = np.zeros(J.shape, dtype=float)
    for idx, j in np.ndenumerate(J):
        m = np.arange(-j, j + 1)
        num = (j + 1 - m) * (j + 2 - m) * (j + 1 + m) * (j + 2 + m)
        out[idx] = np.sum(num) / ((2 * j + 3) ** 2 * (2 * j + 1) * (2 * j + 5))
    return out


def cos2_oracle(J, m, Jp, epsabs=1e-13):
    """Quadrature value of <J,m|cos^2 theta|Jp,m>.

    Integrates normalized associated Legendre functions in x = cos(theta)
    with adaptive quadrature. ``m`` may be a sequence, in which case all
    values are integrated together and an array is returned.
    """
    ms = np.atleast_1d(np.asarray(m, dtype=int))
    for mm in ms:
        if abs(mm) > min(J, Jp):
            raise DomainError(f"|m|={abs(mm)} exceeds min(J, J')={min(J, Jp)}")

    def integrand(x):
        a = assoc_legendre_p(J, ms, x, norm=True)[0]
        b = assoc_legendre_p(Jp, ms, x, norm=True)[0]
        return a * b * x * x

    val, err = quad_vec(integrand, -1.0, 1.0, epsabs=epsabs, epsrel=0.0, limit=2000)
    if not np.all(np.isfinite(val)) or err > 1e-12:
        raise ConvergenceError(f"quadrature error {err:.2g} for J={J}, J'={Jp}", best=val)
    return float(val[0]) if np.ndim(m) == 0 else val


def coupling_table(J_max):
    """Immutable list of CouplingElement for all J <= J_max, |m| <= J."""
    return tuple(
        CouplingElement(J, m, cos2_diag(J, m), cos2_offdiag(J, m))
        for J in range(J_max + 1)
        for m in range(-J, J + 1)
    )
