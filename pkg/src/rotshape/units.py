"""Unit conventions and physical constants.

Spectroscopic constants are kept in cm^-1, angular frequencies in rad/fs,
time axes in ps and spectral phase coefficients in fs^2 / fs^3.
"""

from dataclasses import dataclass
import math

#: speed of light in cm/fs
C_CM_PER_FS = 2.99792458e-5
#: speed of light in cm/ps
C_CM_PER_PS = 2.99792458e-2
#: second radiation constant hc/k_B in cm K (CODATA 2018)
HC_OVER_K = 1.438776877

FS_PER_PS = 1000.0


@dataclass(frozen=True)
class UnitSystem:
    c_cm_per_fs: float = C_CM_PER_FS
    hc_over_k: float = HC_OVER_K

    @property
    def k_ang(self):
        """rad/fs per cm^-1."""
        return 2.0 * math.pi * self.c_cm_per_fs

    def wavenumber_to_angular(self, wn):
        return self.k_ang * wn

    def angular_to_wavenumber(self, omega):
        return omega / self.k_ang


UNITS = UnitSystem()
K_ANG = UNITS.k_ang


def wavelength_nm_to_angular(wavelength_nm):
    """Carrier angular frequency (rad/fs) of a vacuum wavelength in nm."""
    return 2.0 * math.pi * C_CM_PER_FS / (wavelength_nm * 1e-7)
