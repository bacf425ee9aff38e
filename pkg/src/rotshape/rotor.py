"""Linear-rotor level structure and thermal ensembles.

Energies follow E_J = B J(J+1) - D J^2 (J+1)^2 + E_vib (cm^-1). Molecules may
carry several rotational manifolds (e.g. the l-doubled bending components of
CO2), each with its own constants and J selection.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .exceptions import TruncationError, ValidationError
from .units import C_CM_PER_PS, HC_OVER_K, K_ANG

PARITIES = ("all", "even", "odd")

#: minimum J_max used when it is chosen automatically
DEFAULT_J_MAX_FLOOR = 40
#: largest admissible discarded Boltzmann fraction
TAIL_TOLERANCE = 1e-6


@dataclass(frozen=True)
class RotorComponent:
    """One rotational manifold of a molecule.

    Parameters
    ----------
    label : str
    B, D : float
        Rotational and centrifugal distortion constants (cm^-1).
    E_vib : float
        Vibrational term value added to every level (cm^-1).
    g_vib : float
        Statistical weight of the manifold.
    J_min : int
        Lowest populated J.
    J_parity : {"all", "even", "odd"}
        J values allowed by nuclear-spin statistics.
    """

    label: str
    B: float
    D: float = 0.0
    E_vib: float = 0.0
    g_vib: float = 1.0
    J_min: int = 0
    J_parity: str = "all"

    def __post_init__(self):
        if not self.B > 0:
            raise ValidationError(f"component {self.label!r}: B must be > 0")
        if self.D < 0:
            raise ValidationError(f"component {self.label!r}: D must be >= 0")
        if self.J_min < 0:
            raise ValidationError(f"component {self.label!r}: J_min must be >= 0")
        if self.J_parity not in PARITIES:
            raise ValidationError(
                f"component {self.label!r}: J_parity must be one of {PARITIES}"
            )
        if self.g_vib < 0:
            raise ValidationError(f"component {self.label!r}: g_vib must be >= 0")
        if self.D / self.B > 1e-3:
            warnings.warn(
                f"component {self.label!r}: D/B = {self.D / self.B:.3g} is not small",
                stacklevel=2,
            )

    def allowed(self, J):
        """Boolean mask of J values permitted by J_min and J_parity."""
        J = np.asarray(J)
        ok = J >= self.J_min
        if self.J_parity == "even":
            ok &= J % 2 == 0
        elif self.J_parity == "odd":
            ok &= J % 2 == 1
        return ok

    def with_constants(self, **changes):
        """Copy with some fields replaced (e.g. ``D=0`` for a rigid reference)."""
        values = {f: getattr(self, f) for f in self.__dataclass_fields__}
        values.update(changes)
        return RotorComponent(**values)


@dataclass(frozen=True)
class MoleculeSpec:
    name: str
    components: tuple
    J_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValidationError("molecule needs at least one component")
        labels = [c.label for c in self.components]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate component labels in {labels}")
        if self.J_max is not None:
            for c in self.components:
                if self.J_max < c.J_min + 4:
                    raise ValidationError(
                        f"J_max={self.J_max} leaves no coherence for component "
                        f"{c.label!r} (needs J_max >= J_min + 4)"
                    )

    def component(self, label):
        for c in self.components:
            if c.label == label:
                return c
        raise KeyError(label)

    @property
    def labels(self):
        return [c.label for c in self.components]

    def with_J_max(self, J_max):
        return MoleculeSpec(self.name, self.components, J_max)

    def with_components(self, components):
        return MoleculeSpec(self.name, tuple(components), self.J_max)


def rot_energy(c, J):
    """Term value of level J in cm^-1."""
    J = J if np.isscalar(J) else np.asarray(J, dtype=float)
    JJ = J * (J + 1)
    return c.B * JJ - c.D * JJ * JJ + c.E_vib


def raman_frequency(c, J):
    """Angular frequency (rad/fs) of the J -> J+2 coherence."""
    return K_ANG * (rot_energy(c, J + 2) - rot_energy(c, J))


def rigid_raman_frequency(c, J):
    """Rigid-rotor Raman frequency 4 pi c B (2J+3) in rad/fs."""
    return K_ANG * c.B * (4 * np.asarray(J) + 6)


def revival_period(c):
    """Full revival period 1/(2Bc) in ps (independent of D)."""
    return 1.0 / (2.0 * c.B * C_CM_PER_PS)


def phi_rigid(c, J, t):
    """Rigid-rotor coherence phase 4 pi B c (2J+3) t, with t in ps."""
    return 4.0 * math.pi * c.B * C_CM_PER_PS * (2 * np.asarray(J) + 3) * np.asarray(t)


def cdn_polynomial(J):
    J = J if np.isscalar(J) else np.asarray(J, dtype=float)
    return 2 * J**3 + 9 * J**2 + 15 * J + 9


def phi_cdn(c, J, n):
    """Residual centrifugal phase of the J -> J+2 coherence at t = n T_rev."""
    return 4.0 * math.pi * n * (c.D / c.B) * cdn_polynomial(J)


@dataclass(frozen=True)
class ThermalEnsemble:
    """Normalized Boltzmann populations on (component, J).

    ``populations[label][J]`` holds rho for J = 0 .. J_max; entries for
    disallowed J are exactly zero.
    """

    temperature: float
    J_max: int
    populations: dict = field(repr=False)
    tail: float = 0.0

    @property
    def component_weights(self):
        return {label: float(p.sum()) for label, p in self.populations.items()}

    @property
    def weights(self):
        return {
            (label, J): float(p[J])
            for label, p in self.populations.items()
            for J in range(len(p))
        }

    def total(self):
        return sum(float(p.sum()) for p in self.populations.values())

    def component_ensemble(self, label):
        """Populations of one component renormalized to unit weight."""
        p = self.populations[label]
        return p / p.sum()


def _log_boltzmann(c, J, T):
    E = rot_energy(c, J)
    with np.errstate(divide="ignore"):
        logw = math.log(c.g_vib) if c.g_vib > 0 else -np.inf
        out = logw + np.log(2 * J + 1.0) - E * HC_OVER_K / T
    return np.where(c.allowed(J), out, -np.inf), E


def _extended_J(c):
    # energies must keep increasing over the summed range
    turn = math.floor(math.sqrt(c.B / (2 * c.D))) if c.D > 0 else 5000
    return np.arange(0, min(turn, 5000) + 1)


def _extended_weights(m, T):
    logs = {c.label: _log_boltzmann(c, _extended_J(c), T)[0] for c in m.components}
    ref = max(np.max(l) for l in logs.values())
    return {k: np.exp(l - ref) for k, l in logs.items()}


def _tails(weights):
    """Discarded fraction for every J_max up to the shortest extended range."""
    n = min(len(w) for w in weights.values())
    total = sum(w.sum() for w in weights.values())
    kept = sum(np.cumsum(w)[:n] for w in weights.values())
    return np.clip((total - kept) / total, 0.0, None)


def boltzmann_tail(m, T, J_max):
    """Fraction of total Boltzmann weight in levels above J_max."""
    return float(_tails(_extended_weights(m, T))[J_max])


def choose_J_max(m, T, tol=TAIL_TOLERANCE, floor=DEFAULT_J_MAX_FLOOR):
    """Smallest J_max >= floor whose discarded Boltzmann tail is below tol."""
    floor = max(floor, max(c.J_min for c in m.components) + 4)
    tails = _tails(_extended_weights(m, T))
    ok = np.nonzero(tails[floor:] < tol)[0]
    if ok.size == 0:
        raise TruncationError(
            f"no J_max <= {len(tails) - 1} reaches tail < {tol:g} at T={T} K"
        )
    return int(floor + ok[0])


def thermal_populations(m, T, tol=TAIL_TOLERANCE):
    """Boltzmann populations of every (component, J) state of ``m`` at T (K).

    ``rho ~ g_vib (2J+1) exp(-E hc/kT)``, masked by J_min/J_parity and
    normalized over all retained states. If ``m.J_max`` is None the smallest
    adequate J_max is chosen; otherwise a TruncationError is raised when the
    discarded tail exceeds ``tol``.
    """
    if not T > 0:
        raise ValidationError("temperature must be > 0")
    J_max = m.J_max if m.J_max is not None else choose_J_max(m, T, tol)
    weights = _extended_weights(m, T)
    tails = _tails(weights)
    if J_max >= len(tails):
        raise TruncationError(f"J_max={J_max} exceeds the monotonic-energy range")
    tail = float(tails[J_max])
    kept = {k: w[: J_max + 1] for k, w in weights.items()}
    retained = sum(w.sum() for w in kept.values())
    if tail >= tol:
        raise TruncationError(
            f"J_max={J_max} discards a Boltzmann tail of {tail:.3g} (>= {tol:g}) at T={T} K"
        )
    pops = {k: w / retained for k, w in kept.items()}
    return ThermalEnsemble(temperature=float(T), J_max=J_max, populations=pops, tail=tail)


# preset molecules -----------------------------------------------------------

CO2_D = 1.33e-7
CO2_BEND = 667.0


def ch3i():
    """CH3I treated as an effective linear rotor (K structure ignored)."""
    return MoleculeSpec("CH3I", (RotorComponent("CH3I", B=0.25, D=2.1e-7),))


def co2():
    """CO2 ground state plus the two l-type doubling components of (01^1 0).

    Each manifold carries a single J parity; the assignment of odd J to
    010+ and even J to 010- is a modelling choice.
    """
    return MoleculeSpec(
        "CO2",
        (
            RotorComponent("000", B=0.3902, D=CO2_D, J_parity="even"),
            RotorComponent("010+", B=0.3912, D=CO2_D, E_vib=CO2_BEND, J_min=1, J_parity="odd"),
            RotorComponent("010-", B=0.3905, D=CO2_D, E_vib=CO2_BEND, J_min=2, J_parity="even"),
        ),
    )


PRESETS = {"CH3I": ch3i, "CO2": co2}


def preset(name):
    try:
        return PRESETS[name.upper()]()
    except KeyError:
        raise ValidationError(f"unknown molecule preset {name!r}; known: {sorted(PRESETS)}")
