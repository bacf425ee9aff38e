import math

import numpy as np
from numpy.testing import assert_allclose
import pytest
from hypothesis import given, settings, strategies as st

from rotshape.exceptions import TruncationError, ValidationError
from rotshape.rotor import (MoleculeSpec, RotorComponent, boltzmann_tail, cdn_polynomial,
                            choose_J_max, phi_cdn, phi_rigid, preset, raman_frequency,
                            revival_period, rigid_raman_frequency, rot_energy,
                            thermal_populations)
from rotshape.units import C_CM_PER_PS, HC_OVER_K, K_ANG


def test_energy_ladder_values():
    c = RotorComponent("x", B=0.25, D=2.1e-7, E_vib=10.0)
    assert rot_energy(c, 0) == 10.0
    assert_allclose(rot_energy(c, 1), 10.0 + 0.5 - 4 * 2.1e-7)
    assert_allclose(rot_energy(c, np.arange(3)), [10.0, 10.5 - 8.4e-7, 11.5 - 36 * 2.1e-7])


def test_raman_frequency_is_level_spacing():
    c = RotorComponent("x", B=0.39, D=1.33e-7)
    J = np.arange(0, 60)
    assert_allclose(raman_frequency(c, J), K_ANG * (rot_energy(c, J + 2) - rot_energy(c, J)),
                    rtol=1e-14)
    rigid = c.with_constants(D=0.0)
    assert_allclose(raman_frequency(rigid, J), rigid_raman_frequency(c, J), rtol=1e-13)


def test_revival_period_ignores_D_and_vib():
    a = RotorComponent("a", B=0.3902)
    b = a.with_constants(D=1e-6, E_vib=667.0)
    assert revival_period(a) == revival_period(b)
    assert_allclose(revival_period(a), 1 / (2 * 0.3902 * 2.99792458e-2))


@settings(max_examples=60, deadline=None)
@given(B=st.floats(0.05, 2.0), t=st.floats(-2000.0, 2000.0))
def test_rigid_phase_advances_by_whole_turns_over_a_revival(B, t):
    c = RotorComponent("x", B=B)
    J = np.arange(0, 101)
    T = revival_period(c)
    turns = (phi_rigid(c, J, t + T) - phi_rigid(c, J, t)) / (2 * math.pi)
    assert np.max(np.abs(turns - np.round(turns))) * 2 * math.pi < 1e-9 * max(1.0, abs(t) / T)


def test_cdn_polynomial_identity():
    J = np.arange(0, 200)
    u = 2 * J + 3
    assert_allclose(4 * cdn_polynomial(J), u**3 + 3 * u)
    assert cdn_polynomial(0) == 9


def test_phi_cdn_matches_quartic_energy_term():
    # phase accumulated by the -D J^2 (J+1)^2 term alone at t = n T_rev
    c = RotorComponent("x", B=0.25, D=2.1e-7)
    J = np.arange(0, 80, dtype=float)
    quartic = lambda j: (j * (j + 1)) ** 2
    n = 5.5
    t = n * revival_period(c)
    direct = 2 * math.pi * C_CM_PER_PS * c.D * (quartic(J + 2) - quartic(J)) * t
    assert_allclose(phi_cdn(c, J, n), direct, rtol=1e-12)
    assert phi_cdn(c.with_constants(D=0.0), 10, 3.0) == 0.0


def test_populations_normalized_and_masked(co2_mol):
    e = thermal_populations(co2_mol, 293.0)
    assert_allclose(e.total(), 1.0, rtol=1e-14)
    p = e.populations
    assert np.all(p["000"][1::2] == 0)
    assert np.all(p["010+"][0::2] == 0)
    assert p["010-"][0] == 0 and np.all(p["010-"][1::2] == 0)
    assert e.tail < 1e-6 and e.J_max >= 40


def test_populations_match_direct_boltzmann_sum():
    c = RotorComponent("x", B=1.0, D=1e-5)
    m = MoleculeSpec("x", (c,), J_max=60)
    T = 150.0
    w = [(2 * J + 1) * math.exp(-(J * (J + 1) - 1e-5 * (J * (J + 1)) ** 2) * HC_OVER_K / T)
         for J in range(61)]
    rho = np.array(w) / sum(w)
    assert_allclose(thermal_populations(m, T).populations["x"], rho, rtol=1e-12)


def test_J_max_choice(ch3i_mol):
    J = choose_J_max(ch3i_mol, 293.0)
    assert boltzmann_tail(ch3i_mol, 293.0, J) < 1e-6
    assert boltzmann_tail(ch3i_mol, 293.0, J - 1) >= 1e-6
    assert choose_J_max(ch3i_mol, 0.5) == 40


def test_truncation_error_for_small_J_max(ch3i_mol):
    with pytest.raises(TruncationError):
        thermal_populations(ch3i_mol.with_J_max(30), 293.0)


def test_low_temperature_limit():
    c = RotorComponent("x", B=0.39)
    e = thermal_populations(MoleculeSpec("x", (c,)), 1e-3)
    assert e.populations["x"][0] == 1.0


@pytest.mark.parametrize("kwargs", [dict(B=0.0), dict(B=1.0, D=-1.0), dict(B=1.0, J_min=-1),
                                    dict(B=1.0, J_parity="both"), dict(B=1.0, g_vib=-1.0)])
def test_component_validation(kwargs):
    with pytest.raises(ValidationError):
        RotorComponent("x", **kwargs)


def test_large_distortion_warns():
    with pytest.warns(UserWarning):
        RotorComponent("x", B=1.0, D=0.01)


def test_molecule_invariants():
    c = RotorComponent("x", B=1.0, J_min=2)
    with pytest.raises(ValidationError):
        MoleculeSpec("m", (c,), J_max=5)
    with pytest.raises(ValidationError):
        MoleculeSpec("m", ())
    with pytest.raises(ValidationError):
        MoleculeSpec("m", (c, c))
    with pytest.raises(ValidationError):
        thermal_populations(MoleculeSpec("m", (c,)), 0.0)


def test_presets():
    assert preset("ch3i").components[0].B == 0.25
    assert preset("CO2").labels == ["000", "010+", "010-"]
    with pytest.raises(ValidationError):
        preset("H2O")
