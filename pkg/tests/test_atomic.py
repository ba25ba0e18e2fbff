"""Radial solver and matrix-element tests: hydrogen closed forms, the NIST
level fixture, and the n = 46 strontium golden values."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from rydion.atomic import (ElectronicState, GridConfig, model_potential,
                           radial_matrix_element, radial_matrix_element_si,
                           solve_radial)
from rydion.constants import HARTREE_INV_CM
from rydion.errors import ConvergenceError
from rydion.species import get_species, hydrogenic

HYDROGEN = hydrogenic(1)
LEVELS = json.loads((Path(__file__).parent / "data" / "sr_ii_levels.json").read_text())


def _binding_au(term: str) -> float:
    cm = LEVELS["ionization_limit_cm"] - LEVELS["levels_cm"][term]
    return -cm / HARTREE_INV_CM


# --- model potential ---------------------------------------------------------

def test_potential_asymptotically_coulombic(sr):
    r = 1e4
    for l in range(4):
        v = model_potential(r, l, sr)
        assert v == pytest.approx(-sr.Zc / r, rel=1e-10)


def test_sr_s_channel_parameters(sr):
    ch = sr.channel(0)
    assert (ch.k1, ch.k2, ch.k3, ch.r_c) == (3.4187, 4.7332, 1.5915, 1.7965)
    assert sr.alpha_d == 7.5 and sr.Z == 38 and sr.Zc == 2


def test_polarization_value_at_cutoff():
    for name in ("Ca+", "Sr+", "Ba+", "Ra+"):
        sp = get_species(name)
        for l in range(4):
            rc = sp.channel(l).r_c
            v_pol = model_potential(rc, l, sp) - (
                -(sp.Zc + (sp.Z - sp.Zc) * math.exp(-sp.channel(l).k1 * rc)
                  + sp.channel(l).k2 * rc * math.exp(-sp.channel(l).k3 * rc)) / rc)
            expected = -sp.alpha_d / (2 * rc**4) * (1 - math.exp(-1))
            assert v_pol == pytest.approx(expected, rel=1e-12)


def test_high_l_reuses_f_channel(sr):
    assert sr.channel(7) == sr.channel(3)


def test_all_table_species_have_positive_parameters():
    for name in ("Ca+", "Sr+", "Ba+", "Ra+"):
        sp = get_species(name)
        assert sp.alpha_d > 0 and sp.mass_kg > 0
        for l in range(4):
            ch = sp.channel(l)
            assert ch.k1 > 0 and ch.k2 > 0 and ch.k3 > 0 and ch.r_c > 0


def test_negative_radius_rejected(sr):
    with pytest.raises(ValueError):
        model_potential(-1.0, 0, sr)
    with pytest.raises(ValueError):
        model_potential(np.array([1.0, 0.0]), 0, sr)


# --- hydrogen-like regression --------------------------------------------------

@pytest.mark.parametrize("n,l", [(1, 0), (2, 0), (2, 1), (3, 1), (4, 2), (5, 0), (5, 4)])
def test_hydrogen_energies(n, l):
    state = ElectronicState(n, l, l + 0.5, 0.5)
    wf = solve_radial(state, HYDROGEN, spin_orbit=False)
    assert wf.energy == pytest.approx(-0.5 / n**2, rel=1e-6)
    assert wf.node_count == n - l - 1


def test_hydrogen_dipole_integrals():
    # same-n dipole integrals have the closed form (3/2) n sqrt(n^2 - l^2)
    for n in range(2, 6):
        for l in range(1, n):
            a = ElectronicState(n, l, l + 0.5, 0.5)
            b = ElectronicState(n, l - 1, l - 0.5, 0.5)
            got = abs(radial_matrix_element(a, b, 1, HYDROGEN, spin_orbit=False))
            assert got == pytest.approx(1.5 * n * math.sqrt(n**2 - l**2), rel=1e-4)


# --- strontium levels ----------------------------------------------------------

def test_sr_ground_state_energy(sr):
    wf = solve_radial(ElectronicState(5, 0, 0.5, -0.5), sr)
    assert wf.energy == pytest.approx(_binding_au("5S1/2"), rel=5e-3)


def test_sr_metastable_qubit_state_energy(sr):
    wf = solve_radial(ElectronicState(4, 2, 2.5, -2.5), sr)
    assert wf.energy == pytest.approx(_binding_au("4D5/2"), rel=5e-3)


def test_sr_5p_fine_structure_energies(sr):
    for term, j in (("5P1/2", 0.5), ("5P3/2", 1.5)):
        wf = solve_radial(ElectronicState(5, 1, j, 0.5), sr)
        assert wf.energy == pytest.approx(_binding_au(term), rel=5e-3)


def test_rydberg_node_count(sr, app_h_states):
    assert solve_radial(app_h_states[3], sr).node_count == 45


def test_wavefunction_invariants(sr, app_h_states):
    for state in app_h_states.values():
        wf = solve_radial(state, sr)
        assert abs(wf.norm() - 1.0) < 1e-8
        peak = np.max(np.abs(wf.values))
        # Phi ~ r^(l+1) at the inner edge, exponentially dead at the outer one
        assert abs(wf.values[0]) < 1e-2 * peak
        assert abs(wf.values[-1]) < 1e-6 * peak
        assert wf.node_count == state.nodes


def test_positive_leading_lobe(sr, app_h_states):
    for state in app_h_states.values():
        wf = solve_radial(state, sr)
        first_big = np.nonzero(np.abs(wf.values) > 0.1 * np.max(np.abs(wf.values)))[0][0]
        assert wf.values[first_big] > 0


# --- golden matrix elements -----------------------------------------------------

GOLDEN_DIPOLE_SI = {
    (2, 0): 7.18e-12,
    (0, 4): 7.96e-14,
    (1, 2): 6.87e-12,
    (2, 3): 1.13e-12,
    (3, 4): 6.37e-8,
}

GOLDEN_QUAD_SI = {
    (1, 0): 3.58e-20,
    (1, 3): 6.50e-23,
    (2, 4): 6.29e-22,
    (1, 1): 3.03e-20,
    (2, 2): 2.94e-19,
}


@pytest.mark.parametrize("pair", sorted(GOLDEN_DIPOLE_SI))
def test_golden_dipole_magnitudes(sr, app_h_states, pair):
    got = radial_matrix_element_si(app_h_states[pair[0]], app_h_states[pair[1]], 1, sr)
    assert abs(got) == pytest.approx(GOLDEN_DIPOLE_SI[pair], rel=0.05)


@pytest.mark.parametrize("pair", sorted(GOLDEN_QUAD_SI))
def test_golden_quadrupole_magnitudes(sr, app_h_states, pair):
    got = radial_matrix_element_si(app_h_states[pair[0]], app_h_states[pair[1]], 2, sr)
    assert abs(got) == pytest.approx(GOLDEN_QUAD_SI[pair], rel=0.05)


def test_matrix_element_symmetry(sr, app_h_states):
    a, b = app_h_states[3], app_h_states[4]
    assert radial_matrix_element(a, b, 1, sr) == radial_matrix_element(b, a, 1, sr)


def test_diagonal_r2_positive(sr, app_h_states):
    for state in app_h_states.values():
        assert radial_matrix_element(state, state, 2, sr) > 0


def test_invalid_power_rejected(sr, app_h_states):
    with pytest.raises(ValueError):
        radial_matrix_element(app_h_states[0], app_h_states[1], 3, sr)


def test_missing_eigenvalue_raises(sr):
    with pytest.raises(ConvergenceError):
        solve_radial(ElectronicState(5, 0, 0.5, -0.5), sr,
                     energy_window=(-1e-6, -1e-9))


# --- state bookkeeping -----------------------------------------------------------

def test_state_validation():
    with pytest.raises(ValueError):
        ElectronicState(1, 1, 1.5, 0.5)        # l >= n
    with pytest.raises(ValueError):
        ElectronicState(2, 1, 2.5, 0.5)        # j out of range
    with pytest.raises(ValueError):
        ElectronicState(2, 1, 1.5, 2.5)        # |m_j| > j
    with pytest.raises(ValueError):
        ElectronicState(2, 0, 1.0, 0.0)        # integer j for s = 1/2


def test_state_label_round_trip():
    st = ElectronicState.from_label("46S1/2", -0.5)
    assert (st.n, st.l, st.j, st.m_j) == (46, 0, 0.5, -0.5)
    assert st.label == "46S1/2(-1/2)"
    st2 = ElectronicState.from_label("4D5/2", -2.5)
    assert (st2.n, st2.l, st2.j) == (4, 2, 2.5)


def test_wavefunction_csv_round_trip(sr, tmp_path):
    wf = solve_radial(ElectronicState(5, 0, 0.5, -0.5), sr)
    path = tmp_path / "wf.csv"
    wf.to_csv(path)
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape == (wf.grid.size, 2)
    np.testing.assert_allclose(data[:, 1], wf.values, atol=1e-12)


def test_grid_covers_turning_point_or_raises(sr):
    tiny = GridConfig(r_max=5.0, points=2000)
    with pytest.raises(ConvergenceError):
        solve_radial(ElectronicState(46, 0, 0.5, -0.5), sr, grid=tiny)
