"""Physical constants and the unit conversions used at module boundaries.

Internal unit policy:

* atomic-structure computations run in Hartree atomic units,
* gate dynamics run with hbar = 1 and angular frequencies in rad/us,
* user-facing frequencies are plain numbers in units of 2*pi x MHz,
* trap mechanics run in SI.

Every conversion between these systems goes through this table.
"""

from __future__ import annotations

import math

TWO_PI = 2.0 * math.pi

# CODATA 2018
BOHR_RADIUS_M = 5.29177210903e-11
HARTREE_J = 4.3597447222071e-18
HARTREE_INV_CM = 219474.6313632
HBAR_JS = 1.054571817e-34
ELEMENTARY_CHARGE_C = 1.602176634e-19
FINE_STRUCTURE = 7.2973525693e-3
COULOMB_CONSTANT = 8.9875517923e9           # 1 / (4 pi eps0), N m^2 / C^2
ATOMIC_MASS_KG = 1.66053906660e-27
ELECTRON_MASS_KG = 9.1093837015e-31

# e^2 / (4 pi eps0) in J m; the only combination the crystal module needs.
COULOMB_E2_JM = COULOMB_CONSTANT * ELEMENTARY_CHARGE_C**2


def mhz_to_rad_per_us(f_2pi_mhz: float) -> float:
    """Frequency quoted in 2*pi x MHz -> angular frequency in rad/us."""
    return TWO_PI * f_2pi_mhz


def rad_per_us_to_mhz(omega: float) -> float:
    """Angular frequency in rad/us -> frequency in 2*pi x MHz."""
    return omega / TWO_PI


def au_to_meters(value_au: float, power: int = 1) -> float:
    """Convert a length^power matrix element from Bohr radii^power to m^power."""
    return value_au * BOHR_RADIUS_M**power


def hartree_to_inv_cm(energy_au: float) -> float:
    return energy_au * HARTREE_INV_CM


def hartree_to_ev(energy_au: float) -> float:
    return energy_au * HARTREE_J / ELEMENTARY_CHARGE_C
