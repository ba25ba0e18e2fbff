"""Bell-state fidelities, population and phase errors, and the radiative
decay estimate.

The CZ target is Psi_B = (|00> + |01> + |10> - |11>)/2. Fidelities are plain
squared overlaps of the (possibly norm-losing) final state with Psi_B; lost
norm is lost fidelity, no renormalization anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory, entangling_phase
from .model import BASIS, SINGLE_ION

COMPUTATIONAL = ("00", "01", "10", "11")
_BELL_SIGNS = {"00": 1.0, "01": 1.0, "10": 1.0, "11": -1.0}


def _component(psi: np.ndarray, labels, label: str) -> complex:
    return complex(psi[list(labels).index(label)])


def bell_fidelity(psi_final: np.ndarray, labels=None) -> float:
    """|<Psi_B | psi>|^2 without compensating rotations."""
    labels = labels if labels is not None else BASIS.labels
    overlap = sum(_BELL_SIGNS[lab] * _component(psi_final, labels, lab)
                  for lab in COMPUTATIONAL) / 2.0
    return float(abs(overlap) ** 2)


def bell_fidelity_sqr(psi_final: np.ndarray, phi10: float, phi01: float,
                      labels=None) -> float:
    """Fidelity after the single-qubit rotations R1(phi10) R2(phi01).

    R_i(phi) = exp(-i phi)|1><1|_i + |0><0|_i, so the |01>, |10> and |11>
    amplitudes pick up exp(-i phi01), exp(-i phi10) and exp(-i(phi10+phi01)).
    """
    labels = labels if labels is not None else BASIS.labels
    rot = {"00": 1.0, "01": np.exp(-1j * phi01), "10": np.exp(-1j * phi10),
           "11": np.exp(-1j * (phi10 + phi01))}
    overlap = sum(_BELL_SIGNS[lab] * rot[lab] * _component(psi_final, labels, lab)
                  for lab in COMPUTATIONAL) / 2.0
    return float(abs(overlap) ** 2)


def error_measures(amplitudes, phi_star: float) -> tuple[float, float]:
    """Population error 1 - (sum c_ab)^2/4 and phase error
    1 - |3 - exp(i phi*)|^2 / 16 from the amplitude moduli c_ab.

    `amplitudes` is a {label: amplitude} mapping over the computational basis
    or a length-4 sequence ordered 00, 01, 10, 11.
    """
    if isinstance(amplitudes, dict):
        c = np.array([abs(amplitudes[lab]) for lab in COMPUTATIONAL])
    else:
        c = np.abs(np.asarray(amplitudes, dtype=complex))
    p_err = 1.0 - 0.25 * float(np.sum(c)) ** 2
    ph_err = 1.0 - abs(3.0 - np.exp(1j * phi_star)) ** 2 / 16.0
    return float(p_err), float(ph_err)


def per_ion_rydberg_populations(traj: Trajectory) -> np.ndarray:
    """sum_i (p_+^i(t) + p_-^i(t)) marginalized from the two-ion state."""
    pops = traj.populations()
    total = np.zeros(pops.shape[0])
    for idx, lab in enumerate(traj.labels):
        total += BASIS.rydberg_count(lab) * pops[:, idx]
    return total


def decay_fidelity_estimate(traj: Trajectory, gamma_r: float) -> float:
    """|1 - gamma_R/2 integral sum_i (p_+^i + p_-^i) dt|^2 on a decay-free
    trajectory; assumes unit fidelity in the absence of decay."""
    if gamma_r < 0:
        raise ValueError("gamma_r must be non-negative")
    integral = float(np.trapezoid(per_ion_rydberg_populations(traj), traj.times))
    return float(abs(1.0 - 0.5 * gamma_r * integral) ** 2)


@dataclass(frozen=True)
class GateOutcome:
    """Final-state summary of one gate simulation."""

    amplitudes: dict[str, complex]
    phases: dict[str, float]
    entangling: float
    fidelity_plain: float
    fidelity_sqr: float
    population_error: float
    phase_error: float
    norm: float

    @classmethod
    def from_trajectory(cls, traj: Trajectory, phase_floor: float = 1e-6) -> "GateOutcome":
        # metrics use arg c_ab(tau) directly: the unwrapped series is a
        # plotting aid and loses windings accumulated while a population
        # sits below the floor (protocol C empties |11> mid-gate)
        psi = traj.final_state
        amps = {lab: complex(psi[traj.index(lab)]) for lab in COMPUTATIONAL}
        phases = {lab: float(np.angle(amp)) for lab, amp in amps.items()}
        phi_star = entangling_phase(phases["11"], phases["10"], phases["01"])
        p_err, ph_err = error_measures(amps, phi_star)
        return cls(
            amplitudes=amps,
            phases=phases,
            entangling=phi_star,
            fidelity_plain=bell_fidelity(psi, traj.labels),
            fidelity_sqr=bell_fidelity_sqr(psi, phases["10"], phases["01"], traj.labels),
            population_error=p_err,
            phase_error=ph_err,
            norm=float(np.linalg.norm(psi)),
        )

    def summary(self) -> dict:
        return {
            "fidelity_sqr": self.fidelity_sqr,
            "fidelity_plain": self.fidelity_plain,
            "population_error": self.population_error,
            "phase_error": self.phase_error,
            "entangling_phase_rad": self.entangling,
            "norm": self.norm,
            "amplitudes": {k: [v.real, v.imag] for k, v in self.amplitudes.items()},
            "phases_rad": self.phases,
        }


def _single_ion_marginal(psi: np.ndarray, ion: int) -> np.ndarray:
    """Populations of ion `ion` (1 or 2) over the single-ion basis."""
    grid = np.abs(np.asarray(psi).reshape(4, 4)) ** 2
    return grid.sum(axis=1) if ion == 1 else grid.sum(axis=0)


def ion_rydberg_population(psi: np.ndarray, ion: int) -> float:
    marg = _single_ion_marginal(psi, ion)
    return float(marg[SINGLE_ION.index("-")] + marg[SINGLE_ION.index("+")])
