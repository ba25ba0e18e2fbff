"""Time evolution of the gate Hamiltonians and phase bookkeeping.

The integrator is a fourth-order commutator-free exponential scheme: each
step combines the Hamiltonian evaluated at the two Gauss-Legendre nodes into
two exponentials, which are applied via batched eigendecomposition. The
method is exact for constant Hamiltonians of any norm, so step counts are set
by the slow pulse envelopes rather than by the fast dressed-state phases, and
with decay every sub-step remains a strict contraction. Accuracy control
doubles the step count until the final state moves by less than `tol`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import IntegrationError, TrackingError
from .model import (BASIS, B11_LABELS, SECTOR_01, SECTOR_10, SECTOR_11,
                    GateParams, add_decay, hamiltonian_parts)
from .pulses import PulseShape

# Gauss-Legendre nodes on [0, 1] and the fourth-order combination weights
_C1 = 0.5 - math.sqrt(3.0) / 6.0
_C2 = 0.5 + math.sqrt(3.0) / 6.0
_A1 = (3.0 - 2.0 * math.sqrt(3.0)) / 12.0
_A2 = (3.0 + 2.0 * math.sqrt(3.0)) / 12.0


class AffinePulseSource:
    """H(t) = static + sum_ion Omega_ion(t) C_ion + Delta_ion(t) N_ion.

    `sector` restricts the operator blocks: either a sequence of product-basis
    indices or a rectangular projector matrix (rows = new basis vectors).
    """

    def __init__(self, params: GateParams, shape: PulseShape,
                 sector=None, labels: Sequence[str] | None = None):
        parts = hamiltonian_parts(params)
        static = parts.static.astype(complex)
        coupling = [c.astype(complex) for c in parts.coupling]
        rydberg = [r.astype(complex) for r in parts.rydberg]
        if labels is None:
            labels = BASIS.labels
        if params.decay_rate > 0.0:
            static = add_decay(static, params.decay_rate, BASIS.labels)
        if sector is not None:
            if isinstance(sector, np.ndarray) and sector.ndim == 2:
                proj = sector
            else:
                proj = np.zeros((len(sector), 16))
                for row, idx in enumerate(sector):
                    proj[row, idx] = 1.0
            static = proj @ static @ proj.conj().T
            coupling = [proj @ c @ proj.conj().T for c in coupling]
            rydberg = [proj @ r @ proj.conj().T for r in rydberg]
        self.params = params
        self.shape = shape
        self.static = static
        self.coupling = coupling
        self.rydberg = rydberg
        self.labels = tuple(labels)
        self.dim = static.shape[0]
        self.is_hermitian = params.decay_rate == 0.0

    def _pulse(self, ts: np.ndarray, ion: int):
        if self.shape.per_ion:
            return self.shape.values(ts, ion=ion)
        return self.shape.values(ts)

    def values(self, ts) -> np.ndarray:
        """Hamiltonian at each time in `ts`, shape (len(ts), dim, dim)."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        h = np.broadcast_to(self.static, (ts.size, self.dim, self.dim)).copy()
        for ion in (1, 2):
            om, dl = self._pulse(ts, ion)
            h += np.asarray(om)[:, None, None] * self.coupling[ion - 1]
            h += np.asarray(dl)[:, None, None] * self.rydberg[ion - 1]
        return h

    def combos(self, n_steps: int, tau: float, start: int = 0,
               count: int | None = None) -> np.ndarray:
        """Combined matrices of the fourth-order scheme for a step window.

        Returns (2 * count, dim, dim): index k holds the exponential applied
        first in window step k, index count + k the one applied second.
        """
        count = n_steps - start if count is None else count
        h = tau / n_steps
        base = (start + np.arange(count)) * h
        t1, t2 = base + _C1 * h, base + _C2 * h
        # first half: applied first, weighted toward the early node; second
        # half: applied second. This ordering cancels the h^3 Magnus
        # commutator and is what makes the scheme fourth order.
        out = np.broadcast_to(0.5 * self.static,
                              (2 * count, self.dim, self.dim)).copy()
        for ion in (1, 2):
            om1, dl1 = self._pulse(t1, ion)
            om2, dl2 = self._pulse(t2, ion)
            om1, dl1, om2, dl2 = map(np.asarray, (om1, dl1, om2, dl2))
            w_om = np.concatenate([_A2 * om1 + _A1 * om2, _A1 * om1 + _A2 * om2])
            w_dl = np.concatenate([_A2 * dl1 + _A1 * dl2, _A1 * dl1 + _A2 * dl2])
            out += w_om[:, None, None] * self.coupling[ion - 1]
            out += w_dl[:, None, None] * self.rydberg[ion - 1]
        return out


class CallableSource:
    """Adapter for an arbitrary H(t) callable returning a (dim, dim) array."""

    def __init__(self, fn: Callable[[float], np.ndarray], dim: int,
                 labels: Sequence[str] | None = None, hermitian: bool = True):
        self.fn = fn
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(dim))
        self.is_hermitian = hermitian

    def values(self, ts) -> np.ndarray:
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        return np.array([self.fn(t) for t in ts], dtype=complex)

    def combos(self, n_steps: int, tau: float, start: int = 0,
               count: int | None = None) -> np.ndarray:
        count = n_steps - start if count is None else count
        h = tau / n_steps
        base = (start + np.arange(count)) * h
        h1 = self.values(base + _C1 * h)
        h2 = self.values(base + _C2 * h)
        return np.concatenate([_A1 * h2 + _A2 * h1, _A2 * h2 + _A1 * h1])


def full_source(params: GateParams, shape: PulseShape) -> AffinePulseSource:
    return AffinePulseSource(params, shape)


def symmetric_11_source(params: GateParams, shape: PulseShape) -> AffinePulseSource:
    return AffinePulseSource(params, shape, sector=BASIS.b11_projector(),
                             labels=B11_LABELS)


def sector_source(params: GateParams, shape: PulseShape, sector) -> AffinePulseSource:
    labels = [BASIS.label(i) for i in sector]
    return AffinePulseSource(params, shape, sector=sector, labels=labels)


def _propagators(combos: np.ndarray, h: float, hermitian: bool) -> np.ndarray:
    """exp(-i h M) for each combined matrix, batched."""
    if hermitian:
        w, v = np.linalg.eigh(combos)
        return (v * np.exp(-1j * w * h)[:, None, :]) @ v.conj().transpose(0, 2, 1)
    w, v = np.linalg.eig(combos)
    return (v * np.exp(-1j * w * h)[:, None, :]) @ np.linalg.inv(v)


@dataclass
class Trajectory:
    """Dense-output record of one evolution."""

    times: np.ndarray
    states: np.ndarray = field(repr=False)          # (n_samples + 1, dim)
    labels: tuple[str, ...]
    tau: float
    tol: float
    n_steps: int

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def amplitude(self, label: str) -> np.ndarray:
        return self.states[:, self.index(label)]

    def population(self, label: str) -> np.ndarray:
        return np.abs(self.amplitude(label)) ** 2

    def populations(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def phase(self, label: str, phase_floor: float = 1e-6) -> np.ndarray:
        return _unwrap_phase(self.amplitude(label), phase_floor)

    def phases(self, labels=None, phase_floor: float = 1e-6) -> dict[str, np.ndarray]:
        return extract_phases(self, labels=labels, phase_floor=phase_floor)


def _unwrap_phase(amplitude: np.ndarray, phase_floor: float) -> np.ndarray:
    """Nearest-branch unwrapped arg, frozen while the population is negligible."""
    pop = np.abs(amplitude) ** 2
    raw = np.angle(amplitude)
    out = np.empty_like(raw)
    out[0] = raw[0] if pop[0] >= phase_floor else 0.0
    for k in range(1, raw.size):
        if pop[k] < phase_floor:
            out[k] = out[k - 1]
        else:
            jump = raw[k] - raw[k - 1]
            jump -= 2.0 * np.pi * round(jump / (2.0 * np.pi))
            out[k] = out[k - 1] + jump
    return out


def extract_phases(traj: Trajectory, labels=None,
                   phase_floor: float = 1e-6) -> dict[str, np.ndarray]:
    """Unwrapped accumulated phases for the requested labels."""
    if labels is None:
        labels = [lab for lab in ("00", "01", "10", "11") if lab in traj.labels]
    return {lab: traj.phase(lab, phase_floor) for lab in labels}


def evolve(source, psi0, tau: float, tol: float = 1e-10,
           samples: int = 1000, initial_steps: int | None = None,
           max_steps: int = 2**21) -> Trajectory:
    """Integrate the Schroedinger dynamics of `source` over [0, tau].

    The step count starts at max(samples, initial_steps) and doubles until
    the final state changes by less than `tol` (sup norm), which bounds the
    global error at roughly `tol` per unit norm. Dense output lands on
    `samples + 1` uniformly spaced times including both endpoints.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    if psi0.shape != (source.dim,):
        raise ValueError(f"state dimension {psi0.shape} != source dim {source.dim}")
    if tau <= 0:
        raise ValueError("tau must be positive")

    n = samples * max(1, math.ceil(max(samples, initial_steps or 0) / samples))
    prev_final = None
    while True:
        states = _run(source, psi0, tau, n, samples)
        if prev_final is not None and np.max(np.abs(states[-1] - prev_final)) < tol:
            break
        if 2 * n > max_steps:
            raise IntegrationError(
                f"dynamics: no convergence to tol={tol} within {max_steps} steps",
                t=tau)
        prev_final = states[-1]
        n *= 2
    times = np.linspace(0.0, tau, samples + 1)
    return Trajectory(times=times, states=states, labels=source.labels,
                      tau=tau, tol=tol, n_steps=n)


_CHUNK_STEPS = 4096


def _run(source, psi0: np.ndarray, tau: float, n_steps: int,
         samples: int) -> np.ndarray:
    """One fixed-step pass, processing the propagator chain in bounded chunks."""
    stride = n_steps // samples
    out = np.empty((samples + 1, source.dim), dtype=complex)
    out[0] = psi0
    psi = psi0
    row = 1
    for start in range(0, n_steps, _CHUNK_STEPS):
        count = min(_CHUNK_STEPS, n_steps - start)
        combos = source.combos(n_steps, tau, start, count)
        u = _propagators(combos, tau / n_steps, source.is_hermitian)
        for k in range(count):
            psi = u[count + k] @ (u[k] @ psi)
            if (start + k + 1) % stride == 0:
                out[row] = psi
                row += 1
    return out


def evolve_batch_final(static, coupling, rydberg, pulse_values, psi0,
                       n_steps: int, tau: float, hermitian: bool) -> np.ndarray:
    """Final states for a batch of pulses sharing the same operator blocks.

    `pulse_values` supplies (omega, delta) arrays of shape (batch, n_steps, 2)
    per ion, evaluated at the two Gauss nodes of every step. Used by the
    optimizer, where only the state at t = tau matters.
    """
    batch = pulse_values[0][0].shape[0]
    dim = static.shape[0]
    h = tau / n_steps
    combos = np.broadcast_to(0.5 * static, (batch, 2 * n_steps, dim, dim)).copy()
    for ion in (1, 2):
        om, dl = pulse_values[ion - 1]
        w_om = np.concatenate([_A2 * om[..., 0] + _A1 * om[..., 1],
                               _A1 * om[..., 0] + _A2 * om[..., 1]], axis=1)
        w_dl = np.concatenate([_A2 * dl[..., 0] + _A1 * dl[..., 1],
                               _A1 * dl[..., 0] + _A2 * dl[..., 1]], axis=1)
        combos += w_om[..., None, None] * coupling[ion - 1]
        combos += w_dl[..., None, None] * rydberg[ion - 1]
    flat = combos.reshape(batch * 2 * n_steps, dim, dim)
    u = _propagators(flat, h, hermitian).reshape(batch, 2 * n_steps, dim, dim)
    psi = np.broadcast_to(psi0, (batch, dim)).copy()
    for k in range(n_steps):
        psi = np.matmul(u[:, k], psi[..., None])[..., 0]
        psi = np.matmul(u[:, n_steps + k], psi[..., None])[..., 0]
    return psi


# ---------------------------------------------------------------------------
# entangling phase


def entangling_phase(phi11: float, phi10: float, phi01: float) -> float:
    """phi* = (phi11 - phi10 - phi01) mod 2 pi, in [0, 2 pi)."""
    return float(np.mod(phi11 - phi10 - phi01, 2.0 * np.pi))


def entangling_phase_series(traj: Trajectory, phase_floor: float = 1e-6) -> np.ndarray:
    ph = traj.phases(phase_floor=phase_floor)
    return np.mod(ph["11"] - ph["10"] - ph["01"], 2.0 * np.pi)


def adiabatic_phase_estimate(params: GateParams, shape: PulseShape,
                             quadrature_points: int = 129,
                             min_overlap_sq: float = 0.5) -> float:
    """Entangling-phase estimate from instantaneous eigenenergies.

    At each Gauss-Legendre node the invariant sectors of H(t) are
    diagonalized; the branches adiabatically connected to |11>, |10> and |01>
    are followed by eigenvector-overlap continuation, and the energy
    difference e11 - e10 - e01 is integrated over the pulse.
    """
    nodes, weights = np.polynomial.legendre.leggauss(quadrature_points)
    ts = 0.5 * params.tau * (nodes + 1.0)
    ws = 0.5 * params.tau * weights

    if shape.per_ion:
        track = [
            (sector_source(params, shape, SECTOR_11), "11"),
            (sector_source(params, shape, SECTOR_10), "10"),
            (sector_source(params, shape, SECTOR_01), "01"),
        ]
        energies = [_track_energy(src, lab, ts, min_overlap_sq) for src, lab in track]
        e11, e10, e01 = energies
    else:
        e11 = _track_energy(symmetric_11_source(params, shape), "11", ts, min_overlap_sq)
        e10 = _track_energy(sector_source(params, shape, SECTOR_10), "10", ts, min_overlap_sq)
        e01 = e10
    integral = float(np.sum(ws * (e11 - e10 - e01)))
    return float(np.mod(-integral, 2.0 * np.pi))


def _track_energy(source: AffinePulseSource, label: str, ts: np.ndarray,
                  min_overlap_sq: float) -> np.ndarray:
    if not source.is_hermitian:
        raise ValueError("instantaneous-eigenstate tracking requires gamma_R = 0")
    h = source.values(ts)
    w, v = np.linalg.eigh(h)
    ref = np.zeros(source.dim, dtype=complex)
    ref[source.labels.index(label)] = 1.0
    energies = np.empty(ts.size)
    for k in range(ts.size):
        overlaps = v[k].conj().T @ ref
        weights_sq = np.abs(overlaps) ** 2
        best = int(np.argmax(weights_sq))
        if weights_sq[best] < min_overlap_sq:
            raise TrackingError(
                f"dynamics: eigenstate tracking for |{label}> ambiguous "
                f"(best overlap^2 {weights_sq[best]:.3f})", t=float(ts[k]))
        energies[k] = w[k, best]
        ref = v[k][:, best] * np.exp(1j * np.angle(overlaps[best]))
    return energies
