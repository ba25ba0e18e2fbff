"""Hamiltonians of the two-ion microwave-dressed gate.

Single-ion levels are |0> (spectator qubit state), |1> (laser-coupled qubit
state) and the dressed Rydberg pair |->, |+>. All matrices are in rad/us with
hbar = 1; callers convert from 2*pi x MHz at the boundary.

Basis conventions (fixed; every index map derives from these):

* single ion: ("0", "1", "-", "+")
* two ions:   label a + b, index 4 * i(a) + i(b), ion 1 is the left factor
* symmetric |11>-sector basis B11: ("++", "SR", "S+", "--", "S-", "11") with
  SR = (|+-> + |-+>)/sqrt2 and S± = (|±1> + |1±>)/sqrt2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

SINGLE_ION = ("0", "1", "-", "+")
RYDBERG_CHARS = frozenset("-+")
SQRT2 = math.sqrt(2.0)


def _single_index(label: str) -> int:
    return SINGLE_ION.index(label)


class StateBasis:
    """Index bookkeeping for the 16-dimensional two-ion product space."""

    labels: tuple[str, ...]

    def __init__(self):
        self.labels = tuple(a + b for a in SINGLE_ION for b in SINGLE_ION)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.computational = ("00", "01", "10", "11")

    @property
    def dim(self) -> int:
        return 16

    def index(self, label: str) -> int:
        return self._index[label]

    def label(self, index: int) -> str:
        return self.labels[index]

    def vector(self, label: str) -> np.ndarray:
        v = np.zeros(16, dtype=complex)
        v[self.index(label)] = 1.0
        return v

    def superposition(self, *labels_amplitudes) -> np.ndarray:
        v = np.zeros(16, dtype=complex)
        for label, amp in labels_amplitudes:
            v[self.index(label)] += amp
        return v

    def rydberg_count(self, label: str) -> int:
        return sum(ch in RYDBERG_CHARS for ch in label)

    # --- symmetric / antisymmetric combinations -------------------------
    def symmetric_pair(self, a: str, b: str) -> np.ndarray:
        return self.superposition((a + b, 1 / SQRT2), (b + a, 1 / SQRT2))

    def antisymmetric_pair(self, a: str, b: str) -> np.ndarray:
        return self.superposition((a + b, 1 / SQRT2), (b + a, -1 / SQRT2))

    def b11_vectors(self) -> dict[str, np.ndarray]:
        return {
            "++": self.vector("++"),
            "SR": self.symmetric_pair("+", "-"),
            "S+": self.symmetric_pair("+", "1"),
            "--": self.vector("--"),
            "S-": self.symmetric_pair("-", "1"),
            "11": self.vector("11"),
        }

    def b11_projector(self) -> np.ndarray:
        """6 x 16 matrix whose rows are the B11 basis vectors."""
        return np.array([v for v in self.b11_vectors().values()])

    def antisymmetric_vectors(self) -> dict[str, np.ndarray]:
        return {
            "AR": self.antisymmetric_pair("+", "-"),
            "A+": self.antisymmetric_pair("+", "1"),
            "A-": self.antisymmetric_pair("-", "1"),
        }


BASIS = StateBasis()

B11_LABELS = ("++", "SR", "S+", "--", "S-", "11")
B11_RYDBERG_COUNTS = (2, 2, 1, 2, 1, 0)

# invariant sectors of the full Hamiltonian (|0> of the spectator ion factors out)
SECTOR_10 = tuple(BASIS.index(a + "0") for a in ("1", "-", "+"))
SECTOR_01 = tuple(BASIS.index("0" + b) for b in ("1", "-", "+"))
SECTOR_11 = tuple(BASIS.index(a + b) for a in ("1", "-", "+") for b in ("1", "-", "+"))


@dataclass(frozen=True)
class GateParams:
    """Fixed physical gate parameters, stored as rad/us (hbar = 1)."""

    interaction: float          # V
    rabi_mw: float              # Omega_MW
    tau: float                  # gate duration, us
    decay_rate: float = 0.0     # gamma_R, 1/us

    def __post_init__(self):
        if self.interaction <= 0 or self.rabi_mw <= 0 or self.tau <= 0:
            raise ValueError("V, Omega_MW and tau must be positive")
        if self.decay_rate < 0:
            raise ValueError("decay rate must be non-negative")

    @classmethod
    def from_mhz(cls, interaction_mhz: float, rabi_mw_mhz: float, tau_us: float,
                 decay_rate_inv_us: float = 0.0) -> "GateParams":
        from .constants import mhz_to_rad_per_us
        return cls(interaction=mhz_to_rad_per_us(interaction_mhz),
                   rabi_mw=mhz_to_rad_per_us(rabi_mw_mhz),
                   tau=tau_us, decay_rate=decay_rate_inv_us)

    def with_decay(self, decay_rate: float) -> "GateParams":
        return replace(self, decay_rate=decay_rate)


def _op(bra: str, ket: str) -> np.ndarray:
    m = np.zeros((4, 4))
    m[_single_index(bra), _single_index(ket)] = 1.0
    return m


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


@dataclass(frozen=True)
class HamiltonianParts:
    """Affine decomposition H(t) = static + sum_i OmL_i(t) coupling_i
    + sum_i DL_i(t) rydberg_i, all real symmetric 16 x 16 blocks."""

    static: np.ndarray = field(repr=False)
    coupling: tuple[np.ndarray, np.ndarray] = field(repr=False)
    rydberg: tuple[np.ndarray, np.ndarray] = field(repr=False)


def hamiltonian_parts(params: GateParams) -> HamiltonianParts:
    """Build the constant matrices of the affine two-ion Hamiltonian."""
    eye = np.eye(4)
    p_plus, p_minus = _op("+", "+"), _op("-", "-")
    s_pm, s_mp = _op("+", "-"), _op("-", "+")
    half_mw = 0.5 * params.rabi_mw * (p_plus - p_minus)
    static = _kron(half_mw, eye) + _kron(eye, half_mw)
    zdiff = p_plus - p_minus
    flip = s_pm - s_mp
    static = static + 0.5 * params.interaction * (_kron(zdiff, zdiff) - _kron(flip, flip))
    coup = (_op("+", "1") + _op("1", "+") + _op("-", "1") + _op("1", "-")) / (2.0 * SQRT2)
    n_ryd = p_plus + p_minus
    return HamiltonianParts(
        static=static,
        coupling=(_kron(coup, eye), _kron(eye, coup)),
        rydberg=(_kron(n_ryd, eye), _kron(eye, n_ryd)),
    )


def two_ion_hamiltonian(params: GateParams, omega_l, delta_l) -> np.ndarray:
    """Full 16 x 16 two-ion Hamiltonian in rad/us.

    omega_l and delta_l are scalars for a global pulse or (ion1, ion2) pairs
    for individually addressed beams. Hermitian; decay is added separately by
    :func:`add_decay`.
    """
    parts = hamiltonian_parts(params)
    om = (omega_l, omega_l) if np.isscalar(omega_l) else tuple(omega_l)
    dl = (delta_l, delta_l) if np.isscalar(delta_l) else tuple(delta_l)
    h = parts.static.astype(complex)
    for i in range(2):
        h += om[i] * parts.coupling[i] + dl[i] * parts.rydberg[i]
    return h


def rydberg_counts(labels) -> np.ndarray:
    """Rydberg-excitation count per basis label ('--' -> 2, 'S-' -> 1, ...)."""
    counts = []
    for lab in labels:
        if lab in B11_LABELS:
            counts.append(B11_RYDBERG_COUNTS[B11_LABELS.index(lab)])
        else:
            counts.append(sum(ch in RYDBERG_CHARS for ch in lab))
    return np.asarray(counts, dtype=float)


def add_decay(h: np.ndarray, gamma_r: float, labels=None) -> np.ndarray:
    """Append the non-Hermitian term -i gamma_R/2 per Rydberg excitation.

    `labels` names each basis state (defaults to the full two-ion product
    basis); a doubly excited label like '--' acquires -i gamma_R.
    """
    if gamma_r < 0:
        raise ValueError("gamma_r must be non-negative")
    h = np.asarray(h, dtype=complex)
    if gamma_r == 0.0:
        return h.copy()
    if labels is None:
        if h.shape[0] != 16:
            raise ValueError("default labels require a 16-dimensional matrix")
        labels = BASIS.labels
    counts = rydberg_counts(labels)
    if len(counts) != h.shape[0]:
        raise ValueError("label count does not match matrix dimension")
    return h - 0.5j * gamma_r * np.diag(counts)


# ---------------------------------------------------------------------------
# dimensionless |11>- and |10>-sector forms


def h11_symmetric_block(eps_plus: float, eps_minus: float, delta: float,
                        eta: float) -> np.ndarray:
    """Symmetric |11>-sector Hamiltonian in units of Delta_L, basis B11.

    Arguments are the dimensionless ratios eps± = Delta±/Delta_L,
    delta = Omega_L/Delta_L and eta = V/Delta_L; the caller guarantees
    Delta_L != 0 (this function never divides).
    """
    d = delta
    m = np.array([
        [4 * eps_plus + eta, 0.0, d, -eta, 0.0, 0.0],
        [0.0, 2 * (eps_plus + eps_minus), d / SQRT2, 0.0, d / SQRT2, 0.0],
        [d, d / SQRT2, 2 * eps_plus, 0.0, 0.0, d],
        [-eta, 0.0, 0.0, 4 * eps_minus + eta, d, 0.0],
        [0.0, d / SQRT2, 0.0, d, 2 * eps_minus, d],
        [0.0, 0.0, d, 0.0, d, 0.0],
    ])
    return 0.5 * m


def reduce_h11(eps_plus: float, eps_minus: float, delta: float,
               eta: float) -> np.ndarray:
    """Adiabatically reduced 3 x 3 block, basis ('--', 'S-', '11'), units of
    Delta_L. Valid for eps- << 1 and delta, eta << eps+ (not enforced)."""
    d = delta
    m = np.array([
        [4 * eps_minus + eta - eta**2 / (4 * eps_plus + eta), d, 0.0],
        [d, 2 * eps_minus - d**2 / (4 * (eps_plus + eps_minus)), d],
        [0.0, d, -d**2 / (2 * eps_plus)],
    ])
    return 0.5 * m


def reduce_h10(eps_plus: float, eps_minus: float, delta: float) -> np.ndarray:
    """Adiabatically reduced 2 x 2 block, basis ('-0', '10'), units of Delta_L."""
    off = delta / (2.0 * SQRT2)
    return np.array([
        [eps_minus, off],
        [off, -delta**2 / (8.0 * eps_plus)],
    ])


def swap_operator() -> np.ndarray:
    """Two-ion exchange operator in the product basis."""
    s = np.zeros((16, 16))
    for a in SINGLE_ION:
        for b in SINGLE_ION:
            s[BASIS.index(b + a), BASIS.index(a + b)] = 1.0
    return s


def matrix_to_json(h: np.ndarray, labels=None) -> dict:
    """Debug export of a Hamiltonian matrix (real/imag parts plus labels)."""
    h = np.asarray(h, dtype=complex)
    if labels is None and h.shape[0] == 16:
        labels = BASIS.labels
    return {
        "labels": list(labels) if labels is not None else None,
        "real": h.real.tolist(),
        "imag": h.imag.tolist(),
    }
