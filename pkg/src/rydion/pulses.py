"""Time-dependent laser Rabi frequency and detuning for the gate protocols.

Protocol A: Omega_L(t) = Omega0 sin^2(pi t / tau), constant detuning delta0.
Protocol B: same envelope, detuning delta0 - Delta0 sin^2(pi t / tau).
Protocol C: pi - 2pi - pi scheme with individually addressed ions, fixed
amplitude Omega0 = 8 sqrt(2) pi / tau and fixed detuning Omega_MW / 2.

Shapes are exact functions of t; no sampling grid lives here. Stored values
are angular frequencies (rad/us); the *_mhz constructors convert once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import mhz_to_rad_per_us, rad_per_us_to_mhz
from .errors import ConfigError

PROTOCOLS = ("A", "B", "C")


@dataclass(frozen=True)
class PulseShape:
    protocol: str
    omega0: float           # peak laser Rabi frequency, rad/us
    delta0: float           # detuning offset, rad/us
    tau: float              # pulse duration, us
    delta_mod: float = 0.0  # detuning modulation depth Delta0 (protocol B), rad/us

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}")
        if self.omega0 < 0 or self.tau <= 0:
            raise ConfigError("require omega0 >= 0 and tau > 0")

    @property
    def per_ion(self) -> bool:
        return self.protocol == "C"

    # -- constructors from user-facing units --------------------------------
    @classmethod
    def protocol_a(cls, omega0_mhz: float, delta0_mhz: float, tau_us: float) -> "PulseShape":
        return cls("A", mhz_to_rad_per_us(omega0_mhz), mhz_to_rad_per_us(delta0_mhz), tau_us)

    @classmethod
    def protocol_b(cls, omega0_mhz: float, delta0_mhz: float, delta_mod_mhz: float,
                   tau_us: float) -> "PulseShape":
        return cls("B", mhz_to_rad_per_us(omega0_mhz), mhz_to_rad_per_us(delta0_mhz),
                   tau_us, mhz_to_rad_per_us(delta_mod_mhz))

    @classmethod
    def protocol_c(cls, tau_us: float, rabi_mw_mhz: float, omega0_mhz=None) -> "PulseShape":
        """pi-2pi-pi scheme; amplitude and detuning are fully determined."""
        if omega0_mhz is not None:
            raise ConfigError("protocol C fixes omega0 = 8 sqrt(2) pi / tau; "
                              "it cannot be set")
        omega0 = 8.0 * math.sqrt(2.0) * math.pi / tau_us
        return cls("C", omega0, mhz_to_rad_per_us(rabi_mw_mhz) / 2.0, tau_us)

    # -- evaluation ----------------------------------------------------------
    def values(self, t, ion: int | None = None):
        """(Omega_L, Delta_L) at time t in rad/us; `ion` in {1, 2} for C."""
        if self.protocol == "A":
            return pulse_a(self, t)
        if self.protocol == "B":
            return pulse_b(self, t)
        if ion not in (1, 2):
            raise ConfigError("protocol C requires ion index 1 or 2")
        return pulse_c(self, t, ion)

    def to_dict(self) -> dict:
        d = {
            "protocol": self.protocol,
            "omega0_mhz": rad_per_us_to_mhz(self.omega0),
            "delta0_mhz": rad_per_us_to_mhz(self.delta0),
            "tau_us": self.tau,
        }
        if self.protocol == "B":
            d["delta_mod_mhz"] = rad_per_us_to_mhz(self.delta_mod)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PulseShape":
        proto = d["protocol"]
        if proto == "A":
            return cls.protocol_a(d["omega0_mhz"], d["delta0_mhz"], d["tau_us"])
        if proto == "B":
            return cls.protocol_b(d["omega0_mhz"], d["delta0_mhz"],
                                  d.get("delta_mod_mhz", 0.0), d["tau_us"])
        return cls.protocol_c(d["tau_us"], 2.0 * d["delta0_mhz"])


def _envelope(t, tau):
    return np.sin(np.pi * np.asarray(t, dtype=float) / tau) ** 2


def pulse_a(shape: PulseShape, t):
    om = shape.omega0 * _envelope(t, shape.tau)
    dl = np.broadcast_to(shape.delta0, np.shape(om)).copy() if np.ndim(om) else shape.delta0
    return om, dl


def pulse_b(shape: PulseShape, t):
    env = _envelope(t, shape.tau)
    return shape.omega0 * env, shape.delta0 - shape.delta_mod * env


def pulse_c(shape: PulseShape, t, ion: int):
    """Windowed pi-2pi-pi drive; ion 1 owns [0, tau/4] and [3 tau/4, tau]."""
    t = np.asarray(t, dtype=float)
    tau = shape.tau
    in_outer = (t <= tau / 4.0) | (t >= 3.0 * tau / 4.0)
    if ion == 1:
        om = np.where(in_outer, shape.omega0 * np.sin(4.0 * np.pi * t / tau) ** 2, 0.0)
    else:
        om = np.where(~in_outer, shape.omega0 * np.cos(2.0 * np.pi * t / tau) ** 2, 0.0)
    dl = np.broadcast_to(shape.delta0, om.shape).copy()
    if om.ndim == 0:
        return float(om), float(dl)
    return om, dl
