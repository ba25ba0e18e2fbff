"""Ion species: nuclear charge, core polarizability, and per-l model-potential
fitting parameters, loaded from the packaged parameter table."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .constants import ATOMIC_MASS_KG
from .errors import ConfigError

_CHANNEL_NAMES = ("s", "p", "d", "f")


@dataclass(frozen=True)
class PotentialChannel:
    """Fitting parameters of one orbital-angular-momentum channel."""

    k1: float   # 1/a0
    k2: float   # 1/a0
    k3: float   # 1/a0
    r_c: float  # a0

    def __post_init__(self):
        if self.k1 <= 0 or self.k3 <= 0 or self.r_c <= 0 or self.k2 < 0:
            raise ValueError(f"non-positive potential parameters: {self}")


@dataclass(frozen=True)
class IonSpecies:
    """A singly charged ion described by the parametric model potential."""

    name: str
    Z: int                      # nuclear charge number
    Zc: int                     # screened core charge number (2 for alkaline earths)
    alpha_d: float              # static core dipole polarizability, a.u.
    mass_kg: float
    channels: dict[int, PotentialChannel] = field(repr=False)

    def __post_init__(self):
        if self.Z < 1 or self.Zc < 1 or self.Zc > self.Z:
            raise ValueError(f"invalid charge numbers Z={self.Z}, Zc={self.Zc}")
        if self.alpha_d < 0 or self.mass_kg <= 0:
            raise ValueError("alpha_d must be >= 0 and mass positive")
        for l in range(4):
            if l not in self.channels:
                raise ValueError(f"channel l={l} missing for {self.name}")

    def channel(self, l: int) -> PotentialChannel:
        """Channel parameters for orbital angular momentum l.

        l >= 4 reuses the f-channel values: the quantum defect is negligible
        there and the table stops at l = 3.
        """
        if l < 0:
            raise ValueError(f"l must be non-negative, got {l}")
        return self.channels[min(l, 3)]


def hydrogenic(Z: int = 1, mass_kg: float = ATOMIC_MASS_KG) -> IonSpecies:
    """Bare-Coulomb test species: Z_n(r) = Z everywhere, no polarization.

    Setting Z = Zc and k2 = 0 removes every screening term, which gives the
    analytic hydrogen-like spectrum used by the regression tests.
    """
    ch = PotentialChannel(k1=1.0, k2=0.0, k3=1.0, r_c=1.0)
    return IonSpecies(name=f"hydrogenic(Z={Z})", Z=Z, Zc=Z, alpha_d=0.0,
                      mass_kg=mass_kg, channels={l: ch for l in range(4)})


@lru_cache(maxsize=None)
def _load_table() -> dict:
    with resources.files("rydion.data").joinpath("species.json").open() as fh:
        return json.load(fh)


_L_OF_NAME = {name: l for l, name in enumerate(_CHANNEL_NAMES)}


@lru_cache(maxsize=None)
def get_species(name: str) -> IonSpecies:
    """Look up a tabulated species, e.g. ``get_species("Sr+")``."""
    table = _load_table()["species"]
    key = name if name in table else name.capitalize()
    if key not in table:
        raise ConfigError(f"unknown species {name!r}; available: {sorted(table)}")
    row = table[key]
    channels = {
        _L_OF_NAME[ch]: PotentialChannel(**params)
        for ch, params in row["channels"].items()
    }
    return IonSpecies(
        name=key,
        Z=row["Z"],
        Zc=row["Zc"],
        alpha_d=row["alpha_d"],
        mass_kg=row["mass_u"] * ATOMIC_MASS_KG,
        channels=channels,
    )


def available_species() -> list[str]:
    return sorted(_load_table()["species"])
