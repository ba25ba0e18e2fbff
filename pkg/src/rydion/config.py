"""Run-configuration parsing, validation, and round-trip serialization.

Configs are JSON (nested key-value text); command-line flags override file
values. Unknown keys anywhere are rejected so that typos cannot silently
change a run.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError
from .optimize import REGIMES, DEConfig, Regime


def _check_keys(d: dict, allowed, where: str) -> None:
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


@dataclass
class PhysicalConfig:
    """Explicit gate parameters when not using a named regime."""

    interaction_mhz: float
    rabi_mw_mhz: float
    tau_us: float

    @classmethod
    def from_dict(cls, d: dict) -> "PhysicalConfig":
        _check_keys(d, ("interaction_mhz", "rabi_mw_mhz", "tau_us"), "physical")
        return cls(**d)


@dataclass
class PulseConfig:
    omega0_mhz: float | None = None
    delta0_mhz: float | None = None
    delta_mod_mhz: float = 0.0

    @classmethod
    def from_dict(cls, d: dict) -> "PulseConfig":
        _check_keys(d, ("omega0_mhz", "delta0_mhz", "delta_mod_mhz"), "pulse")
        return cls(**d)

    def as_params(self, protocol: str):
        if protocol == "C":
            return ()
        if self.omega0_mhz is None or self.delta0_mhz is None:
            raise ConfigError("pulse.omega0_mhz and pulse.delta0_mhz are required "
                              "for protocols A and B")
        if protocol == "A":
            return (self.omega0_mhz, self.delta0_mhz)
        return (self.omega0_mhz, self.delta0_mhz, self.delta_mod_mhz)


@dataclass
class OptimizerConfig:
    objective: str = "sqr"
    seeds: tuple[int, ...] = (1, 2, 3)
    population_factor: int = 15
    weight: float = 0.7
    crossover: float = 0.9
    max_generations: int = 300
    tol: float = 1e-8
    warm_start: tuple[float, ...] | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizerConfig":
        _check_keys(d, ("objective", "seeds", "population_factor", "weight",
                        "crossover", "max_generations", "tol", "warm_start"),
                    "optimizer")
        out = cls(**{k: v for k, v in d.items()})
        out.seeds = tuple(out.seeds)
        if out.warm_start is not None:
            out.warm_start = tuple(out.warm_start)
        if out.objective not in ("sqr", "strict"):
            raise ConfigError(f"optimizer.objective must be sqr or strict, "
                              f"got {out.objective!r}")
        return out

    def de_config(self, seed: int) -> DEConfig:
        return DEConfig(population_factor=self.population_factor,
                        weight=self.weight, crossover=self.crossover,
                        max_generations=self.max_generations,
                        tol=self.tol, seed=seed)


@dataclass
class RunConfig:
    """Everything a `simulate`/`optimize`/`sweep-decay` run needs."""

    protocol: str = "B"
    regime: str | None = "conservative"
    physical: PhysicalConfig | None = None
    pulse: PulseConfig = field(default_factory=PulseConfig)
    gamma_r_inv_us: float = 0.0
    integrator_tol: float = 1e-9
    samples: int = 1000
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    tau_grid_us: tuple[float, ...] = ()
    output_prefix: str = "rydion_run"

    _ALLOWED = ("protocol", "regime", "physical", "pulse", "gamma_r_inv_us",
                "integrator_tol", "samples", "optimizer", "tau_grid_us",
                "output_prefix")

    def __post_init__(self):
        if self.protocol not in ("A", "B", "C"):
            raise ConfigError(f"protocol must be A, B or C, got {self.protocol!r}")
        if self.regime is None and self.physical is None:
            raise ConfigError("either a named regime or explicit physical "
                              "parameters are required")
        if self.regime is not None and self.regime not in REGIMES:
            raise ConfigError(f"unknown regime {self.regime!r}; "
                              f"available: {sorted(REGIMES)}")
        if self.gamma_r_inv_us < 0:
            raise ConfigError("gamma_r_inv_us must be >= 0")
        if self.integrator_tol <= 0 or self.samples < 4:
            raise ConfigError("integrator_tol must be > 0 and samples >= 4")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        _check_keys(d, cls._ALLOWED, "run config")
        kwargs = dict(d)
        if "physical" in kwargs and kwargs["physical"] is not None:
            kwargs["physical"] = PhysicalConfig.from_dict(kwargs["physical"])
        if "pulse" in kwargs and kwargs["pulse"] is not None:
            kwargs["pulse"] = PulseConfig.from_dict(kwargs["pulse"])
        if "optimizer" in kwargs and kwargs["optimizer"] is not None:
            kwargs["optimizer"] = OptimizerConfig.from_dict(kwargs["optimizer"])
        if "tau_grid_us" in kwargs:
            kwargs["tau_grid_us"] = tuple(kwargs["tau_grid_us"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["optimizer"]["seeds"] = list(self.optimizer.seeds)
        if self.optimizer.warm_start is not None:
            d["optimizer"]["warm_start"] = list(self.optimizer.warm_start)
        d["tau_grid_us"] = list(self.tau_grid_us)
        return d

    # -- derived objects -----------------------------------------------------
    def resolve_regime(self) -> Regime:
        if self.physical is not None:
            base = REGIMES.get(self.regime or "conservative",
                               REGIMES["conservative"])
            return Regime("custom", self.physical.interaction_mhz,
                          self.physical.rabi_mw_mhz, self.physical.tau_us,
                          base.bounds)
        return REGIMES[self.regime]

    def pulse_params(self):
        return self.pulse.as_params(self.protocol)
