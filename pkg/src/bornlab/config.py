"""Experiment configuration: JSON file -> validated dataclass -> lab objects.

Every numeric knob of the dynamics, the measure, and the per-experiment
sweeps lives here.  A seed is mandatory as soon as any randomized input is
in play (random potentials, random trial states, random setups); runs are
then deterministic functions of (config, seed).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import Dynamics
from .lattice import Measure

__all__ = ["ConfigError", "ExperimentConfig", "load_config"]

_POTENTIAL_PRESETS = ("zero", "harmonic", "random")
_ABSORBER_PRESETS = ("none", "uniform", "ramp", "gaussian")
_MEASURE_PRESETS = ("flat", "explicit", "curved")
_FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass
class ExperimentConfig:
    lattice_size: int = 32
    hopping: float = 1.0
    dt: float = 0.1
    boundary: str = "periodic"
    gamma: float = 0.0
    potential: dict = field(default_factory=lambda: {"preset": "zero"})
    absorber: dict = field(default_factory=lambda: {"preset": "none"})
    measure: dict = field(default_factory=lambda: {"preset": "flat"})
    seed: int | None = None
    output_path: str = "results"
    output_format: str = "csv"
    figures: bool = True
    born_sweep: dict = field(default_factory=dict)
    entropy_run: dict = field(default_factory=dict)
    algebra_check: dict = field(default_factory=dict)
    observable_demo: dict = field(default_factory=dict)
    amplitude_eval: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lattice_size < 2:
            raise ConfigError("lattice_size must be at least 2")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.gamma < 0:
            raise ConfigError("gamma must be nonnegative")
        if self.boundary not in ("periodic", "open"):
            raise ConfigError(f"boundary must be 'periodic' or 'open', got {self.boundary!r}")
        if self.output_format not in _FORMATS:
            raise ConfigError(f"output_format must be one of {_FORMATS}")
        for section, presets, key in (
            (self.potential, _POTENTIAL_PRESETS, "potential"),
            (self.absorber, _ABSORBER_PRESETS, "absorber"),
            (self.measure, _MEASURE_PRESETS, "measure"),
        ):
            if not isinstance(section, dict) or section.get("preset") not in presets:
                raise ConfigError(f"{key}.preset must be one of {presets}")
        if self.seed is not None and not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")

    # -- derived lab objects -------------------------------------------------
    def require_seed(self, why: str) -> int:
        if self.seed is None:
            raise ConfigError(f"a seed is required: {why}")
        return int(self.seed)

    def rng(self, why: str) -> np.random.Generator:
        return np.random.default_rng(self.require_seed(why))

    def build_potential(self) -> np.ndarray:
        section, size = self.potential, self.lattice_size
        preset = section["preset"]
        if preset == "zero":
            return np.zeros(size)
        if preset == "harmonic":
            strength = float(section.get("strength", 1.0))
            x = (np.arange(size) - (size - 1) / 2) / (size / 2)
            return strength * x**2
        scale = float(section.get("scale", 1.0))
        rng = self.rng("potential preset 'random' draws site values")
        return rng.uniform(-scale, scale, size)

    def build_absorber(self) -> np.ndarray:
        section, size = self.absorber, self.lattice_size
        preset = section["preset"]
        if preset == "none":
            return np.zeros(size)
        if preset == "uniform":
            return np.ones(size)
        if preset == "ramp":
            return np.linspace(0.0, 1.0, size)
        center = float(section.get("center", size / 4))
        width = float(section.get("width", size / 8))
        x = np.arange(size)
        return np.exp(-((x - center) / width) ** 2)

    def build_measure(self) -> Measure:
        section, size = self.measure, self.lattice_size
        preset = section["preset"]
        if preset == "flat":
            return Measure.flat(size)
        if preset == "explicit":
            weights = section.get("weights")
            if weights is None or len(weights) != size:
                raise ConfigError(f"measure.weights must list {size} positive values")
            return Measure(weights)
        amplitude = float(section.get("amplitude", 0.5))
        if not 0 <= amplitude < 1:
            raise ConfigError("curved measure amplitude must lie in [0, 1)")
        return Measure(1.0 + amplitude * np.sin(2 * np.pi * np.arange(size) / size))

    def build_dynamics(self, gamma: float | None = None) -> Dynamics:
        g = self.gamma if gamma is None else gamma
        return Dynamics(
            size=self.lattice_size,
            hopping=self.hopping,
            potential=tuple(self.build_potential()),
            gamma=g,
            absorber=tuple(self.build_absorber()),
            dt=self.dt,
            boundary=self.boundary,
        )

    def to_dict(self) -> dict:
        return {
            "lattice_size": self.lattice_size,
            "hopping": self.hopping,
            "dt": self.dt,
            "boundary": self.boundary,
            "gamma": self.gamma,
            "potential": self.potential,
            "absorber": self.absorber,
            "measure": self.measure,
            "seed": self.seed,
            "output_path": self.output_path,
            "output_format": self.output_format,
            "figures": self.figures,
            "born_sweep": self.born_sweep,
            "entropy_run": self.entropy_run,
            "algebra_check": self.algebra_check,
            "observable_demo": self.observable_demo,
            "amplitude_eval": self.amplitude_eval,
        }


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Load a JSON config file; ``None`` gives the documented defaults."""
    if path is None:
        return ExperimentConfig()
    raw = Path(path).read_text()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
