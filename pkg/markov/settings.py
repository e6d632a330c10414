"""
Tolerances and tuning knobs, one frozen dataclass per area.

Defaults live on the dataclasses; ``configs/<area>/<name>.yaml`` may override any
subset of the fields.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar

from markov.errors import ConfigError
from utils.yaml_loader import load_yaml

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _from_mapping(cls: Type[T], mapping: Optional[Dict[str, Any]]) -> T:
	mapping = mapping or {}
	known = {f.name: f for f in dataclasses.fields(cls)}
	unknown = sorted(set(mapping) - set(known))
	if unknown:
		raise ConfigError(f"Unknown {cls.__name__} keys: {', '.join(unknown)}")
	values = {}
	for name, value in mapping.items():
		default = getattr(cls, name, None)
		# YAML reads "1e-12" as a string
		if isinstance(default, float) and isinstance(value, (int, str)):
			try:
				value = float(value)
			except ValueError as e:
				raise ConfigError(f"{cls.__name__}.{name} must be a number, got {value!r}") from e
		values[name] = value
	return cls(**values)


class _YamlSettings:
	@classmethod
	def from_yaml(cls, config_path: str):
		return _from_mapping(cls, load_yaml(config_path))

	@classmethod
	def from_mapping(cls, mapping: Optional[Dict[str, Any]]):
		return _from_mapping(cls, mapping)

	def replace(self, **changes):
		return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ChainSettings(_YamlSettings):
	row_tol: float = 1e-12
	stat_tol: float = 1e-10
	rev_tol: float = 1e-10
	sum_tol: float = 1e-12

	def __post_init__(self):
		for name in ("row_tol", "stat_tol", "rev_tol", "sum_tol"):
			if getattr(self, name) < 0:
				raise ConfigError(f"ChainSettings.{name} must be nonnegative")


@dataclass(frozen=True)
class EnumerationSettings(_YamlSettings):
	exact_max_states: int = 22
	# states tabulated as a vector block; the rest are walked in Gray-code order
	block_bits: int = 12
	# leading walked states fixed per task, giving 2**split_bits independent tasks
	split_bits: int = 2
	max_workers: int = 1
	half_tol: float = 1e-12
	seed: int = 0
	restarts: int = 8

	def __post_init__(self):
		if self.exact_max_states < 2:
			raise ConfigError("EnumerationSettings.exact_max_states must be at least 2")
		if self.block_bits < 1:
			raise ConfigError("EnumerationSettings.block_bits must be positive")
		if self.split_bits < 0:
			raise ConfigError("EnumerationSettings.split_bits must be nonnegative")
		if self.max_workers < 1:
			raise ConfigError("EnumerationSettings.max_workers must be positive")
		if self.restarts < 1:
			raise ConfigError("EnumerationSettings.restarts must be positive")


@dataclass(frozen=True)
class EigenSettings(_YamlSettings):
	max_sweeps: int = 100
	off_tol: float = 1e-13
	gap_tol: float = 1e-9

	def __post_init__(self):
		if self.max_sweeps < 1:
			raise ConfigError("EigenSettings.max_sweeps must be positive")


@dataclass(frozen=True)
class BoundParams(_YamlSettings):
	"""Lawler-Sokal constant and the k2 lower-bound optimizer knobs."""

	kappa: float = 1.0
	grid_points: int = 32
	# smallest grid value on every axis; axes are log-spaced from here
	grid_floor: float = 1e-6
	refine_iterations: int = 200
	shrink: float = 0.5
	gap_tol: float = 1e-9
	lemma_max_states: int = 12

	def __post_init__(self):
		if self.kappa < 1:
			raise ConfigError("BoundParams.kappa must be at least 1")
		if self.grid_points < 2:
			raise ConfigError("BoundParams.grid_points must be at least 2")
		if not 0 < self.grid_floor < 0.5:
			raise ConfigError("BoundParams.grid_floor must lie in (0, 1/2)")
		if not 0 < self.shrink < 1:
			raise ConfigError("BoundParams.shrink must lie in (0, 1)")
		if self.refine_iterations < 0:
			raise ConfigError("BoundParams.refine_iterations must be nonnegative")


@dataclass(frozen=True)
class Settings:
	chain: ChainSettings = field(default_factory=ChainSettings)
	enumeration: EnumerationSettings = field(default_factory=EnumerationSettings)
	eigen: EigenSettings = field(default_factory=EigenSettings)
	bounds: BoundParams = field(default_factory=BoundParams)


CONFIG_FILES = {
	"chain": ("chain/tolerances.yaml", ChainSettings),
	"enumeration": ("isoperimetry/enumeration.yaml", EnumerationSettings),
	"eigen": ("spectral/eigensolver.yaml", EigenSettings),
	"bounds": ("bounds/optimizer.yaml", BoundParams),
}


def load_settings(config_dir: Optional[str] = None) -> Settings:
	"""Read every area's YAML under ``config_dir``; absent files keep defaults."""
	if config_dir is None:
		return Settings()

	base = Path(config_dir)
	loaded: Dict[str, Any] = {}
	for area, (relative_path, settings_cls) in CONFIG_FILES.items():
		path = base / relative_path
		if not path.exists():
			logger.info("No %s config at %s, using defaults", area, path)
			loaded[area] = settings_cls()
			continue
		loaded[area] = settings_cls.from_yaml(str(path))
	return Settings(**loaded)
