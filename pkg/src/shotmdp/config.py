"""Run configuration: flat key-value files plus CLI overrides.

Config files are plain text, one ``key = value`` per line, ``#`` for
comments. Documented keys:

    grid.columns, grid.rows
    mask.long_distance.max_distance_m, mask.flank.band_width_m
    intent.mode (observed_end | destination_prior | blended), intent.lambda
    model.alpha
    ingest.exclude_penalties (true | false)
    chain.value_iteration_epsilon, chain.value_iteration_max_iters
    chain.min_support, chain.empirical_per_possession
    whatif.quality_adjust, whatif.sweep (comma-separated), whatif.targeted_k
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .chain import DEFAULT_MIN_SUPPORT, DEFAULT_VALUE_EPSILON, DEFAULT_VALUE_MAX_ITERATIONS
from .grid import DEFAULT_FLANK_BAND_M, DEFAULT_LONG_DISTANCE_MAX_M, GridSpec, default_masks
from .intent import BLENDED, MODES

DEFAULT_SWEEP = (-0.20, -0.10, -0.05, 0.05, 0.10, 0.20)


class ConfigError(ValueError):
    pass


def parse_key_values(text: str) -> dict[str, str]:
    """Parse the flat key-value format; later keys win."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _parse_bool(value: str, key: str) -> bool:
    v = value.lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


@dataclass(frozen=True)
class RunConfig:
    """Everything a pipeline command needs beyond its input/output paths."""

    grid_columns: int = 22
    grid_rows: int = 17
    long_distance_max_m: float = DEFAULT_LONG_DISTANCE_MAX_M
    flank_band_m: float = DEFAULT_FLANK_BAND_M
    intent_mode: str = BLENDED
    intent_lambda: float = 0.5
    alpha: float = 0.5
    exclude_penalties: bool = True
    value_iteration_epsilon: float = DEFAULT_VALUE_EPSILON
    value_iteration_max_iters: int = DEFAULT_VALUE_MAX_ITERATIONS
    min_support: int = DEFAULT_MIN_SUPPORT
    empirical_per_possession: bool = False
    quality_adjust: bool = True
    sweep: tuple[float, ...] = DEFAULT_SWEEP
    targeted_k: int = 1

    def __post_init__(self) -> None:
        if self.intent_mode not in MODES:
            raise ConfigError(f"intent.mode must be one of {MODES}")
        if not 0.0 <= self.intent_lambda <= 1.0:
            raise ConfigError("intent.lambda must be in [0, 1]")
        if self.alpha < 0:
            raise ConfigError("model.alpha must be non-negative")
        if any(x <= -1.0 for x in self.sweep):
            raise ConfigError("whatif.sweep values must exceed -1")

    @property
    def grid(self) -> GridSpec:
        return GridSpec(columns=self.grid_columns, rows=self.grid_rows)

    def masks(self):
        return default_masks(
            self.grid,
            long_distance_max_m=self.long_distance_max_m,
            flank_band_m=self.flank_band_m,
        )


_KEY_PARSERS = {
    "grid.columns": ("grid_columns", int),
    "grid.rows": ("grid_rows", int),
    "mask.long_distance.max_distance_m": ("long_distance_max_m", float),
    "mask.flank.band_width_m": ("flank_band_m", float),
    "intent.mode": ("intent_mode", str),
    "intent.lambda": ("intent_lambda", float),
    "model.alpha": ("alpha", float),
    "ingest.exclude_penalties": ("exclude_penalties", None),
    "chain.value_iteration_epsilon": ("value_iteration_epsilon", float),
    "chain.value_iteration_max_iters": ("value_iteration_max_iters", int),
    "chain.min_support": ("min_support", int),
    "chain.empirical_per_possession": ("empirical_per_possession", None),
    "whatif.quality_adjust": ("quality_adjust", None),
    "whatif.sweep": ("sweep", None),
    "whatif.targeted_k": ("targeted_k", int),
}


def config_from_mapping(mapping: dict[str, str]) -> RunConfig:
    kwargs = {}
    for key, value in mapping.items():
        if key not in _KEY_PARSERS:
            raise ConfigError(f"unknown config key {key!r}")
        name, parser = _KEY_PARSERS[key]
        if key == "whatif.sweep":
            kwargs[name] = tuple(float(v) for v in value.split(",") if v.strip())
        elif parser is None:
            kwargs[name] = _parse_bool(value, key)
        else:
            try:
                kwargs[name] = parser(value)
            except ValueError:
                raise ConfigError(f"{key}: cannot parse {value!r}") from None
    return RunConfig(**kwargs)


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    return config_from_mapping(parse_key_values(Path(path).read_text(encoding="utf-8")))
