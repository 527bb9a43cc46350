"""JSON pipeline configuration."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace

import jsonschema

from .schedule import DEFAULT_SCALE_RHOS, k_at_epoch, rho_at_epoch

_FRACTION = {"type": "number", "minimum": 0, "maximum": 1}
_SEED = {"type": "integer", "minimum": 0, "maximum": 2**64 - 1}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["method"],
    "properties": {
        "method": {"enum": ["threshold", "rfgam"]},
        "rho": _FRACTION,
        "gamma": _FRACTION,
        "K": {"type": "integer", "minimum": 1},
        "delta": {"type": "number"},
        "k0": {"type": "number", "minimum": 0},
        "E_total": {"type": "integer", "minimum": 1},
        "epoch": {"type": "integer", "minimum": 0},
        "params_seed": _SEED,
        "mask_seed": _SEED,
        "scale_rhos": {"type": "array", "items": _FRACTION, "minItems": 1},
        "scale": {"type": "integer", "minimum": 0},
        "warmup_fraction": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "params_path": {"type": "string"},
    },
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    method: str
    rho: float | None = None
    gamma: float = 0.5
    K: int | None = None
    delta: float = 1.0
    k0: float = 0.5
    E_total: int = 1
    epoch: int = 0
    params_seed: int = 0
    mask_seed: int = 0
    scale_rhos: tuple[float, ...] = field(default=DEFAULT_SCALE_RHOS)
    scale: int = 0
    warmup_fraction: float = 0.5
    params_path: str | None = None

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | None = None) -> "PipelineConfig":
        try:
            jsonschema.validate(data, CONFIG_SCHEMA)
        except jsonschema.ValidationError as err:
            where = ".".join(str(p) for p in err.absolute_path) or "<root>"
            raise ConfigError(f"config: field {where}: {err.message}") from None
        values = dict(data)
        if "scale_rhos" in values:
            values["scale_rhos"] = tuple(values["scale_rhos"])
        if values.get("params_path") and base_dir is not None:
            values["params_path"] = os.path.join(base_dir, values["params_path"])
        cfg = cls(**values)
        if cfg.scale >= len(cfg.scale_rhos):
            raise ConfigError(f"config: field scale: {cfg.scale} is out of range for {len(cfg.scale_rhos)} scale_rhos")
        return cfg

    def with_seed(self, seed: int) -> "PipelineConfig":
        return replace(self, params_seed=seed, mask_seed=seed)

    def with_epoch(self, epoch: int) -> "PipelineConfig":
        if epoch < 0:
            raise ConfigError(f"config: field epoch: must be >= 0, got {epoch}")
        return replace(self, epoch=epoch)

    def with_method(self, method: str) -> "PipelineConfig":
        if method not in ("threshold", "rfgam"):
            raise ConfigError(f"config: field method: {method!r} is not one of ['threshold', 'rfgam']")
        return replace(self, method=method)

    def effective_rho(self) -> float:
        """Explicit ``rho`` if given, else the scheduled ratio of ``scale`` at ``epoch``."""
        if self.rho is not None:
            return self.rho
        return rho_at_epoch(self.scale_rhos[self.scale], self.epoch, self.E_total, self.warmup_fraction)

    def effective_k(self) -> float:
        return k_at_epoch(self.k0, self.epoch, self.E_total)


def load_config(path) -> PipelineConfig:
    path = os.fspath(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config: {path} is not valid JSON ({err.msg} at line {err.lineno})") from None
    return PipelineConfig.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))
