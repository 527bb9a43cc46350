"""Feature map -> tokens -> importance prior -> mask -> masked features."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .adapter import AdapterParams, encode_tokens, init_params, load_params
from .config import PipelineConfig
from .importance import importance_prior
from .mask import MaskMatrix, apply_mask
from .rfgam import RfGamConfig, RfGamResult, rfgam
from .tensor import ShapeError, as_tensor, feature_to_tokens
from .tensorfile import read_tensor_file, write_tensor_file
from .threshold import ThresholdMaskConfig, threshold_mask

OUTPUT_NAME = "pipeline.amzt"


@dataclass(frozen=True, eq=False)
class PipelineResult:
    tokens: np.ndarray
    prior: np.ndarray
    mask: MaskMatrix
    masked_features: np.ndarray
    rfgam: RfGamResult | None = None

    def tensors(self) -> dict[str, np.ndarray]:
        out = {
            "prior": self.prior.astype(np.float32),
            "mask": self.mask.values.astype(np.float32),
            "masked_features": self.masked_features,
        }
        if self.rfgam is not None:
            out["intensity"] = self.rfgam.field.grid.astype(np.float32)
        return out

    def log_records(self, method: str) -> list[dict]:
        records = []
        for b, row in enumerate(self.mask.values):
            rec = {"batch": b, "method": method, "tokens": int(row.size), "masked": int(np.count_nonzero(row == 0.0))}
            if self.rfgam is not None:
                rec["soft"] = int(np.count_nonzero((row > 0.0) & (row < 1.0)))
                rec["kept"] = int(np.count_nonzero(row == 1.0))
                rec["t_hard"] = float(self.rfgam.t_hard[b])
                rec["t_no_mask"] = float(self.rfgam.t_no_mask[b])
            records.append(rec)
        return records


def select_features(tensors: dict[str, np.ndarray]) -> np.ndarray:
    """The ``features`` entry, or the only entry of a one-tensor file."""
    if "features" in tensors:
        arr = tensors["features"]
    elif len(tensors) == 1:
        arr = next(iter(tensors.values()))
    else:
        raise ValueError(f"pipeline: input has no 'features' entry (found {sorted(tensors)})")
    if arr.ndim != 4:
        raise ShapeError(f"pipeline: features must be B x C x H x W, got shape {arr.shape}")
    return as_tensor(arr, name="features")


def resolve_params(cfg: PipelineConfig, channels: int) -> AdapterParams:
    params = load_params(cfg.params_path) if cfg.params_path else init_params(channels, cfg.params_seed)
    if params.dim != channels:
        raise ShapeError(f"pipeline: parameters are for {params.dim} channels, features have {channels}")
    return params


def compute_mask(features, cfg: PipelineConfig, params: AdapterParams | None = None):
    """Tokens, prior, mask and (for RF-GAM) the field result for one feature map."""
    f = as_tensor(features, name="features")
    _, c, h, w = f.shape
    params = params or resolve_params(cfg, c)
    tokens = encode_tokens(feature_to_tokens(f), params)
    prior = importance_prior(tokens)
    if cfg.method == "threshold":
        mask = threshold_mask(prior, ThresholdMaskConfig(cfg.effective_rho(), cfg.gamma, cfg.mask_seed))
        return tokens, prior, mask, None
    result = rfgam(prior, tokens, params, h, w, RfGamConfig(cfg.K, cfg.delta, cfg.effective_k(), cfg.mask_seed))
    return tokens, prior, result.mask, result


def run(features, cfg: PipelineConfig, params: AdapterParams | None = None) -> PipelineResult:
    tokens, prior, mask, rf = compute_mask(features, cfg, params)
    masked = apply_mask(np.asarray(features, dtype=np.float32), mask)
    return PipelineResult(tokens, prior, mask, masked, rf)


def run_pipeline(config: PipelineConfig, input_path, output_dir, log=print) -> PipelineResult:
    """File-level driver: reads features, writes ``pipeline.amzt``, logs one JSON line per batch row."""
    features = select_features(read_tensor_file(input_path))
    result = run(features, config)
    os.makedirs(output_dir, exist_ok=True)
    write_tensor_file(os.path.join(output_dir, OUTPUT_NAME), result.tensors())
    for rec in result.log_records(config.method):
        log(json.dumps(rec, sort_keys=True))
    return result
