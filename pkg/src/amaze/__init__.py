"""Adaptive feature masking driven by an attention importance prior.

Two mask generators share one importance prior:

* :func:`threshold_mask` hits an exact masking ratio, spending part of the
  budget inside the highest-importance region;
* :func:`rfgam` turns the top tokens into Gaussian emitters and masks cells
  by how far their summed intensity sits above the field's mean.

Supporting pieces cover the progressive schedule, a forward-only attention
adapter, a Hoeffding-bound checker and the ``AMZT`` tensor container.
"""

from .adapter import AdapterParams, cross_attend, encode_tokens, estimate_variance, init_params, load_params, save_params
from .config import ConfigError, PipelineConfig, load_config
from .importance import importance_prior, patch_importance, raw_importance
from .mask import MaskMatrix, apply_mask, round_half_up
from .pipeline import PipelineResult, run, run_pipeline
from .render import render_pgm
from .rfgam import (
    IntensityField,
    RadiationPointSet,
    RfGamConfig,
    intensity_field,
    rfgam,
    rfgam_mask,
    select_radiation_points,
    thresholds,
)
from .rng import SeededRng, sample_without_replacement
from .schedule import ScheduleConfig, k_at_epoch, rho_at_epoch, scale_plan
from .tensor import ShapeError, feature_to_tokens, matmul, minmax_normalize, softmax_rows, tokens_to_feature
from .tensorfile import read_tensor_file, write_tensor_file
from .theory import BoundParams, hoeffding_bound, lemma1_deviation, monte_carlo_violation
from .threshold import ThresholdMaskConfig, threshold_mask

__version__ = "0.1.0"
