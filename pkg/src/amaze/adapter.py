"""Residual attention adapter and the variance head used by RF-GAM.

Forward-only.  Weights come from a seeded Xavier-uniform initialisation or
from a tensor file; there is no training code here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import SeededRng
from .tensor import ShapeError, as_tensor, softmax_rows

VARIANCE_EPS = 1e-6

# Draw order for initialisation and entry order in parameter files.
PARAM_ORDER = (
    "w_q",
    "w_k",
    "w_v",
    "w_o",
    "ffn1_w",
    "ffn1_b",
    "ffn2_w",
    "ffn2_b",
    "sigma1_w",
    "sigma1_b",
    "sigma2_w",
    "sigma2_b",
)


def param_shapes(dim: int) -> dict[str, tuple[int, ...]]:
    c = dim
    return {
        "w_q": (c, c),
        "w_k": (c, c),
        "w_v": (c, c),
        "w_o": (c, c),
        "ffn1_w": (c, 4 * c),
        "ffn1_b": (4 * c,),
        "ffn2_w": (4 * c, c),
        "ffn2_b": (c,),
        "sigma1_w": (2 * c, c),
        "sigma1_b": (c,),
        "sigma2_w": (c, 1),
        "sigma2_b": (1,),
    }


@dataclass(frozen=True, eq=False)
class AdapterParams:
    dim: int
    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray
    w_o: np.ndarray
    ffn1_w: np.ndarray
    ffn1_b: np.ndarray
    ffn2_w: np.ndarray
    ffn2_b: np.ndarray
    sigma1_w: np.ndarray
    sigma1_b: np.ndarray
    sigma2_w: np.ndarray
    sigma2_b: np.ndarray
    init_seed: int | None = None

    def __post_init__(self):
        for name, shape in param_shapes(self.dim).items():
            arr = as_tensor(getattr(self, name), name=name)
            if arr.shape != shape:
                raise ShapeError(f"adapter: {name} has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_ORDER}

    @classmethod
    def from_tensors(cls, tensors: dict[str, np.ndarray]) -> "AdapterParams":
        missing = [n for n in PARAM_ORDER if n not in tensors]
        if missing:
            raise ValueError(f"adapter: parameter set lacks {', '.join(missing)}")
        dim = int(np.shape(tensors["w_q"])[0])
        return cls(dim=dim, **{n: tensors[n] for n in PARAM_ORDER})


def init_params(dim: int, seed: int = 0) -> AdapterParams:
    """Xavier-uniform weights drawn in ``PARAM_ORDER`` from ``SeededRng(seed)``; zero biases."""
    if dim < 1:
        raise ValueError(f"adapter: channel count must be >= 1, got {dim}")
    rng = SeededRng(seed)
    values = {}
    for name, shape in param_shapes(dim).items():
        if name.endswith("_b"):
            values[name] = np.zeros(shape, dtype=np.float32)
            continue
        fan_in, fan_out = shape
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        u = rng.uniform(fan_in * fan_out).reshape(shape)
        w = (bound * (2.0 * u - 1.0)).astype(np.float32)
        # float32 rounding may step just past the float64 bound
        limit = np.float32(bound)
        if float(limit) > bound:
            limit = np.nextafter(limit, np.float32(0))
        values[name] = np.clip(w, -limit, limit)
    return AdapterParams(dim=dim, init_seed=seed, **values)


def _check_channels(x: np.ndarray, p: AdapterParams, what: str):
    if x.shape[-1] != p.dim:
        raise ShapeError(f"adapter: {what} has {x.shape[-1]} channels, parameters expect {p.dim}")


def _w(p: AdapterParams, name: str) -> np.ndarray:
    return getattr(p, name).astype(np.float64)


def encode_tokens(x, p: AdapterParams) -> np.ndarray:
    """Residual single-head self-attention followed by a residual ReLU MLP.

    ``x`` is ``(B, N, C)`` (a single ``(N, C)`` matrix is also accepted).
    There is no positional encoding, so the map is permutation-equivariant
    over tokens.  Returns float32 tokens of the same shape.
    """
    x = np.asarray(x)
    if x.ndim not in (2, 3):
        raise ShapeError(f"adapter: tokens must be (B, N, C) or (N, C), got shape {x.shape}")
    _check_channels(x, p, "input")
    x64 = x.astype(np.float64)
    q = x64 @ _w(p, "w_q")
    k = x64 @ _w(p, "w_k")
    v = x64 @ _w(p, "w_v")
    attn = softmax_rows(q @ np.swapaxes(k, -1, -2) / math.sqrt(p.dim))
    z = x64 + (attn @ v) @ _w(p, "w_o")
    hidden = np.maximum(z @ _w(p, "ffn1_w") + _w(p, "ffn1_b"), 0.0)
    t = z + hidden @ _w(p, "ffn2_w") + _w(p, "ffn2_b")
    return t.astype(np.float32)


def cross_attend(query, tokens, p: AdapterParams) -> np.ndarray:
    """Attend from one token (``query``, length C) to all ``tokens`` (N x C).

    Shares the self-attention projections.  Returns a float64 vector of length C.
    """
    f = np.asarray(query, dtype=np.float64)
    t = np.asarray(tokens, dtype=np.float64)
    if f.ndim != 1 or t.ndim != 2:
        raise ShapeError(f"adapter: cross_attend needs a vector and a matrix, got {f.shape} and {t.shape}")
    _check_channels(f, p, "query")
    _check_channels(t, p, "keys")
    scores = (f @ _w(p, "w_q")) @ (t @ _w(p, "w_k")).T / math.sqrt(p.dim)
    weights = softmax_rows(scores)
    return (weights @ (t @ _w(p, "w_v"))) @ _w(p, "w_o")


def estimate_variance(query, context, p: AdapterParams) -> float:
    """Gaussian variance for a radiation point: ``ReLU(FFN([query, context])) + 1e-6``."""
    f = np.asarray(query, dtype=np.float64)
    c = np.asarray(context, dtype=np.float64)
    if f.shape != (p.dim,) or c.shape != (p.dim,):
        raise ShapeError(f"adapter: variance head expects two length-{p.dim} vectors, got {f.shape} and {c.shape}")
    h = np.concatenate([f, c])
    hidden = np.maximum(h @ _w(p, "sigma1_w") + _w(p, "sigma1_b"), 0.0)
    out = hidden @ _w(p, "sigma2_w") + _w(p, "sigma2_b")
    return max(float(out[0]), 0.0) + VARIANCE_EPS


def save_params(path, p: AdapterParams) -> None:
    from .tensorfile import write_tensor_file

    write_tensor_file(path, p.tensors())


def load_params(path) -> AdapterParams:
    from .tensorfile import read_tensor_file

    return AdapterParams.from_tensors(read_tensor_file(path))
