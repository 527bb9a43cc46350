"""Dense tensor primitives shared by every other module.

Tensors are plain ``numpy.ndarray`` objects in row-major order.  Feature
maps, tokens and weights are stored as float32; reductions accumulate in
float64 and cast back to the input's float type.
"""

from __future__ import annotations

import numpy as np

STORAGE_DTYPE = np.float32
DEGENERATE_RANGE = 1e-12


class ShapeError(ValueError):
    """Raised when tensor extents are inconsistent."""


def as_tensor(x, dtype=STORAGE_DTYPE, name: str = "tensor") -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=dtype)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _float_type(*arrays) -> np.dtype:
    dt = np.result_type(*arrays)
    return dt if np.issubdtype(dt, np.floating) else np.dtype(np.float64)


def _dims(a: np.ndarray) -> str:
    return "x".join(str(d) for d in a.shape)


def matmul(a, b) -> np.ndarray:
    """Matrix product with float64 accumulation.

    Leading batch dimensions broadcast as in ``numpy.matmul``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim < 2 or b.ndim < 2:
        raise ShapeError(f"matmul needs matrices, got {_dims(a)} and {_dims(b)}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(
            f"matmul inner dimensions differ: A is {_dims(a)}, B is {_dims(b)} "
            f"({a.shape[-1]} != {b.shape[-2]})"
        )
    out = np.matmul(a.astype(np.float64), b.astype(np.float64))
    return out.astype(_float_type(a, b))


def softmax_rows(m) -> np.ndarray:
    """Softmax along the last axis, computed with max-subtraction."""
    m = np.asarray(m)
    x = m.astype(np.float64)
    x = x - x.max(axis=-1, keepdims=True)
    e = np.exp(x)
    out = e / e.sum(axis=-1, keepdims=True)
    return out.astype(_float_type(m))


def minmax_normalize(v) -> np.ndarray:
    """Rescale ``v`` affinely onto ``[0, 1]``.

    When ``max - min`` is below ``1e-12`` every entry becomes 0.5, so a
    constant input yields a neutral score rather than a division by ~0.
    Always returns float64.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("minmax_normalize needs at least one value")
    lo = v.min()
    span = v.max() - lo
    if span < DEGENERATE_RANGE:
        return np.full(v.shape, 0.5)
    return np.clip((v - lo) / span, 0.0, 1.0)


def feature_to_tokens(f) -> np.ndarray:
    """(B, C, H, W) -> (B, H*W, C); token ``j`` is cell ``(j // W, j % W)``."""
    f = np.asarray(f)
    if f.ndim != 4:
        raise ShapeError(f"feature map must be B x C x H x W, got {_dims(f)}")
    b, c, h, w = f.shape
    return np.ascontiguousarray(f.reshape(b, c, h * w).transpose(0, 2, 1))


def tokens_to_feature(x, height: int, width: int) -> np.ndarray:
    """Inverse of :func:`feature_to_tokens`."""
    x = np.asarray(x)
    if x.ndim != 3:
        raise ShapeError(f"tokens must be B x N x C, got {_dims(x)}")
    b, n, c = x.shape
    if n != height * width:
        raise ShapeError(f"token count {n} does not match grid {height}x{width}")
    return np.ascontiguousarray(x.transpose(0, 2, 1).reshape(b, c, height, width))


def token_cell(j: int, width: int) -> tuple[int, int]:
    """Row and column of token ``j`` on a grid ``width`` cells wide."""
    return j // width, j % width
