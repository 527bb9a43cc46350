"""Reader and writer for the ``AMZT`` named-tensor container.

Layout (all integers little-endian)::

    b"AMZT"                      magic
    u32 version                  = 1
    u32 entry_count
    entry_count times:
        u16 name_len, name bytes (UTF-8)
        u8  dtype                0 = float32
        u32 ndim
        u64 dims[ndim]
        payload                  4 * prod(dims) bytes, row-major float32
"""

from __future__ import annotations

import os
import struct
from collections.abc import Iterable, Mapping

import numpy as np

MAGIC = b"AMZT"
VERSION = 1
DTYPE_F32 = 0


class TensorFileError(ValueError):
    """Base class for malformed container errors."""


class BadMagicError(TensorFileError):
    pass


class UnsupportedVersionError(TensorFileError):
    pass


class TruncatedPayloadError(TensorFileError):
    pass


class DuplicateNameError(TensorFileError):
    pass


def _items(tensors) -> list[tuple[str, np.ndarray]]:
    pairs = tensors.items() if isinstance(tensors, Mapping) else tensors
    seen = set()
    out = []
    for name, arr in pairs:
        if name in seen:
            raise DuplicateNameError(f"duplicate name: {name!r}")
        seen.add(name)
        out.append((name, np.asarray(arr)))
    return out


def dumps(tensors: Mapping[str, np.ndarray] | Iterable[tuple[str, np.ndarray]]) -> bytes:
    items = _items(tensors)
    parts = [MAGIC, struct.pack("<II", VERSION, len(items))]
    for name, arr in items:
        raw = name.encode("utf-8")
        if len(raw) > 0xFFFF:
            raise TensorFileError(f"name too long: {name[:32]!r}...")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<BI", DTYPE_F32, arr.ndim))
        parts.append(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        parts.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    return b"".join(parts)


class _Cursor:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise TruncatedPayloadError(f"truncated payload: need {n} bytes at offset {self.pos}, file has {len(self.buf)}")
        chunk = self.buf[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def loads(buf: bytes) -> dict[str, np.ndarray]:
    if len(buf) < 4 or buf[:4] != MAGIC:
        raise BadMagicError(f"bad magic: {bytes(buf[:4])!r}")
    cur = _Cursor(buf)
    cur.take(4)
    version, count = cur.unpack("<II")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported version: {version}")
    out: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = cur.unpack("<H")
        name = cur.take(name_len).decode("utf-8")
        dtype, ndim = cur.unpack("<BI")
        if dtype != DTYPE_F32:
            raise TensorFileError(f"unsupported dtype code {dtype} for {name!r}")
        dims = cur.unpack(f"<{ndim}Q")
        size = int(np.prod(dims, dtype=np.uint64)) if ndim else 1
        payload = cur.take(4 * size)
        if name in out:
            raise DuplicateNameError(f"duplicate name: {name!r}")
        out[name] = np.frombuffer(payload, dtype="<f4").astype(np.float32).reshape(dims)
    if cur.pos != len(buf):
        raise TensorFileError(f"trailing data: {len(buf) - cur.pos} bytes after last entry")
    return out


def write_tensor_file(path, tensors) -> None:
    data = dumps(tensors)
    with open(os.fspath(path), "wb") as fh:
        fh.write(data)


def read_tensor_file(path) -> dict[str, np.ndarray]:
    with open(os.fspath(path), "rb") as fh:
        return loads(fh.read())
