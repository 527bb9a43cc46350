import struct

import numpy as np
import pytest

from amaze.tensorfile import (
    BadMagicError,
    DuplicateNameError,
    TensorFileError,
    TruncatedPayloadError,
    UnsupportedVersionError,
    dumps,
    loads,
    read_tensor_file,
    write_tensor_file,
)


def test_layout_by_hand():
    data = dumps({"ab": np.array([[1.0, 2.0]], np.float32)})
    expected = (
        b"AMZT"
        + struct.pack("<II", 1, 1)
        + struct.pack("<H", 2)
        + b"ab"
        + struct.pack("<BI", 0, 2)
        + struct.pack("<QQ", 1, 2)
        + struct.pack("<ff", 1.0, 2.0)
    )
    assert data == expected


def test_round_trip_rewrite(tmp_path):
    f = np.random.default_rng(0).normal(size=(2, 3, 4, 5)).astype(np.float32)
    write_tensor_file(tmp_path / "a.amzt", {"features": f})
    back = read_tensor_file(tmp_path / "a.amzt")
    assert back["features"].tobytes() == f.tobytes()
    write_tensor_file(tmp_path / "b.amzt", back)
    assert (tmp_path / "a.amzt").read_bytes() == (tmp_path / "b.amzt").read_bytes()


def test_order_and_scalars_preserved():
    tensors = {"z": np.float32(3.5), "a": np.zeros((0, 2), np.float32), "m": np.arange(6, dtype=np.float32).reshape(2, 3)}
    back = loads(dumps(tensors))
    assert list(back) == ["z", "a", "m"]
    assert back["z"].shape == () and back["z"] == 3.5
    assert back["a"].shape == (0, 2)


def test_non_finite_bits_preserved():
    x = np.array([np.nan, np.inf, -0.0], np.float32)
    assert loads(dumps({"x": x}))["x"].tobytes() == x.tobytes()


def test_unicode_name():
    assert list(loads(dumps({"größe": np.ones(1, np.float32)}))) == ["größe"]


def test_bad_magic():
    data = b"XXXX" + dumps({"a": np.ones(2, np.float32)})[4:]
    with pytest.raises(BadMagicError, match="bad magic"):
        loads(data)


def test_unsupported_version():
    data = bytearray(dumps({"a": np.ones(2, np.float32)}))
    data[4:8] = struct.pack("<I", 2)
    with pytest.raises(UnsupportedVersionError, match="unsupported version"):
        loads(bytes(data))


def test_truncated_payload():
    data = dumps({"a": np.ones((3, 3), np.float32)})
    with pytest.raises(TruncatedPayloadError, match="truncated payload"):
        loads(data[:-4])


def test_truncated_header():
    with pytest.raises(TruncatedPayloadError):
        loads(b"AMZT\x01\x00")


def test_duplicate_name_on_read():
    one = dumps({"a": np.ones(1, np.float32)})
    entry = one[12:]
    data = b"AMZT" + struct.pack("<II", 1, 2) + entry + entry
    with pytest.raises(DuplicateNameError, match="duplicate name"):
        loads(data)


def test_duplicate_name_on_write():
    with pytest.raises(DuplicateNameError):
        dumps([("a", np.ones(1)), ("a", np.zeros(1))])


def test_errors_are_distinct():
    kinds = {BadMagicError, UnsupportedVersionError, TruncatedPayloadError, DuplicateNameError}
    assert len(kinds) == 4
    assert all(issubclass(k, TensorFileError) for k in kinds)


def test_unknown_dtype():
    data = bytearray(dumps({"a": np.ones(1, np.float32)}))
    data[15] = 7
    with pytest.raises(TensorFileError, match="dtype"):
        loads(bytes(data))


def test_trailing_bytes():
    with pytest.raises(TensorFileError, match="trailing"):
        loads(dumps({"a": np.ones(1, np.float32)}) + b"\x00")


def test_random_round_trips():
    rng = np.random.default_rng(1)
    for i in range(20):
        shape = tuple(rng.integers(1, 5, size=rng.integers(1, 5)))
        t = rng.normal(size=shape).astype(np.float32)
        assert loads(dumps({f"t{i}": t}))[f"t{i}"].tobytes() == t.tobytes()
