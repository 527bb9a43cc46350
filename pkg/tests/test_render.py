import numpy as np
import pytest

from amaze.mask import MaskMatrix
from amaze.render import pgm_bytes, render_pgm, to_pixels
from amaze.rfgam import IntensityField
from amaze.tensor import ShapeError


def _split(data):
    header, rest = data.split(b"\n255\n", 1)
    return header + b"\n255\n", rest


def test_constant_field():
    assert to_pixels(np.full((3, 4), 2.5)).tolist() == [[128] * 4] * 3


def test_linear_map():
    assert to_pixels(np.array([[0.0, 1.0], [0.5, 1.0]])).ravel().tolist() == [0, 255, 128, 255]


def test_header_and_size(tmp_path):
    grid = np.random.default_rng(0).uniform(size=(3, 5))
    render_pgm(grid, tmp_path / "g.pgm")
    data = (tmp_path / "g.pgm").read_bytes()
    header, pixels = _split(data)
    assert header == b"P5\n5 3\n255\n"
    assert len(pixels) == 15
    assert data == pgm_bytes(grid)


def test_field_and_mask_sources(tmp_path):
    field = IntensityField.from_grid(np.arange(12, dtype=float).reshape(2, 2, 3))
    render_pgm(field, tmp_path / "f.pgm", batch=1)
    assert _split((tmp_path / "f.pgm").read_bytes())[1] == bytes([0, 51, 102, 153, 204, 255])
    mask = MaskMatrix(np.array([[0.0, 1.0, 1.0, 0.0]]), binary=True)
    render_pgm(mask, tmp_path / "m.pgm", shape=(2, 2))
    assert (tmp_path / "m.pgm").read_bytes() == b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0])


def test_mask_needs_shape(tmp_path):
    with pytest.raises(ShapeError):
        render_pgm(MaskMatrix(np.ones((1, 4)), binary=True), tmp_path / "m.pgm")


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        to_pixels(np.array([[np.nan, 1.0]]))
