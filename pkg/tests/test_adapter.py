import math

import numpy as np
import pytest

from amaze.adapter import (
    PARAM_ORDER,
    VARIANCE_EPS,
    AdapterParams,
    cross_attend,
    encode_tokens,
    estimate_variance,
    init_params,
    load_params,
    param_shapes,
    save_params,
)
from amaze.tensor import ShapeError


def _hand_params():
    # 2 channels; only the variance head matters for the hand-worked case
    t = {name: np.zeros(shape, np.float32) for name, shape in param_shapes(2).items()}
    t["sigma1_w"] = np.array([[0.1, 0.2], [0.3, -0.4], [0.5, 0.6], [-0.7, 0.8]], np.float32)
    t["sigma1_b"] = np.array([0.05, -0.1], np.float32)
    t["sigma2_w"] = np.array([[0.9], [0.25]], np.float32)
    t["sigma2_b"] = np.array([0.1], np.float32)
    return AdapterParams.from_tensors(t)


class TestInit:
    def test_deterministic(self):
        a, b = init_params(8, 42), init_params(8, 42)
        for name in PARAM_ORDER:
            assert getattr(a, name).tobytes() == getattr(b, name).tobytes()

    def test_seed_changes_weights(self):
        assert not np.array_equal(init_params(4, 1).w_q, init_params(4, 2).w_q)

    def test_biases_zero(self):
        p = init_params(6, 3)
        for name in PARAM_ORDER:
            if name.endswith("_b"):
                assert np.all(getattr(p, name) == 0.0)

    @pytest.mark.parametrize("dim", [1, 2, 5, 16])
    def test_xavier_bounds(self, dim):
        p = init_params(dim, 7)
        for name, shape in param_shapes(dim).items():
            if name.endswith("_b"):
                continue
            bound = math.sqrt(6.0 / sum(shape))
            assert np.abs(getattr(p, name)).max() <= bound
        assert np.abs(p.w_q).max() <= math.sqrt(6.0 / (2 * dim))

    def test_shapes(self):
        p = init_params(3, 0)
        assert p.ffn1_w.shape == (3, 12)
        assert p.sigma1_w.shape == (6, 3)
        assert p.sigma2_w.shape == (3, 1)

    def test_zero_channels(self):
        with pytest.raises(ValueError):
            init_params(0, 0)

    def test_params_immutable(self):
        with pytest.raises(ValueError):
            init_params(2, 0).w_q[0, 0] = 1.0

    def test_file_round_trip(self, tmp_path):
        p = init_params(4, 9)
        save_params(tmp_path / "p.amzt", p)
        q = load_params(tmp_path / "p.amzt")
        for name in PARAM_ORDER:
            assert getattr(p, name).tobytes() == getattr(q, name).tobytes()

    def test_bad_shape_rejected(self):
        t = init_params(2, 0).tensors()
        t["w_k"] = np.zeros((2, 3), np.float32)
        with pytest.raises(ShapeError):
            AdapterParams.from_tensors(t)


class TestEncode:
    def test_zero_fixed_point(self):
        out = encode_tokens(np.zeros((2, 5, 4), np.float32), init_params(4, 1))
        assert np.all(out == 0.0)

    def test_shape_contract(self):
        rng = np.random.default_rng(0)
        for b in (1, 2, 3):
            for n in (1, 4, 9):
                for c in (2, 4, 8):
                    x = rng.normal(size=(b, n, c)).astype(np.float32)
                    out = encode_tokens(x, init_params(c, c))
                    assert out.shape == x.shape and out.dtype == np.float32

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(1)
        p = init_params(6, 5)
        x = rng.normal(size=(2, 10, 6)).astype(np.float32)
        perm = rng.permutation(10)
        np.testing.assert_allclose(encode_tokens(x[:, perm], p), encode_tokens(x, p)[:, perm], atol=1e-5)

    def test_matches_explicit_formula(self):
        rng = np.random.default_rng(2)
        p = init_params(3, 11)
        x = rng.normal(size=(4, 3))
        w = {k: v.astype(np.float64) for k, v in p.tensors().items()}
        q, k, v = x @ w["w_q"], x @ w["w_k"], x @ w["w_v"]
        s = q @ k.T / math.sqrt(3)
        a = np.exp(s - s.max(axis=1, keepdims=True))
        a /= a.sum(axis=1, keepdims=True)
        z = x + a @ v @ w["w_o"]
        t = z + np.maximum(z @ w["ffn1_w"] + w["ffn1_b"], 0) @ w["ffn2_w"] + w["ffn2_b"]
        np.testing.assert_allclose(encode_tokens(x[None], p)[0], t, rtol=1e-5, atol=1e-6)

    def test_deterministic(self):
        x = np.random.default_rng(3).normal(size=(1, 7, 4)).astype(np.float32)
        p = init_params(4, 0)
        assert encode_tokens(x, p).tobytes() == encode_tokens(x, p).tobytes()

    def test_channel_mismatch(self):
        with pytest.raises(ShapeError):
            encode_tokens(np.zeros((1, 3, 5)), init_params(4, 0))


class TestCrossAttend:
    def test_single_key(self):
        p = init_params(4, 2)
        f = np.random.default_rng(4).normal(size=4).astype(np.float32)
        expected = (f.astype(np.float64) @ p.w_v.astype(np.float64)) @ p.w_o.astype(np.float64)
        np.testing.assert_array_equal(cross_attend(f, f[None], p), expected)

    def test_output_length(self):
        rng = np.random.default_rng(5)
        for c in (1, 3, 8):
            t = rng.normal(size=(6, c))
            assert cross_attend(t[2], t, init_params(c, 0)).shape == (c,)

    def test_key_permutation_invariance(self):
        rng = np.random.default_rng(6)
        p = init_params(5, 3)
        t = rng.normal(size=(9, 5))
        perm = rng.permutation(9)
        np.testing.assert_allclose(cross_attend(t[0], t[perm], p), cross_attend(t[0], t, p), atol=1e-5)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            cross_attend(np.zeros(3), np.zeros((2, 4)), init_params(4, 0))


class TestVariance:
    def test_zero_input_gives_eps(self):
        assert estimate_variance(np.zeros(4), np.zeros(4), init_params(4, 0)) == VARIANCE_EPS == 1e-6

    def test_lower_bound(self):
        rng = np.random.default_rng(7)
        p = init_params(3, 8)
        for _ in range(1000):
            f, c = rng.normal(scale=5, size=(2, 3))
            assert estimate_variance(f, c, p) >= 1e-6

    def test_hand_worked_two_channel(self):
        p = _hand_params()
        f, c = [1.0, -1.0], [0.5, 2.0]
        # scalar oracle on the stored float32 weights
        h = f + c
        w1, b1 = p.sigma1_w.tolist(), p.sigma1_b.tolist()
        w2, b2 = p.sigma2_w.tolist(), p.sigma2_b.tolist()
        hidden = [max(0.0, sum(h[i] * w1[i][j] for i in range(4)) + b1[j]) for j in range(2)]
        out = max(0.0, sum(hidden[j] * w2[j][0] for j in range(2)) + b2[0]) + 1e-6
        assert estimate_variance(f, c, p) == pytest.approx(out, abs=1e-12)
        # and the value worked on paper: hidden = (0, 2.4), out = 0.6 + 0.1
        assert out == pytest.approx(0.700001, abs=1e-6)

    def test_negative_head_output_clamped(self):
        t = _hand_params().tensors()
        t["sigma2_b"] = np.array([-5.0], np.float32)
        assert estimate_variance([1.0, -1.0], [0.5, 2.0], AdapterParams.from_tensors(t)) == 1e-6
