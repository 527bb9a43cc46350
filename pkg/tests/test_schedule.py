import pytest
from hypothesis import given, strategies as st

from amaze.schedule import DEFAULT_SCALE_RHOS, ScheduleConfig, k_at_epoch, rho_at_epoch, scale_plan


class TestK:
    def test_start(self):
        assert k_at_epoch(0.5, 0, 10) == 0.5

    def test_midpoint(self):
        assert k_at_epoch(0.5, 5, 10) == 0.25

    def test_end(self):
        assert k_at_epoch(0.5, 10, 10) == 0.0

    def test_clamped_after_end(self):
        assert k_at_epoch(0.5, 12, 10) == 0.0

    def test_zero_total(self):
        with pytest.raises(ValueError):
            k_at_epoch(0.5, 0, 0)

    def test_negative_epoch(self):
        with pytest.raises(ValueError):
            k_at_epoch(0.5, -1, 10)

    @given(st.floats(0, 5), st.integers(1, 200))
    def test_non_increasing(self, k0, total):
        ks = [k_at_epoch(k0, e, total) for e in range(total + 2)]
        assert all(a >= b for a, b in zip(ks, ks[1:]))
        assert ks[total] == 0.0


class TestRho:
    def test_start_is_half(self):
        assert rho_at_epoch(0.4, 0, 10) == 0.2

    def test_plateau(self):
        assert rho_at_epoch(0.4, 5, 10) == 0.4
        assert rho_at_epoch(0.4, 9, 10) == 0.4

    def test_half_way_through_warmup(self):
        # warmup ends at ceil(0.5 * 8) = 4; epoch 2 is half way
        assert rho_at_epoch(0.4, 2, 8) == pytest.approx(0.3)

    @given(st.floats(0, 1), st.integers(1, 100), st.floats(0.01, 1))
    def test_non_decreasing_and_capped(self, target, total, frac):
        rhos = [rho_at_epoch(target, e, total, frac) for e in range(total + 1)]
        assert all(a <= b for a, b in zip(rhos, rhos[1:]))
        assert max(rhos) <= target
        assert rhos[-1] == target


class TestPlan:
    def test_default_late_epoch(self):
        plan = scale_plan(ScheduleConfig(E_total=10), 10)
        assert [r for r, _ in plan] == [0.20, 0.30, 0.40, 0.50]
        assert all(k == 0.0 for _, k in plan)

    def test_default_ratios_non_decreasing(self):
        assert list(DEFAULT_SCALE_RHOS) == sorted(DEFAULT_SCALE_RHOS)

    def test_ramp_monotone(self):
        cfg = ScheduleConfig(E_total=6)
        first, last = scale_plan(cfg, 0), scale_plan(cfg, 6)
        assert all(a[0] <= b[0] for a, b in zip(first, last))
        assert first[0] == (0.1, 0.5)

    def test_length(self):
        assert len(scale_plan(ScheduleConfig(E_total=3, scale_rhos=(0.1, 0.2)), 1)) == 2

    @pytest.mark.parametrize(
        "kwargs",
        [dict(E_total=0), dict(E_total=3, k0=-1), dict(E_total=3, scale_rhos=(0.2, 1.2)), dict(E_total=3, warmup_fraction=0)],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            ScheduleConfig(**kwargs)
