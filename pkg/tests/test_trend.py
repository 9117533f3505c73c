import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from garchtrend import (
    DomainError,
    TrendSpec,
    amplitude_ratio,
    eval_trend,
    sample_ratio,
    sample_spec,
    scale_to_ratio,
)
from garchtrend.trend import MIN_PART_LEN


def part_slices(spec):
    """0-based inclusive (start, end) of each part, start being the anchor point."""
    bp = spec.breakpoints
    return [(0 if p == 0 else bp[p] - 1, bp[p + 1] - 1) for p in range(spec.s)]


class TestSampleSpec:
    def test_full_length(self):
        spec = sample_spec(6000, 4, seed=1)
        assert len(spec.breakpoints) == 5
        assert spec.breakpoints[0] == 0 and spec.breakpoints[-1] == 6000
        assert min(spec.part_lengths) >= 50
        assert sum(spec.part_lengths) == 6000
        assert all(0 < a < 1 for a in spec.amplitudes)

    def test_single_part(self):
        spec = sample_spec(100, 1, seed=0)
        assert spec.breakpoints == (0, 100)
        assert spec.part_lengths == (100,)

    def test_tight_fit(self):
        assert sample_spec(150, 3, seed=5).part_lengths == (50, 50, 50)

    @pytest.mark.parametrize("n, s", [(99, 2), (10, 1), (100, 0)])
    def test_rejects(self, n, s):
        with pytest.raises(DomainError):
            sample_spec(n, s, seed=0)

    def test_deterministic(self):
        assert sample_spec(3000, 3, seed=8) == sample_spec(3000, 3, seed=8)
        assert sample_spec(3000, 3, seed=8) != sample_spec(3000, 3, seed=9)

    def test_placements_uniform(self):
        # n = 102, s = 2: the first part length is uniform on {50, 51, 52}
        counts = np.bincount([sample_spec(102, 2, seed=k).part_lengths[0] - 50
                              for k in range(3000)], minlength=3)
        assert counts.sum() == 3000
        assert np.all(np.abs(counts / 3000 - 1 / 3) < 0.04)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            TrendSpec(n=100, s=2, breakpoints=(0, 40, 100), amplitudes=(0.5, 0.5))
        with pytest.raises(DomainError):
            TrendSpec(n=100, s=1, breakpoints=(0, 100), amplitudes=(1.0,))
        with pytest.raises(DomainError):
            TrendSpec(n=100, s=1, breakpoints=(0, 100), amplitudes=(0.5,), first_sign=0)


class TestEvalTrend:
    def test_single_half_period(self):
        spec = TrendSpec(n=101, s=1, breakpoints=(0, 101), amplitudes=(0.5,))
        f = eval_trend(spec).values
        assert f[0] == 0.0
        assert f[50] == pytest.approx(-0.5, abs=1e-15)
        assert f[100] == pytest.approx(-1.0, abs=1e-15)

    def test_two_parts_endpoint(self):
        spec = TrendSpec(n=200, s=2, breakpoints=(0, 100, 200), amplitudes=(0.5, 0.25))
        f = eval_trend(spec).values
        assert f[99] == pytest.approx(-1.0, abs=1e-15)
        assert f[-1] == pytest.approx(-0.5, abs=1e-15)

    def test_first_sign_flip(self):
        down = eval_trend(TrendSpec(300, 2, (0, 120, 300), (0.3, 0.7))).values
        up = eval_trend(TrendSpec(300, 2, (0, 120, 300), (0.3, 0.7), first_sign=1)).values
        np.testing.assert_allclose(up, -down, atol=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.sampled_from([1, -1]))
    def test_invariants(self, s, seed, first_sign):
        spec = sample_spec(50 * s + seed % 700, s, seed, first_sign=first_sign)
        tr = eval_trend(spec)
        f = tr.values
        assert len(f) == spec.n and f[0] == 0.0
        prev_dir = None
        for p, (a, b) in enumerate(part_slices(spec)):
            step = np.diff(f[a:b + 1]) * spec.signs[p]
            assert np.all(step >= 0), "part not monotonic in its direction"
            assert f[b] - f[a] == pytest.approx(spec.signs[p] * 2 * spec.amplitudes[p], abs=1e-12)
            if prev_dir is not None:
                assert spec.signs[p] == -prev_dir
            prev_dir = spec.signs[p]
        assert min(spec.part_lengths) >= MIN_PART_LEN


class TestRatio:
    def test_amplitude_ratio(self):
        assert amplitude_ratio([0, 3, 1], [0, 1.5, 1]) == 2.0
        y = np.array([0.1, -0.4, 0.7])
        assert amplitude_ratio(y, y) == 1.0

    def test_constant_noise(self):
        with pytest.raises(DomainError):
            amplitude_ratio([0, 1, 2], [1, 1, 1])

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            amplitude_ratio([0, 1, 2], [0, 1])

    @pytest.mark.parametrize("r", [0.25, 1.0, 2.0, 4.0, 0.013])
    def test_scale_hits_target(self, r):
        rng = np.random.default_rng(3)
        y = np.cumsum(rng.standard_normal(2000) * 0.01)
        tr = eval_trend(sample_spec(2000, 3, seed=4))
        out = scale_to_ratio(tr, y, r)
        assert amplitude_ratio(out.values, y) == pytest.approx(r, rel=1e-12)
        assert out.spec == tr.spec

    def test_identity_scaling(self):
        y = np.cumsum(np.random.default_rng(0).standard_normal(500))
        tr = eval_trend(sample_spec(500, 2, seed=1))
        out = scale_to_ratio(tr, y, amplitude_ratio(tr.values, y))
        np.testing.assert_allclose(out.values, tr.values, rtol=0, atol=1e-15)

    def test_scaling_composes(self):
        y = np.cumsum(np.random.default_rng(0).standard_normal(500))
        tr = eval_trend(sample_spec(500, 2, seed=1))
        once = scale_to_ratio(tr, y, 3.0)
        twice = scale_to_ratio(scale_to_ratio(tr, y, 0.5), y, 3.0)
        np.testing.assert_allclose(twice.values, once.values, rtol=1e-12)
        half = scale_to_ratio(tr, y, 0.5)
        assert half.scale * 6.0 == pytest.approx(once.scale, rel=1e-12)

    @pytest.mark.parametrize("r", [0.0, -1.0, float("nan")])
    def test_bad_target(self, r):
        y = np.arange(100.0)
        with pytest.raises(DomainError):
            scale_to_ratio(eval_trend(sample_spec(100, 1, seed=0)), y, r)

    def test_sample_ratio_range(self):
        draws = [sample_ratio(k) for k in range(500)]
        assert min(draws) >= 0.25 and max(draws) <= 4.0
        assert sample_ratio(7) == sample_ratio(7)
