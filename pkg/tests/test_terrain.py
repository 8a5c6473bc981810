import json
import math

import numpy as np
import pytest

from mattertransport.model import NoiseModel, ripple_profile, sample_bacs
from mattertransport.terrain import (ContactLog, TerrainMap, estimate_b, generate_terrain,
                                     rugosity, sample_durations, save_terrain)


class TestRugosity:
    def test_constant(self):
        assert rugosity(TerrainMap(np.full((4, 5), 3.0))) == 0.0

    def test_two_levels(self):
        # heights 0 / 2 cm in equal proportion: population std is 1 cm
        h = np.array([[0.0, 2.0], [2.0, 0.0]])
        assert rugosity(TerrainMap(h, block_side=10.0)) == pytest.approx(0.1)

    def test_single_block(self):
        assert rugosity(TerrainMap([[7.0]])) == 0.0

    def test_invalid(self):
        with pytest.raises(ValueError):
            TerrainMap(np.zeros(3))
        with pytest.raises(ValueError):
            TerrainMap(np.zeros((2, 2)), block_side=0)


class TestGenerate:
    def test_flat(self):
        t = generate_terrain(6, 6, 0.0, seed=1)
        assert t.rugosity == 0.0
        assert np.all(t.heights == t.heights[0, 0])

    @pytest.mark.parametrize("target", [0.17, 0.32, 0.05, 1.3])
    @pytest.mark.parametrize("levels", [2, 5, 11])
    def test_hits_target(self, target, levels):
        t = generate_terrain(12, 9, target, 10.0, levels, seed=4)
        assert abs(t.rugosity - target) < 1e-6
        assert t.heights.min() == 0.0

    def test_deterministic(self):
        a = generate_terrain(10, 10, 0.32, seed=8)
        b = generate_terrain(10, 10, 0.32, seed=8)
        np.testing.assert_array_equal(a.heights, b.heights)
        assert not np.array_equal(a.heights, generate_terrain(10, 10, 0.32, seed=9).heights)

    def test_levels_are_equally_spaced(self):
        t = generate_terrain(20, 20, 0.2, 10.0, 4, seed=0)
        steps = np.diff(np.unique(t.heights))
        np.testing.assert_allclose(steps, steps[0])

    def test_single_level_infeasible(self):
        with pytest.raises(ValueError):
            generate_terrain(5, 5, 0.1, height_levels=1)

    def test_roundtrip_csv_json(self, tmp_path):
        t = generate_terrain(3, 4, 0.17, seed=2)
        csv_path, json_path = save_terrain(t, tmp_path)
        back = TerrainMap.from_csv(csv_path.read_text())
        np.testing.assert_array_equal(back.heights, t.heights)
        assert back.block_side == 10.0 and back.seed == 2
        data = json.loads(json_path.read_text())
        assert abs(data["rugosity"] - 0.17) < 1e-6
        np.testing.assert_array_equal(TerrainMap.from_dict(data).heights, t.heights)


class TestEstimateB:
    def test_all_lost(self):
        fit = estimate_b(ContactLog(np.zeros(20), 1.0))
        assert fit.b == 1.0 and math.isnan(fit.slope)

    def test_half_lost_linear_fit(self):
        # 50 zeros and 50 durations at the model quantiles of the continuous part
        tau = 2.0
        u = 0.5 + 0.5 * (np.arange(50) + 0.5) / 50
        positive = tau * (u - 0.5) / 0.5
        fit = estimate_b(ContactLog(np.concatenate([np.zeros(50), positive]), tau))
        assert fit.b == 0.5
        assert fit.slope == pytest.approx(0.5 / tau, rel=0.02)
        assert fit.intercept == pytest.approx(0.5, abs=0.02)

    def test_from_sampler(self):
        b, n = 0.3, 10_000
        _, tau_u, _, _ = sample_bacs(ripple_profile(), NoiseModel(b), n,
                                     np.random.default_rng(5))
        fit = estimate_b(ContactLog(tau_u, 1.0))
        assert abs(fit.b - b) < 3 * math.sqrt(b * (1 - b) / n)
        assert fit.slope == pytest.approx((1 - b), rel=0.05)

    @pytest.mark.parametrize("b", [0.1, 0.3, 0.5, 0.8])
    def test_roundtrip(self, b):
        d = sample_durations(NoiseModel(b), 0.7, 10_000, np.random.default_rng(int(b * 10)))
        assert abs(estimate_b(ContactLog(d, 0.7)).b - b) < 3 * math.sqrt(b * (1 - b) / 1e4)

    def test_threshold(self):
        d = np.concatenate([np.full(5, 1e-12), np.full(5, 0.5)])
        assert estimate_b(ContactLog(d, 1.0)).b == 0.5

    def test_too_few(self):
        with pytest.raises(ValueError):
            estimate_b(ContactLog(np.zeros(9), 1.0))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            ContactLog(np.array([0.5, 1.5]), 1.0)

    def test_csv_roundtrip(self, tmp_path):
        log = ContactLog(np.array([0.0, 0.25, 0.5]), 0.5)
        path = tmp_path / "log.csv"
        path.write_text(log.to_csv())
        back = ContactLog.from_csv(path)
        assert back.tau == 0.5
        np.testing.assert_array_equal(back.durations, log.durations)
