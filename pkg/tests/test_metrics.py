"""Quality and bandwidth reports."""

import math

import numpy as np
import pytest

from tpvm.metrics import bandwidth_report, psnr_db, quality_report
from tpvm.model import Factorization, Image, TargetSet

from conftest import rand_targets


class TestQualityReport:
    def test_exact_factorization(self, rng):
        ts = rand_targets(rng, k=2)
        f = Factorization(ts.images, np.eye(2))
        report = quality_report(ts, f, "sum")
        assert report.per_target_rmse == (0.0, 0.0)
        assert all(math.isinf(p) for p in report.per_target_psnr_db)
        assert report.frobenius_total == 0.0

    def test_forced_arithmetic_unit_error(self):
        ts = TargetSet((Image.from_flat(1, 1, [0.0]),))
        f = Factorization((Image.from_flat(1, 1, [1.0]),), np.array([[1.0]]))
        report = quality_report(ts, f, "sum")
        assert report.per_target_rmse == (1.0,)
        assert report.per_target_psnr_db == (0.0,)

    def test_frobenius_consistency_without_clamping(self, rng):
        # quarter-scale frames and weights keep every fused value under 1
        for trial in range(5):
            n, m, k = 12, 3, 2
            x = rng.random((n, m)) * 0.25
            w = rng.random((m, k))
            ts = rand_targets(rng, k=k, width=4, height=3)
            f = Factorization(
                tuple(Image.from_flat(4, 3, x[:, j]) for j in range(m)), w
            )
            report = quality_report(ts, f, "sum")
            assert not any(report.overflow_pixel_counts)
            total_sq = sum(n * r**2 for r in report.per_target_rmse)
            assert abs(report.frobenius_total**2 - total_sq) <= 1e-9 * max(total_sq, 1e-300)

    def test_overflow_counted_per_target(self):
        ts = TargetSet((Image.from_flat(1, 2, [1.0, 0.2]),))
        frames = (Image.from_flat(1, 2, [0.9, 0.1]), Image.from_flat(1, 2, [0.9, 0.05]))
        f = Factorization(frames, np.array([[1.0], [1.0]]))
        report = quality_report(ts, f, "sum")
        assert report.overflow_pixel_counts == (1,)

    def test_dimension_mismatch(self, rng):
        ts = rand_targets(rng, k=2)
        f = Factorization(ts.images, np.eye(2))
        with pytest.raises(ValueError):
            quality_report(rand_targets(rng, k=3), f)


class TestPsnr:
    def test_formula_anchor(self):
        assert psnr_db(0.1) == pytest.approx(20.0, abs=1e-12)

    def test_exact_match_sentinel(self):
        assert math.isinf(psnr_db(0.0))

    def test_strictly_decreasing_in_rmse(self):
        values = [psnr_db(r) for r in (0.01, 0.05, 0.1, 0.5, 1.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_json_sentinel_string(self, rng):
        ts = rand_targets(rng, k=1)
        f = Factorization(ts.images, np.eye(1))
        doc = quality_report(ts, f).to_json_dict()
        assert doc["perTargetPsnrDb"] == ["inf"]


class TestBandwidthReport:
    def test_degenerate_ratio_one(self):
        assert bandwidth_report(1, 1, 1, 1.0).ratio == 1.0

    def test_desk_scale_display(self):
        n = 1920 * 1080
        report = bandwidth_report(n, 4, 3, 60.0)
        assert report.ratio == pytest.approx(4 / 2_073_600, rel=1e-12)
        assert report.weights_rate == 4 * 3 * 60.0
        assert report.pixel_rate == n * 3 * 60.0

    def test_m_equals_n_ratio_one(self):
        assert bandwidth_report(17, 17, 5, 2.0).ratio == 1.0

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            bandwidth_report(0, 1, 1, 1.0)
        with pytest.raises(ValueError):
            bandwidth_report(1, 1, 1, -2.0)
