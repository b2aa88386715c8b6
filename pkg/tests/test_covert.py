"""Normal-view/shale-view bifurcation constructions."""

import numpy as np
import pytest

from tpvm.covert import design_covert_noise, design_dual_view, leakage_correlation
from tpvm.model import Image, normal_view, perceive
from tpvm.solver import SolverConfig

from conftest import rand_image

# frozen oracle for the single-pixel covert draw at seed 3, secret 0.4:
# u = default_rng(3).random(1)[0], x2 = (1 - 0.4) * u, noise = 0.4 + x2
SEED3_U = 0.08564916714362436
SEED3_X2 = 0.051389500286174616
SEED3_NOISE = 0.45138950028617464


class TestDesignCovertNoise:
    def test_weight_matrix_is_paper_special_case(self, rng):
        res = design_covert_noise(rand_image(rng), seed=1)
        assert res.factorization.weight_matrix.tolist() == [[1.0, 1.0], [1.0, 0.0]]

    def test_single_pixel_frozen_draw(self):
        secret = Image.from_flat(1, 1, [0.4])
        res = design_covert_noise(secret, seed=3)
        x2 = res.factorization.atom_frames[1].flat[0]
        assert x2 == SEED3_X2
        assert res.normal_view_image.flat[0] == SEED3_NOISE
        assert res.shale_view_image.flat[0] == 0.4

    def test_saturated_secret_degenerates(self):
        secret = Image.from_flat(2, 2, np.ones(4))
        res = design_covert_noise(secret, seed=8)
        assert np.all(res.factorization.atom_frames[1].flat == 0.0)
        assert np.array_equal(res.normal_view_image.data, secret.data)

    def test_shale_view_is_secret_bit_exactly(self, rng):
        for seed in range(10):
            secret = rand_image(rng, 5, 3)
            res = design_covert_noise(secret, seed=seed)
            shale = perceive(res.factorization.atom_frames, (1.0, 0.0), "sum")
            assert np.array_equal(shale.image.data, secret.data)
            assert np.array_equal(res.shale_view_image.data, secret.data)

    def test_normal_view_is_drawn_noise_bit_exactly(self, rng):
        for seed in range(10):
            secret = rand_image(rng, 3, 4)
            res = design_covert_noise(secret, seed=seed)
            nv = normal_view(res.factorization.atom_frames, "sum")
            assert not nv.overflow
            assert np.array_equal(nv.image.data, res.normal_view_image.data)
            # independent recomputation of the documented draw
            u = np.random.default_rng(seed).random(secret.n_pixels)
            x2 = (1.0 - secret.flat) * u
            assert np.array_equal(res.factorization.atom_frames[1].flat, x2)
            assert np.array_equal(nv.image.flat, secret.flat + x2)

    def test_never_clamps(self, rng):
        for seed in range(20):
            res = design_covert_noise(rand_image(rng), seed=seed)
            assert res.feasibility_report == 0
            frames = res.factorization.frame_matrix
            assert frames.min() >= 0.0 and frames.max() <= 1.0

    def test_leakage_in_range_and_reported(self, rng):
        res = design_covert_noise(rand_image(rng, 8, 8), seed=2)
        assert -1.0 <= res.leakage <= 1.0
        assert res.per_view_rmse == (0.0, 0.0)


class TestDesignDualView:
    def test_identical_views(self, rng):
        y0 = rand_image(rng, 4, 4)
        cfg = SolverConfig(max_iterations=3000, rel_tolerance=1e-14, seed=0)
        res = design_dual_view(y0, y0, cfg=cfg)
        rel = res.factorization.objective_history[-1] / np.linalg.norm(
            np.column_stack([y0.flat, y0.flat]), "fro"
        )
        assert rel <= 1e-6

    def test_double_brightness_exact_solution(self, rng):
        y1 = Image.from_flat(4, 4, rng.random(16) * 0.5)
        y0 = Image.from_flat(4, 4, 2.0 * y1.flat)
        cfg = SolverConfig(max_iterations=3000, rel_tolerance=1e-14, seed=1)
        res = design_dual_view(y0, y1, cfg=cfg)
        ymat = np.column_stack([y0.flat, y1.flat])
        rel = res.factorization.objective_history[-1] / np.linalg.norm(ymat, "fro")
        assert rel <= 1e-3

    def test_incompatible_pair_hits_oracle_floor(self):
        # 1-pixel exhaustive search (step 0.05, normal column pinned to (1,1))
        # puts the best possible residual at sqrt(0.5); solver can't beat it
        y0 = Image.from_flat(1, 1, [0.0])
        y1 = Image.from_flat(1, 1, [1.0])
        oracle = _dual_view_grid_oracle_1px(0.0, 1.0)
        assert oracle == pytest.approx(np.sqrt(0.5), abs=1e-12)
        cfg = SolverConfig(max_iterations=2000, rel_tolerance=1e-14, seed=0, restarts=3)
        res = design_dual_view(y0, y1, cfg=cfg, pin_shale=False)
        resid = res.factorization.objective_history[-1]
        assert resid > 0.0
        assert resid >= oracle - 1e-9

    def test_normal_column_pinned_to_ones(self, rng):
        res = design_dual_view(rand_image(rng), rand_image(rng), cfg=SolverConfig(max_iterations=50))
        assert np.array_equal(res.factorization.weight_matrix[:, 0], np.ones(2))

    def test_shale_column_pinned_by_default_free_on_request(self, rng):
        a, b = rand_image(rng), rand_image(rng)
        res = design_dual_view(a, b, cfg=SolverConfig(max_iterations=50))
        assert np.array_equal(res.factorization.weight_matrix[:, 1], np.array([1.0, 0.0]))
        free = design_dual_view(a, b, cfg=SolverConfig(max_iterations=50), pin_shale=False)
        assert not free.factorization.pin_mask[:, 1].any()

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            design_dual_view(rand_image(rng, 2, 2), rand_image(rng, 3, 3))


def _dual_view_grid_oracle_1px(y0, y1, step=0.05):
    vals = np.round(np.arange(0.0, 1.0 + 1e-9, step), 10)
    best = np.inf
    for x1 in vals:
        for x2 in vals:
            e0 = (x1 + x2 - y0) ** 2
            e1 = np.min((x1 * vals[:, None] + x2 * vals[None, :] - y1) ** 2)
            best = min(best, e0 + e1)
    return float(np.sqrt(best))


class TestLeakageCorrelation:
    def test_self_correlation(self, rng):
        img = rand_image(rng)
        assert leakage_correlation(img, img) == pytest.approx(1.0, abs=1e-12)

    def test_anti_correlation(self, rng):
        img = rand_image(rng)
        flipped = Image.from_flat(img.width, img.height, 1.0 - img.flat)
        assert leakage_correlation(img, flipped) == pytest.approx(-1.0, abs=1e-12)

    def test_constant_convention(self, rng):
        const = Image.from_flat(2, 2, [0.5, 0.5, 0.5, 0.5])
        assert leakage_correlation(const, rand_image(rng, 2, 2)) == 0.0

    def test_errors(self, rng):
        with pytest.raises(ValueError):
            leakage_correlation(rand_image(rng, 2, 2), rand_image(rng, 3, 3))
        one = Image.from_flat(1, 1, [0.5])
        with pytest.raises(ValueError):
            leakage_correlation(one, one)
