"""Domain types and the fusion simulator."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpvm.model import (
    DisplayConfig,
    Factorization,
    Image,
    TargetSet,
    WeightVector,
    normal_view,
    perceive,
    perceive_spatial,
)

from conftest import rand_image


def single_pixel_frames(*values):
    return tuple(Image.from_flat(1, 1, [v]) for v in values)


class TestDisplayConfig:
    def test_valid(self):
        cfg = DisplayConfig(120.0, 60.0, 2)
        assert cfg.frames_per_cycle == 2

    def test_derive(self):
        assert DisplayConfig.derive(240.0, 60.0).frames_per_cycle == 4

    def test_rejects_non_integer_ratio(self):
        with pytest.raises(ValueError):
            DisplayConfig(100.0, 60.0, 2)
        with pytest.raises(ValueError):
            DisplayConfig.derive(100.0, 60.0)

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            DisplayConfig(0.0, 60.0, 1)
        with pytest.raises(ValueError):
            DisplayConfig(120.0, -60.0, 2)
        with pytest.raises(ValueError):
            DisplayConfig(120.0, 120.0, 0)


class TestImage:
    def test_round_trip_flat(self):
        img = Image.from_flat(3, 2, [0, 0.1, 0.2, 0.3, 0.4, 0.5])
        assert img.data.shape == (2, 3)
        assert img.flat.tolist() == [0, 0.1, 0.2, 0.3, 0.4, 0.5]

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Image.from_flat(1, 2, [0.5, 1.5])
        with pytest.raises(ValueError):
            Image.from_flat(1, 2, [-0.1, 0.5])
        with pytest.raises(ValueError):
            Image.from_flat(1, 2, [np.nan, 0.5])

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            Image.from_flat(2, 2, [0.1, 0.2, 0.3])

    def test_immutable(self):
        img = Image.zeros(2, 2)
        with pytest.raises(ValueError):
            img.data[0, 0] = 1.0


class TestTargetSet:
    def test_matrix_columns_are_images(self, rng):
        a, b = rand_image(rng), rand_image(rng)
        ts = TargetSet((a, b))
        assert ts.k == 2
        assert np.array_equal(ts.matrix[:, 0], a.flat)
        assert np.array_equal(ts.matrix[:, 1], b.flat)

    def test_rejects_empty_and_mismatched(self, rng):
        with pytest.raises(ValueError):
            TargetSet(())
        with pytest.raises(ValueError):
            TargetSet((rand_image(rng, 2, 2), rand_image(rng, 3, 2)))


class TestWeightVector:
    def test_range_checked(self):
        with pytest.raises(ValueError):
            WeightVector(np.array([0.5, 1.01]))
        with pytest.raises(ValueError):
            WeightVector(np.array([-0.01]))

    def test_of_passthrough(self):
        wv = WeightVector(np.array([0.5]))
        assert WeightVector.of(wv) is wv
        assert WeightVector.of([0.25, 1.0]).weights.tolist() == [0.25, 1.0]


class TestFactorization:
    def test_validates_weight_range(self, rng):
        with pytest.raises(ValueError):
            Factorization((rand_image(rng),), np.array([[1.5]]))

    def test_validates_history_monotone(self, rng):
        with pytest.raises(ValueError):
            Factorization(
                (rand_image(rng),), np.array([[1.0]]), objective_history=(1.0, 2.0)
            )

    def test_frame_matrix(self, rng):
        a, b = rand_image(rng), rand_image(rng)
        f = Factorization((a, b), np.array([[1.0], [0.5]]))
        assert f.frame_matrix.shape == (16, 2)
        assert np.array_equal(f.frame_matrix[:, 1], b.flat)


class TestPerceive:
    def test_identity_single_frame(self, rng):
        x = rand_image(rng)
        out = perceive((x,), [1.0])
        assert np.array_equal(out.image.data, x.data)
        assert not out.overflow

    def test_forced_arithmetic(self):
        frames = single_pixel_frames(0.2, 0.4)
        out = perceive(frames, (0.5, 0.5), "sum")
        assert out.image.flat[0] == pytest.approx(0.3, abs=1e-15)

    def test_selecting_one_frame_reproduces_it(self, rng):
        frames = (rand_image(rng), rand_image(rng))
        out = perceive(frames, (1.0, 0.0))
        assert np.array_equal(out.image.data, frames[0].data)

    def test_mean_mode_divides_by_m(self):
        frames = single_pixel_frames(0.8, 0.4)
        out = perceive(frames, (1.0, 1.0), "mean")
        assert out.image.flat[0] == pytest.approx(0.6, abs=1e-15)
        assert not out.overflow

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            perceive((rand_image(rng),), (1.0, 0.5))

    def test_unknown_mode(self, rng):
        with pytest.raises(ValueError):
            perceive((rand_image(rng),), (1.0,), "median")


class TestNormalView:
    def test_forced_arithmetic(self):
        out = normal_view(single_pixel_frames(0.2, 0.3), "sum")
        assert out.image.flat[0] == pytest.approx(0.5, abs=1e-15)
        assert not out.overflow

    def test_clamp_case(self):
        out = normal_view(single_pixel_frames(0.8, 0.7), "sum")
        assert out.image.flat[0] == 1.0
        assert out.overflow
        assert out.clamped_count == 1

    def test_single_frame_identity(self, rng):
        x = rand_image(rng)
        out = normal_view((x,))
        assert np.array_equal(out.image.data, x.data)

    def test_equals_perceive_with_ones_bit_exactly(self, rng):
        frames = tuple(rand_image(rng) for _ in range(3))
        via_ones = perceive(frames, np.ones(3), "sum")
        nv = normal_view(frames, "sum")
        assert np.array_equal(nv.image.data, via_ones.image.data)
        assert nv.overflow == via_ones.overflow


class TestPerceiveSpatial:
    def test_uniform_mask_matches_global(self, rng):
        frames = tuple(rand_image(rng) for _ in range(3))
        w = np.array([0.2, 0.7, 0.1])
        mask = np.tile(w, (16, 1))
        spatial = perceive_spatial(frames, mask)
        global_ = perceive(frames, w)
        assert np.max(np.abs(spatial.image.flat - global_.image.flat)) <= 1e-12

    def test_two_region_selection(self, rng):
        # inner pixels show frame 3, outer pixels frame 1
        frames = tuple(rand_image(rng, 4, 1) for _ in range(3))
        inner = np.zeros(4, dtype=bool)
        inner[1:3] = True
        mask = np.where(inner[:, None], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
        out = perceive_spatial(frames, mask).image.flat
        for p in range(4):
            want = frames[2].flat[p] if inner[p] else frames[0].flat[p]
            assert out[p] == want

    def test_zero_mask_black(self, rng):
        frames = (rand_image(rng), rand_image(rng))
        out = perceive_spatial(frames, np.zeros((16, 2)))
        assert np.all(out.image.flat == 0.0)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            perceive_spatial((rand_image(rng),), np.zeros((9, 1)))


# intensities and weights drawn from a dyadic grid keep small dot products exact,
# so the order comparisons below can be asserted without tolerance
dyadic = st.integers(min_value=0, max_value=64).map(lambda k: k / 64)


class TestProperties:
    @settings(max_examples=50, deadline=None)
    @given(
        data=st.lists(st.lists(dyadic, min_size=4, max_size=4), min_size=2, max_size=2),
        w1=st.lists(dyadic, min_size=2, max_size=2),
        w2=st.lists(dyadic, min_size=2, max_size=2),
        a=dyadic,
    )
    def test_linearity_pre_clamp(self, data, w1, w2, a):
        b = 1.0 - a
        # halve intensities so no combination can clamp
        frames = tuple(Image.from_flat(2, 2, np.array(d) / 2) for d in data)
        combined = a * np.array(w1) + b * np.array(w2)
        lhs = perceive(frames, combined).image.flat
        rhs = a * perceive(frames, w1).image.flat + b * perceive(frames, w2).image.flat
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    @settings(max_examples=50, deadline=None)
    @given(
        data=st.lists(st.lists(dyadic, min_size=6, max_size=6), min_size=3, max_size=3),
        w=st.lists(dyadic, min_size=3, max_size=3),
    )
    def test_uniform_mask_equivalence(self, data, w):
        frames = tuple(Image.from_flat(3, 2, d) for d in data)
        mask = np.tile(np.array(w), (6, 1))
        spatial = perceive_spatial(frames, mask).image.flat
        global_ = perceive(frames, w).image.flat
        assert np.max(np.abs(spatial - global_)) <= 1e-12

    @settings(max_examples=50, deadline=None)
    @given(
        data=st.lists(st.lists(dyadic, min_size=4, max_size=4), min_size=2, max_size=2),
        w=st.lists(st.integers(min_value=0, max_value=63).map(lambda k: k / 64), min_size=2, max_size=2),
        idx=st.integers(min_value=0, max_value=1),
    )
    def test_monotone_in_each_weight(self, data, w, idx):
        # raising one weight (no clamping: intensities halved) never darkens a pixel
        frames = tuple(Image.from_flat(2, 2, np.array(d) / 2) for d in data)
        bumped = list(w)
        bumped[idx] += 1 / 64
        lo = perceive(frames, w).image.flat
        hi = perceive(frames, bumped).image.flat
        assert np.all(hi >= lo)
