import numpy as np
import pytest

from catheval.lam import (
    COLORMAP,
    ActivationMap,
    FeatureMapDump,
    HeadWeights,
    compute_lam,
    render_overlay,
    upsample,
)


def loop_oracle(features, row):
    c, h, w = features.shape
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for k in range(c):
                acc += row[k] * features[k, y, x]
            out[y, x] = acc
    return out


def make_weights(rows):
    arr = np.asarray(rows, dtype=float)
    return HeadWeights(arr, tuple(f"L{i}" for i in range(arr.shape[0])))


class TestComputeLam:
    def test_hand_computed_two_channel_example(self):
        f = FeatureMapDump(np.array([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]]))
        amap = compute_lam(f, make_weights([[1.0, -1.0]]), 0)
        assert amap.raw.tolist() == [[1.0, 0.0], [0.0, -1.0]]
        assert amap.normalized.tolist() == [[1.0, 0.5], [0.5, 0.0]]

    def test_constant_features_normalize_to_midpoint(self):
        f = FeatureMapDump(np.full((3, 2, 2), 7.0))
        amap = compute_lam(f, make_weights([[0.2, 0.3, 0.5]]), 0)
        assert np.all(amap.normalized == 0.5)

    def test_zero_weights_normalize_to_midpoint(self):
        f = FeatureMapDump(np.random.default_rng(0).standard_normal((4, 3, 3)))
        amap = compute_lam(f, make_weights([[0.0] * 4]), 0)
        assert np.all(amap.raw == 0.0)
        assert np.all(amap.normalized == 0.5)

    def test_channel_mismatch(self):
        f = FeatureMapDump(np.zeros((3, 2, 2)))
        with pytest.raises(ValueError):
            compute_lam(f, make_weights([[1.0, 2.0]]), 0)

    def test_label_out_of_range(self):
        f = FeatureMapDump(np.zeros((2, 2, 2)))
        with pytest.raises(ValueError):
            compute_lam(f, make_weights([[1.0, 2.0]]), 3)

    def test_matches_loop_oracle_exactly(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            c, h, w = rng.integers(1, 4, size=3)
            feats = rng.standard_normal((c, h, w))
            row = rng.standard_normal(c)
            amap = compute_lam(FeatureMapDump(feats), make_weights([row]), 0)
            assert np.array_equal(amap.raw, loop_oracle(feats, row))

    def test_linear_in_weights(self):
        rng = np.random.default_rng(1)
        feats = FeatureMapDump(rng.standard_normal((8, 5, 5)))
        w1 = rng.standard_normal(8)
        w2 = rng.standard_normal(8)
        a = compute_lam(feats, make_weights([w1]), 0).raw
        b = compute_lam(feats, make_weights([w2]), 0).raw
        both = compute_lam(feats, make_weights([w1 + w2]), 0).raw
        np.testing.assert_allclose(both, a + b, rtol=1e-9)

    def test_bias_invariance_under_normalization(self):
        # adding a constant to the raw map cannot change the normalized map
        rng = np.random.default_rng(2)
        feats_arr = rng.standard_normal((4, 6, 6))
        row = rng.standard_normal(4)
        base = compute_lam(FeatureMapDump(feats_arr), make_weights([row]), 0)
        shifted_feats = np.concatenate([feats_arr, np.ones((1, 6, 6))])
        shifted = compute_lam(
            FeatureMapDump(shifted_feats), make_weights([list(row) + [3.7]]), 0
        )
        np.testing.assert_allclose(shifted.normalized, base.normalized, atol=1e-12)

    def test_normalization_idempotent(self):
        rng = np.random.default_rng(3)
        raw = rng.standard_normal((4, 4))
        amap = ActivationMap(raw, (raw - raw.min()) / (raw.max() - raw.min()), 0)
        renorm = (amap.normalized - amap.normalized.min()) / (
            amap.normalized.max() - amap.normalized.min()
        )
        np.testing.assert_array_equal(renorm, amap.normalized)


class TestUpsample:
    def _amap(self, raw):
        raw = np.asarray(raw, dtype=float)
        rng = raw.max() - raw.min()
        norm = (raw - raw.min()) / rng if rng > 0 else np.full_like(raw, 0.5)
        return ActivationMap(raw, norm, 0)

    def test_single_cell_fills_target(self):
        out = upsample(self._amap([[3.5]]), (4, 5))
        assert np.all(out.raw == 3.5)

    def test_two_by_two_to_two_by_four(self):
        out = upsample(self._amap([[0.0, 1.0], [0.0, 1.0]]), (2, 4))
        np.testing.assert_allclose(out.raw[0], [0.0, 1 / 3, 2 / 3, 1.0])
        np.testing.assert_allclose(out.raw[1], [0.0, 1 / 3, 2 / 3, 1.0])

    def test_identity_size_is_unchanged(self):
        raw = np.random.default_rng(4).standard_normal((3, 5))
        out = upsample(self._amap(raw), (3, 5))
        np.testing.assert_array_equal(out.raw, raw)

    def test_corners_exact_and_range_contained(self):
        rng = np.random.default_rng(5)
        raw = rng.standard_normal((4, 6))
        out = upsample(self._amap(raw), (9, 11))
        assert out.raw[0, 0] == raw[0, 0]
        assert out.raw[-1, -1] == raw[-1, -1]
        assert out.raw[0, -1] == raw[0, -1]
        assert out.raw[-1, 0] == raw[-1, 0]
        assert out.raw.min() >= raw.min() - 1e-12
        assert out.raw.max() <= raw.max() + 1e-12

    def test_compatible_grid_preserves_extrema(self):
        # (target - 1) is a multiple of (source - 1): every source pixel is sampled
        rng = np.random.default_rng(6)
        raw = rng.standard_normal((3, 4))
        out = upsample(self._amap(raw), (5, 7))
        assert out.raw.min() == raw.min()
        assert out.raw.max() == raw.max()

    def test_shrinking_and_empty_targets_rejected(self):
        amap = self._amap(np.zeros((4, 4)))
        with pytest.raises(ValueError):
            upsample(amap, (2, 8))
        with pytest.raises(ValueError):
            upsample(amap, (0, 4))


class TestOverlay:
    def test_colormap_endpoints(self):
        assert COLORMAP[0].tolist() == [0, 0, 255]  # pure blue
        assert COLORMAP[255].tolist() == [255, 0, 0]  # pure red

    def test_extreme_values_map_to_endpoints(self):
        amap = ActivationMap(np.array([[0.0, 1.0]]), np.array([[0.0, 1.0]]), 0)
        base = np.zeros((1, 2), dtype=np.uint8)
        out = render_overlay(amap, base, opacity=1.0)
        assert out[0, 0].tolist() == [0, 0, 255]
        assert out[0, 1].tolist() == [255, 0, 0]

    def test_zero_opacity_returns_base_in_color(self):
        rng = np.random.default_rng(7)
        base = (rng.random((5, 5)) * 255).astype(np.uint8)
        amap = ActivationMap(rng.random((5, 5)), rng.random((5, 5)), 0)
        out = render_overlay(amap, base, opacity=0.0)
        for ch in range(3):
            np.testing.assert_array_equal(out[:, :, ch], base)

    def test_size_mismatch(self):
        amap = ActivationMap(np.zeros((2, 2)), np.zeros((2, 2)), 0)
        with pytest.raises(ValueError):
            render_overlay(amap, np.zeros((3, 3), dtype=np.uint8))
