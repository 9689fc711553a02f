import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pba import (
    GeometryMismatchError,
    PatchGeometry,
    cover_counts,
    extract_patches,
    reassemble,
)


def geom(side, stride, size):
    return PatchGeometry(patch_side=side, stride=stride,
                         image_width=size, image_height=size)


class TestGeometry:
    def test_patch_counts(self):
        g = geom(8, 8, 64)
        assert (g.grid_rows, g.grid_cols, g.n_patches) == (8, 8, 64)
        assert geom(8, 1, 64).n_patches == 57 * 57

    def test_patch_larger_than_image(self):
        with pytest.raises(GeometryMismatchError):
            geom(9, 1, 8)

    def test_nonpositive_fields(self):
        with pytest.raises(ValueError):
            geom(0, 1, 8)
        with pytest.raises(ValueError):
            geom(2, 0, 8)


class TestExtract:
    def test_tiling_shape(self):
        img = np.arange(64 * 64, dtype=float).reshape(64, 64)
        x = extract_patches(img, geom(8, 8, 64))
        assert x.shape == (64, 64)

    def test_dense_shape(self):
        img = np.zeros((64, 64))
        assert extract_patches(img, geom(8, 1, 64)).shape == (64, 3249)

    def test_constant_single_patch(self):
        img = np.full((8, 8), 7.5)
        x = extract_patches(img, geom(8, 1, 8))
        assert x.shape == (64, 1)
        assert np.all(x == 7.5)

    def test_column_major_within_patch(self):
        img = np.arange(9, dtype=float).reshape(3, 3)
        x = extract_patches(img, geom(2, 1, 3))
        # first patch [[0,1],[3,4]] read down the columns: 0,3,1,4
        np.testing.assert_array_equal(x[:, 0], [0, 3, 1, 4])
        # grid is row-major: patch 1 starts one column right
        np.testing.assert_array_equal(x[:, 1], [1, 4, 2, 5])
        np.testing.assert_array_equal(x[:, 2], [3, 6, 4, 7])

    def test_geometry_mismatch(self):
        with pytest.raises(GeometryMismatchError):
            extract_patches(np.zeros((16, 16)), geom(8, 8, 64))


class TestReassemble:
    def test_gamma_zero_tiling_exact(self):
        rng = np.random.default_rng(0)
        img = rng.integers(0, 256, (16, 16)).astype(float)
        g = geom(8, 8, 16)
        patches = extract_patches(img, g)
        out = reassemble(patches, np.zeros((16, 16)), g, gamma=0.0)
        np.testing.assert_array_equal(out, img)

    def test_huge_gamma_returns_reference(self):
        rng = np.random.default_rng(1)
        img = rng.integers(0, 256, (12, 12)).astype(float)
        noisy = rng.integers(0, 256, (12, 12)).astype(float)
        g = geom(4, 2, 12)
        out = reassemble(extract_patches(img, g), noisy, g, gamma=1e12)
        assert np.max(np.abs(out - noisy)) < 1e-6

    def test_center_cover_multiplicity(self):
        g = geom(2, 1, 3)
        patches = np.ones((4, 4))
        out = reassemble(patches, np.zeros((3, 3)), g, gamma=1.0)
        assert out[1, 1] == pytest.approx((1 * 0 + 4 * 1) / (1 + 4))

    def test_uncovered_pixels_take_reference(self):
        # stride > patch side leaves gaps
        g = geom(2, 3, 5)
        noisy = np.full((5, 5), 9.0)
        patches = np.zeros((4, g.n_patches))
        out = reassemble(patches, noisy, g, gamma=0.0)
        assert out[0, 2] == 9.0
        assert out[0, 0] == 0.0

    def test_shape_mismatch(self):
        g = geom(2, 1, 3)
        with pytest.raises(GeometryMismatchError):
            reassemble(np.ones((4, 3)), np.zeros((3, 3)), g, gamma=0.0)
        with pytest.raises(GeometryMismatchError):
            reassemble(np.ones((4, 4)), np.zeros((4, 4)), g, gamma=0.0)

    def test_convex_combination_bounds(self):
        rng = np.random.default_rng(5)
        img = rng.integers(0, 256, (10, 10)).astype(float)
        noisy = rng.integers(0, 256, (10, 10)).astype(float)
        g = geom(3, 1, 10)
        patches = extract_patches(img, g)
        out = reassemble(patches, noisy, g, gamma=2.0)
        lo = np.minimum(img.min(), noisy.min()) - 1e-9
        hi = np.maximum(img.max(), noisy.max()) + 1e-9
        assert np.all(out >= lo) and np.all(out <= hi)


class TestCoverCounts:
    def test_total_mass(self):
        g = geom(3, 2, 9)
        counts = cover_counts(g)
        assert counts.sum() == g.n_patches * g.patch_dim

    @given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 3))
    @settings(deadline=None)
    def test_total_mass_property(self, side, stride, extra):
        size = side + stride * extra
        g = geom(side, stride, size)
        assert cover_counts(g).sum() == g.n_patches * g.patch_dim


class TestRoundTrip:
    @given(
        st.integers(1, 4),
        st.integers(1, 4),
        st.integers(0, 3),
        st.sampled_from([0.0, 1.0, 4.0]),
        st.integers(0, 2**31 - 1),
    )
    @settings(deadline=None, max_examples=40)
    def test_exact_round_trip(self, side, stride, extra, gamma, seed):
        size = side + stride * extra
        g = geom(side, stride, size)
        img = np.random.default_rng(seed).integers(0, 256, (size, size)).astype(float)
        out = reassemble(extract_patches(img, g), img, g, gamma=gamma)
        np.testing.assert_array_equal(out, img)
