import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decimstat import (
    BinaryImage,
    SinglePhaseError,
    autocovariance_curve,
    characterize,
    coarseness,
    lineal_path,
    lineal_path_curve,
    pore_distances,
    pore_size_curve,
    pore_size_histogram,
    specific_interface_area,
    surface_fraction,
    two_point_correlation,
)
from decimstat.descriptors import _line_segment_counts

import oracles
from conftest import random_image, two_phase_image

image_params = st.tuples(st.integers(0, 10_000), st.integers(4, 24), st.integers(4, 24),
                         st.sampled_from([0.2, 0.5, 0.8]))


class TestTwoPoint:
    def test_all_ones(self):
        img = BinaryImage(np.ones((8, 8), dtype=np.uint8))
        assert np.allclose(two_point_correlation(img, 1), 1.0)

    def test_checkerboard(self, checkerboard):
        s2 = two_point_correlation(checkerboard, 0)
        assert s2[1] == 0.0
        assert s2[2] == 0.5

    def test_zero_lag_is_phi(self):
        for seed in range(5):
            img = random_image(seed)
            for j in (0, 1):
                assert two_point_correlation(img, j)[0] == surface_fraction(img, j)

    @given(params=image_params, periodic=st.booleans())
    @settings(max_examples=40, deadline=None)
    def test_matches_oracle(self, params, periodic):
        seed, rows, cols, p = params
        img = random_image(seed, rows, cols, p)
        n_max = min(rows, cols) // 2
        got = two_point_correlation(img, 1, periodic=periodic, n_max=n_max)
        want = oracles.two_point_oracle(img.pixels, 1, n_max, periodic)
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


class TestLinealPath:
    def test_all_ones(self):
        img = BinaryImage(np.ones((8, 8), dtype=np.uint8))
        assert np.allclose(lineal_path_curve(img, 1).values, 1.0)

    def test_single_row_pattern(self):
        # one periodic line 1,1,0,0: L(0) counts 2 cells, L(1) only the
        # segment starting at index 0
        lines = np.array([[1, 1, 0, 0]], dtype=bool)
        counts = _line_segment_counts(lines, 2, periodic=True)
        assert counts.tolist() == [2, 1, 0]

    def test_wraparound_run(self):
        lines = np.array([[1, 0, 1, 1]], dtype=bool)
        counts = _line_segment_counts(lines, 2, periodic=True)
        assert counts.tolist() == [3, 2, 1]
        counts_np = _line_segment_counts(lines, 2, periodic=False)
        assert counts_np.tolist() == [3, 1, 0]

    def test_full_line(self):
        lines = np.ones((2, 4), dtype=bool)
        assert _line_segment_counts(lines, 2, periodic=True).tolist() == [8, 8, 8]
        assert _line_segment_counts(lines, 2, periodic=False).tolist() == [8, 6, 4]

    @given(params=image_params, periodic=st.booleans())
    @settings(max_examples=40, deadline=None)
    def test_matches_oracle(self, params, periodic):
        seed, rows, cols, p = params
        img = random_image(seed, rows, cols, p)
        n_max = min(rows, cols) // 2
        got = lineal_path(img, 0, periodic=periodic, n_max=n_max)
        want = oracles.lineal_path_oracle(img.pixels, 0, n_max, periodic)
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    def test_zero_lag_exactly_phi(self):
        for seed in range(5):
            img = random_image(seed, 12, 20)
            for j in (0, 1):
                assert lineal_path(img, j)[0] == surface_fraction(img, j)

    @given(params=image_params)
    @settings(max_examples=25, deadline=None)
    def test_normalized_monotone_in_unit_interval(self, params):
        seed, rows, cols, p = params
        img = two_phase_image(seed, rows, cols, p)
        values = lineal_path_curve(img, 1).values
        assert values[0] == 1.0
        assert np.all(np.diff(values) <= 1e-12)
        assert np.all((values >= 0) & (values <= 1))


class TestPoreSize:
    def test_stripes_width_four(self):
        # vertical stripes: 4 columns of phase 1, 4 of phase 0, periodic
        pixels = np.zeros((8, 8), dtype=np.uint8)
        pixels[:, :4] = 1
        img = BinaryImage(pixels)
        d = np.sort(pore_distances(img, 1))
        assert d.tolist() == sorted([1, 1, 2, 2] * 8)
        hist = pore_size_histogram(img, 1)
        assert hist[0] == 0.5 and hist[1] == 0.5
        curve = pore_size_curve(img, 1)
        assert curve.values[0] == 1.0
        assert curve.values[1] == 1.0

    @given(params=image_params, periodic=st.booleans())
    @settings(max_examples=30, deadline=None)
    def test_distances_match_oracle(self, params, periodic):
        seed, rows, cols, p = params
        img = two_phase_image(seed, rows, cols, p)
        got = np.sort(pore_distances(img, 1, periodic=periodic))
        want = np.sort(oracles.pore_distance_oracle(img.pixels, 1, periodic))
        np.testing.assert_allclose(got, want, atol=1e-9)

    def test_first_bin_normalization(self):
        for seed in range(5):
            img = two_phase_image(seed)
            for j in (0, 1):
                assert pore_size_curve(img, j).values[0] == 1.0

    def test_single_phase_rejected(self):
        img = BinaryImage(np.ones((4, 4), dtype=np.uint8))
        with pytest.raises(SinglePhaseError):
            pore_size_curve(img, 1)


class TestAutocovariance:
    def test_zero_lag_exactly_one(self):
        for seed in range(5):
            img = two_phase_image(seed, 18, 10, p=0.3)
            for j in (0, 1):
                assert autocovariance_curve(img, j).values[0] == 1.0

    def test_checkerboard(self, checkerboard):
        assert autocovariance_curve(checkerboard, 0).values[2] == pytest.approx(1.0)

    @given(params=image_params)
    @settings(max_examples=25, deadline=None)
    def test_phase_symmetry_and_bounds(self, params):
        seed, rows, cols, p = params
        img = two_phase_image(seed, rows, cols, p)
        f0 = autocovariance_curve(img, 0).values
        f1 = autocovariance_curve(img, 1).values
        np.testing.assert_allclose(f0, f1, atol=1e-12)
        assert np.all(np.abs(f0) <= 1 + 1e-9)

    def test_single_phase_rejected(self):
        img = BinaryImage(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(SinglePhaseError):
            autocovariance_curve(img, 0)


class TestInterfaceArea:
    def test_single_phase_zero(self):
        assert specific_interface_area(BinaryImage(np.ones((5, 5), dtype=np.uint8))) == 0.0

    def test_checkerboard(self, checkerboard):
        assert specific_interface_area(checkerboard) == 2.0

    def test_stripes(self):
        # width-2 stripes: 4 differing column adjacencies per row
        pixels = np.zeros((8, 8), dtype=np.uint8)
        pixels[:, ::4] = 1
        pixels[:, 1::4] = 1
        img = BinaryImage(pixels)
        assert specific_interface_area(img) == 0.5
        assert specific_interface_area(img) == oracles.interface_oracle(pixels, True)
        # width-1 stripes: every column adjacency differs
        narrow = np.zeros((8, 8), dtype=np.uint8)
        narrow[:, ::2] = 1
        assert specific_interface_area(BinaryImage(narrow)) == 1.0

    @given(params=image_params, periodic=st.booleans())
    @settings(max_examples=25, deadline=None)
    def test_matches_oracle(self, params, periodic):
        seed, rows, cols, p = params
        img = random_image(seed, rows, cols, p)
        got = specific_interface_area(img, periodic=periodic)
        assert got == pytest.approx(oracles.interface_oracle(img.pixels, periodic), abs=1e-12)


class TestCoarseness:
    def test_pixel_window_is_one(self):
        for seed in range(5):
            assert coarseness(two_phase_image(seed), 0).value == 1.0

    def test_checkerboard_window_two(self):
        pixels = (np.indices((8, 8)).sum(axis=0) % 2).astype(np.uint8)
        assert coarseness(BinaryImage(pixels), 1).value == 0.0

    def test_whole_image_window(self):
        img = two_phase_image(3, 16, 16)
        assert coarseness(img, 4).value == pytest.approx(0.0, abs=1e-12)

    def test_phase_choice_irrelevant(self):
        # spread of local fractions is identical for the two phases
        img = two_phase_image(7, 16, 16, p=0.3)
        c = coarseness(img, 2)
        comp = coarseness(img.complement(), 2)
        assert c.value == pytest.approx(comp.value, abs=1e-12)

    def test_divisibility_enforced(self):
        with pytest.raises(ValueError):
            coarseness(two_phase_image(0, 6, 6), 2)


class TestCharacterize:
    def test_curve_spacing_tracks_pixel_size(self):
        img = two_phase_image(5, 16, 16)
        img2 = BinaryImage(img.pixels[:8, :8], step=1, pixel_size=2)
        if img2.pixels.min() == img2.pixels.max():
            pytest.skip("degenerate draw")
        desc = characterize(img2)
        curve = desc.curves[(1, 0)]
        assert np.all(np.diff(curve.distances) == 2)
        assert curve.max_index == 4
        assert desc.step == 1

    def test_rejects_single_phase(self):
        with pytest.raises(SinglePhaseError):
            characterize(BinaryImage(np.zeros((8, 8), dtype=np.uint8)))
