import numpy as np
import pytest

from curvesmith.curves import (
    LEVELS,
    curve_quantile,
    empirical_cdf,
    monotone_project,
    remap_luminance,
    sample_curve,
    validate_curve,
)
from curvesmith.errors import InvalidInputError


def lab_from_l(values, shape=None):
    """Build a Lab image whose L channel is `values`; a = 7, b = -3."""
    L = np.asarray(values, dtype=np.float64)
    if shape is not None:
        L = L.reshape(shape)
    if L.ndim == 1:
        L = L.reshape(1, -1)
    img = np.zeros(L.shape + (3,))
    img[..., 0] = L
    img[..., 1] = 7.0
    img[..., 2] = -3.0
    return img


class TestEmpiricalCdf:
    def test_constant_image_point_mass(self):
        cdf = empirical_cdf(lab_from_l([50.0, 50.0, 50.0, 50.0]))
        assert np.array_equal(cdf.support, [50.0])
        assert np.array_equal(cdf.cum, [1.0])

    def test_two_pixel_extremes(self):
        cdf = empirical_cdf(lab_from_l([0.0, 100.0]))
        assert np.array_equal(cdf.support, [0.0, 100.0])
        assert np.array_equal(cdf.cum, [0.5, 1.0])

    def test_four_pixel_counts(self):
        cdf = empirical_cdf(lab_from_l([10.0, 10.0, 20.0, 40.0]))
        assert np.array_equal(cdf.support, [10.0, 20.0, 40.0])
        assert np.array_equal(cdf.cum, [0.5, 0.75, 1.0])

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            empirical_cdf(np.zeros((0, 0, 3)))


class TestSampleCurve:
    def test_constant_image_step(self):
        values = sample_curve(empirical_cdf(lab_from_l([50.0] * 4)))
        expected = np.where(LEVELS < 50.0, 0.0, 1.0)
        assert np.array_equal(values, expected)

    def test_uniform_lattice(self):
        # one pixel per level 0, 2, ..., 100
        values = sample_curve(empirical_cdf(lab_from_l(LEVELS)))
        assert np.allclose(values[:-1], (np.arange(50) + 1) / 51.0)
        assert values[-1] == 1.0

    def test_four_pixel_step_cdf(self):
        # oracle: enumerate the right-continuous step CDF at all 51 levels
        values = sample_curve(empirical_cdf(lab_from_l([10.0, 10.0, 20.0, 40.0])))
        expected = np.zeros(51)
        for i, level in enumerate(LEVELS):
            if level >= 40:
                expected[i] = 1.0
            elif level >= 20:
                expected[i] = 0.75
            elif level >= 10:
                expected[i] = 0.5
        assert np.array_equal(values, expected)

    def test_output_always_valid(self, rng):
        for _ in range(20):
            img = lab_from_l(rng.random(rng.integers(1, 200)) * 100)
            values = sample_curve(empirical_cdf(img))
            validate_curve(values)


class TestMonotoneProject:
    def test_identity_on_valid_curve(self, rng):
        from conftest import random_curve
        curve = random_curve(rng)
        assert np.array_equal(monotone_project(curve), curve)

    def test_dip_raised(self):
        raw = np.linspace(0, 1, 51)
        raw[1] = 0.4
        raw[0] = 0.5
        out = monotone_project(raw)
        assert out[1] == 0.5

    def test_all_negative_clamps(self):
        out = monotone_project(np.full(51, -0.1))
        assert np.array_equal(out[:-1], np.zeros(50))
        assert out[-1] == 1.0

    def test_idempotent(self, rng):
        raw = rng.normal(0.5, 0.5, 51)
        once = monotone_project(raw)
        assert np.array_equal(monotone_project(once), once)

    def test_non_finite_rejected(self):
        raw = np.zeros(51)
        raw[3] = np.inf
        with pytest.raises(InvalidInputError):
            monotone_project(raw)


class TestCurveQuantile:
    def test_flat_segment_resolves_left(self):
        curve = np.concatenate([np.linspace(0, 0.5, 11), np.full(30, 0.5), np.linspace(0.5, 1, 10)])
        curve = monotone_project(curve)
        # G reaches 0.5 at level 20 and stays flat through level 80
        assert curve_quantile(curve, 0.5) == pytest.approx(20.0)

    def test_linear_interpolation(self):
        curve = np.arange(51) / 50.0
        assert curve_quantile(curve, 0.55) == pytest.approx(55.0)


class TestRemapLuminance:
    def test_remap_to_own_curve_barely_moves(self, rng):
        img = lab_from_l(rng.random(10000) * 100, shape=(100, 100))
        own = sample_curve(empirical_cdf(img))
        out = remap_luminance(img, own)
        disp = np.abs(out[..., 0] - img[..., 0])
        assert np.mean(disp <= 1.0) >= 0.99

    def test_constant_image_maps_to_first_saturation_level(self):
        img = lab_from_l([30.0] * 9, shape=(3, 3))
        target = np.where(LEVELS >= 60.0, 1.0, LEVELS / 100.0)
        target = monotone_project(target)
        out = remap_luminance(img, target)
        # inf{level : G(level) = 1} = 60
        assert np.allclose(out[..., 0], 60.0)

    def test_uniform_target_on_uniform_image_is_near_identity(self, rng):
        img = lab_from_l(rng.random(8000) * 100, shape=(80, 100))
        target = np.arange(51) / 50.0
        out = remap_luminance(img, target)
        assert np.max(np.abs(out[..., 0] - img[..., 0])) <= 2.0

    def test_ab_channels_byte_identical(self, rng):
        img = lab_from_l(rng.random(400) * 100, shape=(20, 20))
        img[..., 1] = rng.normal(size=(20, 20))
        img[..., 2] = rng.normal(size=(20, 20))
        from conftest import random_curve
        out = remap_luminance(img, random_curve(rng))
        assert out[..., 1].tobytes() == img[..., 1].tobytes()
        assert out[..., 2].tobytes() == img[..., 2].tobytes()

    def test_ks_distance_to_target_bounded(self, rng):
        from conftest import random_curve
        for _ in range(10):
            img = lab_from_l(rng.random(3600) * 100, shape=(60, 60))
            target = random_curve(rng)
            out = remap_luminance(img, target)
            achieved = sample_curve(empirical_cdf(out))
            n_distinct = np.unique(img[..., 0]).size
            assert np.max(np.abs(achieved - target)) <= max(2 / 51, 2 / n_distinct)

    def test_monotone_consistency(self, rng):
        from conftest import random_curve
        img = lab_from_l(rng.random(900) * 100, shape=(30, 30))
        out = remap_luminance(img, random_curve(rng))
        order = np.argsort(img[..., 0].ravel(), kind="stable")
        mapped = out[..., 0].ravel()[order]
        assert np.all(np.diff(mapped) >= 0)

    def test_output_within_range(self, rng):
        from conftest import random_curve
        img = lab_from_l(rng.random(100) * 100, shape=(10, 10))
        out = remap_luminance(img, random_curve(rng))
        assert np.all(out[..., 0] >= 0) and np.all(out[..., 0] <= 100)
