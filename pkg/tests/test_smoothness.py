import numpy as np
import pytest

from anisofield.errors import ModelError
from anisofield.models import canonical_c, fbm, stein
from anisofield.simulate import Grid, multi_copy_field
from anisofield.smoothness import (cross_cov_matrix, cross_covariance,
                                   derivative_covariance, derivative_variance,
                                   ms_derivative_report, variogram_gradient,
                                   variogram_second)

SMOOTH = canonical_c(beta=(1.0, 2.0), gamma=4.0)  # H = (1.25, 2.5)


def test_report_smooth_model():
    report = ms_derivative_report(SMOOTH)
    assert report.exists == (True, True)
    assert report.ms_differentiable and report.sample_path_differentiable
    assert report.margins == (0.25, 1.5)
    assert all(v > 0 for v in report.derivative_variance)


def test_report_verdicts_only():
    report = ms_derivative_report(SMOOTH, variances=False)
    assert report.derivative_variance == (None, None)
    assert report.ms_differentiable


def test_report_rough_models():
    report = ms_derivative_report(fbm(0.5, 2))
    assert report.exists == (False, False)
    assert report.derivative_variance == (None, None)
    assert not report.ms_differentiable

    fractal = stein(c=(1.0, 1.0), a=(1.0, 1.0), alpha=(1.0, 1.0), nu=1.5)
    assert not ms_derivative_report(fractal, variances=False).ms_differentiable


def test_threshold_is_strict():
    # H_j crosses 1 exactly at gamma = 2 for beta = (2, 2)
    verdicts = []
    for gamma in (2.0 - 1e-6, 2.0, 2.0 + 1e-6):
        report = ms_derivative_report(canonical_c(beta=(2.0, 2.0), gamma=gamma),
                                      variances=False)
        verdicts.append(report.ms_differentiable)
    assert verdicts == [False, False, True]


def test_derivative_covariance_at_zero_is_the_variance():
    for axis in (0, 1):
        value = derivative_covariance(SMOOTH, axis, np.zeros(2))
        assert value == derivative_variance(SMOOTH, axis)


def test_derivative_covariance_even_and_bounded():
    rng = np.random.default_rng(30)
    dvar = derivative_variance(SMOOTH, 1)
    for _ in range(10):
        delta = rng.uniform(-1.0, 1.0, 2)
        value = derivative_covariance(SMOOTH, 1, delta)
        mirrored = derivative_covariance(SMOOTH, 1, -delta)
        assert mirrored == pytest.approx(value, rel=1e-12)
        assert abs(value) <= dvar * (1.0 + 1e-9)


def test_rough_axis_has_no_derivative():
    rough = fbm(0.5, 1)
    with pytest.raises(ModelError):
        derivative_variance(rough, 0)
    with pytest.raises(ModelError):
        derivative_covariance(rough, 0, np.zeros(1))
    with pytest.raises(ModelError):
        cross_covariance(rough, 0, np.zeros(1), np.ones(1))


def test_spectral_matches_finite_difference():
    dvar = derivative_variance(SMOOTH, 1)
    rng = np.random.default_rng(31)
    for _ in range(20):
        delta = rng.uniform(-1.0, 1.0, 2)
        spectral = derivative_covariance(SMOOTH, 1, delta)
        fd = 0.5 * variogram_second(SMOOTH, 1, delta)
        assert abs(spectral - fd) <= 0.01 * dvar


def test_gradient_is_odd():
    rng = np.random.default_rng(32)
    for _ in range(5):
        lag = rng.uniform(-1.0, 1.0, 2)
        forward = variogram_gradient(SMOOTH, 1, lag)
        backward = variogram_gradient(SMOOTH, 1, -lag)
        assert forward == pytest.approx(-backward, abs=1e-10)


def test_cross_covariance_identities():
    assert cross_covariance(SMOOTH, 1, np.zeros(2), np.zeros(2)) == 0.0

    t = np.array([0.5, 0.5])
    at_equal = cross_covariance(SMOOTH, 1, t, t)
    assert at_equal == pytest.approx(0.5 * variogram_gradient(SMOOTH, 1, t),
                                     abs=1e-12)
    assert abs(at_equal) > 1e-3  # the nonstationary signature

    rng = np.random.default_rng(33)
    for _ in range(5):
        s = rng.uniform(-1.0, 1.0, 2)
        t = rng.uniform(-1.0, 1.0, 2)
        total = cross_covariance(SMOOTH, 1, s, t) + cross_covariance(SMOOTH, 1, t, s)
        expected = 0.5 * (variogram_gradient(SMOOTH, 1, s)
                          + variogram_gradient(SMOOTH, 1, t))
        assert total == pytest.approx(expected, abs=1e-10)


def test_cross_cov_matrix_at_origin():
    matrix = cross_cov_matrix(SMOOTH, 1, np.zeros(2), np.zeros(2))
    assert matrix[0, 0] == 0.0
    assert matrix[0, 1] == 0.0
    assert matrix[1, 0] == 0.0
    assert matrix[1, 1] == pytest.approx(derivative_variance(SMOOTH, 1),
                                         rel=0.01)


def test_cross_cov_matrix_variances_nonnegative():
    rng = np.random.default_rng(34)
    for _ in range(5):
        s = rng.uniform(-1.0, 1.0, 2)
        matrix = cross_cov_matrix(SMOOTH, 1, s, s)
        assert matrix[0, 0] >= 0
        assert matrix[1, 1] >= 0


def test_stacked_cross_cov_is_psd():
    rng = np.random.default_rng(13)
    sites = rng.uniform(-1.0, 1.0, (3, 2))
    stacked = np.empty((6, 6))
    for i in range(3):
        for k in range(3):
            stacked[2 * i:2 * i + 2, 2 * k:2 * k + 2] = cross_cov_matrix(
                SMOOTH, 1, sites[i], sites[k])
    floor = float(np.linalg.eigvalsh(0.5 * (stacked + stacked.T)).min())
    assert floor >= -1e-8


def test_quotient_variance_scaling_on_simulated_fields():
    # H = (1.25, 0.5): difference quotients converge along the smooth
    # axis and blow up like 1/h along the rough one.
    model = canonical_c(beta=(2.5, 1.0), gamma=2.4)
    steps = [2.0**-k for k in (4, 5, 6, 7)]
    variances = {0: [], 1: []}
    for axis in (0, 1):
        for h in steps:
            spacing = [1.0, 1.0]
            shape = [1, 1]
            spacing[axis] = h
            shape[axis] = 33
            grid = Grid(origin=(0.0, 0.0), spacing=tuple(spacing),
                        shape=tuple(shape))
            fs = multi_copy_field(model, grid, lattice=512, channels=64,
                                  seed=5)
            quot = np.diff(fs.values, axis=axis) / h
            variances[axis].append(float(np.mean(quot**2)))
    smooth = variances[0]
    for a, b in zip(smooth, smooth[1:]):
        assert 0.5 < b / a < 2.0
    slope = np.polyfit(np.log(steps), np.log(variances[1]), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.2)
