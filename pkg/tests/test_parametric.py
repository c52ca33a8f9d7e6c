# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from singmc import events
from singmc.errors import DomainError, NumericalError
from singmc.estimate import Integrand, estimate_volterra
from singmc.eventing import EventDispatcher
from singmc.oracle import QuadSpec, quad_volterra
from singmc.parametric import (ParametricIntegrand, ThetaGrid, cholesky_with_jitter, estimate_parametric,
                               estimate_rho, sup_quantile)
from singmc.rng import RngStream
from singmc.sampling import sample_polygonal_beta
from singmc.specfun import AlphaVector, simplex_constant


def exp_family():
    return ParametricIntegrand(2, 1, lambda p, t: np.exp(-t[0] * (p[:, 0] + p[:, 1])))


def exp_oracle(theta, alpha):
    z = Integrand(2, lambda p: np.exp(-theta * (p[:, 0] + p[:, 1])))
    return quad_volterra(z, alpha, QuadSpec(32))


def test_theta_independent_constant_family():
    alpha = AlphaVector.of(0.5, 0.5)
    zfam = ParametricIntegrand(2, 1, lambda p, t: 1.0)
    report = estimate_parametric(zfam, alpha, ThetaGrid.of(0.0, 0.5, 1.0), 2000, 0.95, 1000, RngStream(1))
    assert report.q_hat == (simplex_constant(alpha),) * 3
    assert not report.covariance.any()
    assert report.band_halfwidth == 0.0
    assert report.sup_quantile == 0.0


def test_linear_family_on_the_unit_interval():
    zfam = ParametricIntegrand(1, 1, lambda p, t: t[0] * p[:, 0])
    report = estimate_parametric(zfam, AlphaVector.of(0.0), ThetaGrid.of(0.0, 0.5, 1.0), 10 ** 5, 0.95, 1000,
                                 RngStream(2))
    assert report.q_hat[0] == 0.0
    for q, expected, var in zip(report.q_hat, (0.0, 0.25, 0.5), np.diag(report.covariance)):
        assert abs(q - expected) <= 4.0 * math.sqrt(var / report.n_samples)


def test_exponential_family_matches_quadrature():
    alpha = AlphaVector.of(0.5, 0.5)
    grid = ThetaGrid.from_ranges([(0.0, 1.0, 11)])
    report = estimate_parametric(exp_family(), alpha, grid, 10 ** 5, 0.95, 2000, RngStream(3))
    assert len(report.q_hat) == 11
    for (theta,), q, var in zip(grid.points, report.q_hat, np.diag(report.covariance)):
        expected = exp_oracle(theta, alpha)
        # theta = 0 is a constant integrand, zero variance, the oracle agrees to rounding
        assert abs(q - expected) <= 4.0 * math.sqrt(var / report.n_samples) + 1e-12 * abs(expected)


def test_band_report_invariants():
    alpha = AlphaVector.of(0.5, 0.5)
    report = estimate_parametric(exp_family(), alpha, ThetaGrid.from_ranges([(0.0, 2.0, 5)]), 5000, 0.9, 1000,
                                 RngStream(4))
    np.testing.assert_array_equal(report.covariance, report.covariance.T)
    assert (np.diag(report.covariance) >= 0.0).all()
    assert report.band_halfwidth == report.sup_quantile / math.sqrt(report.n_samples)
    assert report.n_gaussian_draws == 1000
    assert report.confidence == 0.9
    assert report.lower[2] == report.q_hat[2] - report.band_halfwidth
    data = report.to_dict()
    assert data["covariance"] is None
    assert data["grid"] == [[0.0], [0.5], [1.0], [1.5], [2.0]]
    assert len(report.to_dict(include_covariance=True)["covariance"]) == 5


def test_covariance_diagonal_matches_the_estimate_module():
    alpha = AlphaVector.of(0.5, 0.5)
    thetas = (0.0, 0.3, 1.7)
    n_samples = 5000  # one batch, both runs see the same draws
    report = estimate_parametric(exp_family(), alpha, ThetaGrid.of(*thetas), n_samples, 0.95, 1000, RngStream(5))
    for j, theta in enumerate(thetas):
        z = Integrand(2, lambda p, th=theta: np.exp(-th * (p[:, 0] + p[:, 1])))
        single = estimate_volterra(z, alpha, n_samples, 0.95, RngStream(5))
        assert report.q_hat[j] == pytest.approx(single.estimate, rel=1e-10)
        # population covariance vs the sample variance behind the standard error
        assert report.covariance[j, j] == pytest.approx(single.std_error ** 2 * (n_samples - 1), rel=1e-10)


def test_gaussian_draws_are_reproducible():
    alpha = AlphaVector.of(0.2, 0.6)
    grid = ThetaGrid.from_ranges([(0.0, 1.0, 4)])
    first = estimate_parametric(exp_family(), alpha, grid, 3000, 0.95, 1500, RngStream(6))
    second = estimate_parametric(exp_family(), alpha, grid, 3000, 0.95, 1500, RngStream(6))
    assert first.sup_quantile == second.sup_quantile
    assert first.q_hat == second.q_hat


def test_adjacent_estimates_are_bounded_by_the_integrand_spread():
    alpha = AlphaVector.of(0.5, 0.5)
    grid = ThetaGrid.from_ranges([(0.0, 1.0, 6)])
    n_samples = 4000
    report = estimate_parametric(exp_family(), alpha, grid, n_samples, 0.95, 1000, RngStream(7))
    points = sample_polygonal_beta(alpha, RngStream(7), size=n_samples)
    values = np.column_stack([exp_family()(points, theta) for theta in grid.points])
    spread = np.abs(np.diff(values, axis=1)).max(axis=0)
    gaps = np.abs(np.diff(report.q_hat))
    assert (gaps <= report.constant * spread * (1.0 + 1e-12)).all()


def test_too_few_gaussian_draws():
    with pytest.raises(DomainError):
        estimate_parametric(exp_family(), AlphaVector.of(0.5, 0.5), ThetaGrid.of(0.0, 1.0), 100, 0.95, 999,
                            RngStream(1))


def test_dimensions_must_match():
    with pytest.raises(DomainError):
        estimate_parametric(exp_family(), AlphaVector.of(0.5, 0.5), ThetaGrid(((0.0, 1.0),)), 100, 0.95, 1000,
                            RngStream(1))
    with pytest.raises(DomainError):
        estimate_parametric(exp_family(), AlphaVector.of(0.5), ThetaGrid.of(0.0), 100, 0.95, 1000, RngStream(1))


def test_sup_quantile_of_one_gaussian():
    value = sup_quantile(np.array([[4.0]]), 0.95, 200000, RngStream(8))
    assert value == pytest.approx(2.0 * 1.959963984540054, rel=0.02)


def test_singular_covariance_is_factored_with_jitter():
    factor = cholesky_with_jitter(np.array([[1.0, 1.0], [1.0, 1.0]]))
    np.testing.assert_allclose(factor @ factor.T, [[1.0, 1.0], [1.0, 1.0]], atol=1e-6)


def test_indefinite_covariance_fails_after_escalation():
    jitters = []

    def on_jitter(evt_id, jitter):
        jitters.append(jitter)

    dispatcher = EventDispatcher()
    dispatcher.set_handler(events.evt_id_jitter_escalated, on_jitter)
    with pytest.raises(NumericalError) as info:
        cholesky_with_jitter(np.array([[1.0, 2.0], [2.0, 1.0]]), dispatcher)
    assert "increase the sample count" in str(info.value)
    assert len(jitters) == 6
    assert jitters[-1] == pytest.approx(1e-6)


def test_grid_from_ranges_varies_the_first_dimension_slowest():
    grid = ThetaGrid.from_ranges([(0.0, 1.0, 3), (5.0, 6.0, 2)])
    assert grid.points == ((0.0, 5.0), (0.0, 6.0), (0.5, 5.0), (0.5, 6.0), (1.0, 5.0), (1.0, 6.0))
    assert grid.m == 6
    assert grid.dim == 2
    assert ThetaGrid.from_ranges([(0.25, 9.0, 1)]).points == ((0.25,),)


@pytest.mark.parametrize("points", [(), ((0.0,), (0.0,)), ((0.0,), (1.0, 2.0)), ((float("nan"),),)])
def test_grid_invariants(points):
    with pytest.raises(DomainError):
        ThetaGrid(points)


def test_rho_of_identical_parameters_is_zero():
    grid = ThetaGrid.of(0.2, 0.2 + 1e-3, 1.0)
    probe = np.random.default_rng(0).dirichlet([1.0, 1.0, 1.0], size=50)[:, :2].cumsum(axis=1)
    rho = estimate_rho(exp_family(), grid, probe)
    np.testing.assert_array_equal(np.diag(rho.matrix), 0.0)
    np.testing.assert_array_equal(rho.matrix, rho.matrix.T)
    assert rho.n_skipped == 0


def test_rho_is_at_most_two():
    zfam = ParametricIntegrand(2, 1, lambda p, t: np.sin(7.0 * t[0] * p[:, 0]) - p[:, 1] * t[0])
    probe = np.random.default_rng(1).dirichlet([1.0, 1.0, 1.0], size=200)[:, :2].cumsum(axis=1)
    rho = estimate_rho(zfam, ThetaGrid.from_ranges([(-2.0, 2.0, 9)]), probe)
    assert (rho.matrix <= 2.0 + 1e-12).all()


def test_rho_of_a_constant_in_s_family():
    zfam = ParametricIntegrand(1, 1, lambda p, t: t[0])
    rho = estimate_rho(zfam, ThetaGrid.of(0.0, 1.0), [[0.3], [0.7]])
    assert rho.matrix[0, 1] == 1.0


def test_rho_skips_points_where_the_family_vanishes():
    zfam = ParametricIntegrand(1, 1, lambda p, t: t[0] * (p[:, 0] - 0.5))
    rho = estimate_rho(zfam, ThetaGrid.of(1.0, 2.0), [[0.5], [0.75]])
    assert rho.n_skipped == 1
    assert rho.matrix[0, 1] == pytest.approx(0.5)


def test_rho_fails_when_every_probe_is_skipped():
    zfam = ParametricIntegrand(1, 1, lambda p, t: 0.0)
    with pytest.raises(NumericalError):
        estimate_rho(zfam, ThetaGrid.of(1.0, 2.0), [[0.5], [0.75]])
    with pytest.raises(DomainError):
        estimate_rho(zfam, ThetaGrid.of(1.0, 2.0), [])


@pytest.mark.slow
def test_uniform_band_covers_the_quadrature_curve():
    alpha = AlphaVector.of(0.5, 0.5)
    grid = ThetaGrid.from_ranges([(0.0, 1.0, 11)])
    truth = [exp_oracle(theta, alpha) for (theta,) in grid.points]
    covered = 0
    for replication in range(200):
        report = estimate_parametric(exp_family(), alpha, grid, 10 ** 4, 0.95, 10000, RngStream(5000 + replication))
        covered += report.covers(truth)
    assert covered >= 0.88 * 200
