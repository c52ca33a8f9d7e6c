# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest
from scipy import special

from singmc.errors import DomainError, UnsupportedError
from singmc.estimate import Integrand
from singmc.oracle import (QuadSpec, SCHEME_POWER_SUBSTITUTION, dirichlet_moment, gauss_jacobi_01,
                           power_substitution_01, quad_ball, quad_ball_with_error, quad_volterra,
                           quad_volterra_with_error, stick_breaking_points)
from singmc.specfun import AlphaVector, BallExponents, ball_constant, simplex_constant


def one(n):
    return Integrand.constant(1.0, n)


def monomial(powers):
    exps = np.asarray(powers, dtype=float)
    return Integrand(len(powers), lambda p: np.prod(p ** exps, axis=1))


def test_constant_integrand_half_exponents():
    assert quad_volterra(one(2), AlphaVector.of(0.5, 0.5), QuadSpec(32)) == pytest.approx(math.pi, rel=1e-8)


def test_second_coordinate_half_exponents():
    z = Integrand(2, lambda p: p[:, 1])
    assert quad_volterra(z, AlphaVector.of(0.5, 0.5), QuadSpec(32)) == pytest.approx(math.pi / 2.0, rel=1e-8)


def test_two_nodes_integrate_one():
    assert quad_volterra(one(1), AlphaVector.of(0.0), QuadSpec(2)) == pytest.approx(1.0, rel=1e-14)


def test_oracle_triangle():
    draw = np.random.default_rng(50)
    for trial in range(50):
        n = 1 + trial % 3
        alpha = AlphaVector(tuple(draw.uniform(-0.9, 0.95, size=n)))
        k = simplex_constant(alpha)
        assert quad_volterra(one(n), alpha) == pytest.approx(k, rel=1e-7)
        assert k * dirichlet_moment(alpha, (0,) * n) == pytest.approx(k, rel=1e-12)


def test_doubling_nodes_changes_smooth_integrals_little():
    draw = np.random.default_rng(51)
    for trial in range(12):
        n = 1 + trial % 3
        alpha = AlphaVector(tuple(draw.uniform(-0.5, 0.95, size=n)))
        z = Integrand(n, lambda p: np.exp(-p.sum(axis=1)))
        value, error = quad_volterra_with_error(z, alpha, QuadSpec(16))
        assert error < 1e-7 * abs(value)


@pytest.mark.parametrize("alpha, powers", [
    ((0.5, 0.5), (0, 1)),
    ((0.3, -0.2), (2, 1)),
    ((0.9, 0.1, 0.6), (1, 0, 2)),
    ((0.0, 0.0, 0.0), (1, 1, 1)),
])
def test_polynomials_match_dirichlet_moments(alpha, powers):
    alpha = AlphaVector(alpha)
    expected = dirichlet_moment(alpha, powers, scaled=True)
    assert quad_volterra(monomial(powers), alpha, QuadSpec(16)) == pytest.approx(expected, rel=1e-10)


def test_power_substitution_scheme_agrees():
    z = Integrand(2, lambda p: p[:, 1])
    value = quad_volterra(z, AlphaVector.of(0.5, 0.5), QuadSpec(64, SCHEME_POWER_SUBSTITUTION))
    assert value == pytest.approx(math.pi / 2.0, rel=1e-4)


@pytest.mark.parametrize("a, b", [(-0.5, -0.5), (0.0, 0.0), (-0.5, 0.0)])
def test_power_substitution_rule(a, b):
    v, w = power_substitution_01(32, a, b)
    assert ((v > 0.0) & (v < 1.0)).all()
    assert np.sum(w) == pytest.approx(special.beta(a + 1.0, b + 1.0), rel=1e-10)
    assert np.sum(w * v * v) == pytest.approx(special.beta(a + 3.0, b + 1.0), rel=1e-10)


@pytest.mark.parametrize("a, b", [(-0.5, -0.5), (0.3, 0.3), (-0.9, 0.7), (2.0, -0.4), (0.0, 0.0)])
def test_gauss_jacobi_rule(a, b):
    v, w = gauss_jacobi_01(20, a, b)
    assert ((v > 0.0) & (v < 1.0)).all()
    assert (w > 0.0).all()
    assert np.sum(w) == pytest.approx(special.beta(a + 1.0, b + 1.0), rel=1e-12)
    # exact for polynomials of degree < 2m
    assert np.sum(w * v ** 7) == pytest.approx(special.beta(a + 8.0, b + 1.0), rel=1e-11)
    if a == b:
        np.testing.assert_allclose(v + v[::-1], 1.0, atol=1e-13)


def test_gauss_jacobi_rejects_exponents():
    with pytest.raises(DomainError):
        gauss_jacobi_01(4, -1.0, 0.0)


def test_stick_breaking_stays_in_the_simplex():
    v = np.random.default_rng(0).uniform(size=(100, 3))
    s = stick_breaking_points(v)
    assert (np.diff(s, axis=1) > 0.0).all()
    assert ((s > 0.0) & (s < 1.0)).all()
    np.testing.assert_allclose(s[:, 0], v[:, 0])


def test_disc_area():
    assert quad_ball(one(2), BallExponents.of(0.0, 0.0)) == pytest.approx(math.pi, abs=1e-10)


def test_disc_second_moment():
    z = Integrand(2, lambda p: p[:, 0] ** 2)
    assert quad_ball(z, BallExponents.of(0.0, 0.0), QuadSpec(32)) == pytest.approx(math.pi / 4.0, abs=1e-8)


def test_singular_ball_constant():
    A = BallExponents.of(-0.5, -0.5)
    assert quad_ball(one(2), A, QuadSpec(64)) == pytest.approx(ball_constant(A), rel=1e-6)


def test_ball_triangle():
    draw = np.random.default_rng(52)
    for trial in range(20):
        n = 1 + trial % 2
        A = BallExponents(tuple(draw.uniform(-0.9, 2.0, size=n)))
        assert quad_ball(one(n), A) == pytest.approx(ball_constant(A), rel=1e-6)


def test_one_dimensional_ball_uses_both_signs():
    z = Integrand(1, lambda p: np.where(p[:, 0] > 0.0, 1.0, 0.0))
    A = BallExponents.of(0.4)
    value, error = quad_ball_with_error(z, A)
    assert value == pytest.approx(0.5 * ball_constant(A), rel=1e-12)
    assert error < 1e-12


def test_odd_integrand_on_the_disc_vanishes():
    z = Integrand(2, lambda p: p[:, 0] * p[:, 1] ** 2)
    assert quad_ball(z, BallExponents.of(-0.3, 0.5)) == pytest.approx(0.0, abs=1e-12)


def test_dimension_caps():
    with pytest.raises(UnsupportedError):
        quad_volterra(one(4), AlphaVector((0.0,) * 4))
    with pytest.raises(UnsupportedError):
        quad_ball(one(3), BallExponents((0.0,) * 3))


def test_arity_must_match():
    with pytest.raises(DomainError):
        quad_volterra(one(1), AlphaVector.of(0.0, 0.0))


@pytest.mark.parametrize("alpha, powers, expected", [
    ((0.5, 0.5), (0, 0), 1.0),
    ((0.5, 0.5), (0, 1), 0.5),
    ((0.0,), (1,), 0.5),
    ((0.0,), (3,), 0.25),
    ((0.0, 0.0), (1, 1), 1.0 / 4.0),  # E[s_1 s_2] for sorted uniforms
])
def test_dirichlet_moment(alpha, powers, expected):
    assert dirichlet_moment(AlphaVector(alpha), powers) == pytest.approx(expected, rel=1e-14)


def test_scaled_moment_is_the_integral():
    alpha = AlphaVector.of(0.5, 0.5)
    assert dirichlet_moment(alpha, (0, 1), scaled=True) == pytest.approx(math.pi / 2.0, rel=1e-14)


@pytest.mark.parametrize("powers", [(1,), (1, -1), (0.5, 1)])
def test_dirichlet_moment_rejects_powers(powers):
    with pytest.raises(DomainError):
        dirichlet_moment(AlphaVector.of(0.5, 0.5), powers)


@pytest.mark.parametrize("nodes, scheme", [(1, "gauss_jacobi"), (2.5, "gauss_jacobi"), (8, "simpson")])
def test_quad_spec_invariants(nodes, scheme):
    with pytest.raises(DomainError):
        QuadSpec(nodes, scheme)
