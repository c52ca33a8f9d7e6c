# -*- coding: utf-8 -*-
"""
Exact random variates for the singular densities.

    power law          density (1 - a) x^-a on (0, 1), inverse CDF u^(1 / (1 - a))
    beta(a, b)         G_a / (G_a + G_b) from two gamma variates, arcsine inverse CDF when a = b = 1/2
    polygonal beta     density R_alpha(s) / K_S(alpha) on 0 < s_1 < ... < s_n < 1
    ball beta          density |x|^A / K_B(A) on the unit ball
    uniform simplex    sorted uniforms, density n! on the ordered simplex

The polygonal beta law has two independent constructions:

    chain       kappa_n = U^(1 / b_n), kappa_k = kappa_k+1 * Beta(b_k, 1 - alpha_k+1) for k = n-1 .. 1
                where b_k = sum_{j <= k} (1 - alpha_j); the last coordinate has the power law x^(b_n - 1)
                and the ratio of two neighbours is beta distributed, independent of the outer coordinate
    increments  s_k = (G_1 + ... + G_k) / (G_1 + ... + G_n+1) with G_k ~ Gamma(1 - alpha_k), G_n+1 ~ Gamma(1)

Gamma variates come from numpy (Marsaglia-Tsang squeeze, shape < 1 boosted by U^(1/a)).

The supports are open. A generated point on the boundary, or with two coordinates equal after rounding, is
re-drawn; every sampler takes an optional size and then returns an array of shape (size, n).

"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from singmc import events
from singmc.errors import DomainError, NumericalError
from singmc.eventing import dispatch
from singmc.featureswitches import Features
from singmc.rng import RngStream
from singmc.settings import Settings
from singmc.specfun import AlphaVector, BallExponents

logger = logging.getLogger(__name__)
logger.debug("importing...")

METHOD_CHAIN = "chain"
METHOD_INCREMENTS = "increments"
METHODS = (METHOD_CHAIN, METHOD_INCREMENTS)


@dataclass(frozen=True)
class SimplexPoint:
    s: Tuple[float, ...]

    def __post_init__(self):
        s = tuple(float(v) for v in self.s)
        if not in_simplex(np.asarray(s)[None, :])[0]:
            raise DomainError(f"{s} is not in the open ordered simplex 0 < s_1 < ... < s_n < 1")
        object.__setattr__(self, "s", s)

    def __len__(self):
        return len(self.s)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.s, dtype=dtype)


@dataclass(frozen=True)
class BallPoint:
    x: Tuple[float, ...]

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        if not in_ball(np.asarray(x)[None, :])[0]:
            raise DomainError(f"{x} is not in the closed unit ball")
        object.__setattr__(self, "x", x)

    def __len__(self):
        return len(self.x)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.x, dtype=dtype)


def in_simplex(points: np.ndarray) -> np.ndarray:
    """Row mask of 0 < s_1 < ... < s_n < 1."""
    points = np.asarray(points, dtype=float)
    finite = np.isfinite(points).all(axis=1)
    with np.errstate(invalid="ignore"):
        ordered = (np.diff(points, axis=1) > 0.0).all(axis=1)
        inside = (points[:, 0] > 0.0) & (points[:, -1] < 1.0)
    return finite & ordered & inside


def in_ball(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.isfinite(points).all(axis=1) & ((points * points).sum(axis=1) <= 1.0)


def redraw(name, draw, accept, size, dispatcher=None):
    """Draw size rows, re-drawing the rejected ones until all pass or the round limit is hit."""
    count = 1 if size is None else int(size)
    out = draw(count)
    bad = ~accept(out)
    rounds = 0
    while bad.any():
        rounds += 1
        if rounds > Settings.max_redraw_rounds:
            raise NumericalError(f"{name}: {int(bad.sum())} points stay on the support boundary after "
                                 f"{Settings.max_redraw_rounds} re-draw rounds; the exponents are too close "
                                 f"to the integrability limit for double precision")
        idx = np.flatnonzero(bad)
        dispatch(dispatcher, events.evt_id_boundary_redraw, name, idx.size)
        out[idx] = draw(idx.size)
        bad[idx] = ~accept(out[idx])
    if size is None:
        return out[0]
    return out


def _open_interval(x):
    x = np.asarray(x)
    mask = np.isfinite(x) & (x > 0.0) & (x < 1.0)
    if mask.ndim > 1:
        mask = mask.all(axis=tuple(range(1, mask.ndim)))
    return mask


def power_inverse_cdf(alpha1, u):
    """F^-1(u) = u^(1 / (1 - alpha1)) of the power law with density (1 - alpha1) x^-alpha1."""
    return np.power(u, 1.0 / (1.0 - alpha1))


def arcsine_inverse_cdf(u):
    """Inverse CDF of Beta(1/2, 1/2): 0.5 + 0.5 sin(pi (u - 1/2))."""
    return 0.5 + 0.5 * np.sin(np.pi * (np.asarray(u) - 0.5))


def _check_exponent(alpha1):
    alpha1 = float(alpha1)
    if not (math.isfinite(alpha1) and alpha1 < 1.0 - Settings.integrability_margin):
        raise DomainError(f"alpha1 = {alpha1} violates alpha1 < 1 - {Settings.integrability_margin:g}")
    return alpha1


def sample_power(alpha1: float, rng: RngStream, size=None, dispatcher=None):
    """Power law on (0, 1) with density (1 - alpha1) x^-alpha1."""
    alpha1 = _check_exponent(alpha1)
    result = redraw("power", lambda k: power_inverse_cdf(alpha1, rng.uniform(k)), _open_interval, size,
                    dispatcher)
    return float(result) if size is None else result


def _beta_raw(a, b, rng, count):
    if a == 0.5 and b == 0.5:
        return arcsine_inverse_cdf(rng.uniform(count))
    g1 = rng.standard_gamma(a, count)
    g2 = rng.standard_gamma(b, count)
    with np.errstate(invalid="ignore", divide="ignore"):
        return g1 / (g1 + g2)


def sample_beta(a: float, b: float, rng: RngStream, size=None, dispatcher=None):
    """Beta(a, b) on (0, 1)."""
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a > 0.0 and b > 0.0):
        raise DomainError(f"beta shapes must be positive, got a={a} b={b}")
    result = redraw("beta", lambda k: _beta_raw(a, b, rng, k), _open_interval, size, dispatcher)
    return float(result) if size is None else result


def _chain_draw(alpha: AlphaVector, rng: RngStream, count):
    shapes = alpha.shapes
    b = alpha.cumulative_shapes
    n = alpha.n
    kappa = np.empty((count, n))
    kappa[:, n - 1] = np.power(rng.uniform(count), 1.0 / b[n - 1])
    for k in range(n - 2, -1, -1):
        kappa[:, k] = kappa[:, k + 1] * _beta_raw(b[k], shapes[k + 1], rng, count)
    return kappa


def _increments_draw(alpha: AlphaVector, rng: RngStream, count):
    n = alpha.n
    g = rng.standard_gamma(alpha.shapes, (count, n))
    closing = rng.standard_gamma(1.0, count)
    total = g.sum(axis=1) + closing
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.cumsum(g, axis=1) / total[:, None]


def _check_support(name, points, accept):
    if Features.check_support_on_1 and not accept(np.atleast_2d(points)).all():
        raise NumericalError(f"{name} produced a point outside its support")


def sample_polygonal_beta(alpha: AlphaVector, rng: RngStream, method: str = METHOD_CHAIN, size=None,
                          dispatcher=None):
    """Points of the ordered simplex with density R_alpha(s) / K_S(alpha)."""
    if not isinstance(alpha, AlphaVector):
        alpha = AlphaVector(tuple(alpha))
    if method == METHOD_CHAIN:
        draw = _chain_draw
    elif method == METHOD_INCREMENTS:
        draw = _increments_draw
    else:
        raise DomainError(f"unknown polygonal beta method '{method}', use one of {METHODS}")
    result = redraw(f"polygonal beta ({method})", lambda k: draw(alpha, rng, k), in_simplex, size, dispatcher)
    _check_support("polygonal beta", result, in_simplex)
    return SimplexPoint(tuple(result)) if size is None else result


def _ball_draw(A: BallExponents, rng: RngStream, count):
    n = A.n
    g = rng.standard_gamma(A.half_shapes, (count, n))
    closing = rng.standard_gamma(1.0, count)
    total = g.sum(axis=1) + closing
    y = g / total[:, None]
    return rng.signs((count, n)) * np.sqrt(y)


def _ball_accept(points):
    with np.errstate(invalid="ignore"):
        return in_ball(points) & (points != 0.0).all(axis=1)


def sample_ball_beta(A: BallExponents, rng: RngStream, size=None, dispatcher=None):
    """Points of the unit ball with density |x|^A / K_B(A).

    The squares (x_1^2, ..., x_n^2) are Dirichlet over the sub-simplex sum y_k <= 1 with shapes (A_k + 1) / 2
    and closing shape 1; the signs are independent and uniform.
    """
    if not isinstance(A, BallExponents):
        A = BallExponents(tuple(A))
    result = redraw("ball beta", lambda k: _ball_draw(A, rng, k), _ball_accept, size, dispatcher)
    _check_support("ball beta", result, in_ball)
    return BallPoint(tuple(result)) if size is None else result


def sample_uniform_simplex(n: int, rng: RngStream, size=None, dispatcher=None, accept=None):
    """Uniform points of the ordered simplex (sorted uniforms, ties re-drawn).

    accept optionally rejects more points, e.g. those where a kernel evaluated on them is not finite.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"simplex dimension must be a positive integer, got {n}")
    n = int(n)
    if accept is None:
        accept_all = in_simplex
    else:
        def accept_all(points):
            mask = in_simplex(points)
            mask[mask] = accept(points[mask])
            return mask
    result = redraw("uniform simplex", lambda k: np.sort(rng.uniform((k, n)), axis=1), accept_all, size,
                    dispatcher)
    return SimplexPoint(tuple(result)) if size is None else result


logger.debug("imported")
