# -*- coding: utf-8 -*-
"""
Deterministic reference values: tensor quadrature for small dimensions and exact polynomial moments.

Simplex integrals are rewritten in stick-breaking variables v in (0, 1)^n,

    u_k = s_k - s_k-1 = v_k (1 - v_1) ... (1 - v_k-1)

which turns the kernel and the Jacobian into the product weight  prod_j v_j^-alpha_j (1 - v_j)^c_j  with
c_j = sum_{k > j} (1 - alpha_k). Each axis then gets a one dimensional rule for the weight v^a (1 - v)^b:

    gauss_jacobi         Gauss-Jacobi nodes (Golub-Welsch, via scipy), exact for polynomial z
    power_substitution   [0, 1] split at 1/2, each endpoint power absorbed by v = 1/2 w^(1 / (a + 1)), then
                         Gauss-Legendre in w

Ball integrals use |x| directly for n = 1 and polar coordinates for n = 2. Costs grow like m^n, so the simplex
is capped at n = 3 and the ball at n = 2.

"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from singmc.errors import DomainError, NumericalError, UnsupportedError
from singmc.settings import Settings
from singmc.specfun import AlphaVector, BallExponents, simplex_constant

logger = logging.getLogger(__name__)
logger.debug("importing...")

SCHEME_GAUSS_JACOBI = "gauss_jacobi"
SCHEME_POWER_SUBSTITUTION = "power_substitution"
SCHEMES = (SCHEME_GAUSS_JACOBI, SCHEME_POWER_SUBSTITUTION)

MAX_SIMPLEX_DIM = 3
MAX_BALL_DIM = 2


@dataclass(frozen=True)
class QuadSpec:
    nodes_per_axis: int = Settings.default_oracle_nodes
    scheme: str = Settings.default_quad_scheme

    def __post_init__(self):
        if int(self.nodes_per_axis) != self.nodes_per_axis or self.nodes_per_axis < 2:
            raise DomainError(f"nodes_per_axis must be an integer >= 2, got {self.nodes_per_axis}")
        if self.scheme not in SCHEMES:
            raise DomainError(f"unknown quadrature scheme '{self.scheme}', use one of {SCHEMES}")
        object.__setattr__(self, "nodes_per_axis", int(self.nodes_per_axis))

    def doubled(self) -> "QuadSpec":
        return QuadSpec(2 * self.nodes_per_axis, self.scheme)


def gauss_jacobi_01(m: int, a: float, b: float):
    """Nodes and weights on (0, 1) for the weight v^a (1 - v)^b, a, b > -1."""
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"Jacobi exponents must be > -1, got a={a} b={b}")
    # scipy's weight is (1 - x)^alpha (1 + x)^beta on [-1, 1]; v = (1 + x) / 2
    x, w = special.roots_jacobi(m, b, a)
    if a == b:
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
    return 0.5 * (1.0 + x), w * 2.0 ** -(a + b + 1.0)


def _legendre_01(m):
    x, w = special.roots_legendre(m)
    return 0.5 * (1.0 + x), 0.5 * w


def power_substitution_01(m: int, a: float, b: float):
    """2m nodes and weights on (0, 1) for v^a (1 - v)^b, one substituted Gauss-Legendre rule per half."""
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"power exponents must be > -1, got a={a} b={b}")
    w_nodes, w_weights = _legendre_01(m)
    left = 0.5 * np.power(w_nodes, 1.0 / (a + 1.0))
    left_weights = w_weights * 0.5 ** (a + 1.0) / (a + 1.0) * np.power(1.0 - left, b)
    right = 1.0 - 0.5 * np.power(w_nodes, 1.0 / (b + 1.0))
    right_weights = w_weights * 0.5 ** (b + 1.0) / (b + 1.0) * np.power(right, a)
    return np.concatenate([left, right[::-1]]), np.concatenate([left_weights, right_weights[::-1]])


def _rule(spec: QuadSpec, a, b):
    if spec.scheme == SCHEME_GAUSS_JACOBI:
        return gauss_jacobi_01(spec.nodes_per_axis, a, b)
    return power_substitution_01(spec.nodes_per_axis, a, b)


def _tensor(rules):
    """Flattened tensor product of one dimensional (nodes, weights) rules: ((k, d) nodes, (k,) weights)."""
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    weights = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    nodes = np.column_stack([g.ravel() for g in grids])
    return nodes, np.prod(np.column_stack([w.ravel() for w in weights]), axis=1)


def _weighted_sum(z, points, weights):
    values = np.asarray(z(points), dtype=float)
    if not np.isfinite(values).all():
        row = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NumericalError(f"integrand is not finite ({values[row]}) at quadrature node {tuple(points[row])}")
    return math.fsum(values * weights)


def stick_breaking_points(v: np.ndarray) -> np.ndarray:
    """Map rows of (0, 1)^n to the ordered simplex: u_k = v_k prod_{j<k} (1 - v_j), s = cumsum(u)."""
    remaining = np.cumprod(1.0 - v, axis=1)
    remaining = np.concatenate([np.ones((v.shape[0], 1)), remaining[:, :-1]], axis=1)
    return np.cumsum(v * remaining, axis=1)


def _check_arity(z, n):
    if getattr(z, "arity", n) != n:
        raise DomainError(f"integrand arity {z.arity} does not match the dimension n = {n}")


def _quad_volterra(z, alpha: AlphaVector, spec: QuadSpec) -> float:
    shapes = alpha.shapes
    tail = np.concatenate([np.cumsum(shapes[::-1])[::-1][1:], [0.0]])  # c_j = sum_{k > j} (1 - alpha_k)
    rules = [_rule(spec, -a, c) for a, c in zip(alpha.alpha, tail)]
    v, weights = _tensor(rules)
    return _weighted_sum(z, stick_breaking_points(v), weights)


def quad_volterra_with_error(z, alpha: AlphaVector, spec: QuadSpec = None):
    """(Q_m, |Q_m - Q_2m|) for the simplex integral of z R_alpha."""
    if spec is None:
        spec = QuadSpec()
    if not isinstance(alpha, AlphaVector):
        alpha = AlphaVector(tuple(alpha))
    if alpha.n > MAX_SIMPLEX_DIM:
        raise UnsupportedError(f"quadrature supports simplex dimensions n <= {MAX_SIMPLEX_DIM}, got {alpha.n}")
    _check_arity(z, alpha.n)
    value = _quad_volterra(z, alpha, spec)
    finer = _quad_volterra(z, alpha, spec.doubled())
    logger.debug("quad_volterra alpha=%s m=%s: %s (2m: %s)", alpha.alpha, spec.nodes_per_axis, value, finer)
    return value, abs(value - finer)


def quad_volterra(z, alpha: AlphaVector, spec: QuadSpec = None) -> float:
    """Integral over 0 < s_1 < ... < s_n < 1 of z(s) R_alpha(s) ds, n <= 3."""
    return quad_volterra_with_error(z, alpha, spec)[0]


def _quad_ball(z, A: BallExponents, spec: QuadSpec) -> float:
    if A.n == 1:
        x, w = _rule(spec, A.A[0], 0.0)
        points = np.concatenate([x, -x])[:, None]
        return _weighted_sum(z, points, np.concatenate([w, w]))

    a1, a2 = A.A
    r, wr = _rule(spec, a1 + a2 + 1.0, 0.0)
    # first quadrant with t = sin^2(theta): dtheta |cos|^A1 |sin|^A2 = 1/2 t^((A2-1)/2) (1-t)^((A1-1)/2) dt
    t, wt = _rule(spec, 0.5 * (a2 - 1.0), 0.5 * (a1 - 1.0))
    nodes, weights = _tensor([(r, wr), (t, 0.5 * wt)])
    radius, t = nodes[:, 0], nodes[:, 1]
    cos, sin = np.sqrt(1.0 - t), np.sqrt(t)
    total = []
    for sign1, sign2 in itertools.product((1.0, -1.0), repeat=2):
        points = np.column_stack([sign1 * radius * cos, sign2 * radius * sin])
        total.append(_weighted_sum(z, points, weights))
    return math.fsum(total)


def quad_ball_with_error(z, A: BallExponents, spec: QuadSpec = None):
    """(Q_m, |Q_m - Q_2m|) for the ball integral of z |x|^A."""
    if spec is None:
        spec = QuadSpec()
    if not isinstance(A, BallExponents):
        A = BallExponents(tuple(A))
    if A.n > MAX_BALL_DIM:
        raise UnsupportedError(f"quadrature supports ball dimensions n <= {MAX_BALL_DIM}, got {A.n}")
    _check_arity(z, A.n)
    value = _quad_ball(z, A, spec)
    finer = _quad_ball(z, A, spec.doubled())
    return value, abs(value - finer)


def quad_ball(z, A: BallExponents, spec: QuadSpec = None) -> float:
    """Integral over the unit ball of z(x) |x_1|^A_1 ... |x_n|^A_n dx, n <= 2."""
    return quad_ball_with_error(z, A, spec)[0]


def _expand_partial_sums(powers):
    """prod_k (u_1 + ... + u_k)^p_k as {exponent tuple: integer coefficient}."""
    n = len(powers)
    poly = {(0,) * n: 1}
    for k, p in enumerate(powers):
        for _ in range(p):
            grown = {}
            for exps, coef in poly.items():
                for j in range(k + 1):
                    key = exps[:j] + (exps[j] + 1,) + exps[j + 1:]
                    grown[key] = grown.get(key, 0) + coef
            poly = grown
    return poly


def dirichlet_moment(alpha: AlphaVector, powers: Sequence[int], scaled: bool = False) -> float:
    """
    E[s_1^p_1 ... s_n^p_n] under the polygonal beta law, exactly.

    The increments (u_1, ..., u_n, 1 - s_n) are Dirichlet with shapes (1 - alpha_1, ..., 1 - alpha_n, 1), so
    E[prod u_j^e_j] = prod (a_j)_e_j / (a_0)_{sum e_j} with a_0 = b_n + 1 and Pochhammer symbols ( )_e.
    With scaled=True the moment is multiplied by K_S(alpha), giving the integral of the monomial against R_alpha.
    """
    if not isinstance(alpha, AlphaVector):
        alpha = AlphaVector(tuple(alpha))
    powers = tuple(powers)
    if len(powers) != alpha.n:
        raise DomainError(f"need {alpha.n} powers, got {len(powers)}")
    if any(int(p) != p or p < 0 for p in powers):
        raise DomainError(f"powers must be non-negative integers, got {powers}")
    powers = tuple(int(p) for p in powers)
    shapes = alpha.shapes
    total_shape = float(shapes.sum()) + 1.0
    terms = []
    for exps, coef in _expand_partial_sums(powers).items():
        numerator = np.prod(special.poch(shapes, np.asarray(exps, dtype=float)))
        terms.append(coef * numerator / special.poch(total_shape, sum(exps)))
    moment = math.fsum(terms)
    if scaled:
        moment *= simplex_constant(alpha)
    return moment


logger.debug("imported")
