# -*- coding: utf-8 -*-
"""
Normalization constants of the singular kernels.

All constants are evaluated in log-space with scipy's log-gamma and exponentiated once, so large dimensions do
not overflow.

    K_S(alpha) = prod Gamma(1 - alpha_k) / Gamma(1 + sum (1 - alpha_k))      integral of the simplex kernel
    W_n(beta)  = Gamma(beta)^n / Gamma(1 + n beta)                             K_S with all alpha_k = 1 - beta
    K_B(A)     = prod Gamma((A_k + 1) / 2) / Gamma(D / 2 + 1), D = sum A_k + n  integral of |x|^A over the unit ball

"""
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import special

from singmc.errors import DomainError
from singmc.settings import Settings

logger = logging.getLogger(__name__)
logger.debug("importing...")


def _as_finite_tuple(values, name):
    try:
        out = tuple(float(v) for v in values)
    except (TypeError, ValueError) as ex:
        raise DomainError(f"{name} must be a sequence of reals: {ex}")
    if not out:
        raise DomainError(f"{name} must have at least one entry (n >= 1)")
    for k, v in enumerate(out):
        if not math.isfinite(v):
            raise DomainError(f"{name}[{k}] = {v} is not finite")
    return out


@dataclass(frozen=True)
class AlphaVector:
    """Singularity exponents of the simplex kernel s_1^-a_1 (s_2 - s_1)^-a_2 ... (s_n - s_n-1)^-a_n."""
    alpha: Tuple[float, ...]

    def __post_init__(self):
        alpha = _as_finite_tuple(self.alpha, "alpha")
        bound = 1.0 - Settings.integrability_margin
        for k, a in enumerate(alpha):
            if not a < bound:
                raise DomainError(f"alpha[{k}] = {a} violates alpha_k < 1 - {Settings.integrability_margin:g}")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def of(cls, *alpha):
        return cls(tuple(alpha))

    @classmethod
    def parse(cls, text: str):
        """From a comma separated list, e.g. '0.5,0.5'."""
        try:
            values = [float(v) for v in text.split(",") if v.strip()]
        except ValueError as ex:
            raise DomainError(f"cannot read alpha from '{text}': {ex}")
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def shapes(self) -> np.ndarray:
        """beta_k = 1 - alpha_k, the per-increment shapes."""
        return 1.0 - np.asarray(self.alpha)

    @property
    def cumulative_shapes(self) -> np.ndarray:
        """b_k = sum_{j <= k} (1 - alpha_j)."""
        return np.cumsum(self.shapes)


@dataclass(frozen=True)
class BallExponents:
    """Monomial exponents of |x_1|^A_1 ... |x_n|^A_n on the unit ball."""
    A: Tuple[float, ...]

    def __post_init__(self):
        A = _as_finite_tuple(self.A, "A")
        bound = -1.0 + Settings.integrability_margin
        for k, a in enumerate(A):
            if not a > bound:
                raise DomainError(f"A[{k}] = {a} violates A_k > -1 + {Settings.integrability_margin:g}")
        object.__setattr__(self, "A", A)
        if not self.D > 0.0:
            raise DomainError(f"D = sum A_k + n = {self.D} must be positive")

    @classmethod
    def of(cls, *A):
        return cls(tuple(A))

    @classmethod
    def parse(cls, text: str):
        try:
            values = [float(v) for v in text.split(",") if v.strip()]
        except ValueError as ex:
            raise DomainError(f"cannot read A from '{text}': {ex}")
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def D(self) -> float:
        return math.fsum(self.A) + len(self.A)

    @property
    def half_shapes(self) -> np.ndarray:
        """(A_k + 1) / 2, the gamma shapes of the squared coordinates."""
        return (np.asarray(self.A) + 1.0) / 2.0


def log_gamma(x: float) -> float:
    """ln Gamma(x) for finite x > 0."""
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"log_gamma needs a finite positive argument, got {x}")
    return float(special.gammaln(x))


def _sum_log_gamma(values: Sequence[float]) -> float:
    return math.fsum(log_gamma(v) for v in values)


def log_simplex_constant(alpha: AlphaVector) -> float:
    shapes = [1.0 - a for a in alpha.alpha]
    return _sum_log_gamma(shapes) - log_gamma(1.0 + math.fsum(shapes))


def simplex_constant(alpha: AlphaVector) -> float:
    """K_S(alpha), the integral of the simplex kernel over 0 < s_1 < ... < s_n < 1."""
    return math.exp(log_simplex_constant(alpha))


def w_n(beta: float, n: int) -> float:
    """W_n(beta) = Gamma(beta)^n / Gamma(1 + n beta), 0 < beta <= 1."""
    beta = float(beta)
    if not (0.0 < beta <= 1.0):
        raise DomainError(f"w_n needs 0 < beta <= 1, got {beta}")
    if int(n) != n or n < 1:
        raise DomainError(f"w_n needs a positive integer n, got {n}")
    n = int(n)
    return math.exp(n * log_gamma(beta) - log_gamma(1.0 + n * beta))


def log_ball_constant(A: BallExponents) -> float:
    return _sum_log_gamma([(a + 1.0) / 2.0 for a in A.A]) - log_gamma(A.D / 2.0 + 1.0)


def ball_constant(A: BallExponents) -> float:
    """K_B(A), the integral of |x|^A over the unit ball."""
    return math.exp(log_ball_constant(A))


def unit_ball_volume(n: int) -> float:
    return math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n + 1.0))


logger.debug("imported")
