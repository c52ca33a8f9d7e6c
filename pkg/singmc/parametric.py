# -*- coding: utf-8 -*-
"""
Dependent trials for parametric integrals Q(theta) = integral over the simplex of z(s, theta) R_alpha(s) ds.

One common set of polygonal beta points serves every grid value theta_j, so the estimated curve
Q_N(theta_j) = K_S(alpha) mean_i z(kappa_i, theta_j) is as smooth in theta as z itself. The uniform band around
it is calibrated by the sup-norm of a centred Gaussian vector with the estimated covariance of K z(kappa, theta):

    P(sqrt(N) sup_j |Q_N(theta_j) - Q(theta_j)| > u) ~ P(sup_j |xi_j| > u)

so the half width is the confidence quantile of sup |xi| divided by sqrt(N). The band holds under the central
limit hypothesis for the family; the entropy condition behind it is not checked here, and a coarse grid only
covers the grid points.

"""
import itertools
import logging
import math
import threading
from dataclasses import dataclass, field, fields
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from singmc import events
from singmc.errors import DomainError, NumericalError
from singmc.eventing import EventDispatcher, dispatch
from singmc.estimate import _check_run, run_partitioned
from singmc.featureswitches import Features
from singmc.rng import RngStream
from singmc.sampling import METHOD_CHAIN, sample_polygonal_beta
from singmc.settings import Settings
from singmc.specfun import AlphaVector, simplex_constant

logger = logging.getLogger(__name__)
logger.debug("importing...")


@dataclass(frozen=True)
class ParametricIntegrand:
    """z(s, theta): evaluate(points (k, n), theta (d,)) -> (k,)."""
    arity: int
    dim: int
    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, points, theta) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = np.asarray(self.evaluate(points, np.asarray(theta, dtype=float)), dtype=float)
        return np.broadcast_to(values, (points.shape[0],))


@dataclass(frozen=True)
class ThetaGrid:
    """Finite ordered list of distinct parameter values of dimension d."""
    points: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        try:
            pts = tuple(tuple(float(c) for c in p) for p in self.points)
        except (TypeError, ValueError) as ex:
            raise DomainError(f"grid points must be sequences of reals: {ex}")
        if not pts:
            raise DomainError("the grid needs at least one point")
        d = len(pts[0])
        if d == 0 or any(len(p) != d for p in pts):
            raise DomainError("grid points must all have the same positive dimension")
        if not all(math.isfinite(c) for p in pts for c in p):
            raise DomainError("grid points must be finite")
        if len(set(pts)) != len(pts):
            raise DomainError("grid points must be distinct")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, *values):
        """One dimensional grid from scalars."""
        return cls(tuple((v,) for v in values))

    @classmethod
    def from_ranges(cls, ranges: Sequence[Tuple[float, float, int]]):
        """Cartesian product of linspace(start, stop, count) per dimension, the first dimension varies slowest."""
        axes = []
        for start, stop, count in ranges:
            if int(count) != count or count < 1:
                raise DomainError(f"grid count must be a positive integer, got {count}")
            if count == 1:
                axes.append([float(start)])
            else:
                axes.append([float(v) for v in np.linspace(start, stop, int(count))])
        if not axes:
            raise DomainError("the grid needs at least one dimension")
        return cls(tuple(itertools.product(*axes)))

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


@dataclass(frozen=True, eq=False)
class RhoReport:
    matrix: np.ndarray
    n_skipped: int

    def to_dict(self):
        return {"matrix": self.matrix.tolist(), "n_skipped": self.n_skipped}


@dataclass(frozen=True, eq=False)
class ParamBandReport:
    q_hat: Tuple[float, ...]
    band_halfwidth: float
    covariance: np.ndarray = field(repr=False)
    sup_quantile: float
    n_samples: int
    n_gaussian_draws: int
    seed: int
    confidence: float
    constant: float
    grid: ThetaGrid
    n_workers: int = 1
    n_skipped: int = 0
    rho: Optional[RhoReport] = None

    @property
    def lower(self):
        return tuple(q - self.band_halfwidth for q in self.q_hat)

    @property
    def upper(self):
        return tuple(q + self.band_halfwidth for q in self.q_hat)

    def covers(self, values) -> bool:
        """True when every value lies inside the band at its grid point."""
        return all(lo <= v <= hi for lo, v, hi in zip(self.lower, values, self.upper))

    def to_dict(self, include_covariance=None):
        if include_covariance is None:
            include_covariance = Settings.include_covariance
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "covariance":
                value = value.tolist() if include_covariance else None
            elif f.name == "grid":
                value = [list(p) for p in value.points]
            elif f.name == "q_hat":
                value = list(value)
            elif f.name == "rho":
                value = None if value is None else value.to_dict()
            out[f.name] = value
        return out


class _FamilyColumns:
    """Batch values z(kappa_i, theta_j) as a (k, m) array, tracking max_i |z_i,j - z_i,j+1| over all batches."""

    def __init__(self, zfam: ParametricIntegrand, grid: ThetaGrid):
        self.zfam = zfam
        self.thetas = grid.points
        self.spread = np.zeros(max(grid.m - 1, 0))
        self._lock = threading.Lock()

    def __call__(self, points):
        values = np.column_stack([self.zfam(points, theta) for theta in self.thetas])
        if values.shape[1] > 1:
            finite = values[np.isfinite(values).all(axis=1)]
            if finite.shape[0]:
                batch_spread = np.abs(np.diff(finite, axis=1)).max(axis=0)
                with self._lock:
                    self.spread = np.maximum(self.spread, batch_spread)
        return values


def _check_dependent_trials(means, spread, constant):
    """Adjacent estimates from one sample set differ by at most K max_i |z_ij - z_ij+1|."""
    tol = Settings.dependent_trial_tolerance
    for j in range(len(spread)):
        gap = abs(constant) * abs(means[j] - means[j + 1])
        bound = abs(constant) * spread[j]
        slack = tol * abs(constant) * (abs(means[j]) + abs(means[j + 1]) + spread[j])
        if gap > bound + slack:
            raise NumericalError(f"dependent-trial bound violated between grid points {j} and {j + 1}: "
                                 f"|q_j - q_j+1| = {gap} > {bound}")


def cholesky_with_jitter(covariance: np.ndarray, dispatcher: Optional[EventDispatcher] = None) -> np.ndarray:
    """Lower Cholesky factor of covariance + jitter I, jitter escalated from 1e-12 to 1e-6 times trace / m."""
    m = covariance.shape[0]
    scale = float(np.trace(covariance)) / m
    steps = int(round(math.log(Settings.jitter_max / Settings.jitter_start, Settings.jitter_factor)))
    jitter = Settings.jitter_start * scale
    for step in range(steps + 1):
        try:
            return np.linalg.cholesky(covariance + jitter * np.eye(m))
        except np.linalg.LinAlgError:
            if step == steps:
                break
            jitter *= Settings.jitter_factor
            logger.info("covariance not positive definite, jitter raised to %s", jitter)
            dispatch(dispatcher, events.evt_id_jitter_escalated, jitter)
    raise NumericalError(f"the estimated covariance is not positive definite even with jitter {jitter:g}; "
                         f"increase the sample count N")


def sup_quantile(covariance: np.ndarray, confidence: float, n_draws: int, rng: RngStream,
                 dispatcher: Optional[EventDispatcher] = None) -> float:
    """Confidence quantile of sup_j |xi_j| over n_draws draws of xi ~ N(0, covariance)."""
    if float(np.trace(covariance)) <= 0.0:
        return 0.0
    factor = cholesky_with_jitter(covariance, dispatcher)
    gauss = rng.standard_normal((n_draws, covariance.shape[0]))
    sup = np.abs(gauss @ factor.T).max(axis=1)
    return float(np.quantile(sup, confidence))


def estimate_parametric(zfam: ParametricIntegrand, alpha: AlphaVector, grid: ThetaGrid, n_samples: int,
                        confidence: float, n_gaussian_draws: int, rng: RngStream, n_workers: int = 1,
                        method: str = METHOD_CHAIN, skip_nonfinite: bool = False,
                        dispatcher: Optional[EventDispatcher] = None) -> ParamBandReport:
    n_samples, n_workers = _check_run(n_samples, confidence, n_workers)
    if int(n_gaussian_draws) != n_gaussian_draws or n_gaussian_draws < Settings.min_gaussian_draws:
        raise DomainError(f"at least {Settings.min_gaussian_draws} Gaussian draws are needed, got {n_gaussian_draws}")
    n_gaussian_draws = int(n_gaussian_draws)
    if zfam.arity != alpha.n:
        raise DomainError(f"integrand arity {zfam.arity} does not match the dimension n = {alpha.n}")
    if zfam.dim != grid.dim:
        raise DomainError(f"integrand parameter dimension {zfam.dim} does not match the grid dimension {grid.dim}")
    constant = simplex_constant(alpha)
    columns = _FamilyColumns(zfam, grid)

    def sampler(stream, k):
        return sample_polygonal_beta(alpha, stream, method, size=k, dispatcher=dispatcher)

    acc, skipped = run_partitioned(sampler, columns, n_samples, rng, n_workers, skip_nonfinite, dispatcher)
    if acc.count < 2:
        raise NumericalError(f"only {acc.count} finite integrand rows, at least 2 are needed")
    if Features.check_dependent_trial_bound_2:
        _check_dependent_trials(acc.mean, columns.spread, constant)

    covariance = constant * constant * acc.covariance(ddof=0)
    covariance = 0.5 * (covariance + covariance.T)
    quantile = sup_quantile(covariance, confidence, n_gaussian_draws, rng.substream(Settings.gaussian_stream_key),
                            dispatcher)
    report = ParamBandReport(q_hat=tuple(float(constant * q) for q in acc.mean),
                             band_halfwidth=quantile / math.sqrt(acc.count),
                             covariance=covariance,
                             sup_quantile=quantile,
                             n_samples=acc.count,
                             n_gaussian_draws=n_gaussian_draws,
                             seed=rng.seed,
                             confidence=confidence,
                             constant=constant,
                             grid=grid,
                             n_workers=n_workers,
                             n_skipped=skipped)
    logger.info("parametric alpha=%s m=%s N=%s: band half width %s", alpha.alpha, grid.m, report.n_samples,
                report.band_halfwidth)
    return report


def estimate_rho(zfam: ParametricIntegrand, grid: ThetaGrid, probe,
                 dispatcher: Optional[EventDispatcher] = None) -> RhoReport:
    """
    Lower bound of rho(theta_j, theta_k) = sup_s |z(s, theta_j) - z(s, theta_k)| / Y(s) on the grid.

    Y(s) is taken as max_j |z(s, theta_j)| over the grid and the sup runs over the probe points only. Probe points
    with Y(s) = 0 (or a non-finite value) are skipped and counted.
    """
    points = np.atleast_2d(np.asarray([np.asarray(p, dtype=float) for p in probe]))
    if points.size == 0:
        raise DomainError("estimate_rho needs at least one probe point")
    if points.shape[1] != zfam.arity:
        raise DomainError(f"probe points have dimension {points.shape[1]}, the integrand arity is {zfam.arity}")
    values = np.column_stack([zfam(points, theta) for theta in grid.points])
    y = np.abs(values).max(axis=1)
    usable = np.isfinite(values).all(axis=1) & (y > 0.0)
    for row in np.flatnonzero(~usable):
        dispatch(dispatcher, events.evt_id_probe_skipped, tuple(points[row]))
    skipped = int((~usable).sum())
    if skipped == points.shape[0]:
        raise NumericalError(f"all {skipped} probe points have sup_theta |z(s, theta)| = 0, rho is undefined")
    if skipped:
        logger.info("estimate_rho skipped %s of %s probe points", skipped, points.shape[0])
    matrix = np.zeros((grid.m, grid.m))
    for z_row, y_row in zip(values[usable], y[usable]):
        matrix = np.maximum(matrix, np.abs(z_row[:, None] - z_row[None, :]) / y_row)
    return RhoReport(matrix, skipped)


logger.debug("imported")
