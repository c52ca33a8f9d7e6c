# -*- coding: utf-8 -*-
"""
Importance sampled estimators of the singular integrals.

    I[z] = integral over the ordered simplex of z(s) R_alpha(s) ds = K_S(alpha) E z(kappa),  kappa ~ polygonal beta
    J[z] = integral over the unit ball of z(x) |x|^A dx           = K_B(A) E z(zeta),        zeta ~ ball beta

The kernel sits in the sampling density, so the estimated variable K z is bounded whenever z is. The direct
estimator keeps the kernel in the integrand and samples the simplex uniformly; its variance is infinite as soon
as some alpha_k >= 1/2, which is why it is only offered for comparison.

N is split over W workers, worker w draws from its own substream of the caller's stream (W = 1 uses the stream
itself). Partial moments are merged in worker order, so a fixed (seed, W) reproduces every report bit for bit.
The normal-quantile interval relies on the CLT; below Settings.recommended_min_samples it is optimistic.

"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Callable, Optional

import numpy as np
from scipy import stats

from singmc import events
from singmc.errors import DomainError, NonFiniteIntegrandError, NumericalError
from singmc.eventing import EventDispatcher, dispatch
from singmc.featureswitches import Features
from singmc.rng import RngStream
from singmc.sampling import METHOD_CHAIN, sample_ball_beta, sample_polygonal_beta, sample_uniform_simplex
from singmc.settings import Settings
from singmc.specfun import AlphaVector, BallExponents, ball_constant, simplex_constant

logger = logging.getLogger(__name__)
logger.debug("importing...")


@dataclass(frozen=True)
class Integrand:
    """z(point) of the given arity, evaluated on a batch: array (k, n) -> array (k,)."""
    arity: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        values = np.asarray(self.evaluate(points), dtype=float)
        return np.broadcast_to(values, (points.shape[0],))

    @classmethod
    def constant(cls, value: float, arity: int):
        value = float(value)
        return cls(arity, lambda points: np.full(points.shape[0], value), label=repr(value))

    @classmethod
    def from_point_function(cls, fn, arity: int, label: str = ""):
        """Wrap a plain function of one point (a tuple of floats)."""
        return cls(arity, lambda points: np.array([fn(tuple(p)) for p in points], dtype=float),
                   label=label or getattr(fn, "__name__", ""))


@dataclass(frozen=True)
class EstimateReport:
    estimate: float
    std_error: float
    ci_low: float
    ci_high: float
    n_samples: int
    constant: float
    second_moment: float
    seed: int
    n_workers: int
    confidence: float
    unreliable: bool = False
    n_skipped: int = 0

    @staticmethod
    def field_names():
        return [f.name for f in fields(EstimateReport)]

    def to_dict(self):
        return {name: getattr(self, name) for name in self.field_names()}

    @property
    def centered_second_moment(self):
        """Sample variance of K z, the estimate of sigma^2 = Var(K z)."""
        return self.std_error * self.std_error * self.n_samples


@dataclass(frozen=True)
class ComparisonReport:
    importance: EstimateReport
    direct: EstimateReport
    variance_ratio: float  # per-sample variance direct / importance

    def to_dict(self):
        return {"importance": self.importance.to_dict(), "direct": self.direct.to_dict(),
                "variance_ratio": self.variance_ratio}


class MomentAccumulator:
    """
    One-pass mean, co-moment and raw second moment of vector valued samples.

    Batches are reduced with numpy's pairwise summation and merged with the parallel update of Chan et al., so
    10^8 samples do not lose the variance to cancellation. Merging is associative up to reassociation rounding.
    """

    def __init__(self, width: int):
        self.count = 0
        self.mean = np.zeros(width)
        self.comoment = np.zeros((width, width))
        self.sq_mean = np.zeros(width)

    @classmethod
    def of_batch(cls, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        acc = cls(values.shape[1])
        k = values.shape[0]
        if k == 0:
            return acc
        acc.count = k
        acc.mean = values.sum(axis=0) / k
        centered = values - acc.mean
        acc.comoment = centered.T @ centered
        acc.sq_mean = (values * values).sum(axis=0) / k
        return acc

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count = other.count
            self.mean = other.mean.copy()
            self.comoment = other.comoment.copy()
            self.sq_mean = other.sq_mean.copy()
            return self
        n = self.count + other.count
        weight = other.count / n
        delta = other.mean - self.mean
        self.comoment = self.comoment + other.comoment + np.outer(delta, delta) * (self.count * weight)
        self.mean = self.mean + delta * weight
        self.sq_mean = self.sq_mean + (other.sq_mean - self.sq_mean) * weight
        self.count = n
        return self

    def variance(self, ddof=1):
        """Diagonal of the co-moment divided by (count - ddof)."""
        return np.diag(self.comoment) / (self.count - ddof)

    def covariance(self, ddof=0):
        return self.comoment / (self.count - ddof)


def volterra_kernel(points, alpha: AlphaVector) -> np.ndarray:
    """R_alpha(s) = s_1^-alpha_1 (s_2 - s_1)^-alpha_2 ... (s_n - s_n-1)^-alpha_n for each row."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    increments = np.diff(points, axis=1, prepend=0.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.prod(np.power(increments, -np.asarray(alpha.alpha)), axis=1)


def _check_run(n_samples, confidence, n_workers):
    if int(n_samples) != n_samples or n_samples < 2:
        raise DomainError(f"the sample count must be an integer >= 2, got {n_samples}")
    if confidence is not None and not (0.0 < confidence < 1.0):
        raise DomainError(f"confidence must be in (0, 1), got {confidence}")
    if int(n_workers) != n_workers or n_workers < 1:
        raise DomainError(f"the worker count must be a positive integer, got {n_workers}")
    if n_samples < Settings.recommended_min_samples:
        logger.info("N = %s is below %s, the normal-quantile interval is optimistic",
                    n_samples, Settings.recommended_min_samples)
    return int(n_samples), int(n_workers)


def _check_arity(z, n):
    if z.arity != n:
        raise DomainError(f"integrand arity {z.arity} does not match the dimension n = {n}")


def _finite_rows(points, values, skip_nonfinite, dispatcher, thetas=None):
    finite = np.isfinite(values).all(axis=1)
    if finite.all():
        return values, 0
    idx = np.flatnonzero(~finite)
    if not skip_nonfinite:
        row = idx[0]
        col = int(np.flatnonzero(~np.isfinite(values[row]))[0])
        theta = None if thetas is None else thetas[col]
        raise NonFiniteIntegrandError(points[row], values[row, col], theta)
    if dispatcher is not None and dispatcher.has_handlers(events.evt_id_nonfinite_skipped):
        for row in idx:
            bad = values[row][~np.isfinite(values[row])][0]
            dispatch(dispatcher, events.evt_id_nonfinite_skipped, tuple(points[row]), bad)
    return values[finite], idx.size


def _worker(worker, sampler, values_fn, count, rng, skip_nonfinite, dispatcher):
    acc = None
    skipped = 0
    done = 0
    while done < count:
        k = min(Settings.batch_size, count - done)
        points = sampler(rng, k)
        values = values_fn(points)
        kept, n_bad = _finite_rows(points, values, skip_nonfinite, dispatcher, getattr(values_fn, "thetas", None))
        skipped += n_bad
        batch = MomentAccumulator.of_batch(kept)
        acc = batch if acc is None else acc.merge(batch)
        done += k
        if Features.log_batches_3:
            logger.debug("worker %s: %s/%s points", worker, done, count)
        dispatch(dispatcher, events.evt_id_batch_merged, worker, k, done)
    return acc, skipped


def partition(n_samples: int, n_workers: int):
    """Sample counts per worker: as equal as possible, the first workers take the remainder."""
    base, extra = divmod(n_samples, n_workers)
    return [base + (1 if w < extra else 0) for w in range(n_workers)]


def run_partitioned(sampler, values_fn, n_samples, rng: RngStream, n_workers=1, skip_nonfinite=False,
                    dispatcher: Optional[EventDispatcher] = None):
    """Run the sample loop on n_workers substreams and merge the partial moments in worker order.

    sampler(rng, k) draws k points, values_fn(points) returns a (k, m) array; both are called from the worker
    threads. A values_fn with a thetas attribute names the parameter of a non-finite column in the error.
    """
    counts = partition(n_samples, n_workers)
    if n_workers == 1:
        return _worker(0, sampler, values_fn, n_samples, rng, skip_nonfinite, dispatcher)
    streams = [rng.substream(w) for w in range(n_workers)]
    logger.info("splitting %s samples over %s workers: %s", n_samples, n_workers, counts)
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        futures = [pool.submit(_worker, w, sampler, values_fn, counts[w], streams[w], skip_nonfinite, dispatcher)
                   for w in range(n_workers) if counts[w] > 0]
        partials = [f.result() for f in futures]
    acc = partials[0][0]
    skipped = partials[0][1]
    for part, n_bad in partials[1:]:
        acc.merge(part)
        skipped += n_bad
    return acc, skipped


def normal_quantile(confidence: float) -> float:
    return float(stats.norm.ppf(0.5 * (1.0 + confidence)))


def _report(acc: MomentAccumulator, constant, confidence, rng, n_workers, skipped, unreliable=False):
    if acc.count < 2:
        raise NumericalError(f"only {acc.count} finite integrand values, at least 2 are needed")
    mean = float(acc.mean[0])
    estimate = constant * mean
    std_error = abs(constant) * math.sqrt(float(acc.variance(ddof=1)[0]) / acc.count)
    half = normal_quantile(confidence) * std_error
    return EstimateReport(estimate=estimate,
                          std_error=std_error,
                          ci_low=estimate - half,
                          ci_high=estimate + half,
                          n_samples=acc.count,
                          constant=constant,
                          second_moment=constant * constant * float(acc.sq_mean[0]),
                          seed=rng.seed,
                          n_workers=n_workers,
                          confidence=confidence,
                          unreliable=unreliable,
                          n_skipped=skipped)


def _column(z):
    return lambda points: z(points)[:, None]


def estimate_volterra(z: Integrand, alpha: AlphaVector, n_samples: int, confidence: float, rng: RngStream,
                      n_workers: int = 1, method: str = METHOD_CHAIN, skip_nonfinite: bool = False,
                      dispatcher: Optional[EventDispatcher] = None) -> EstimateReport:
    """K_S(alpha) times the mean of z over polygonal beta points."""
    n_samples, n_workers = _check_run(n_samples, confidence, n_workers)
    _check_arity(z, alpha.n)
    constant = simplex_constant(alpha)

    def sampler(stream, k):
        return sample_polygonal_beta(alpha, stream, method, size=k, dispatcher=dispatcher)

    acc, skipped = run_partitioned(sampler, _column(z), n_samples, rng, n_workers, skip_nonfinite, dispatcher)
    report = _report(acc, constant, confidence, rng, n_workers, skipped)
    logger.info("volterra alpha=%s N=%s: %s +- %s", alpha.alpha, report.n_samples, report.estimate,
                report.std_error)
    return report


def estimate_ball(z: Integrand, A: BallExponents, n_samples: int, confidence: float, rng: RngStream,
                  n_workers: int = 1, skip_nonfinite: bool = False,
                  dispatcher: Optional[EventDispatcher] = None) -> EstimateReport:
    """K_B(A) times the mean of z over ball beta points."""
    n_samples, n_workers = _check_run(n_samples, confidence, n_workers)
    _check_arity(z, A.n)
    constant = ball_constant(A)

    def sampler(stream, k):
        return sample_ball_beta(A, stream, size=k, dispatcher=dispatcher)

    acc, skipped = run_partitioned(sampler, _column(z), n_samples, rng, n_workers, skip_nonfinite, dispatcher)
    report = _report(acc, constant, confidence, rng, n_workers, skipped)
    logger.info("ball A=%s N=%s: %s +- %s", A.A, report.n_samples, report.estimate, report.std_error)
    return report


def estimate_direct(z: Integrand, alpha: AlphaVector, n_samples: int, rng: RngStream,
                    confidence: float = None, n_workers: int = 1, skip_nonfinite: bool = False,
                    dispatcher: Optional[EventDispatcher] = None) -> EstimateReport:
    """Vol(S(n)) times the mean of z R_alpha over uniform points of the simplex, Vol(S(n)) = 1/n!.

    The report is flagged unreliable when some alpha_k >= 1/2: the second moment of z R is then infinite and
    the standard error does not shrink like N^-1/2.
    """
    if confidence is None:
        confidence = Settings.default_confidence
    n_samples, n_workers = _check_run(n_samples, confidence, n_workers)
    _check_arity(z, alpha.n)
    n = alpha.n
    volume = 1.0 / math.factorial(n)
    unreliable = any(a >= 0.5 for a in alpha.alpha)

    def finite_kernel(points):
        return np.isfinite(volterra_kernel(points, alpha))

    def sampler(stream, k):
        return sample_uniform_simplex(n, stream, size=k, dispatcher=dispatcher, accept=finite_kernel)

    def values_fn(points):
        with np.errstate(invalid="ignore", over="ignore"):
            return (z(points) * volterra_kernel(points, alpha))[:, None]

    acc, skipped = run_partitioned(sampler, values_fn, n_samples, rng, n_workers, skip_nonfinite, dispatcher)
    report = _report(acc, volume, confidence, rng, n_workers, skipped, unreliable)
    if unreliable:
        logger.warning("direct estimator with alpha=%s: some alpha_k >= 1/2, the variance is infinite and the "
                       "standard error is unreliable", alpha.alpha)
    return report


def compare_estimators(z: Integrand, alpha: AlphaVector, n_samples: int, confidence: float, rng: RngStream,
                       n_workers: int = 1, method: str = METHOD_CHAIN,
                       dispatcher: Optional[EventDispatcher] = None) -> ComparisonReport:
    """Run the importance and the direct estimator on the same integrand, on two substreams."""
    importance = estimate_volterra(z, alpha, n_samples, confidence, rng.substream(0), n_workers, method,
                                   dispatcher=dispatcher)
    direct = estimate_direct(z, alpha, n_samples, rng.substream(1), confidence, n_workers, dispatcher=dispatcher)
    var_importance = importance.centered_second_moment
    var_direct = direct.centered_second_moment
    ratio = var_direct / var_importance if var_importance > 0.0 else math.inf
    return ComparisonReport(importance, direct, ratio)


logger.debug("imported")
