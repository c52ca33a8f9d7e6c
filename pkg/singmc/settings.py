# -*- coding: utf-8 -*-
from dataclasses import dataclass

import logging

logger = logging.getLogger(__name__)
logger.debug("importing...")


@dataclass
class Settings:
    # sampling
    integrability_margin = 1e-9  # alpha_k < 1 - margin, A_k > -1 + margin
    batch_size = 65536  # points drawn per sampler call inside the estimators
    max_redraw_rounds = 64  # boundary re-draw rounds before giving up

    # estimation
    default_confidence = 0.95
    default_workers = 1
    recommended_min_samples = 1000  # below this the normal-quantile CI is optimistic

    # parametric band
    default_gaussian_draws = 10000
    min_gaussian_draws = 1000
    jitter_start = 1e-12  # relative to trace / m
    jitter_factor = 10.0
    jitter_max = 1e-6
    gaussian_stream_key = 2 ** 32  # substream key for the sup-quantile draws, never a worker index
    rho_stream_key = 2 ** 32 + 1  # substream key for the rho probe points
    dependent_trial_tolerance = 1e-12  # relative slack for the adjacent-grid bound

    # oracle
    default_oracle_nodes = 32
    default_quad_scheme = "gauss_jacobi"

    # expressions
    max_expression_bytes = 64 * 1024
    max_expression_nesting = 100  # parentheses, calls, exponents and minus signs inside one another

    # reports
    json_significant_digits = 17
    include_covariance = False


try:
    # define a _custom.py file to override some settings (useful while developing)
    # noinspection PyUnresolvedReferences,PyProtectedMember
    from singmc._custom import Settings as CustomSettings

    logger.debug("Custom settings found...")
    for k, v in CustomSettings.__dict__.items():
        if str(k).startswith("__"):
            continue
        if not hasattr(Settings, k):
            logger.warning("Custom setting found but is not in Settings: %s=%s", k, v)
        setattr(Settings, k, v)
        logger.debug("Overwriting Settings.%s=%s", k, v)
except ImportError:
    pass

logger.debug("imported")
