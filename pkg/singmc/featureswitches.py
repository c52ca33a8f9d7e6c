# -*- coding: utf-8 -*-
import logging

logger = logging.getLogger(__name__)
logger.debug("importing...")


class Features:
    check_support_on_1 = __debug__  # samplers assert 0 < s_1 < ... < s_n < 1 and |x| <= 1 on every batch
    check_dependent_trial_bound_2 = True  # parametric runs assert |q_j - q_j+1| <= K max_i |z_ij - z_ij+1|
    log_batches_3 = False  # debug log line per merged batch

    @staticmethod
    def names():
        return [k for k, v in vars(Features).items() if isinstance(v, bool)]

    @staticmethod
    def toggle(name):
        """Flip a switch by its full name or its number suffix ('1', '2', ...)."""
        for k in Features.names():
            if k == name or k.rsplit("_", 1)[-1] == name:
                value = not getattr(Features, k)
                setattr(Features, k, value)
                logger.info(f"Features.{k}: {value}")
                return k
        raise KeyError(f"unknown feature switch '{name}', known: {', '.join(Features.names())}")


logger.debug("imported")
