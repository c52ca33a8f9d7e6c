# -*- coding: utf-8 -*-
import logging

from singmc import events
from singmc.errors import DomainError
from singmc.eventing import EventDispatcher
from singmc.exprlang import compile_integrand, compile_parametric
from singmc.oracle import QuadSpec
from singmc.parametric import ThetaGrid
from singmc.rng import RngStream
from singmc.specfun import AlphaVector, BallExponents

logger = logging.getLogger(__name__)
logger.debug("importing...")


class LoggingHandlers:
    """Turns run events into log records."""

    def on_nonfinite_skipped(self, evt_id, point, value):
        logger.info("skipped non-finite integrand value %s at %s", value, point)

    def on_boundary_redraw(self, evt_id, sampler_name, redrawn_count):
        logger.debug("%s: re-drew %s boundary points", sampler_name, redrawn_count)

    def on_jitter_escalated(self, evt_id, jitter):
        logger.info("covariance jitter escalated to %s", jitter)

    def on_probe_skipped(self, evt_id, point):
        logger.debug("rho probe %s skipped, sup |z| is 0", point)

    def register(self, dispatcher: EventDispatcher):
        dispatcher.set_handler(events.evt_id_nonfinite_skipped, self.on_nonfinite_skipped)
        dispatcher.set_handler(events.evt_id_boundary_redraw, self.on_boundary_redraw)
        dispatcher.set_handler(events.evt_id_jitter_escalated, self.on_jitter_escalated)
        dispatcher.set_handler(events.evt_id_probe_skipped, self.on_probe_skipped)


class Factory:
    _dispatcher = None
    _logging_handlers = None

    @staticmethod
    def create_dispatcher():
        # singleton, the handlers are weakly referenced so the factory keeps them alive
        if not Factory._dispatcher:
            Factory._dispatcher = EventDispatcher()
            Factory._logging_handlers = LoggingHandlers()
            Factory._logging_handlers.register(Factory._dispatcher)
        return Factory._dispatcher

    @staticmethod
    def create_rng(seed):
        return RngStream(seed)

    @staticmethod
    def create_alpha(text):
        return AlphaVector.parse(text)

    @staticmethod
    def create_ball_exponents(text):
        return BallExponents.parse(text)

    @staticmethod
    def create_integrand(text, arity):
        return compile_integrand(text, arity)

    @staticmethod
    def create_parametric_integrand(text, arity, n_params):
        return compile_parametric(text, arity, n_params)

    @staticmethod
    def create_grid(range_texts):
        """ThetaGrid from 'start:stop:count' strings, one per parameter dimension."""
        ranges = []
        for text in range_texts:
            parts = text.split(":")
            if len(parts) != 3:
                raise DomainError(f"grid range '{text}' is not start:stop:count")
            try:
                ranges.append((float(parts[0]), float(parts[1]), int(parts[2])))
            except ValueError as ex:
                raise DomainError(f"grid range '{text}': {ex}")
        return ThetaGrid.from_ranges(ranges)

    @staticmethod
    def create_quad_spec(nodes, scheme):
        return QuadSpec(nodes, scheme)


logger.debug("imported")
