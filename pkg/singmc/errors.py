# -*- coding: utf-8 -*-
import logging

logger = logging.getLogger(__name__)
logger.debug("importing...")


class SingMcError(Exception):
    """Base of all errors raised by singmc."""


class DomainError(SingMcError, ValueError):
    """Raised when an input violates its invariants (exponent bounds, sample counts, grids...)."""


class UnsupportedError(DomainError):
    """Raised when a request is valid but outside what the routine supports, e.g. oracle dimension caps."""


class NumericalError(SingMcError, ArithmeticError):
    """Raised when a computation fails numerically."""


class NonFiniteIntegrandError(NumericalError):
    """Raised when the integrand returns a non-finite value at a sampled point."""

    def __init__(self, point, value, theta=None):
        self.point = tuple(float(c) for c in point)
        self.value = float(value)
        self.theta = None if theta is None else tuple(float(t) for t in theta)
        where = f"point {self.point}"
        if self.theta is not None:
            where += f" theta {self.theta}"
        super().__init__(f"integrand is not finite ({self.value}) at {where}")


class ExpressionError(SingMcError):
    """Base for integrand expression errors."""


class ExprSyntaxError(ExpressionError):
    """Lexical or syntax error, unknown function or wrong argument count, with its byte offset."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at offset {position}")


class ExprBindError(ExpressionError):
    """A variable references an index beyond the declared arity or parameter dimension."""


class UsageError(SingMcError):
    """Command line flags that do not make sense together."""


logger.debug("imported")
