# -*- coding: utf-8 -*-
"""
Structural equality for immutable value objects (expression trees).

"""
import logging

__all__ = ["EquatableMixin", "NotComparableException"]  # list of public visible parts of this module

logger = logging.getLogger(__name__)
logger.debug("importing...")


class NotComparableException(Exception):
    pass


class EquatableMixin(object):
    """
    Equality by value over the key built from the attributes named in ``_fields``.

    The objects are immutable so they are hashable too; hashing and equality use the same key. They have no
    ordering: the order operators raise :class:`.NotComparableException`.

    Based on: https://regebro.wordpress.com/2010/12/13/python-implementing-rich-comparison-the-correct-way/
    """
    _fields = ()

    def _key(self):
        return (type(self),) + tuple(getattr(self, f) for f in self._fields)

    def _same(self, other):
        return self._key() == other._key()

    def __eq__(self, other):
        if isinstance(other, EquatableMixin):
            return self._same(other)
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return NotImplemented
        return not eq

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        raise NotComparableException()

    def __le__(self, other):
        raise NotComparableException()

    def __ge__(self, other):
        raise NotComparableException()

    def __gt__(self, other):
        raise NotComparableException()


logger.debug("imported")
