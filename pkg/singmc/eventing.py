# -*- coding: utf-8 -*-
import logging
from types import MethodType as _MethodType
from weakref import ref as _ref
from weakref import WeakMethod as _WeakMethod

logger = logging.getLogger(__name__)
logger.debug("importing...")


class EventDispatcher:
    """
    Progress and diagnostic notifications of a run (batches merged, points skipped, jitter escalated...).

    Handlers are kept as weak references, the caller owns them. A dispatcher without handlers costs a dict lookup.
    """

    def __init__(self):
        self.event_registry: dict = {}

    def dispatch_event(self, evt_id: int, *args) -> None:
        """Call every handler registered for evt_id as handler(evt_id, *args).

        Dispatching an id nobody listens to passes silently. The argument signature of each id is documented
        in :py:mod:`singmc.events`.
        """
        for func in list(self.event_registry.get(evt_id, [])):
            handler = func()
            if handler is not None:
                handler(evt_id, *args)

    def has_handlers(self, evt_id: int) -> bool:
        return bool(self.event_registry.get(evt_id))

    def _make_callback(self, evt_id: int):
        """Create an internal callback to remove dead handlers."""

        def callback(weak_method):
            handlers = self.event_registry.get(evt_id)
            if handlers is None:
                return
            handlers.discard(weak_method)
            if not handlers:
                del self.event_registry[evt_id]

        return callback

    def set_handler(self, evt_id: int, func) -> None:
        """Register a function or bound method for evt_id. Only a weak reference is kept."""
        handlers = self.event_registry.setdefault(evt_id, set())
        if isinstance(func, _MethodType):
            handlers.add(_WeakMethod(func, self._make_callback(evt_id)))
        else:
            handlers.add(_ref(func, self._make_callback(evt_id)))

    def remove_handler(self, evt_id: int, func) -> None:
        """Unregister func from evt_id; unknown pairs pass silently."""
        handlers = self.event_registry.get(evt_id)
        if not handlers:
            return
        for weak in list(handlers):
            if weak() == func:
                handlers.discard(weak)
        if not handlers:
            del self.event_registry[evt_id]


def dispatch(dispatcher, evt_id, *args):
    """Dispatch on an optional dispatcher."""
    if dispatcher is not None:
        dispatcher.dispatch_event(evt_id, *args)


logger.debug("imported")
