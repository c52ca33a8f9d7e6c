# -*- coding: utf-8 -*-
import itertools as _itertools
import logging as _logging

_logger = _logging.getLogger(__name__)
_logger.debug("importing...")

_ids = _itertools.count(1000)


def _next_id():
    return next(_ids)


evt_id_batch_merged = _next_id()  # signature: evt_id, worker_index, points_in_batch, points_done_by_worker
evt_id_nonfinite_skipped = _next_id()  # signature: evt_id, point, value
evt_id_boundary_redraw = _next_id()  # signature: evt_id, sampler_name, redrawn_count
evt_id_jitter_escalated = _next_id()  # signature: evt_id, jitter
evt_id_probe_skipped = _next_id()  # signature: evt_id, point

_logger.debug("imported")
