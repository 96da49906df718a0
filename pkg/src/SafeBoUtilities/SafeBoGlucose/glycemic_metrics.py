# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Glycemic Metrics module:
Cost and safety signals computed from a CGM trace. Every function accepts a
CgmTrace or a plain array; 2-D arrays are treated as one trace per row.
"""

import numpy as np
from scipy.ndimage import uniform_filter1d

from SafeBoExceptions import InputError

HYPO_THRESHOLD = 70.0
TARGET_RANGE = (70.0, 180.0)
PENALTY_BAND = (80.0, 140.0)
PENALTY_CAP_LEVEL = 300.0
PENALTY_CAP = 100.0
SMOOTHING_WINDOW = 3
CGM_FILTER_WINDOW = 5


def _series(trace):
    values = np.asarray(getattr(trace, 'cgm', trace), dtype=float)
    if values.size == 0 or values.shape[-1] == 0:
        raise InputError("a CGM trace needs at least one sample")
    return values


def penalty(glucose):
    """
    Asymmetric glycemic penalty J(y):

        1.0567 (80 - y)^1.3378     y <= 80
        0                          80 < y <= 140
        0.4607 (y - 140)^1.0601    140 < y <= 300
        100                        y > 300
    """
    glucose = np.asarray(glucose, dtype=float)
    low, high = PENALTY_BAND
    below = 1.0567 * np.power(np.clip(low - glucose, 0.0, None), 1.3378)
    above = 0.4607 * np.power(np.clip(glucose - high, 0.0, None), 1.0601)
    result = np.where(glucose <= low, below, 0.0)
    result = np.where((glucose > high) & (glucose <= PENALTY_CAP_LEVEL), above, result)
    result = np.where(glucose > PENALTY_CAP_LEVEL, PENALTY_CAP, result)
    return float(result) if result.ndim == 0 else result


def gpi(trace):
    """ glycemic penalty index: sum of J over the CGM samples """
    return _reduce(np.sum(penalty(_series(trace)), axis=-1))


def peak_cgm(trace):
    """ highest CGM sample """
    return _reduce(np.max(_series(trace), axis=-1))


def smoothed(trace, window=SMOOTHING_WINDOW):
    """ centered moving average over ``window`` samples, edges held """
    if int(window) != window or window < 1 or window % 2 == 0:
        raise InputError(f"smoothing window must be a positive odd integer, got {window!r}")
    return uniform_filter1d(_series(trace), size=int(window), axis=-1, mode='nearest')


def peak_index(trace):
    """ index of the smoothed maximum, earliest on ties """
    return np.argmax(smoothed(trace), axis=-1)


def hypo_constraint(trace):
    """
    Lowest CGM value from the smoothed peak to the end of the trace, minus
    HYPO_THRESHOLD. Nonnegative values are safe.
    """
    values = _series(trace)
    peak = np.asarray(peak_index(values))
    columns = np.arange(values.shape[-1])
    after_peak = np.where(columns >= peak[..., None], values, np.inf)
    return _reduce(np.min(after_peak, axis=-1) - HYPO_THRESHOLD)


def tir_metrics(traces):
    """
    Fractions of samples in range (70, 180], above 180 and at or below 70.

    ``traces`` is one trace or a collection of traces; samples are pooled.
    """
    if isinstance(traces, (list, tuple)):
        if not traces:
            raise InputError("tir_metrics needs at least one trace")
        values = np.concatenate([_series(trace).ravel() for trace in traces])
    else:
        values = _series(traces).ravel()
    low, high = TARGET_RANGE
    below = int(np.count_nonzero(values <= low))
    above = int(np.count_nonzero(values > high))
    total = values.shape[0]
    return (total - below - above) / total, above / total, below / total


def _reduce(values):
    return float(values) if np.ndim(values) == 0 else values


COST_METRICS = {'gpi': gpi, 'peak': peak_cgm}
