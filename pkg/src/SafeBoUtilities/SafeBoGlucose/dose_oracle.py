# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Dose Oracle module:
The bolus dose-guidance problem: one standardized meal per query, cost from
the CGM trace (GPI by default) and the post-peak hypoglycemia constraint.
"""

import numpy as np

from SafeBoExceptions import InputError
from SafeBoLog import Log
from .glycemic_metrics import CGM_FILTER_WINDOW, COST_METRICS, hypo_constraint, smoothed
from .patient_model import MealScenario, simulate, true_glucose

_LOG = Log('glucose')

DOSE_BOUNDS = (0.0, 20.0)
STANDARD_MEAL_CARBS = 80.0
SWEEP_RESOLUTION = 0.05


def _cost_metric(name):
    if name not in COST_METRICS:
        raise InputError(f"cost_metric must be one of {sorted(COST_METRICS)}, got {name!r}")
    return COST_METRICS[name]


def _checked_dose(x):
    dose = float(np.asarray(x, dtype=float).ravel()[0])
    low, high = DOSE_BOUNDS
    if not low <= dose <= high:
        raise InputError(f"bolus must lie in [{low}, {high}] U, got {dose}")
    return dose


class DoseOracle:
    """
    Oracle whose query simulates one meal with bolus x and returns
    (cost, hypo_constraint) from the noisy CGM after a centered moving average
    over ``cgm_filter_window`` samples; truth uses the raw noiseless trace.

    Every queried trace is kept in ``traces`` in query order.
    """

    def __init__(self, patient, rng=None, carbs=STANDARD_MEAL_CARBS, horizon_h=6.0,
                 cost_metric='gpi', cgm_filter_window=CGM_FILTER_WINDOW):
        smoothed([0.0], cgm_filter_window)
        self.patient = patient
        self.rng = rng if rng is not None else np.random.default_rng()
        self.carbs = carbs
        self.horizon_h = horizon_h
        self.cost_metric = cost_metric
        self._cost = _cost_metric(cost_metric)
        self.cgm_filter_window = cgm_filter_window
        self.traces = []

    def _scenario(self, x):
        return MealScenario(carbs=self.carbs, bolus=_checked_dose(x), horizon_h=self.horizon_h)

    def query(self, x):
        """ simulate one meal and return (cost, constraint) from the CGM """
        trace = simulate(self.patient, self._scenario(x), self.rng)
        self.traces.append(trace)
        _LOG.debug('meal simulated', patient=self.patient.name, bolus=trace.bolus,
                   min_bg=float(np.min(trace.true_bg)))
        cgm = smoothed(trace, self.cgm_filter_window)
        return np.array([self._cost(cgm), hypo_constraint(cgm)])

    def truth(self, x):
        """ (cost, constraint) of the noiseless trace """
        trace = simulate(self.patient, self._scenario(x), rng=None)
        return np.array([self._cost(trace), hypo_constraint(trace)])


def dose_oracle(patient, rng=None, cost_metric='gpi', cgm_filter_window=CGM_FILTER_WINDOW):
    """ DoseOracle for an 80 g meal over 6 h """
    return DoseOracle(patient, rng=rng, cost_metric=cost_metric,
                      cgm_filter_window=cgm_filter_window)


def dose_sweep(patient, doses, carbs=STANDARD_MEAL_CARBS, horizon_h=6.0, cost_metric='gpi'):
    """
    Noiseless (cost, constraint) for every dose, integrated as one batch.

    Returns
    -------
    (np.ndarray, np.ndarray)

    """
    doses = np.asarray(doses, dtype=float).ravel()
    low, high = DOSE_BOUNDS
    if np.any(doses < low) or np.any(doses > high):
        raise InputError(f"every dose must lie in [{low}, {high}] U")
    bg = true_glucose(patient, carbs, doses, horizon_h)
    return _cost_metric(cost_metric)(bg), hypo_constraint(bg)


def sweep_doses(resolution=SWEEP_RESOLUTION):
    """ dose grid over DOSE_BOUNDS """
    low, high = DOSE_BOUNDS
    return np.linspace(low, high, int(round((high - low) / resolution)) + 1)


def optimal_dose(patient, resolution=SWEEP_RESOLUTION, cost_metric='gpi'):
    """ (dose, cost) of the noiseless brute-force optimum; lowest dose on ties """
    doses = sweep_doses(resolution)
    costs, _ = dose_sweep(patient, doses, cost_metric=cost_metric)
    index = int(np.argmin(costs))
    return float(doses[index]), float(costs[index])
