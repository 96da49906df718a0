# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Patient Model module:
Surrogate type-1-diabetes patient. Bergman minimal model (glucose, remote
insulin action, plasma insulin) fed by a two-compartment carbohydrate
absorption chain and a two-compartment subcutaneous insulin chain:

    dQ1/dt = -Q1 / tau_m                      gut carbohydrate [mg]
    dQ2/dt = (Q1 - Q2) / tau_m
    Ra     = f * Q2 / tau_m                   glucose appearance [mg/min]
    dS1/dt = u_b - S1 / tau_i                 subcutaneous insulin [U]
    dS2/dt = (S1 - S2) / tau_i
    dI/dt  = 1000 S2 / (tau_i V_I BW) - k_e I plasma insulin [mU/L]
    dX/dt  = -p2 X + p2 S_I (I - I_b)         remote insulin action [1/min]
    dG/dt  = -(p1 + X) G + p1 G_b + Ra / (V_G BW)   plasma glucose [mg/dl]

The basal infusion u_b is held constant and I_b is its steady state, so with
no meal and no bolus every state stays at equilibrium. A meal of c grams adds
1000 c mg to Q1 and a bolus of d units adds d to S1, both at t = 0.
"""
# pylint: disable=too-many-instance-attributes

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from SafeBoExceptions import InputError, IntegrationError
from SafeBoUtils import InputValidation

BASAL_GLUCOSE_RANGE = (90.0, 160.0)

_POSITIVE_FIELDS = ('body_weight', 'glucose_volume', 'meal_time_constant',
                    'insulin_time_constant', 'insulin_volume', 'insulin_clearance',
                    'insulin_action_rate', 'insulin_sensitivity', 'glucose_effectiveness',
                    'basal_rate', 'step_min', 'cgm_sample_period')


@dataclass(frozen=True)
class PatientModel:
    """
    Parameters of one virtual patient.

    Parameters
    ----------
    body_weight : float
        BW [kg].
    glucose_volume : float
        V_G, glucose distribution volume [dl/kg].
    bioavailability : float
        f, fraction of meal carbohydrate reaching plasma, in (0, 1].
    meal_time_constant : float
        tau_m, carbohydrate absorption time constant [min].
    insulin_time_constant : float
        tau_i, subcutaneous absorption time constant [min].
    insulin_volume : float
        V_I, insulin distribution volume [L/kg].
    insulin_clearance : float
        k_e, plasma insulin elimination rate [1/min].
    insulin_action_rate : float
        p2, remote insulin action decay [1/min].
    insulin_sensitivity : float
        S_I [1/min per mU/L].
    glucose_effectiveness : float
        p1 [1/min].
    basal_glucose : float
        G_b [mg/dl], within BASAL_GLUCOSE_RANGE.
    basal_rate : float
        Pre-programmed basal insulin [U/h].
    step_min : float
        RK4 step [min]; must divide the CGM sample period.
    cgm_noise_std : float
        Additive Gaussian CGM noise [mg/dl].
    cgm_sample_period : float
        CGM sample period [min].

    """

    name: str = 'default'
    body_weight: float = 70.0
    glucose_volume: float = 1.8
    bioavailability: float = 0.8
    meal_time_constant: float = 40.0
    insulin_time_constant: float = 30.0
    insulin_volume: float = 0.12
    insulin_clearance: float = 0.138
    insulin_action_rate: float = 0.03
    insulin_sensitivity: float = 7.5e-4
    glucose_effectiveness: float = 0.02
    basal_glucose: float = 120.0
    basal_rate: float = 1.0
    step_min: float = 1.0
    cgm_noise_std: float = 5.0
    cgm_sample_period: float = 5.0

    def __post_init__(self):
        for name in _POSITIVE_FIELDS:
            InputValidation.validate_positive(name, getattr(self, name))
        InputValidation.validate_nonnegative('cgm_noise_std', self.cgm_noise_std)
        if not 0.0 < self.bioavailability <= 1.0:
            raise InputError(f"bioavailability must lie in (0, 1], got {self.bioavailability}")
        low, high = BASAL_GLUCOSE_RANGE
        if not low <= self.basal_glucose <= high:
            raise InputError(f"basal_glucose must lie in [{low}, {high}] mg/dl, got {self.basal_glucose}")
        ratio = self.cgm_sample_period / self.step_min
        if abs(ratio - round(ratio)) > 1e-9:
            raise InputError(
                f"step_min {self.step_min} must divide cgm_sample_period {self.cgm_sample_period}")

    @property
    def basal_insulin(self):
        """ steady-state plasma insulin I_b [mU/L] under the basal rate """
        return (self.basal_rate / 60.0) * 1000.0 / (
            self.insulin_volume * self.body_weight * self.insulin_clearance)


@dataclass(frozen=True)
class MealScenario:
    """ one meal at t = 0 with a bolus given along with it """

    carbs: float = 80.0
    bolus: float = 0.0
    horizon_h: float = 6.0
    meal_time: float = 0.0

    def __post_init__(self):
        InputValidation.validate_nonnegative('carbs', self.carbs)
        InputValidation.validate_nonnegative('bolus', self.bolus)
        InputValidation.validate_positive('horizon_h', self.horizon_h)
        if self.meal_time != 0.0:
            raise InputError("only meals at t = 0 are simulated")


@dataclass(frozen=True, eq=False)
class CgmTrace:
    """ CGM samples and the parallel noiseless blood glucose """

    times: np.ndarray
    cgm: np.ndarray
    true_bg: np.ndarray
    bolus: float = 0.0
    carbs: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def samples(self):
        """ list of (t [min], cgm [mg/dl]) """
        return list(zip(self.times.tolist(), self.cgm.tolist()))

    def __len__(self):
        return self.cgm.shape[0]


def sample_times(patient, horizon_h):
    """ CGM sample times from 0 to the horizon, inclusive """
    count = int(round(horizon_h * 60.0 / patient.cgm_sample_period))
    return np.arange(count + 1) * patient.cgm_sample_period


def _derivative(patient, state, insulin_basal):
    gut_1, gut_2, sub_1, sub_2, insulin, action, glucose = state
    tau_m = patient.meal_time_constant
    tau_i = patient.insulin_time_constant
    appearance = patient.bioavailability * gut_2 / tau_m
    return np.stack([
        -gut_1 / tau_m,
        (gut_1 - gut_2) / tau_m,
        patient.basal_rate / 60.0 - sub_1 / tau_i,
        (sub_1 - sub_2) / tau_i,
        1000.0 * sub_2 / (tau_i * patient.insulin_volume * patient.body_weight)
        - patient.insulin_clearance * insulin,
        -patient.insulin_action_rate * action
        + patient.insulin_action_rate * patient.insulin_sensitivity * (insulin - insulin_basal),
        -(patient.glucose_effectiveness + action) * glucose
        + patient.glucose_effectiveness * patient.basal_glucose
        + appearance / (patient.glucose_volume * patient.body_weight),
    ])


def true_glucose(patient, carbs, boluses, horizon_h=6.0, step_min: Optional[float] = None):
    """
    Noiseless blood glucose at every CGM sample time, batched over boluses.

    Returns
    -------
    np.ndarray
        Shape (len(boluses), n_samples).

    Raises
    ------
    IntegrationError
        If the state becomes non-finite.

    """
    boluses = np.atleast_1d(np.asarray(boluses, dtype=float))
    step = patient.step_min if step_min is None else float(step_min)
    steps_per_sample = int(round(patient.cgm_sample_period / step))
    n_samples = sample_times(patient, horizon_h).shape[0]

    insulin_basal = patient.basal_insulin
    sub_basal = patient.basal_rate / 60.0 * patient.insulin_time_constant
    state = np.zeros((7, boluses.shape[0]))
    state[0] = 1000.0 * carbs
    state[2] = sub_basal + boluses
    state[3] = sub_basal
    state[4] = insulin_basal
    state[6] = patient.basal_glucose

    result = np.empty((boluses.shape[0], n_samples))
    result[:, 0] = state[6]
    step_index = 0
    for sample in range(1, n_samples):
        for _ in range(steps_per_sample):
            k_1 = _derivative(patient, state, insulin_basal)
            k_2 = _derivative(patient, state + 0.5 * step * k_1, insulin_basal)
            k_3 = _derivative(patient, state + 0.5 * step * k_2, insulin_basal)
            k_4 = _derivative(patient, state + step * k_3, insulin_basal)
            state = state + step / 6.0 * (k_1 + 2.0 * k_2 + 2.0 * k_3 + k_4)
            step_index += 1
        if not np.all(np.isfinite(state)):
            raise IntegrationError(step_index, step_index * step)
        result[:, sample] = state[6]
    return result


def simulate(patient, scenario, rng=None):
    """
    Integrate one meal scenario and sample the CGM.

    Noise is drawn from ``rng`` with ``patient.cgm_noise_std``; without an
    rng the CGM equals the true blood glucose.
    """
    times = sample_times(patient, scenario.horizon_h)
    true_bg = true_glucose(patient, scenario.carbs, [scenario.bolus], scenario.horizon_h)[0]
    if rng is None or patient.cgm_noise_std == 0:
        cgm = true_bg.copy()
    else:
        cgm = true_bg + patient.cgm_noise_std * rng.standard_normal(true_bg.shape[0])
    return CgmTrace(times=times, cgm=cgm, true_bg=true_bg, bolus=scenario.bolus,
                    carbs=scenario.carbs)
