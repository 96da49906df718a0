# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Beta Schedule module:
Confidence-scaling schedules. ``beta_value`` returns beta itself, i.e. the
square of the multiplier applied to the posterior standard deviation.
"""

import math
from dataclasses import dataclass
from typing import Union

from SafeBoExceptions import InputError
from SafeBoUtils import InputValidation


@dataclass(frozen=True)
class FixedBeta:
    """ Constant beta """

    value: float = 4.0

    def __post_init__(self):
        InputValidation.validate_positive('beta', self.value)


@dataclass(frozen=True)
class TheoreticalBeta:
    """
    sqrt(beta_n) = B + v * sqrt(2 (gamma_{n-1} + 1 + ln(1/delta)))

    B bounds the RKHS norm of the modeled function, v is the noise level and
    the confidence band holds jointly with probability 1 - delta.
    """

    rkhs_bound: float
    noise_std: float
    delta: float = 0.05

    def __post_init__(self):
        InputValidation.validate_positive('rkhs_bound', self.rkhs_bound)
        InputValidation.validate_positive('noise_std', self.noise_std)
        InputValidation.validate_open_interval('delta', self.delta, 0.0, 1.0)


BetaSchedule = Union[FixedBeta, TheoreticalBeta]


def beta_value(schedule, n, gamma=0.0):
    """ beta for iteration ``n`` (>= 1) given the information gain so far """

    if n < 1:
        raise InputError(f"iteration index must be >= 1, got {n}")
    if gamma < 0:
        raise InputError(f"information gain must be >= 0, got {gamma}")
    if isinstance(schedule, FixedBeta):
        return schedule.value
    root = schedule.rkhs_bound + schedule.noise_std * math.sqrt(
        2.0 * (gamma + 1.0 + math.log(1.0 / schedule.delta)))
    return root ** 2


def beta_from_dict(spec):
    """ ``{"mode": "fixed", "value": 4}`` or
    ``{"mode": "theoretical", "rkhs_bound": .., "noise_std": .., "delta": ..}`` """

    mode = spec.get('mode', 'fixed')
    if mode == 'fixed':
        return FixedBeta(value=spec.get('value', 4.0))
    if mode == 'theoretical':
        return TheoreticalBeta(rkhs_bound=spec['rkhs_bound'],
                               noise_std=spec['noise_std'],
                               delta=spec.get('delta', 0.05))
    raise InputError(f"unknown beta mode {mode!r}")
