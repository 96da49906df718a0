# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Acquisition Spec module:
Declarative choice of base acquisition and safety treatment, and the scoring
routine that turns posteriors into values the loop minimizes.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from SafeBoExceptions import InputError
from SafeBoUtils import InputValidation
from .beta_schedule import FixedBeta
from .acquisition_functions import (
    POS_INFINITY, barrier_acquisition, barrier_term, constraint_lcb,
    expected_improvement, lcb, pf_acquisition, pourmohamad_acquisition,
    probability_of_improvement, safeopt_rule_score)

BASE_ACQUISITIONS = ('lcb', 'ei', 'pi')
SAFETY_MODES = ('none', 'barrier', 'pf', 'pourmohamad', 'safeopt_rule')


@dataclass(frozen=True)
class AcquisitionSpec:
    """
    base : one of BASE_ACQUISITIONS
    safety : one of SAFETY_MODES
    cost_beta : schedule for the cost LCB (used by ``lcb`` and ``safeopt_rule``)
    constraint_betas : one schedule per constraint; a single entry is shared,
        an empty tuple means FixedBeta(4) for every constraint
    tau, tau_decay : barrier weight, multiplied by tau_decay after every step
    """

    base: str = 'lcb'
    safety: str = 'barrier'
    cost_beta: object = field(default_factory=FixedBeta)
    constraint_betas: Tuple[object, ...] = ()
    tau: float = 1e-3
    tau_decay: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'constraint_betas', tuple(self.constraint_betas))
        if self.base not in BASE_ACQUISITIONS:
            raise InputError(f"base acquisition must be one of {BASE_ACQUISITIONS}, got {self.base!r}")
        if self.safety not in SAFETY_MODES:
            raise InputError(f"safety mode must be one of {SAFETY_MODES}, got {self.safety!r}")
        if self.safety == 'pf' and self.base == 'lcb':
            raise InputError("the pf method scales an improvement acquisition; use base 'ei' or 'pi'")
        InputValidation.validate_positive('tau', self.tau)
        if not 0.0 < self.tau_decay <= 1.0:
            raise InputError(f"tau_decay must lie in (0, 1], got {self.tau_decay}")

    def constraint_beta(self, index):
        """ schedule of constraint ``index`` """
        if not self.constraint_betas:
            return FixedBeta()
        if len(self.constraint_betas) == 1:
            return self.constraint_betas[0]
        return self.constraint_betas[index]

    def tau_at(self, n):
        """ barrier weight used to choose the n-th query (n >= 1) """
        return self.tau * self.tau_decay ** (n - 1)

    def uses_barrier_safety(self):
        """ modes whose proposals must satisfy every constraint LCB > 0 """
        return self.safety in ('barrier', 'safeopt_rule')

    def base_values(self, cost, cost_beta, best):
        """ base acquisition as a quantity to minimize """
        if self.base == 'lcb':
            return np.asarray(lcb(cost, cost_beta), dtype=float)
        if self.base == 'ei':
            return -np.asarray(expected_improvement(cost, best), dtype=float)
        return -np.asarray(probability_of_improvement(cost, best), dtype=float)

    # pylint: disable=too-many-arguments
    def score(self, cost, constraints, cost_beta, constraint_betas, tau, best):
        """
        Values to minimize at every evaluated point.

        Parameters
        ----------
        cost : Posterior
            Cost posterior over the candidate points.
        constraints : list of Posterior
            Constraint posteriors over the same points.
        cost_beta, constraint_betas : float, list of float
            Current beta values.
        tau : float
            Current barrier weight.
        best : float
            Reference value for EI / PI.

        """
        if self.safety == 'pourmohamad':
            return np.asarray(pourmohamad_acquisition(cost, constraints), dtype=float)
        if self.safety == 'safeopt_rule':
            width = np.asarray(safeopt_rule_score([cost] + list(constraints),
                                                  [cost_beta] + list(constraint_betas)),
                               dtype=float)
            inside = np.ones(np.shape(width), dtype=bool)
            for posterior, beta in zip(constraints, constraint_betas):
                inside &= np.asarray(constraint_lcb(posterior, beta)) > 0
            return np.where(inside, -width, POS_INFINITY)
        if self.safety == 'pf':
            if self.base == 'ei':
                improvement = expected_improvement(cost, best)
            else:
                improvement = probability_of_improvement(cost, best)
            return -np.asarray(pf_acquisition(improvement, constraints), dtype=float)
        base = self.base_values(cost, cost_beta, best)
        if self.safety == 'none':
            return base
        terms = [barrier_term(posterior, beta) for posterior, beta in zip(constraints, constraint_betas)]
        return np.asarray(barrier_acquisition(base, terms, tau), dtype=float)
