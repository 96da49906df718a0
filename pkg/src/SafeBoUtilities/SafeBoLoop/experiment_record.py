# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Experiment Record module:
One row per oracle query. ``to_row`` gives the replayable CSV columns; the
wall time is kept out of it so that re-runs produce identical files.
``lcb_breach`` marks a barrier or safeopt_rule query chosen where some
constraint LCB was not strictly positive.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

SCHEMA_VERSION = 2


@dataclass(frozen=True)
class ExperimentRecord:
    """ per-iteration log row """

    run_id: str
    seed: int
    iteration: int
    x: Tuple[float, ...]
    observed: Tuple[float, ...]
    truth: Optional[Tuple[float, ...]]
    safe_set_fraction: float
    fallback: bool
    violation: bool
    lcb_breach: bool = False
    wall_time_ms: float = 0.0

    def to_row(self):
        """ flat, ordered column mapping """
        row = {
            'schema_version': SCHEMA_VERSION,
            'run_id': self.run_id,
            'seed': self.seed,
            'iteration': self.iteration,
        }
        for index, value in enumerate(self.x):
            row[f'x_{index}'] = value
        for index, value in enumerate(self.observed):
            row[f'y_{index}'] = value
        for index in range(len(self.observed)):
            row[f'truth_{index}'] = self.truth[index] if self.truth is not None else float('nan')
        row['safe_set_fraction'] = self.safe_set_fraction
        row['fallback'] = self.fallback
        row['violation'] = self.violation
        row['lcb_breach'] = self.lcb_breach
        return row
