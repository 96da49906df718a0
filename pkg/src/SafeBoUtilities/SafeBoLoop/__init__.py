# pylint: disable-msg=C0103
"""
SafeBoLoop: This package provides the safe Bayesian optimization loop.
"""

# __init__.py
from .domain import Domain, DEFAULT_GRID_CAP, REFINE_POINTS_PER_DIM
from .experiment_record import ExperimentRecord, SCHEMA_VERSION
from .safe_loop import (Oracle, LoopConfig, SafeBoState, SafeSetReport, Proposal, init,
                        safe_set, recommend, propose, step, run, run_loop, current_betas,
                        proposal_lcbs, replay_state, evaluate_grid, GridEvaluation)
