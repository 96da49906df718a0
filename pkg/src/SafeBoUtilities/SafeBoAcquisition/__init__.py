# pylint: disable-msg=C0103
"""
SafeBoAcquisition: This package provides acquisition functions and beta schedules.
"""

# __init__.py
from .beta_schedule import FixedBeta, TheoreticalBeta, BetaSchedule, beta_value, beta_from_dict
from .acquisition_functions import (NEG_INFINITY, POS_INFINITY, lcb, expected_improvement,
                                    probability_of_improvement, feasibility_probability,
                                    constraint_lcb, barrier_term, barrier_acquisition,
                                    pf_acquisition, pourmohamad_acquisition,
                                    safeopt_rule_score, best_observed)
from .acquisition_spec import AcquisitionSpec, BASE_ACQUISITIONS, SAFETY_MODES
