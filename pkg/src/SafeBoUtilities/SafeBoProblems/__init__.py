# pylint: disable-msg=C0103
"""
SafeBoProblems: This package provides synthetic benchmark problems.
"""

# __init__.py
from .synthetic_problems import (SyntheticProblem, SyntheticOracle, toy_1d, toy_2d, query,
                                 regret_metrics, PROBLEMS, BRUTE_FORCE_POINTS)
