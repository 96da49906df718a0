# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
End-to-end acceptance runs: toy safety and convergence over 50 seeds, the
baseline comparison harness and the dose-guidance cohort.
"""

import numpy as np
import pytest

from SafeBoLoop import init, proposal_lcbs, propose, step
from SafeBoProblems import SyntheticOracle, regret_metrics
from SafeBoRunner import execute, validate_config

SEEDS = list(range(50))

pytestmark = pytest.mark.slow


def test_barrier_is_safe_and_converges_on_toy_1d(toy_problem, make_toy_config):
    regrets = []
    violations = 0
    for seed in SEEDS:
        config = make_toy_config(toy_problem, budget=25, seed=seed, tau=1e-3)
        oracle = SyntheticOracle(toy_problem, np.random.default_rng(seed))
        state = init(oracle, config.x0, config)
        for _ in range(config.budget):
            x = propose(state)
            assert np.all(proposal_lcbs(state, x) > 0)
            state, _ = step(state, oracle)
        regret, count = regret_metrics(state.history, toy_problem)
        violations += count
        regrets.append(regret)
    assert violations == 0
    assert np.median(regrets) <= 0.05 * toy_problem.safe_cost_range


def test_baseline_harness_reports_every_method(tmp_path):
    config = validate_config({'problem': 'toy1d', 'methods': ['barrier', 'pf', 'pourmohamad',
                                                              'safeopt_rule'],
                              'seeds': SEEDS, 'budget': 25, 'tau': 1e-3, 'workers': 4})
    summary = execute(config, tmp_path)
    assert set(summary['methods']) == {'barrier', 'pf', 'pourmohamad', 'safeopt_rule'}
    for stats in summary['methods'].values():
        assert stats['cells'] == 50
        assert stats['failures'] == 0
        assert stats['violations'] >= 0
    assert summary['methods']['barrier']['violations'] == 0
    assert len(list((tmp_path / 'records').iterdir())) == 200


def test_dose_guidance_on_calibrated_cohort(tmp_path):
    config = validate_config({'problem': 'glucose', 'methods': ['barrier'], 'seeds': [0],
                              'cohort_size': 10, 'cohort_seed': 0, 'budget': 15, 'tau': 0.1,
                              'workers': 4})
    summary = execute(config, tmp_path)
    cells = summary['cells']
    assert len(cells) == 10
    assert all(entry['failure'] is None for entry in cells)
    assert all(entry['records'] == 16 for entry in cells)
    assert sum(entry['hypo_samples'] for entry in cells) == 0
    assert all(entry['min_true_bg'] > 70.0 for entry in cells)
    assert all(entry['dose_error'] is not None and entry['dose_error'] <= 0.10 for entry in cells)
    assert sum(entry['first_meal_near_optimum'] is not None
               and entry['first_meal_near_optimum'] <= 5 for entry in cells) >= 8
    assert len({round(entry['optimal_dose'], 2) for entry in cells}) > 1
