# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Safe loop tests: initialization, proposals, safe-set reports, determinism and
the LCB feasibility of every proposal.
"""

import dataclasses
import math

import numpy as np
import pytest

from SafeBoAcquisition import AcquisitionSpec, FixedBeta, TheoreticalBeta, beta_value
from SafeBoExceptions import InputError, IntegrationError, LoopTerminatedError
from SafeBoGp import GpModel, LinearKernel, RbfKernel
from SafeBoGlucose import DoseOracle, PatientModel
from SafeBoLoop import (Domain, ExperimentRecord, LoopConfig, Oracle, Proposal, SafeBoState,
                        current_betas, evaluate_grid, init, proposal_lcbs, propose, recommend,
                        replay_state, run, run_loop, safe_set, step)
from SafeBoLoop import safe_loop
from SafeBoProblems import SyntheticOracle


class CountingOracle:
    """ constant observations, counts queries """

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)
        self.calls = 0

    def query(self, x):
        self.calls += 1
        return self.values.copy()


class FailingOracle(SyntheticOracle):
    """ raises on the n-th query """

    def __init__(self, problem, rng, fail_at):
        super().__init__(problem, rng)
        self.fail_at = fail_at
        self.calls = 0

    def query(self, x):
        self.calls += 1
        if self.calls == self.fail_at:
            raise IntegrationError(self.calls, 0.0)
        return super().query(x)


def _linear_gp(offset, x_obs, y_obs, dim=1):
    """ noiseless linear-kernel GP whose posterior is an exact line with zero variance """
    return GpModel(kernel=LinearKernel(1.0, offset), dim=dim, inputs=[[x_obs]],
                   targets=[y_obs]).condition()


def _state(cost_gp, constraint_gps, domain, acq=None):
    return SafeBoState(cost_gp=cost_gp, constraint_gps=tuple(constraint_gps), domain=domain,
                       acq=acq or AcquisitionSpec(), n=1, history=())


def test_init_outside_domain_queries_nothing(toy_problem, make_toy_config):
    oracle = CountingOracle([0.0, 1.0, 1.0])
    with pytest.raises(InputError):
        init(oracle, [7.0], make_toy_config(toy_problem))
    assert oracle.calls == 0


def test_init_conditions_every_gp_once(toy_problem, make_toy_config, rng):
    state = init(SyntheticOracle(toy_problem, rng), toy_problem.x0, make_toy_config(toy_problem))
    assert state.n == 1
    assert state.n_constraints == 2
    assert state.cost_gp.n_observations == 1
    assert all(model.n_observations == 1 for model in state.constraint_gps)
    assert len(state.history) == 1
    assert state.history[0].iteration == 0
    assert math.isnan(state.history[0].safe_set_fraction)
    assert not state.history[0].violation
    assert state.warnings == ()


def test_init_warns_on_infeasible_start(toy_problem, make_toy_config):
    state = init(CountingOracle([0.0, -1.0, 2.0]), [0.0], make_toy_config(toy_problem))
    assert len(state.warnings) == 1
    assert state.n == 1


def test_oracle_protocol(toy_problem, make_toy_config, rng):
    assert isinstance(SyntheticOracle(toy_problem, rng), Oracle)
    assert isinstance(DoseOracle(PatientModel(), rng), Oracle)
    with pytest.raises(InputError):
        init(object(), [0.0], make_toy_config(toy_problem))


def test_oracle_output_length_is_checked(toy_problem, make_toy_config):
    with pytest.raises(InputError):
        init(CountingOracle([0.0, 1.0]), [0.0], make_toy_config(toy_problem))


def test_loop_config_validation(toy_problem):
    with pytest.raises(InputError):
        LoopConfig(domain=toy_problem.domain, x0=(0.0,), cost_kernel=toy_problem.cost_kernel,
                   constraint_kernels=toy_problem.constraint_kernels, noise_std=(0.1, 0.1))
    with pytest.raises(InputError):
        LoopConfig(domain=toy_problem.domain, x0=(0.0,), cost_kernel=toy_problem.cost_kernel,
                   constraint_kernels=(), budget=-1)
    config = LoopConfig(domain=toy_problem.domain, x0=0.0, cost_kernel=toy_problem.cost_kernel,
                        constraint_kernels=toy_problem.constraint_kernels)
    assert config.noise_std == (0.0, 0.0, 0.0)
    assert config.x0 == (0.0,)


def test_history_lengths(toy_problem, make_toy_config):
    records = run(SyntheticOracle(toy_problem, np.random.default_rng(1)),
                  make_toy_config(toy_problem, budget=25))
    assert len(records) == 26
    assert [record.iteration for record in records] == list(range(26))

    records = run(SyntheticOracle(toy_problem, np.random.default_rng(1)),
                  make_toy_config(toy_problem, budget=0))
    assert len(records) == 1


def test_run_is_deterministic(toy_problem, make_toy_config):
    config = make_toy_config(toy_problem, budget=10, seed=3)
    first = run(SyntheticOracle(toy_problem, np.random.default_rng(3)), config)
    second = run(SyntheticOracle(toy_problem, np.random.default_rng(3)), config)
    assert [(record.x, record.observed, record.fallback) for record in first] == \
        [(record.x, record.observed, record.fallback) for record in second]


@pytest.mark.parametrize('safety', ['barrier', 'safeopt_rule'])
def test_every_proposal_is_lcb_feasible(toy_problem, make_toy_config, safety):
    config = make_toy_config(toy_problem, safety=safety, budget=15, seed=2)
    oracle = SyntheticOracle(toy_problem, np.random.default_rng(2))
    state = init(oracle, config.x0, config)
    for _ in range(config.budget):
        x = propose(state)
        assert np.all(proposal_lcbs(state, x) > 0)
        state, record = step(state, oracle)
        assert not record.fallback
        assert not record.lcb_breach
        assert record.x == tuple(x.tolist())
        assert 0.0 < record.safe_set_fraction <= 1.0


def test_pure_grid_proposal_is_exhaustive_argmin(toy_problem, make_toy_config):
    config = make_toy_config(toy_problem, budget=0, refinement_iters=0, grid_points=401)
    oracle = SyntheticOracle(toy_problem, np.random.default_rng(4))
    state = init(oracle, config.x0, config)
    for _ in range(6):
        grid = state.domain.grid()
        evaluation = evaluate_grid(state, grid)
        cost = state.cost_gp.posterior_grid(grid)
        constraints = [model.posterior_grid(grid) for model in state.constraint_gps]
        np.testing.assert_allclose(evaluation.cost.mean, cost[0])
        np.testing.assert_allclose(evaluation.constraints[0].variance, constraints[0][1])
        expected = grid[int(np.argmin(evaluation.acquisition))]
        np.testing.assert_array_equal(propose(state), expected)
        state, _ = step(state, oracle)


def test_safe_set_of_zero_data_gps_is_empty():
    domain = Domain(((-1.0, 1.0),), grid_points_per_dim=51)
    state = _state(GpModel(kernel=RbfKernel(1.0, 1.0)), [GpModel(kernel=RbfKernel(1.0, 1.0))],
                   domain)
    report = safe_set(state)
    assert report.fraction_safe == 0.0
    assert not report.member_mask.any()


def test_safe_set_of_exact_line_is_half_the_grid():
    domain = Domain(((-1.0, 1.0),), grid_points_per_dim=100)
    state = _state(GpModel(kernel=RbfKernel(1.0, 1.0)), [_linear_gp(0.0, 1.0, 1.0)], domain)
    report = safe_set(state)
    assert report.fraction_safe == pytest.approx(0.5)
    np.testing.assert_array_equal(report.member_mask, domain.grid()[:, 0] > 0)


def test_noiseless_feasible_observation_is_member():
    domain = Domain(((-1.0, 1.0),), grid_points_per_dim=101)
    constraint = GpModel(kernel=RbfKernel(1.0, 1.0)).add_observation(0.0, 1.0).condition()
    report = safe_set(_state(GpModel(kernel=RbfKernel(1.0, 1.0)), [constraint], domain))
    assert report.member_mask[50]


def test_barrier_proposal_stays_inside_constructed_safe_interval():
    domain = Domain(((0.0, 5.0),), grid_points_per_dim=501)
    lower = _linear_gp(2.0, 3.0, 1.0)
    upper = _linear_gp(3.0, 2.0, 1.0)
    cost = _linear_gp(0.0, 1.0, -1.0)
    state = _state(cost, [lower, upper], domain, AcquisitionSpec(tau=1e-6))
    x = propose(state)
    assert 2.0 < x[0] < 3.0
    assert np.all(proposal_lcbs(state, x) > 0)


def test_vanishing_barrier_follows_base_acquisition():
    domain = Domain(((-1.0, 1.0),), grid_points_per_dim=201)
    roomy = GpModel(kernel=RbfKernel(1.0, 1.0), prior_mean=100.0)
    state = _state(_linear_gp(0.0, 1.0, -1.0), [roomy], domain, AcquisitionSpec(tau=1e-9))
    np.testing.assert_allclose(propose(state), [1.0])


def test_empty_safe_set_falls_back_and_flags_record():
    domain = Domain(((-1.0, 1.0),), grid_points_per_dim=21)
    state = _state(GpModel(kernel=RbfKernel(1.0, 1.0)), [GpModel(kernel=RbfKernel(1.0, 1.0))],
                   domain)
    new_state, record = step(state, CountingOracle([0.0, 1.0]))
    assert record.fallback
    assert record.safe_set_fraction == 0.0
    assert new_state.n == 2
    assert new_state.cost_gp.n_observations == 1


def test_loop_failure_keeps_partial_history(toy_problem, make_toy_config):
    config = make_toy_config(toy_problem, budget=5)
    oracle = FailingOracle(toy_problem, np.random.default_rng(0), fail_at=3)
    with pytest.raises(LoopTerminatedError) as caught:
        run_loop(oracle, config)
    assert len(caught.value.records) == 2
    assert isinstance(caught.value.cause, IntegrationError)


def test_replay_reproduces_intermediate_state(toy_problem, make_toy_config):
    config = make_toy_config(toy_problem, budget=0)
    oracle = SyntheticOracle(toy_problem, np.random.default_rng(8))
    state = init(oracle, config.x0, config)
    for _ in range(4):
        state, _ = step(state, oracle)
        replayed = replay_state(config, state.history)
        assert replayed.n == state.n
        np.testing.assert_allclose(propose(replayed), propose(state))

    early = replay_state(config, state.history, 2)
    assert early.n == 2
    assert early.cost_gp.n_observations == 2


def test_theoretical_betas_use_information_gain(toy_problem):
    schedule = TheoreticalBeta(rkhs_bound=1.0, noise_std=0.01)
    acquisition = AcquisitionSpec(cost_beta=schedule, constraint_betas=(FixedBeta(2.0),))
    config = LoopConfig(domain=toy_problem.domain, x0=toy_problem.x0,
                        cost_kernel=toy_problem.cost_kernel,
                        constraint_kernels=toy_problem.constraint_kernels,
                        acquisition=acquisition, noise_std=toy_problem.noise_std, budget=3)
    state = run_loop(SyntheticOracle(toy_problem, np.random.default_rng(0)), config)
    cost_beta, constraint_betas = current_betas(state)
    assert cost_beta == pytest.approx(beta_value(schedule, state.n,
                                                 state.cost_gp.information_gain()))
    assert constraint_betas == [2.0, 2.0]


def test_proposal_outside_safe_set_is_flagged(toy_problem, make_toy_config, monkeypatch):
    config = make_toy_config(toy_problem, budget=1)
    oracle = SyntheticOracle(toy_problem, np.random.default_rng(0))
    state = init(oracle, config.x0, config)
    far = state.domain.upper.copy()
    assert np.all(proposal_lcbs(state, far) <= 0)
    monkeypatch.setattr(safe_loop, '_propose', lambda current: Proposal(
        x=far, value=0.0, fallback=False, safe_set_fraction=0.0))
    _, record = step(state, oracle)
    assert record.lcb_breach
    assert record.x == (5.0,)


def test_unconstrained_proposals_are_never_flagged(toy_problem, make_toy_config):
    config = make_toy_config(toy_problem, safety='none', budget=5, seed=1)
    records = run(SyntheticOracle(toy_problem, np.random.default_rng(1)), config)
    assert not any(record.lcb_breach for record in records)


def test_recommendation_minimizes_mean_over_safe_set():
    domain = Domain(((0.0, 5.0),), grid_points_per_dim=501)
    lower = _linear_gp(2.0, 3.0, 1.0)
    upper = _linear_gp(3.0, 2.0, 1.0)
    state = _state(_linear_gp(0.0, 1.0, -1.0), [lower, upper], domain)
    np.testing.assert_allclose(recommend(state), [2.99])


def test_recommendation_without_safe_set_is_last_query():
    domain = Domain(((-1.0, 1.0),), grid_points_per_dim=21)
    state = _state(_linear_gp(0.0, 1.0, 1.0), [_linear_gp(2.0, 0.0, -1.0)], domain)
    last = ExperimentRecord(run_id='r', seed=0, iteration=0, x=(0.3,), observed=(0.3, -1.0),
                            truth=None, safe_set_fraction=math.nan, fallback=False,
                            violation=True)
    state = dataclasses.replace(state, history=(last,))
    np.testing.assert_array_equal(recommend(state), np.asarray(state.history[-1].x))
