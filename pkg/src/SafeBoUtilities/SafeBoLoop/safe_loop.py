# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Safe Loop module:
The sequential decision loop. Each step conditions the m + 1 GPs on the
history, scores the candidate grid with the configured acquisition, refines
around the incumbent, queries the oracle and appends the observation.
"""
# pylint: disable=too-many-locals

import math
import time
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Protocol, Tuple, runtime_checkable

import numpy as np

from SafeBoAcquisition import (AcquisitionSpec, TheoreticalBeta, beta_value, best_observed,
                               constraint_lcb)
from SafeBoExceptions import InputError, LoopTerminatedError, SafeBoError
from SafeBoGp import GpModel, Posterior, as_point, as_points
from SafeBoLog import Log
from .domain import Domain
from .experiment_record import ExperimentRecord

_LOG = Log('loop')


@runtime_checkable
class Oracle(Protocol):
    """ Anything that can be queried for noisy (cost, constraint_1..m) values.

    Implementations may also expose ``truth(x)`` returning noiseless values. """

    def query(self, x):
        """ noisy observations, length m + 1 """


@dataclass(frozen=True)
class LoopConfig:
    """ Everything ``init`` and ``run`` need besides the oracle """

    domain: Domain
    x0: Tuple[float, ...]
    cost_kernel: object
    constraint_kernels: Tuple[object, ...]
    acquisition: AcquisitionSpec = field(default_factory=AcquisitionSpec)
    noise_std: Tuple[float, ...] = ()
    prior_means: Tuple[float, ...] = ()
    budget: int = 25
    seed: int = 0
    run_id: str = 'run'

    def __post_init__(self):
        object.__setattr__(self, 'x0', tuple(float(value) for value in np.atleast_1d(self.x0)))
        object.__setattr__(self, 'constraint_kernels', tuple(self.constraint_kernels))
        n_outputs = 1 + len(self.constraint_kernels)
        noise = tuple(self.noise_std) or (0.0,) * n_outputs
        means = tuple(self.prior_means) or (0.0,) * n_outputs
        if len(noise) != n_outputs or len(means) != n_outputs:
            raise InputError(
                f"noise_std and prior_means need {n_outputs} entries (cost + constraints)")
        object.__setattr__(self, 'noise_std', noise)
        object.__setattr__(self, 'prior_means', means)
        if self.budget < 0:
            raise InputError(f"budget must be >= 0, got {self.budget}")


@dataclass(frozen=True, eq=False)
class SafeBoState:
    """ Full loop state; a new value is produced by every step """

    cost_gp: GpModel
    constraint_gps: Tuple[GpModel, ...]
    domain: Domain
    acq: AcquisitionSpec
    n: int
    history: Tuple[ExperimentRecord, ...]
    rng_seed: int = 0
    run_id: str = 'run'
    warnings: Tuple[str, ...] = ()

    @property
    def n_constraints(self):
        """ m """
        return len(self.constraint_gps)


@dataclass(frozen=True)
class SafeSetReport:
    """ membership of every grid point in the partially revealed safe set """

    member_mask: np.ndarray
    fraction_safe: float


class Proposal(NamedTuple):
    """ chosen point and how it was chosen """

    x: np.ndarray
    value: float
    fallback: bool
    safe_set_fraction: float


def _truth(oracle, x):
    truth = getattr(oracle, 'truth', None)
    if truth is None:
        return None
    return tuple(float(value) for value in np.asarray(truth(x), dtype=float))


def _observe(oracle, x, n_outputs):
    observed = np.asarray(oracle.query(x), dtype=float).ravel()
    if observed.shape[0] != n_outputs:
        raise InputError(f"oracle returned {observed.shape[0]} values, expected {n_outputs}")
    return observed


def init(oracle, x0, config):
    """
    Query the oracle at the known safe point and condition all GPs on it.

    Raises
    ------
    InputError
        If ``x0`` lies outside the domain (checked before any query) or the
        oracle has no ``query`` method.

    """
    if not isinstance(oracle, Oracle):
        raise InputError(f"{type(oracle).__name__} does not provide query(x)")
    domain = config.domain
    x0 = as_point(x0)
    if not domain.contains(x0):
        raise InputError(f"initial point {x0.tolist()} lies outside the domain {domain.bounds}")
    started = time.perf_counter()
    n_outputs = 1 + len(config.constraint_kernels)
    observed = _observe(oracle, x0, n_outputs)
    truth = _truth(oracle, x0)

    kernels = (config.cost_kernel,) + config.constraint_kernels
    gps = [GpModel(kernel=kernel, dim=domain.dim, prior_mean=mean, noise_std=noise)
           .add_observation(x0, value).condition()
           for kernel, mean, noise, value
           in zip(kernels, config.prior_means, config.noise_std, observed)]

    warnings = ()
    if np.any(observed[1:] <= 0):
        message = f"initial point {x0.tolist()} observed infeasible: constraints {observed[1:].tolist()}"
        _LOG.warning(message, run_id=config.run_id)
        warnings = (message,)

    record = ExperimentRecord(
        run_id=config.run_id, seed=config.seed, iteration=0,
        x=tuple(x0.tolist()), observed=tuple(observed.tolist()), truth=truth,
        safe_set_fraction=math.nan, fallback=False,
        violation=_is_violation(truth),
        wall_time_ms=1000.0 * (time.perf_counter() - started))
    return SafeBoState(cost_gp=gps[0], constraint_gps=tuple(gps[1:]), domain=domain,
                       acq=config.acquisition, n=1, history=(record,),
                       rng_seed=config.seed, run_id=config.run_id, warnings=warnings)


def _is_violation(truth):
    return truth is not None and any(value < 0 for value in truth[1:])


def current_betas(state):
    """ (cost beta, [constraint betas]) for the proposal of iteration n """
    def _beta(schedule, model):
        gamma = model.information_gain() if isinstance(schedule, TheoreticalBeta) else 0.0
        return beta_value(schedule, state.n, gamma)

    cost_beta = _beta(state.acq.cost_beta, state.cost_gp)
    constraint_betas = [_beta(state.acq.constraint_beta(index), model)
                        for index, model in enumerate(state.constraint_gps)]
    return cost_beta, constraint_betas


def _posteriors(state, points):
    mean, variance = state.cost_gp.posterior_grid(points)
    cost = Posterior(mean=mean, variance=variance)
    constraints = [Posterior(*model.posterior_grid(points)) for model in state.constraint_gps]
    return cost, constraints


def _constraint_lcbs(constraints, betas, size):
    if not constraints:
        return np.full((0, size), np.inf)
    return np.stack([np.asarray(constraint_lcb(posterior, beta)) for posterior, beta
                     in zip(constraints, betas)])


def safe_set(state):
    """ grid points where every constraint LCB is strictly positive """
    points = state.domain.grid()
    _, constraints = _posteriors(state, points)
    _, constraint_betas = current_betas(state)
    bounds = _constraint_lcbs(constraints, constraint_betas, points.shape[0])
    mask = np.all(bounds > 0, axis=0)
    return SafeSetReport(member_mask=mask, fraction_safe=float(np.mean(mask)))


def recommend(state):
    """
    Point to deploy after the loop: the grid minimizer of the cost posterior
    mean over the revealed safe set, lowest index on ties. Falls back to the
    last queried point when the safe set is empty.
    """
    points = state.domain.grid()
    cost, constraints = _posteriors(state, points)
    _, constraint_betas = current_betas(state)
    mask = np.all(_constraint_lcbs(constraints, constraint_betas, points.shape[0]) > 0, axis=0)
    if not np.any(mask):
        return np.asarray(state.history[-1].x, dtype=float)
    mean = np.where(mask, np.asarray(cost.mean, dtype=float), np.inf)
    return points[int(np.argmin(mean))].copy()


def _reference_best(state):
    costs = state.cost_gp.targets
    constraints = np.column_stack([model.targets for model in state.constraint_gps]) \
        if state.constraint_gps else np.empty((costs.shape[0], 0))
    return best_observed(costs, constraints)


def _scorer(state):
    """ closure scoring candidate points with this iteration's betas, tau and best """
    cost_beta, constraint_betas = current_betas(state)
    tau = state.acq.tau_at(state.n)
    best = _reference_best(state)

    def score(cost, constraints):
        return state.acq.score(cost, constraints, cost_beta, constraint_betas, tau, best)

    return score, constraint_betas


def _propose(state):
    points = state.domain.grid()
    score, constraint_betas = _scorer(state)
    cost, constraints = _posteriors(state, points)
    bounds = _constraint_lcbs(constraints, constraint_betas, points.shape[0])
    fraction = float(np.mean(np.all(bounds > 0, axis=0)))

    values = score(cost, constraints)
    if not np.any(np.isfinite(values)):
        index = int(np.argmax(np.min(bounds, axis=0))) if bounds.shape[0] else 0
        _LOG.warning('no finite acquisition value, using safest grid point',
                     run_id=state.run_id, n=state.n, x=points[index].tolist())
        return Proposal(x=points[index].copy(), value=math.inf, fallback=True,
                        safe_set_fraction=fraction)

    index = int(np.argmin(values))
    best_x, best_value = points[index].copy(), float(values[index])
    half_widths = state.domain.spacing.copy()
    for _ in range(state.domain.refinement_iters):
        local = state.domain.local_grid(best_x, half_widths)
        local_values = score(*_posteriors(state, local))
        local_index = int(np.argmin(local_values))
        if local_values[local_index] < best_value:
            best_x, best_value = local[local_index].copy(), float(local_values[local_index])
        half_widths = half_widths / 10.0
    return Proposal(x=best_x, value=best_value, fallback=False, safe_set_fraction=fraction)


class GridEvaluation(NamedTuple):
    """ everything the acquisition sees at a set of points """

    cost: Posterior
    constraints: list
    cost_beta: float
    constraint_betas: list
    constraint_lcbs: np.ndarray
    acquisition: np.ndarray


def evaluate_grid(state, points):
    """ posteriors, betas, constraint LCBs and acquisition values at ``points`` """
    points = as_points(points, state.domain.dim)
    score, constraint_betas = _scorer(state)
    cost_beta, _ = current_betas(state)
    cost, constraints = _posteriors(state, points)
    return GridEvaluation(
        cost=cost, constraints=constraints, cost_beta=cost_beta,
        constraint_betas=constraint_betas,
        constraint_lcbs=_constraint_lcbs(constraints, constraint_betas, points.shape[0]),
        acquisition=np.asarray(score(cost, constraints), dtype=float))


def propose(state):
    """ next query point (argmin of the configured acquisition) """
    return _propose(state).x


def proposal_lcbs(state, x):
    """ constraint LCBs at ``x`` with the betas of the current iteration """
    _, constraint_betas = current_betas(state)
    point = as_point(x).reshape(1, -1)
    _, constraints = _posteriors(state, point)
    return _constraint_lcbs(constraints, constraint_betas, 1)[:, 0]


def step(state, oracle):
    """ one propose -> query -> append -> recondition cycle """
    started = time.perf_counter()
    proposal = _propose(state)
    breach = False
    if state.acq.uses_barrier_safety() and not proposal.fallback:
        lcbs = proposal_lcbs(state, proposal.x)
        breach = bool(np.any(lcbs <= 0))
        if breach:
            _LOG.warning('proposal outside the revealed safe set', run_id=state.run_id,
                         n=state.n, lcbs=lcbs.tolist())

    n_outputs = 1 + state.n_constraints
    observed = _observe(oracle, proposal.x, n_outputs)
    truth = _truth(oracle, proposal.x)
    cost_gp = state.cost_gp.add_observation(proposal.x, observed[0]).condition()
    constraint_gps = tuple(model.add_observation(proposal.x, value).condition()
                           for model, value in zip(state.constraint_gps, observed[1:]))

    record = ExperimentRecord(
        run_id=state.run_id, seed=state.rng_seed, iteration=state.n,
        x=tuple(proposal.x.tolist()), observed=tuple(observed.tolist()), truth=truth,
        safe_set_fraction=proposal.safe_set_fraction, fallback=proposal.fallback,
        violation=_is_violation(truth), lcb_breach=breach,
        wall_time_ms=1000.0 * (time.perf_counter() - started))
    _LOG.debug('step', run_id=state.run_id, n=state.n, x=record.x, y=record.observed,
               fallback=record.fallback)
    new_state = replace(state, cost_gp=cost_gp, constraint_gps=constraint_gps,
                        n=state.n + 1, history=state.history + (record,))
    return new_state, record


def run_loop(oracle, config):
    """ ``init`` followed by ``config.budget`` steps; returns the final state """
    state = init(oracle, config.x0, config)
    for _ in range(config.budget):
        try:
            state, _ = step(state, oracle)
        except SafeBoError as err:
            _LOG.warning('loop terminated early', run_id=config.run_id, n=state.n, error=err)
            raise LoopTerminatedError(state.history, err) from err
    return state


def run(oracle, config):
    """ list of records: the initial observation plus one per step """
    return list(run_loop(oracle, config).history)


def replay_state(config, records, n_observations: Optional[int] = None):
    """ Rebuild the loop state after the first ``n_observations`` records """
    records = list(records)[:n_observations]
    kernels = (config.cost_kernel,) + config.constraint_kernels
    gps = []
    for output, (kernel, mean, noise) in enumerate(zip(kernels, config.prior_means, config.noise_std)):
        model = GpModel(kernel=kernel, dim=config.domain.dim, prior_mean=mean, noise_std=noise,
                        inputs=[record.x for record in records],
                        targets=[record.observed[output] for record in records])
        gps.append(model.condition())
    return SafeBoState(cost_gp=gps[0], constraint_gps=tuple(gps[1:]), domain=config.domain,
                       acq=config.acquisition, n=max(len(records), 1), history=tuple(records),
                       rng_seed=config.seed, run_id=config.run_id)
