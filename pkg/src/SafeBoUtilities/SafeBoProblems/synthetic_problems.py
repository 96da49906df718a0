# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Synthetic Problems module:
Closed-form benchmark problems with exposed ground truth. Each problem verifies
at construction that its start point is strictly feasible and locates its safe
optimum by dense-grid brute force over the feasible component containing x0.
"""

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import ndimage

from SafeBoExceptions import InputError
from SafeBoGp import RbfKernel, as_point, as_points
from SafeBoLoop import Domain
from SafeBoLog import Log

_LOG = Log('problems')

BRUTE_FORCE_POINTS = {1: 100001, 2: 401}


# toy_1d: disjoint feasible set (-1.74, 1.74) U (3.97, 4.65); the deeper cost
# well near x = 4.3 is only reachable by leaving the component of x0 = 0.
def _toy_1d_cost(points):
    x = points[:, 0]
    return (0.5 * (x - 0.6) ** 2 + 1.5 * np.cos(1.6 * (x + 0.9))
            - 10.0 * np.exp(-(x - 4.3) ** 2 / 0.8))


def _toy_1d_wave(points):
    return 1.0 + 3.0 * np.cos(1.1 * points[:, 0])


def _toy_1d_bowl(points):
    return 4.0 - 0.3 * (points[:, 0] - 1.0) ** 2


def _toy_2d_cost(points):
    return (points[:, 0] - 0.8) ** 2 + (points[:, 1] + 0.5) ** 2


def _toy_2d_ellipse(points):
    return 2.0 - 0.5 * points[:, 0] ** 2 - 0.3 * points[:, 1] ** 2


def _toy_2d_plane(points):
    return 1.5 + 0.5 * points[:, 0] + 0.8 * points[:, 1]


@dataclass(frozen=True, eq=False)
class SyntheticProblem:
    """
    A benchmark with closed-form cost and constraints (feasible means f_i >= 0).

    ``safe_optimum`` is (x*, f*) over the feasible component containing ``x0``;
    ``component_mask`` flags the brute-force grid points of that component.
    ``cost_kernel`` / ``constraint_kernels`` are the GP settings the problem
    is meant to be run with.
    """

    name: str
    dim: int
    cost_fn: Callable
    constraint_fns: Tuple[Callable, ...]
    noise_std: Tuple[float, ...]
    domain: Domain
    x0: Tuple[float, ...]
    cost_kernel: object
    constraint_kernels: Tuple[object, ...]
    safe_optimum: Optional[Tuple[Tuple[float, ...], float]] = None
    safe_cost_range: float = 0.0
    brute_force_points: int = 0
    component_mask: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_constraints(self):
        """ m """
        return len(self.constraint_fns)

    def truth(self, x):
        """ noiseless (f0, f1..fm) at a single point """
        point = as_point(x).reshape(1, -1)
        return np.array([float(self.cost_fn(point)[0])]
                        + [float(constraint(point)[0]) for constraint in self.constraint_fns])

    def truth_grid(self, points):
        """ noiseless values at every row, shape (n, m + 1) """
        points = as_points(points, self.dim)
        return np.column_stack([self.cost_fn(points)]
                               + [constraint(points) for constraint in self.constraint_fns])

    def with_noise(self, noise_std):
        """ same problem with other per-output noise levels """
        noise = tuple(float(value) for value in np.broadcast_to(noise_std, (1 + self.n_constraints,)))
        if any(value < 0 for value in noise):
            raise InputError(f"noise_std must be nonnegative, got {noise}")
        return replace(self, noise_std=noise)

    def brute_force_grid(self):
        """ the dense grid ``component_mask`` refers to """
        return Domain(self.domain.bounds, grid_points_per_dim=self.brute_force_points,
                      refinement_iters=0, grid_cap=10 ** 7).grid()

    def in_safe_component(self, x):
        """ True if the brute-force grid point nearest to ``x`` is in x0's feasible component """
        return bool(self.component_mask[_nearest_index(self, x)])


def _nearest_index(problem, x):
    spacing = (problem.domain.upper - problem.domain.lower) / (problem.brute_force_points - 1)
    return tuple(np.clip(np.rint((as_point(x) - problem.domain.lower) / spacing), 0,
                         problem.brute_force_points - 1).astype(int))


def _verified(problem):
    """ check x0 and compute the safe optimum by brute force """
    start = problem.truth(problem.x0)
    if not np.all(start[1:] > 0):
        raise InputError(f"{problem.name}: x0 = {problem.x0} is not strictly feasible ({start[1:]})")

    points_per_dim = BRUTE_FORCE_POINTS[problem.dim]
    problem = replace(problem, brute_force_points=points_per_dim)
    points = problem.brute_force_grid()
    values = problem.truth_grid(points)
    shape = (points_per_dim,) * problem.dim
    feasible = np.all(values[:, 1:] > 0, axis=1).reshape(shape)
    labels, _ = ndimage.label(feasible)
    component = labels == labels[_nearest_index(problem, problem.x0)]

    costs = values[:, 0]
    members = component.ravel()
    best = int(np.argmin(np.where(members, costs, np.inf)))
    optimum = (tuple(points[best].tolist()), float(costs[best]))
    cost_range = float(np.max(costs[members]) - np.min(costs[members]))
    _LOG.debug('safe optimum located', problem=problem.name, x=optimum[0], f=optimum[1],
               component_fraction=float(np.mean(members)))
    return replace(problem, safe_optimum=optimum, safe_cost_range=cost_range,
                   component_mask=component)


@lru_cache(maxsize=None)
def _toy_1d():
    return _verified(SyntheticProblem(
        name='toy1d', dim=1, cost_fn=_toy_1d_cost,
        constraint_fns=(_toy_1d_wave, _toy_1d_bowl),
        noise_std=(0.01, 0.01, 0.01),
        domain=Domain(bounds=((-5.0, 5.0),), grid_points_per_dim=1001),
        x0=(0.0,),
        cost_kernel=RbfKernel(lengthscale=0.5, variance=80.0),
        constraint_kernels=(RbfKernel(lengthscale=0.5, variance=80.0),) * 2))


@lru_cache(maxsize=None)
def _toy_2d():
    return _verified(SyntheticProblem(
        name='toy2d', dim=2, cost_fn=_toy_2d_cost,
        constraint_fns=(_toy_2d_ellipse, _toy_2d_plane),
        noise_std=(0.01, 0.01, 0.01),
        domain=Domain(bounds=((-3.0, 3.0), (-3.0, 3.0)), grid_points_per_dim=101),
        x0=(0.0, 0.0),
        cost_kernel=RbfKernel(lengthscale=1.0, variance=20.0),
        constraint_kernels=(RbfKernel(lengthscale=1.0, variance=20.0),) * 2))


def toy_1d(noise_std=None):
    """
    One-dimensional problem on [-5, 5] with two constraints.

    cost  f0(x) = 0.5 (x - 0.6)^2 + 1.5 cos(1.6 (x + 0.9)) - 10 exp(-(x - 4.3)^2 / 0.8)
    f1(x) = 1 + 3 cos(1.1 x)
    f2(x) = 4 - 0.3 (x - 1)^2

    Start point x0 = 0, GP setting RBF(lengthscale 0.5, variance 80) with zero
    prior mean, noise std 0.01 on every output.
    """
    problem = _toy_1d()
    return problem if noise_std is None else problem.with_noise(noise_std)


def toy_2d(noise_std=None):
    """ Two-dimensional problem on [-3, 3]^2: shifted quadratic cost, elliptic and planar constraints """
    problem = _toy_2d()
    return problem if noise_std is None else problem.with_noise(noise_std)


PROBLEMS = {'toy1d': toy_1d, 'toy2d': toy_2d}


def query(problem, x, rng):
    """
    Noisy observation of every output at ``x``.

    Raises
    ------
    InputError
        If ``x`` lies outside the problem domain.

    """
    if not problem.domain.contains(x):
        raise InputError(f"{problem.name}: query point {as_point(x).tolist()} outside the domain")
    noise = np.asarray(problem.noise_std) * rng.standard_normal(1 + problem.n_constraints)
    return problem.truth(x) + noise


class SyntheticOracle:
    """ Oracle over a SyntheticProblem with its own noise stream """

    def __init__(self, problem, rng):
        self.problem = problem
        self.rng = rng

    def query(self, x):
        """ noisy (f0, f1..fm) """
        return query(self.problem, x, self.rng)

    def truth(self, x):
        """ noiseless (f0, f1..fm) """
        return self.problem.truth(x)


def regret_metrics(history, problem):
    """
    Simple regret and violation count of a query history.

    Parameters
    ----------
    history : iterable of ExperimentRecord (or points)
        Every oracle query, the initial one included.
    problem : SyntheticProblem

    Returns
    -------
    (float, int)
        Best true cost among feasible queries inside x0's feasible component
        minus f* (``inf`` when there is none), and the number of queries with
        some true constraint < 0.

    """
    best = np.inf
    violations = 0
    for entry in history:
        x = getattr(entry, 'x', entry)
        values = problem.truth(x)
        if np.any(values[1:] < 0):
            violations += 1
            continue
        if problem.in_safe_component(x):
            best = min(best, float(values[0]))
    if not np.isfinite(best):
        return np.inf, violations
    # queries off the brute-force grid may undercut f* by less than its resolution
    return max(best - problem.safe_optimum[1], 0.0), violations
