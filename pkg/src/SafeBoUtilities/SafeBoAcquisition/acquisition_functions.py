# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Acquisition Functions module:
Base acquisitions (LCB, EI, PI), the log-barrier safety terms and the three
comparison scores. Every function accepts ``Posterior`` values holding either
scalars or equally shaped arrays, and returns the same kind.

Conventions: LCB, the barrier acquisition and the Pourmohamad score are
minimized; EI, PI, the PF product and the SafeOpt-rule width are maximized.
"""

import numpy as np
from scipy.stats import norm

NEG_INFINITY = -np.inf
POS_INFINITY = np.inf


def _shaped(reference, values):
    if np.ndim(reference) == 0 and np.ndim(values) == 0:
        return float(values)
    return values


def lcb(cost_posterior, beta):
    """ mu - sqrt(beta) * sigma """

    result = np.asarray(cost_posterior.mean, dtype=float) - np.sqrt(beta) * cost_posterior.std
    return _shaped(cost_posterior.mean, result)


def expected_improvement(cost_posterior, best):
    """ Expected improvement below ``best`` (minimization) """

    mean = np.asarray(cost_posterior.mean, dtype=float)
    std = np.asarray(cost_posterior.std, dtype=float)
    improvement = best - mean
    with np.errstate(divide='ignore', invalid='ignore'):
        z_score = improvement / std
        smooth = improvement * norm.cdf(z_score) + std * norm.pdf(z_score)
    result = np.where(std > 0, smooth, np.maximum(improvement, 0.0))
    return _shaped(cost_posterior.mean, np.maximum(result, 0.0))


def probability_of_improvement(cost_posterior, best):
    """ P(f(x) < best) under the posterior """

    mean = np.asarray(cost_posterior.mean, dtype=float)
    std = np.asarray(cost_posterior.std, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        smooth = norm.cdf((best - mean) / std)
    result = np.where(std > 0, smooth, (mean < best).astype(float))
    return _shaped(cost_posterior.mean, result)


def feasibility_probability(constraint_posterior):
    """ P(f_i(x) >= 0) = Phi(mu / sigma); a degenerate sigma gives 0 or 1 """

    mean = np.asarray(constraint_posterior.mean, dtype=float)
    std = np.asarray(constraint_posterior.std, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        smooth = norm.cdf(mean / std)
    result = np.where(std > 0, smooth, (mean >= 0).astype(float))
    return _shaped(constraint_posterior.mean, result)


def constraint_lcb(constraint_posterior, beta):
    """ Lower confidence bound of one constraint GP """

    return lcb(constraint_posterior, beta)


def barrier_term(constraint_posterior, beta):
    """ ln(LCB) where LCB > 0, NEG_INFINITY elsewhere """

    bound = np.asarray(lcb(constraint_posterior, beta), dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        result = np.where(bound > 0, np.log(np.where(bound > 0, bound, 1.0)), NEG_INFINITY)
    return _shaped(constraint_posterior.mean, result)


def barrier_acquisition(base_value, barrier_terms, tau):
    """ base - tau * sum(barriers); any NEG_INFINITY barrier gives POS_INFINITY """

    base = np.asarray(base_value, dtype=float)
    if len(barrier_terms) == 0:
        return _shaped(base_value, base)
    terms = np.stack([np.broadcast_to(np.asarray(term, dtype=float), base.shape)
                      for term in barrier_terms])
    infeasible = np.any(np.isneginf(terms), axis=0)
    total = np.sum(np.where(infeasible, 0.0, terms), axis=0)
    result = np.where(infeasible, POS_INFINITY, base - tau * total)
    return _shaped(base_value, result)


def pf_acquisition(base_ei, constraint_posteriors):
    """ EI scaled by the probability that every constraint holds """

    result = np.asarray(base_ei, dtype=float)
    for posterior in constraint_posteriors:
        result = result * feasibility_probability(posterior)
    return _shaped(base_ei, result)


def pourmohamad_acquisition(cost_posterior, constraint_posteriors):
    """
    mu_0 - sigma_0^2 * sum_i (ln mu_i - sigma_i^2 / (2 mu_i^2)).

    The logarithm is only taken on the constraint means, so it is undefined
    wherever some mu_i <= 0; such points score POS_INFINITY.
    """

    mean = np.asarray(cost_posterior.mean, dtype=float)
    total = np.zeros(np.shape(mean))
    infeasible = np.zeros(np.shape(mean), dtype=bool)
    for posterior in constraint_posteriors:
        c_mean = np.asarray(posterior.mean, dtype=float)
        c_var = np.asarray(posterior.variance, dtype=float)
        positive = c_mean > 0
        safe_mean = np.where(positive, c_mean, 1.0)
        total = total + np.where(positive, np.log(safe_mean) - c_var / (2.0 * safe_mean ** 2), 0.0)
        infeasible = infeasible | ~positive
    result = np.where(infeasible, POS_INFINITY,
                      mean - np.asarray(cost_posterior.variance, dtype=float) * total)
    return _shaped(cost_posterior.mean, result)


def safeopt_rule_score(posteriors, betas):
    """ Widest confidence interval 2 sqrt(beta_j) sigma_j over all functions """

    widths = [2.0 * np.sqrt(beta) * np.asarray(posterior.std, dtype=float)
              for posterior, beta in zip(posteriors, betas)]
    return _shaped(posteriors[0].mean, np.max(np.stack(widths), axis=0))


def best_observed(costs, constraints):
    """
    Reference value for EI / PI: the lowest observed cost among observations
    whose observed constraints are all >= 0, else the lowest observed cost.

    ``constraints`` has one row per observation (possibly zero columns).
    """

    costs = np.asarray(costs, dtype=float)
    if costs.size == 0:
        return POS_INFINITY
    constraints = np.asarray(constraints, dtype=float)
    if constraints.size == 0:
        return float(np.min(costs))
    feasible = np.all(constraints.reshape(costs.size, -1) >= 0, axis=1)
    if np.any(feasible):
        return float(np.min(costs[feasible]))
    return float(np.min(costs))
