# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Gaussian Process module:
Exact GP regression with a constant prior mean and fixed hyperparameters.
Conditioning caches the Cholesky factor of (K + v^2 I + jitter I); predictions
use triangular solves only.
"""
# pylint: disable=invalid-name

from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular

from SafeBoExceptions import InputError, ModelStateError, SingularCovarianceError
from SafeBoLog import Log
from SafeBoUtils import InputValidation
from .kernels import as_point, as_points

# relative to the mean diagonal of K + v^2 I; plain factorization is tried first
JITTER_LEVELS = tuple(10.0 ** exponent for exponent in range(-10, -3))

_LOG = Log('gp')


@dataclass(frozen=True)
class Posterior:
    """ Posterior mean and variance, scalars or arrays of equal shape """

    mean: Union[float, np.ndarray]
    variance: Union[float, np.ndarray]

    @property
    def std(self):
        """ Posterior standard deviation """
        return np.sqrt(self.variance)


@dataclass(frozen=True, eq=False)
class GpModel:
    """
    One Gaussian process over R^dim.

    Parameters
    ----------
    kernel : KernelSpec
        Covariance function.
    dim : int
        Input dimension.
    prior_mean : float
        Constant prior mean, in the units of the modeled function.
    noise_std : float
        Observation noise standard deviation v.
    inputs, targets : np.ndarray
        Observed data, shapes (n, dim) and (n,).

    """

    kernel: object
    dim: int = 1
    prior_mean: float = 0.0
    noise_std: float = 0.0
    inputs: Optional[np.ndarray] = None
    targets: Optional[np.ndarray] = None
    chol: Optional[np.ndarray] = field(default=None, repr=False)
    alpha: Optional[np.ndarray] = field(default=None, repr=False)
    jitter: float = 0.0

    def __post_init__(self):
        InputValidation.validate_nonnegative('noise_std', self.noise_std)
        if self.dim < 1:
            raise InputError(f"dim must be >= 1, got {self.dim}")
        inputs = np.empty((0, self.dim)) if self.inputs is None else as_points(self.inputs, self.dim)
        targets = np.empty(0) if self.targets is None else np.asarray(self.targets, dtype=float).ravel()
        if inputs.shape[0] != targets.shape[0]:
            raise InputError(
                f"{inputs.shape[0]} inputs but {targets.shape[0]} targets")
        object.__setattr__(self, 'inputs', inputs)
        object.__setattr__(self, 'targets', targets)

    @property
    def n_observations(self):
        """ number of observed points """
        return self.targets.shape[0]

    @property
    def is_conditioned(self):
        """ True when posterior queries are allowed """
        return self.n_observations == 0 or self.chol is not None

    def add_observation(self, x, y):
        """ Return a new, unconditioned model with one more observation """
        x = as_point(x)
        if x.shape[0] != self.dim:
            raise InputError(f"point has dimension {x.shape[0]}, expected {self.dim}")
        return replace(self,
                       inputs=np.vstack([self.inputs, x.reshape(1, -1)]),
                       targets=np.append(self.targets, float(y)),
                       chol=None, alpha=None, jitter=0.0)

    def condition(self):
        """ see ``gp_condition`` """
        return gp_condition(self)

    def posterior(self, x):
        """ see ``gp_posterior`` """
        return gp_posterior(self, x)

    def posterior_grid(self, points):
        """ Posterior mean and variance arrays at every row of ``points`` """
        return _predict(self, as_points(points, self.dim))

    def information_gain(self):
        """ see ``information_gain`` """
        return information_gain(self)


def gp_condition(model):
    """
    Factorize the noise-augmented Gram matrix of ``model``.

    Returns the model unchanged when it has no observations.

    Raises
    ------
    SingularCovarianceError
        If the factorization fails at the largest jitter level.

    """
    n_obs = model.n_observations
    if n_obs == 0:
        return model
    gram = model.kernel.gram(model.inputs, model.inputs)
    gram = 0.5 * (gram + gram.T)
    gram[np.diag_indices(n_obs)] += model.noise_std ** 2
    scale = float(np.mean(np.diag(gram)))

    jitter = 0.0
    chol = _try_cholesky(gram)
    if chol is None:
        for level in JITTER_LEVELS:
            jitter = level * scale
            chol = _try_cholesky(gram + jitter * np.eye(n_obs))
            if chol is not None:
                _LOG.debug('cholesky needed jitter', jitter=f'{jitter:.3e}', n=n_obs)
                break
        else:
            raise SingularCovarianceError(jitter, n_obs)

    alpha = cho_solve((chol, True), model.targets - model.prior_mean)
    return replace(model, chol=chol, alpha=alpha, jitter=jitter)


def _try_cholesky(matrix):
    try:
        chol = cholesky(matrix, lower=True, check_finite=True)
    except (LinAlgError, ValueError):
        return None
    if not np.all(np.diag(chol) > 0):
        return None
    return chol


def _predict(model, points):
    if not model.is_conditioned:
        raise ModelStateError("model has observations but was not conditioned")
    prior_var = model.kernel.diag(points)
    if model.n_observations == 0:
        return np.full(points.shape[0], float(model.prior_mean)), prior_var
    cross = model.kernel.gram(model.inputs, points)
    mean = model.prior_mean + cross.T @ model.alpha
    reduced = solve_triangular(model.chol, cross, lower=True)
    variance = prior_var - np.sum(reduced ** 2, axis=0)
    return mean, np.clip(variance, 0.0, prior_var)


def gp_posterior(model, x_star):
    """ Posterior (mean, variance) at a single point """

    x_star = as_point(x_star)
    if x_star.shape[0] != model.dim:
        raise InputError(f"point has dimension {x_star.shape[0]}, expected {model.dim}")
    mean, variance = _predict(model, x_star.reshape(1, -1))
    return Posterior(mean=float(mean[0]), variance=float(variance[0]))


def information_gain(model):
    """
    Information gain of the realized observations: 0.5 * ln|I + v^-2 K|.

    Raises
    ------
    InputError
        If the noise level is zero.

    """
    if model.noise_std <= 0:
        raise InputError("information gain is undefined for noise_std = 0")
    n_obs = model.n_observations
    if n_obs == 0:
        return 0.0
    gram = model.kernel.gram(model.inputs, model.inputs)
    scaled = np.eye(n_obs) + 0.5 * (gram + gram.T) / model.noise_std ** 2
    chol = cholesky(scaled, lower=True)
    return float(np.sum(np.log(np.diag(chol))))
