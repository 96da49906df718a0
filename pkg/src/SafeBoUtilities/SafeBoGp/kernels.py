# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Kernels module:
Declarative covariance functions with fixed hyperparameters. A kernel is a
small frozen value; ``gram`` evaluates it on two point matrices at once.
"""
# pylint: disable=invalid-name

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from SafeBoExceptions import InputError
from SafeBoUtils import InputValidation


def as_points(points, dim=None):
    """ Return ``points`` as a float matrix of shape (n, dim) """

    arr = np.asarray(points, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim in (None, 1) else arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InputError(f"points must be at most two-dimensional, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise InputError(f"points have dimension {arr.shape[1]}, expected {dim}")
    return arr


def as_point(point):
    """ Return a single point as a 1-D float vector """

    arr = np.atleast_1d(np.asarray(point, dtype=float))
    if arr.ndim != 1:
        raise InputError(f"a point must be a scalar or a vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class RbfKernel:
    """ variance * exp(-|x - x'|^2 / (2 lengthscale^2)) """

    lengthscale: float
    variance: float

    def __post_init__(self):
        InputValidation.validate_positive('lengthscale', self.lengthscale)
        InputValidation.validate_positive('variance', self.variance)

    def gram(self, x1, x2):
        """ Covariance matrix between the rows of x1 and x2 """
        sq_dist = cdist(x1, x2, 'sqeuclidean')
        return self.variance * np.exp(-0.5 * sq_dist / self.lengthscale ** 2)

    def diag(self, x):
        """ k(x, x) for every row of x """
        return np.full(x.shape[0], self.variance)


@dataclass(frozen=True)
class LinearKernel:
    """ variance * sum_j (x_j - offset)(x'_j - offset) """

    variance: float
    offset: float = 0.0

    def __post_init__(self):
        InputValidation.validate_positive('variance', self.variance)

    def gram(self, x1, x2):
        """ Covariance matrix between the rows of x1 and x2 """
        return self.variance * (x1 - self.offset) @ (x2 - self.offset).T

    def diag(self, x):
        """ k(x, x) for every row of x """
        return self.variance * np.sum((x - self.offset) ** 2, axis=1)


@dataclass(frozen=True)
class SumKernel:
    """ Sum of at least two kernels """

    children: Tuple['KernelSpec', ...]

    def __post_init__(self):
        object.__setattr__(self, 'children', tuple(self.children))
        if len(self.children) < 2:
            raise InputError("a sum kernel needs at least two children")

    def gram(self, x1, x2):
        """ Covariance matrix between the rows of x1 and x2 """
        return sum(child.gram(x1, x2) for child in self.children)

    def diag(self, x):
        """ k(x, x) for every row of x """
        return sum(child.diag(x) for child in self.children)


KernelSpec = Union[RbfKernel, LinearKernel, SumKernel]


def kernel_eval(kernel, x, x_prime):
    """ Evaluate k(x, x') for two single points of equal dimension """

    x = as_point(x)
    x_prime = as_point(x_prime)
    if x.shape != x_prime.shape:
        raise InputError(f"dimension mismatch: {x.shape[0]} vs {x_prime.shape[0]}")
    return float(kernel.gram(x.reshape(1, -1), x_prime.reshape(1, -1))[0, 0])


def kernel_from_dict(spec):
    """ Build a kernel from ``{"type": "rbf"|"linear"|"sum", ...}`` """

    kind = spec.get('type')
    if kind == 'rbf':
        return RbfKernel(lengthscale=spec['lengthscale'], variance=spec['variance'])
    if kind == 'linear':
        return LinearKernel(variance=spec['variance'], offset=spec.get('offset', 0.0))
    if kind == 'sum':
        return SumKernel(tuple(kernel_from_dict(child) for child in spec['children']))
    raise InputError(f"unknown kernel type {kind!r}")


def kernel_to_dict(kernel):
    """ Inverse of ``kernel_from_dict`` """

    if isinstance(kernel, RbfKernel):
        return {'type': 'rbf', 'lengthscale': kernel.lengthscale, 'variance': kernel.variance}
    if isinstance(kernel, LinearKernel):
        return {'type': 'linear', 'variance': kernel.variance, 'offset': kernel.offset}
    return {'type': 'sum', 'children': [kernel_to_dict(child) for child in kernel.children]}
