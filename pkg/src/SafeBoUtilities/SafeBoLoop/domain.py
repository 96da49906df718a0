# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Domain module:
Box domains and the candidate grids the acquisition is minimized on.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from SafeBoExceptions import InputError
from SafeBoGp import as_point

DEFAULT_GRID_CAP = 10 ** 6
REFINE_POINTS_PER_DIM = 21


def _build_grid(bounds, points_per_dim):
    axes = [np.linspace(low, high, points_per_dim) for low, high in bounds]
    mesh = np.meshgrid(*axes, indexing='ij')
    return np.stack([axis.ravel() for axis in mesh], axis=1)


@lru_cache(maxsize=16)
def _cached_grid(bounds, points_per_dim):
    grid = _build_grid(bounds, points_per_dim)
    grid.setflags(write=False)
    return grid


@dataclass(frozen=True)
class Domain:
    """ Axis-aligned box with a regular candidate grid """

    bounds: Tuple[Tuple[float, float], ...]
    grid_points_per_dim: int = 1001
    refinement_iters: int = 2
    grid_cap: int = DEFAULT_GRID_CAP

    def __post_init__(self):
        bounds = tuple((float(low), float(high)) for low, high in self.bounds)
        object.__setattr__(self, 'bounds', bounds)
        if not bounds:
            raise InputError("a domain needs at least one dimension")
        for index, (low, high) in enumerate(bounds):
            if not low < high:
                raise InputError(f"bounds[{index}] must satisfy lo < hi, got ({low}, {high})")
        if self.grid_points_per_dim < 2:
            raise InputError(f"grid_points_per_dim must be >= 2, got {self.grid_points_per_dim}")
        if self.refinement_iters < 0:
            raise InputError(f"refinement_iters must be >= 0, got {self.refinement_iters}")
        if self.grid_points_per_dim ** self.dim > self.grid_cap:
            raise InputError(
                f"grid of {self.grid_points_per_dim}^{self.dim} points exceeds the cap {self.grid_cap}")

    @property
    def dim(self):
        """ number of dimensions """
        return len(self.bounds)

    @property
    def lower(self):
        """ lower corner """
        return np.array([low for low, _ in self.bounds])

    @property
    def upper(self):
        """ upper corner """
        return np.array([high for _, high in self.bounds])

    @property
    def spacing(self):
        """ grid step per dimension """
        return (self.upper - self.lower) / (self.grid_points_per_dim - 1)

    def contains(self, point):
        """ True if ``point`` lies in the closed box """
        point = as_point(point)
        if point.shape[0] != self.dim:
            return False
        return bool(np.all(point >= self.lower) and np.all(point <= self.upper))

    def grid(self):
        """ candidate grid, shape (grid_points_per_dim ** dim, dim), row-major """
        return _cached_grid(self.bounds, self.grid_points_per_dim)

    def local_grid(self, center, half_widths):
        """ REFINE_POINTS_PER_DIM points per dimension over the box around ``center`` """
        low = np.maximum(center - half_widths, self.lower)
        high = np.minimum(center + half_widths, self.upper)
        return _build_grid(tuple(zip(low.tolist(), high.tolist())), REFINE_POINTS_PER_DIM)
