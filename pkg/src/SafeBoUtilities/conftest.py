# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Shared pytest fixtures.
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# pylint: disable=wrong-import-position
from SafeBoAcquisition import AcquisitionSpec, FixedBeta
from SafeBoGlucose import PatientModel
from SafeBoLoop import LoopConfig
from SafeBoProblems import toy_1d


@pytest.fixture
def rng():
    """ fixed-seed generator """
    return np.random.default_rng(20261017)


@pytest.fixture(scope='session')
def toy_problem():
    """ the one-dimensional benchmark """
    return toy_1d()


@pytest.fixture(scope='session')
def default_patient():
    """ the default virtual patient """
    return PatientModel()


def toy_loop_config(problem, safety='barrier', base='lcb', budget=25, seed=0, tau=1e-3,
                    grid_points=1001, refinement_iters=2):
    """ LoopConfig for a synthetic problem """
    domain = problem.domain
    if grid_points != domain.grid_points_per_dim or refinement_iters != domain.refinement_iters:
        domain = type(domain)(bounds=domain.bounds, grid_points_per_dim=grid_points,
                              refinement_iters=refinement_iters)
    return LoopConfig(domain=domain, x0=problem.x0, cost_kernel=problem.cost_kernel,
                      constraint_kernels=problem.constraint_kernels,
                      acquisition=AcquisitionSpec(base=base, safety=safety,
                                                  cost_beta=FixedBeta(4.0),
                                                  constraint_betas=(FixedBeta(4.0),), tau=tau),
                      noise_std=problem.noise_std, budget=budget, seed=seed,
                      run_id=f'{safety}-{seed}')


@pytest.fixture
def make_toy_config():
    """ factory for synthetic-problem loop configurations """
    return toy_loop_config
