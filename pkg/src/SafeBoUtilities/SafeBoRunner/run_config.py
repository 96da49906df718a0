# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Run Config module:
Strict parsing of an experiment configuration document. Every problem found
is collected and reported together.
"""
# pylint: disable=too-many-instance-attributes, too-many-branches

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from SafeBoAcquisition import BASE_ACQUISITIONS, FixedBeta, beta_from_dict
from SafeBoExceptions import ConfigValidationError, InputError
from SafeBoGlucose import COST_METRICS
from SafeBoProblems import PROBLEMS
from SafeBoUtils import ConfigReader

METHODS = ('barrier', 'pf', 'pourmohamad', 'safeopt_rule')
GLUCOSE = 'glucose'
OUTPUT_DIR_ENV = 'SAFEBO_OUTPUT_DIR'
DEFAULT_OUTPUT_DIR = 'safebo-output'

PROBLEM_DEFAULTS = {
    'toy1d': {'budget': 25, 'tau': 1e-3, 'grid_points_per_dim': 1001},
    'toy2d': {'budget': 25, 'tau': 1e-3, 'grid_points_per_dim': 101},
    GLUCOSE: {'budget': 15, 'tau': 0.1, 'grid_points_per_dim': 1001},
}

KNOWN_KEYS = frozenset((
    'problem', 'methods', 'base_acquisition', 'tau', 'tau_decay', 'beta', 'budget', 'seeds',
    'grid_points_per_dim', 'refinement_iters', 'noise_std', 'cgm_noise_std', 'patient_file',
    'cohort_size', 'cohort_seed', 'cost_metric', 'output_dir', 'workers', 'log_iters',
    'report_grid_points'))


@dataclass(frozen=True)
class RunConfig:
    """ A validated experiment configuration with every default filled """

    problem: str
    methods: Tuple[str, ...] = ('barrier',)
    base_acquisition: str = 'lcb'
    tau: Optional[float] = None
    tau_decay: float = 1.0
    cost_beta: object = field(default_factory=FixedBeta)
    constraint_betas: Tuple[object, ...] = ()
    budget: int = 25
    seeds: Tuple[int, ...] = (0,)
    grid_points_per_dim: int = 1001
    refinement_iters: int = 2
    noise_std: Optional[Tuple[float, ...]] = None
    cgm_noise_std: float = 5.0
    patient_file: Optional[str] = None
    cohort_size: int = 10
    cohort_seed: int = 0
    cost_metric: str = 'gpi'
    output_dir: Optional[str] = None
    workers: int = 1
    log_iters: Tuple[int, ...] = (2, 5, 25)
    report_grid_points: int = 201
    source: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def is_glucose(self):
        """ True for the dose-guidance problem """
        return self.problem == GLUCOSE


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _int_list(name, value, violations, minimum=None):
    if not isinstance(value, list) or not value or not all(_is_int(item) for item in value):
        violations.append(f"{name} must be a nonempty list of integers")
        return None
    if minimum is not None and any(item < minimum for item in value):
        violations.append(f"every {name} entry must be >= {minimum}")
        return None
    return tuple(value)


def _beta(name, spec, violations):
    try:
        return beta_from_dict(spec)
    except (InputError, KeyError, TypeError, AttributeError) as err:
        violations.append(f"{name}: {err}")
        return None


def _betas(document, violations):
    spec = document.get('beta', {})
    if not isinstance(spec, dict):
        violations.append("beta must be an object with 'cost' and/or 'constraints'")
        return FixedBeta(), ()
    unknown = sorted(set(spec) - {'cost', 'constraints'})
    if unknown:
        violations.append(f"unknown beta keys {unknown}")
    cost = _beta('beta.cost', spec['cost'], violations) if 'cost' in spec else FixedBeta()
    constraints = spec.get('constraints', [])
    if isinstance(constraints, dict):
        constraints = [constraints]
    if not isinstance(constraints, list):
        violations.append("beta.constraints must be an object or a list of objects")
        constraints = []
    schedules = tuple(_beta(f'beta.constraints[{index}]', item, violations)
                      for index, item in enumerate(constraints))
    return cost or FixedBeta(), tuple(item for item in schedules if item is not None)


def validate_config(document):
    """
    Validate a configuration mapping and fill per-problem defaults.

    Raises
    ------
    ConfigValidationError
        With every violation found.

    """
    violations = []
    if not isinstance(document, dict):
        raise ConfigValidationError(["configuration root must be a JSON object"])
    unknown = sorted(set(document) - KNOWN_KEYS)
    if unknown:
        violations.append(f"unknown keys {unknown}")

    problem = document.get('problem')
    if problem not in PROBLEM_DEFAULTS:
        violations.append(f"problem must be one of {sorted(PROBLEM_DEFAULTS)}, got {problem!r}")
        problem = None
    defaults = PROBLEM_DEFAULTS.get(problem, PROBLEM_DEFAULTS['toy1d'])
    values = {'problem': problem}

    methods = document.get('methods', ['barrier'])
    if isinstance(methods, str):
        methods = [methods]
    if not isinstance(methods, list) or not methods or any(item not in METHODS for item in methods):
        violations.append(f"methods must be a nonempty list drawn from {METHODS}, got {methods!r}")
        methods = ['barrier']
    if len(set(methods)) != len(methods):
        violations.append(f"methods contains duplicates: {methods}")
    values['methods'] = tuple(methods)

    base = document.get('base_acquisition', 'lcb')
    if base not in BASE_ACQUISITIONS:
        violations.append(f"base_acquisition must be one of {BASE_ACQUISITIONS}, got {base!r}")
    values['base_acquisition'] = base

    if 'tau' in document:
        tau = document['tau']
        if not _is_number(tau) or tau <= 0:
            violations.append(f"tau must be a positive number, got {tau!r}")
        if 'barrier' not in methods:
            violations.append("tau is only meaningful for the barrier method")
        values['tau'] = tau
    elif 'barrier' in methods:
        values['tau'] = defaults['tau']

    tau_decay = document.get('tau_decay', 1.0)
    if not _is_number(tau_decay) or not 0 < tau_decay <= 1:
        violations.append(f"tau_decay must lie in (0, 1], got {tau_decay!r}")
    values['tau_decay'] = tau_decay

    values['cost_beta'], values['constraint_betas'] = _betas(document, violations)

    budget = document.get('budget', defaults['budget'])
    if not _is_int(budget) or budget < 1:
        violations.append(f"budget must be an integer >= 1, got {budget!r}")
    values['budget'] = budget

    values['seeds'] = _int_list('seeds', document.get('seeds', [0]), violations, minimum=0)
    values['log_iters'] = _int_list('log_iters', document.get('log_iters', [2, 5, 25]),
                                    violations, minimum=1)

    for key, default, minimum in (('grid_points_per_dim', defaults['grid_points_per_dim'], 2),
                                  ('refinement_iters', 2, 0), ('cohort_size', 10, 1),
                                  ('cohort_seed', 0, 0), ('workers', 1, 1),
                                  ('report_grid_points', 201, 2)):
        value = document.get(key, default)
        if not _is_int(value) or value < minimum:
            violations.append(f"{key} must be an integer >= {minimum}, got {value!r}")
        values[key] = value

    noise = document.get('noise_std')
    if noise is not None:
        if problem == GLUCOSE:
            violations.append("noise_std applies to synthetic problems; use cgm_noise_std")
        elif (not isinstance(noise, list) or len(noise) != 3
              or not all(_is_number(item) and item >= 0 for item in noise)):
            violations.append("noise_std must list 3 nonnegative numbers (cost, constraints)")
        else:
            noise = tuple(float(item) for item in noise)
    values['noise_std'] = noise

    cgm_noise = document.get('cgm_noise_std', 5.0)
    if not _is_number(cgm_noise) or cgm_noise < 0:
        violations.append(f"cgm_noise_std must be a nonnegative number, got {cgm_noise!r}")
    values['cgm_noise_std'] = cgm_noise

    cost_metric = document.get('cost_metric', 'gpi')
    if cost_metric not in COST_METRICS:
        violations.append(f"cost_metric must be one of {sorted(COST_METRICS)}, got {cost_metric!r}")
    values['cost_metric'] = cost_metric

    for key in ('patient_file', 'output_dir'):
        value = document.get(key)
        if value is not None and not isinstance(value, str):
            violations.append(f"{key} must be a string path")
        values[key] = value
    if values['patient_file'] is not None and problem != GLUCOSE:
        violations.append("patient_file only applies to the glucose problem")

    if violations:
        raise ConfigValidationError(violations)
    return RunConfig(source=dict(document), **values)


def parse_config(path, overrides=None):
    """
    Read and validate a configuration file.

    ``overrides`` (e.g. seeds or log_iters from the command line) replace the
    file's keys before validation. A relative ``patient_file`` is resolved
    against the configuration file's directory.
    """
    document = ConfigReader.read_config_values(path)
    document.update({key: value for key, value in (overrides or {}).items() if value is not None})
    patient_file = document.get('patient_file')
    if isinstance(patient_file, str) and not Path(patient_file).is_absolute():
        document['patient_file'] = str(Path(path).resolve().parent / patient_file)
    return validate_config(document)


def resolve_output_dir(config, cli_out=None):
    """ --out flag, then SAFEBO_OUTPUT_DIR, then output_dir, then ./safebo-output """
    for candidate in (cli_out, os.environ.get(OUTPUT_DIR_ENV), config.output_dir):
        if candidate:
            return Path(candidate)
    return Path(DEFAULT_OUTPUT_DIR)

