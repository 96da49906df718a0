# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Experiment Runner module:
Runs every (method x seed [x patient]) cell of a configuration, writes the
per-cell record files and a summary document.

Output layout under the output directory::

    records/<cell>.csv          one row per oracle query
    timing/<cell>_timing.csv    wall time per query
    traces/<cell>.csv           CGM traces per meal (glucose only)
    summary.json
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional

import jsons
import numpy as np

from SafeBoAcquisition import AcquisitionSpec
from SafeBoExceptions import InputError, LoopTerminatedError, SafeBoError
from SafeBoGlucose import (DOSE_BOUNDS, HYPO_THRESHOLD, PatientModel, calibration, cohort,
                           dose_oracle, load_patients, optimal_dose, tir_metrics)
from SafeBoGp import LinearKernel, RbfKernel, SumKernel, kernel_to_dict
from SafeBoLog import Log
from SafeBoLoop import Domain, LoopConfig, recommend, replay_state, run
from SafeBoProblems import PROBLEMS, SyntheticOracle, regret_metrics
from .record_io import timing_frame, traces_frame, write_frame, write_records

_LOG = Log('runner')

SUMMARY_SCHEMA_VERSION = 1
SUMMARY_FILE = 'summary.json'
GLUCOSE_X0 = 0.5
GLUCOSE_COST_KERNEL = RbfKernel(lengthscale=2.0, variance=1e6)
GLUCOSE_CONSTRAINT_KERNEL = SumKernel((RbfKernel(lengthscale=4.0, variance=900.0),
                                       LinearKernel(variance=4.0, offset=0.0)))
GLUCOSE_GP_NOISE = (10.0, 2.5)
NEAR_OPTIMUM = 0.15


@dataclass(frozen=True)
class Cell:
    """ one independent loop run """

    method: str
    seed: int
    patient_index: int = 0
    patient: Optional[PatientModel] = None

    @property
    def cell_id(self):
        """ file stem and run id """
        stem = f'{self.method}_seed{self.seed}'
        return stem if self.patient is None else f'{stem}_{self.patient.name}'


@dataclass
class CellResult:
    """ records and metrics of one cell """

    cell: Cell
    records: List = field(default_factory=list)
    traces: List = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    failure: Optional[str] = None


def acquisition_for(config, method):
    """ AcquisitionSpec of one method under ``config`` """
    base = config.base_acquisition
    if method == 'pf' and base == 'lcb':
        base = 'ei'
    return AcquisitionSpec(base=base, safety=method, cost_beta=config.cost_beta,
                           constraint_betas=config.constraint_betas,
                           tau=config.tau if config.tau is not None else 1e-3,
                           tau_decay=config.tau_decay)


def synthetic_problem(config):
    """ the configured synthetic problem, with the configured noise """
    return PROBLEMS[config.problem](noise_std=config.noise_std)


def loop_config_for(config, cell):
    """ LoopConfig of one cell """
    acquisition = acquisition_for(config, cell.method)
    if config.is_glucose:
        domain = Domain(bounds=(DOSE_BOUNDS,), grid_points_per_dim=config.grid_points_per_dim,
                        refinement_iters=config.refinement_iters)
        return LoopConfig(domain=domain, x0=(GLUCOSE_X0,), cost_kernel=GLUCOSE_COST_KERNEL,
                          constraint_kernels=(GLUCOSE_CONSTRAINT_KERNEL,),
                          acquisition=acquisition, noise_std=GLUCOSE_GP_NOISE,
                          budget=config.budget, seed=cell.seed, run_id=cell.cell_id)
    problem = synthetic_problem(config)
    domain = Domain(bounds=problem.domain.bounds, grid_points_per_dim=config.grid_points_per_dim,
                    refinement_iters=config.refinement_iters)
    return LoopConfig(domain=domain, x0=problem.x0, cost_kernel=problem.cost_kernel,
                      constraint_kernels=problem.constraint_kernels, acquisition=acquisition,
                      noise_std=problem.noise_std, budget=config.budget, seed=cell.seed,
                      run_id=cell.cell_id)


def cell_rng(cell):
    """ independent oracle stream per (seed, patient) """
    return np.random.default_rng([cell.seed, cell.patient_index])


def patients_for(config):
    """ patients from the configured file, or a calibrated cohort """
    if config.patient_file is not None:
        patients = load_patients(config.patient_file)
        if 'cgm_noise_std' in config.source:
            patients = [replace(patient, cgm_noise_std=float(config.cgm_noise_std))
                        for patient in patients]
        for patient in patients:
            report = calibration(patient)
            if not report.passed:
                _LOG.warning('patient fails calibration', patient=patient.name,
                             safe_at_start=report.safe_at_start, unsafe_at_max=report.unsafe_at_max,
                             optimal_dose=report.optimal_dose,
                             interior_optimum=report.interior_optimum)
        return patients
    return cohort(config.cohort_size, np.random.default_rng(config.cohort_seed),
                  cgm_noise_std=config.cgm_noise_std)


def cells_for(config, patients=None):
    """ every cell in (method, seed, patient) order """
    if not config.is_glucose:
        return [Cell(method=method, seed=seed) for method in config.methods for seed in config.seeds]
    patients = patients_for(config) if patients is None else patients
    return [Cell(method=method, seed=seed, patient_index=index, patient=patient)
            for method in config.methods for seed in config.seeds
            for index, patient in enumerate(patients)]


def _finite(value):
    value = float(value)
    return value if math.isfinite(value) else None


def _synthetic_metrics(config, records):
    problem = synthetic_problem(config)
    regret, violations = regret_metrics(records, problem)
    return {'simple_regret': _finite(regret), 'violations': violations,
            'lcb_breaches': sum(1 for record in records if record.lcb_breach),
            'final_x': list(records[-1].x) if records else None}


def _relative_error(dose, optimum):
    if dose is None or not optimum:
        return None
    return abs(dose / optimum - 1.0)


def _glucose_metrics(config, cell, records, traces, recommended):
    optimum, optimum_cost = optimal_dose(cell.patient, cost_metric=config.cost_metric)
    doses = [record.x[0] for record in records]
    near = [index for index, dose in enumerate(doses)
            if optimum and abs(dose / optimum - 1.0) <= NEAR_OPTIMUM]
    true_bg = np.concatenate([trace.true_bg for trace in traces]) if traces else np.empty(0)
    return {
        'patient': cell.patient.name,
        'optimal_dose': optimum,
        'optimal_cost': optimum_cost,
        'final_dose': doses[-1] if doses else None,
        'recommended_dose': recommended,
        'dose_error': _relative_error(recommended, optimum),
        'first_meal_near_optimum': near[0] if near else None,
        'violations': sum(1 for record in records if record.violation),
        'lcb_breaches': sum(1 for record in records if record.lcb_breach),
        'hypo_samples': int(np.count_nonzero(true_bg <= HYPO_THRESHOLD)),
        'min_true_bg': float(np.min(true_bg)) if true_bg.size else None,
        'tir': [list(tir_metrics(trace)) for trace in traces],
    }


def _recommended_dose(loop_config, records):
    if not records:
        return None
    return float(recommend(replay_state(loop_config, records))[0])


def run_cell(config, cell):
    """ run one cell; failures are captured in the result, never raised """
    loop_config = loop_config_for(config, cell)
    if config.is_glucose:
        oracle = dose_oracle(cell.patient, rng=cell_rng(cell), cost_metric=config.cost_metric)
    else:
        oracle = SyntheticOracle(synthetic_problem(config), cell_rng(cell))

    result = CellResult(cell=cell)
    try:
        result.records = run(oracle, loop_config)
    except LoopTerminatedError as err:
        result.records = err.records
        result.failure = f'{type(err.cause).__name__}: {err.cause}'
    except (InputError, SafeBoError) as err:
        result.failure = f'{type(err).__name__}: {err}'

    try:
        if config.is_glucose:
            result.traces = list(oracle.traces)
            result.metrics = _glucose_metrics(config, cell, result.records, result.traces,
                                              _recommended_dose(loop_config, result.records))
        else:
            result.metrics = _synthetic_metrics(config, result.records)
    except (InputError, SafeBoError, ArithmeticError) as err:
        result.failure = result.failure or f'{type(err).__name__}: {err}'
        result.metrics = {'violations': sum(1 for record in result.records if record.violation)}
    if result.failure:
        _LOG.warning('cell failed', cell=cell.cell_id, error=result.failure)
    _LOG.log_event('cell finished', cell=cell.cell_id, records=len(result.records),
                   violations=result.metrics['violations'])
    return result


def _run_cell_args(args):
    return run_cell(*args)


def _method_summary(results):
    summary = {'cells': len(results),
               'failures': sum(1 for result in results if result.failure),
               'violations': sum(result.metrics['violations'] for result in results),
               'lcb_breaches': sum(result.metrics.get('lcb_breaches', 0) for result in results)}
    for key in ('simple_regret', 'dose_error'):
        values = [result.metrics.get(key) for result in results]
        if any(key in result.metrics for result in results):
            finite = [value for value in values if value is not None]
            summary[f'median_{key}'] = float(np.median(finite)) if finite else None
    return summary


def _cell_entry(result):
    entry = {'cell': result.cell.cell_id, 'method': result.cell.method,
             'seed': result.cell.seed, 'records': len(result.records),
             'records_file': f'records/{result.cell.cell_id}.csv', 'failure': result.failure}
    entry.update(result.metrics)
    if result.traces:
        entry['traces_file'] = f'traces/{result.cell.cell_id}.csv'
    return entry


def _gp_entry(loop_config):
    return {'x0': list(loop_config.x0),
            'kernels': [kernel_to_dict(kernel) for kernel
                        in (loop_config.cost_kernel,) + loop_config.constraint_kernels],
            'noise_std': list(loop_config.noise_std),
            'prior_means': list(loop_config.prior_means)}


def execute(config, out_dir):
    """
    Run every cell and write records, timing, traces and the summary.

    Cells run in a process pool when ``config.workers`` > 1; results are
    gathered in cell order, so outputs do not depend on the worker count.

    Returns
    -------
    dict
        The summary document (also written to ``summary.json``).

    """
    out_dir = Path(out_dir)
    patients = patients_for(config) if config.is_glucose else None
    cells = cells_for(config, patients)
    _LOG.log_event('executing', problem=config.problem, cells=len(cells), workers=config.workers)

    if config.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(_run_cell_args, [(config, cell) for cell in cells]))
    else:
        results = [run_cell(config, cell) for cell in cells]

    for result in results:
        stem = result.cell.cell_id
        write_records(result.records, out_dir / 'records' / f'{stem}.csv')
        write_frame(timing_frame(result.records), out_dir / 'timing' / f'{stem}_timing.csv')
        if result.traces:
            write_frame(traces_frame(result.traces), out_dir / 'traces' / f'{stem}.csv')

    summary = {
        'schema_version': SUMMARY_SCHEMA_VERSION,
        'problem': config.problem,
        'config': config.source,
        'cells': [_cell_entry(result) for result in results],
        'methods': {method: _method_summary([result for result in results
                                             if result.cell.method == method])
                    for method in config.methods},
    }
    for method, stats in summary['methods'].items():
        _LOG.log({'method': method, **stats})
    if cells:
        summary['gp'] = _gp_entry(loop_config_for(config, cells[0]))
    if patients is not None:
        summary['patients'] = [jsons.dump(patient, strip_properties=True, strip_privates=True)
                               for patient in patients]
    write_summary(summary, out_dir / SUMMARY_FILE)
    return summary


def write_summary(summary, path):
    """ summary JSON with sorted keys """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(jsons.dumps(summary, jdkwargs={'indent': 2, 'sort_keys': True}) + '\n')
    return path
