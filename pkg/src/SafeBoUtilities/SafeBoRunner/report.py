# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Report module:
Plot-ready columnar files rebuilt from an executed run: GP mean and
confidence grids plus barrier grids at the logged iterations, and for the
glucose problem the time-in-range and normalized-dose series per meal.
"""

import math
from pathlib import Path

import numpy as np
import pandas as pd

from SafeBoAcquisition import barrier_term
from SafeBoGlucose import tir_metrics
from SafeBoLoop import Domain, evaluate_grid, replay_state
from SafeBoLog import Log
from SafeBoUtils import ConfigReader
from .experiment_runner import Cell, loop_config_for
from .record_io import read_frame, read_records, write_frame
from .run_config import validate_config

_LOG = Log('report')

REPORT_DIR = 'report'


def _point_columns(points):
    return {f'x_{index}': points[:, index] for index in range(points.shape[1])}


def gp_grid_frames(state, points):
    """ (GP frame, barrier frame) over ``points`` for one replayed state """
    evaluation = evaluate_grid(state, points)
    gp_columns = _point_columns(points)
    posteriors = [evaluation.cost] + list(evaluation.constraints)
    betas = [evaluation.cost_beta] + list(evaluation.constraint_betas)
    for index, (posterior, beta) in enumerate(zip(posteriors, betas)):
        width = np.sqrt(beta) * posterior.std
        gp_columns[f'mean_{index}'] = posterior.mean
        gp_columns[f'lower_{index}'] = posterior.mean - width
        gp_columns[f'upper_{index}'] = posterior.mean + width

    barrier_columns = _point_columns(points)
    for index, (posterior, beta) in enumerate(
            zip(evaluation.constraints, evaluation.constraint_betas), start=1):
        barrier_columns[f'lcb_{index}'] = evaluation.constraint_lcbs[index - 1]
        barrier_columns[f'barrier_{index}'] = barrier_term(posterior, beta)
    barrier_columns['acquisition'] = evaluation.acquisition
    return pd.DataFrame(gp_columns), pd.DataFrame(barrier_columns)


def _iteration_files(config, entry, records, report_dir, log_iters):
    cell = Cell(method=entry['method'], seed=entry['seed'])
    loop_config = loop_config_for(config, cell)
    points = Domain(bounds=loop_config.domain.bounds,
                    grid_points_per_dim=config.report_grid_points,
                    refinement_iters=0).grid()
    written = []
    for iteration in log_iters:
        if iteration > len(records):
            continue
        state = replay_state(loop_config, records, iteration)
        gp_frame, barrier_frame = gp_grid_frames(state, points)
        stem = f"{entry['cell']}_iter{iteration}"
        written.append(write_frame(gp_frame, report_dir / f'{stem}_gp.csv'))
        written.append(write_frame(barrier_frame, report_dir / f'{stem}_barrier.csv'))
    return written


def _glucose_files(entry, records, out_dir, report_dir):
    written = []
    optimum = entry.get('optimal_dose')
    doses = [record.x[0] for record in records]
    normalized = [100.0 * dose / optimum if optimum else math.nan for dose in doses]
    dose_frame = pd.DataFrame({'meal': range(len(doses)), 'dose': doses,
                               'normalized_dose_pct': normalized})
    written.append(write_frame(dose_frame, report_dir / f"{entry['cell']}_dose.csv"))

    traces_file = entry.get('traces_file')
    if traces_file and (out_dir / traces_file).exists():
        traces = read_frame(out_dir / traces_file)
        rows = []
        for meal, group in traces.groupby('meal', sort=True):
            in_range, above, below = tir_metrics(group['cgm'].to_numpy())
            rows.append({'meal': meal, 'bolus': float(group['bolus'].iloc[0]),
                         'time_in_range': in_range, 'time_above': above, 'time_below': below})
        written.append(write_frame(pd.DataFrame(rows), report_dir / f"{entry['cell']}_tir.csv"))
    return written


def _text(summary):
    lines = [f"problem: {summary['problem']}"]
    for method, stats in sorted(summary['methods'].items()):
        parts = [f"cells={stats['cells']}", f"failures={stats['failures']}",
                 f"violations={stats['violations']}"]
        for key in ('median_simple_regret', 'median_dose_error'):
            if key in stats:
                value = stats[key]
                parts.append(f"{key}={'n/a' if value is None else format(value, '.6g')}")
        lines.append(f"{method}: " + ' '.join(parts))
    return '\n'.join(lines) + '\n'


def report(summary_path, log_iters=None):
    """
    Write the plot-data files of an executed run under ``<run>/report``.

    Returns
    -------
    (str, list of Path)
        The text summary and every file written.

    """
    summary_path = Path(summary_path)
    summary = ConfigReader.read_config_values(summary_path)
    config = validate_config(summary['config'])
    log_iters = tuple(log_iters) if log_iters else config.log_iters
    out_dir = summary_path.parent
    report_dir = out_dir / REPORT_DIR

    written = []
    for entry in summary['cells']:
        records_path = out_dir / entry['records_file']
        if not records_path.exists() or not entry['records']:
            _LOG.warning('no records for cell', cell=entry['cell'])
            continue
        records = read_records(records_path)
        written.extend(_iteration_files(config, entry, records, report_dir, log_iters))
        if config.is_glucose and entry.get('optimal_dose') is not None:
            written.extend(_glucose_files(entry, records, out_dir, report_dir))

    text = _text(summary)
    report_dir.mkdir(parents=True, exist_ok=True)
    text_path = report_dir / 'report.txt'
    text_path.write_text(text)
    written.append(text_path)
    _LOG.log_event('report written', files=len(written), directory=report_dir)
    return text, written
