# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Record IO module:
Columnar persistence of experiment records through pandas. Floats are written
with 17 significant digits so a replay reads back the exact values.
"""

import math

import pandas as pd

from SafeBoLoop import ExperimentRecord

FLOAT_FORMAT = '%.17g'


def records_frame(records):
    """ one row per record, columns in ExperimentRecord.to_row order """
    return pd.DataFrame([record.to_row() for record in records])


def timing_frame(records):
    """ wall time per iteration, kept apart from the replayable records """
    return pd.DataFrame({'run_id': [record.run_id for record in records],
                         'iteration': [record.iteration for record in records],
                         'wall_time_ms': [record.wall_time_ms for record in records]})


def write_frame(frame, path):
    """ CSV with the replay float format and no index """
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_records(records, path):
    """ records CSV """
    return write_frame(records_frame(records), path)


def read_frame(path):
    """ CSV read with exact float round trip of FLOAT_FORMAT values """
    return pd.read_csv(path, float_precision='round_trip')


def read_records(path):
    """ ExperimentRecord list from a records CSV """
    frame = read_frame(path)
    x_columns = [column for column in frame.columns if column.startswith('x_')]
    y_columns = [column for column in frame.columns if column.startswith('y_')]
    truth_columns = [column for column in frame.columns if column.startswith('truth_')]
    records = []
    for row in frame.to_dict('records'):
        truth = tuple(float(row[column]) for column in truth_columns)
        records.append(ExperimentRecord(
            run_id=str(row['run_id']), seed=int(row['seed']), iteration=int(row['iteration']),
            x=tuple(float(row[column]) for column in x_columns),
            observed=tuple(float(row[column]) for column in y_columns),
            truth=None if all(math.isnan(value) for value in truth) else truth,
            safe_set_fraction=float(row['safe_set_fraction']),
            fallback=bool(row['fallback']), violation=bool(row['violation']),
            lcb_breach=bool(row.get('lcb_breach', False))))
    return records


def traces_frame(traces):
    """ long-format CGM traces, one row per (meal, sample) """
    frames = [pd.DataFrame({'meal': meal, 'bolus': trace.bolus, 't_min': trace.times,
                            'cgm': trace.cgm, 'true_bg': trace.true_bg})
              for meal, trace in enumerate(traces)]
    return pd.concat(frames, ignore_index=True)
