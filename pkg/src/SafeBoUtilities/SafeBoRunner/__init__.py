# pylint: disable-msg=C0103
"""
SafeBoRunner: This package provides configuration-driven experiment orchestration.
"""

# __init__.py
from .run_config import (RunConfig, parse_config, validate_config, resolve_output_dir,
                         METHODS, PROBLEM_DEFAULTS, OUTPUT_DIR_ENV)
from .record_io import records_frame, read_frame, read_records, write_records, traces_frame
from .experiment_runner import (Cell, CellResult, execute, run_cell, cells_for, patients_for,
                                acquisition_for, loop_config_for, SUMMARY_FILE)
from .report import report, gp_grid_frames
