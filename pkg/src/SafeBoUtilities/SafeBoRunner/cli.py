# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
cli module:
Command line entry point.

    safebo run <config.json> [--out DIR] [--seeds 0 1 2] [--log-iters 2,5,25] [--verbose]
    safebo report <summary.json> [--log-iters 2,5,25] [--verbose]

Errors are printed to stderr as one JSON object and the exit code is nonzero
(2 for invalid input or usage, 1 for runtime failures).
"""

import argparse
import json
import sys

from SafeBoExceptions import ConfigValidationError, InputError, SafeBoError
from SafeBoLog import Log
from .experiment_runner import SUMMARY_FILE, execute
from .report import report
from .run_config import parse_config, resolve_output_dir

_LOG = Log('cli')


def _int_list(text):
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from err


class _JsonArgumentParser(argparse.ArgumentParser):
    """ usage errors reported as the same JSON document as runtime errors """

    def error(self, message):
        print(json.dumps({'error': 'UsageError', 'message': f'{self.prog}: {message}'},
                         sort_keys=True), file=sys.stderr)
        self.exit(2)


def _add_script_args():
    parser = _JsonArgumentParser(prog='safebo', description="Safe Bayesian optimization experiments.")
    subparsers = parser.add_subparsers(dest="cmd", required=True)

    run_parser = subparsers.add_parser("run", help="Execute a run configuration.")
    run_parser.add_argument("config", type=str, help="Path to the JSON run configuration.")
    run_parser.add_argument(
        "--out", "-o", default=None, required=False,
        help="Output directory (overrides SAFEBO_OUTPUT_DIR and the config's output_dir).")
    run_parser.add_argument(
        "--seeds", "-s", nargs="+", type=int, default=None, required=False,
        help="Seeds to run, replacing the config's seeds.")
    run_parser.add_argument(
        "--log-iters", type=_int_list, default=None, required=False,
        help="Iterations to emit GP and barrier grids for, e.g. 2,5,25.")

    report_parser = subparsers.add_parser("report", help="Re-emit plot data of an executed run.")
    report_parser.add_argument("summary", type=str, help="Path to summary.json.")
    report_parser.add_argument("--log-iters", type=_int_list, default=None, required=False)

    for sub in (run_parser, report_parser):
        sub.add_argument("--verbose", "-v", action="store_true", help="Show debug logging.")
    return parser


def _error(err, code):
    document = {'error': type(err).__name__, 'message': str(err)}
    if isinstance(err, ConfigValidationError):
        document['violations'] = err.violations
    print(json.dumps(document, sort_keys=True), file=sys.stderr)
    return code


def _run(args):
    config = parse_config(args.config, overrides={'seeds': args.seeds, 'log_iters': args.log_iters})
    out_dir = resolve_output_dir(config, args.out)
    execute(config, out_dir)
    text, _ = report(out_dir / SUMMARY_FILE)
    print(text, end='')
    return 0


def _report(args):
    text, _ = report(args.summary, log_iters=args.log_iters)
    print(text, end='')
    return 0


def main(argv=None):
    """ CLI entry point; returns the process exit code """
    args = _add_script_args().parse_args(argv)
    Log.configure(verbose=args.verbose)
    try:
        if args.cmd == "run":
            return _run(args)
        return _report(args)
    except InputError as err:
        return _error(err, 2)
    except (SafeBoError, OSError) as err:
        _LOG.warning('run failed', error=err)
        return _error(err, 1)


if __name__ == "__main__":
    sys.exit(main())
