"""
Scenario Runner
Runs one lab scenario from a JSON config and writes CSV/JSON artifacts

Usage:
  python run_scenario.py constants     --config cfg.json --out results/constants
  python run_scenario.py statics       --config cfg.json --out results/statics
  python run_scenario.py waves         --config cfg.json --out results/waves
  python run_scenario.py orbit         --config cfg.json --out results/orbit
  python run_scenario.py conserve      --config cfg.json --out results/conserve
  python run_scenario.py soliton-check --config cfg.json --out results/soliton --seed 7

Exit codes: 0 success, 2 config error, 3 solver non-convergence, 4 numerical abort.
"""

import argparse
import os
import sys
import time

from tabulate import tabulate

from config.logging_config import init_run_logging, log_error
from config.settings import LOG_LEVEL, OUTPUT_DIR, TOOL_NAME, TOOL_VERSION
from physics.errors import MBIError
from scenarios.config_parser import KINDS, parse_config
from scenarios.runner import run


def print_banner(text):
    """Print a formatted banner"""
    print("\n" + "=" * 80)
    print(f"  {text}")
    print("=" * 80 + "\n")


def _format(value):
    if isinstance(value, float):
        return f"{value:.10g}"
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="Born-Infeld point-charge field lab")
    parser.add_argument('--version', action='version', version=f"{TOOL_NAME} {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest='kind', required=True)
    for kind in KINDS:
        sub = subparsers.add_parser(kind, help=f"run a {kind} scenario")
        sub.add_argument('--config', required=True, help="JSON scenario config")
        sub.add_argument('--out', default=None, help=f"output directory (default: {OUTPUT_DIR}/<kind>)")
        sub.add_argument('--seed', type=int, default=None, help="seed for randomized sweeps")
    return parser


def main(argv=None):
    """Main entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    logger = init_run_logging(LOG_LEVEL)
    out_dir = args.out or os.path.join(OUTPUT_DIR, args.kind)

    print_banner(f"{TOOL_NAME.upper()} {TOOL_VERSION} - {args.kind.upper()}")
    start = time.perf_counter()
    try:
        scenario = parse_config(args.config, kind=args.kind, seed=args.seed)
        result = run(scenario, out_dir)
    except MBIError as e:
        log_error('runs', f"❌ {type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        log_error('runs', f"❌ Unexpected failure: {e}", exc_info=e)
        return 1

    rows = [[key, _format(value)] for key, value in result.summary.items()]
    print(tabulate(rows, headers=['quantity', 'value'], tablefmt='github'))
    print()
    logger.info(f"✅ {args.kind} finished in {time.perf_counter() - start:.2f}s; "
                f"{len(result.files)} artifacts in {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
