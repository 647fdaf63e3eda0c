#!/usr/bin/env python3
"""
Run every verification suite and the quantization table in one go.

This script provides a command-line interface for a full check of the library
with overrides for the numerical settings normally read from the environment.
"""
import argparse
import logging
import os
import sys

from lommel import ode_engine, verify
from lommel.cli import TABLE_SAMPLE_POINTS
from lommel.utils.config import get_log_level, get_settings
from lommel.utils.formatting import to_json


def parse_args():
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description="Lommel numerics full check")

    run_group = parser.add_argument_group("Verification")
    run_group.add_argument("--samples", type=int, default=50, help="Cases per suite (default: 50)")
    run_group.add_argument("--seed", type=int, default=0, help="Seed of the case generator (default: 0)")
    run_group.add_argument("--max-p", type=int, default=3, help="Largest p reproduced per table case (default: 3)")

    settings_group = parser.add_argument_group("Numerical settings")
    settings_group.add_argument("--term-cap", type=int, help="Series term cap (LOMMEL_TERM_CAP)")
    settings_group.add_argument("--work-dps", type=int, help="Base working precision in digits (LOMMEL_WORK_DPS)")
    settings_group.add_argument("--log-level", help="Logging level (LOMMEL_LOG_LEVEL)")

    return parser.parse_args()


def main():
    """Run the checks with the specified configuration."""
    args = parse_args()

    if args.term_cap is not None:
        os.environ["LOMMEL_TERM_CAP"] = str(args.term_cap)
    if args.work_dps is not None:
        os.environ["LOMMEL_WORK_DPS"] = str(args.work_dps)
    if args.log_level:
        os.environ["LOMMEL_LOG_LEVEL"] = args.log_level

    try:
        logging.basicConfig(level=get_log_level(), format='%(asctime)s - %(levelname)s - %(message)s')
        report = verify.run_suite(verify.Suite.ALL, samples=args.samples, seed=args.seed)
        table = []
        for case_id in range(1, 5):
            for p in range(args.max_p + 1):
                case = ode_engine.quantization_case(case_id, p)
                sol = case.solution_spec()
                worst = max(ode_engine.ode_residual(sol, z, value_fn=case.mp_value) for z in TABLE_SAMPLE_POINTS)
                table.append({"case": case_id, "p": p, "K_exact": case.K_exact, "worst_residual": worst})
        print(to_json({"settings": get_settings(), "verify": report.to_json_dict(), "table1": table}))
        return 0 if report.failed == 0 else 1
    except Exception as e:
        print(f"Full check failed: {str(e)}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
