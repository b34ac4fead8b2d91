#!/usr/bin/env python3
"""
Lucas Tree Pricing CLI

Main entry point: `python main.py <command> --scenario <path> [options]`.
Reports go to standard output (or --out), messages to standard error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from core.config.logging_config import get_logger, setup_logging
from core.config.settings import settings
from core.errors import PricingError
from data_types import Command, OutputFormat
from services.command_service import create_command_service
from services.data_processing.scenario_processor import load_scenario_file

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lucas-tree",
        description="Equilibrium asset prices under recursive utility with lognormal dividend growth",
    )
    parser.add_argument("command", choices=[command.value for command in Command])
    parser.add_argument("--scenario", required=True, help="Scenario file (key = value under [section] headers)")
    parser.add_argument("--out", help="Write the report here instead of standard output")
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=[output_format.value for output_format in OutputFormat],
        default=OutputFormat.TABLE.value,
    )
    parser.add_argument("--seed", type=int, help="Override the scenario's master seed")
    parser.add_argument("--draws", type=int, help="Override the scenario's Monte Carlo draw count")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parser.add_argument("--log-file", help="Also write log records to this file")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level, log_file=args.log_file)

    try:
        scenario = load_scenario_file(args.scenario)
        scenario = scenario.with_simulation_overrides(seed=args.seed, n_draws=args.draws)
    except OSError as e:
        print(f"error: cannot read scenario file: {e}", file=sys.stderr)
        return 2
    except PricingError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    outcome = create_command_service().run_command(args.command, scenario, args.output_format)

    if outcome.output:
        if args.out:
            out_path = Path(args.out)
            out_path.parent.mkdir(parents=True, exist_ok=True)
            out_path.write_text(outcome.output, encoding="utf-8")
            logger.info(f"Report written to {out_path}")
        else:
            sys.stdout.write(outcome.output)
    if outcome.error:
        print(f"error: {outcome.error}", file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
