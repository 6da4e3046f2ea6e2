"""Command line: ``run <config>`` and ``verify <suite>``.

Коды выхода: 0 успех, 1 ошибка конфигурации, параметров или аргументов, 2 не выполнено свойство,
3 численная расходимость.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from app.config import OUTPUT_DIR, THREADS, configure_logging
from app.exceptions import ConfigError, DivergenceError, PropertyFailure
from app.models.enums import VerifySuite
from app.services.experiment import load_configs, run_configs, summarize
from app.services.verification import assert_passed, run_suite
from app.utils.export import ExportFormat, format_for_path, get_exporter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PROPERTY = 2
EXIT_DIVERGENCE = 3


class _Parser(argparse.ArgumentParser):
    """Ошибки разбора аргументов дают код 1, а не стандартный для argparse код 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shadowsim", description="Correlated vs. independent shadowing simulator")
    parser.add_argument("--log-level", default=None, help="overrides SHADOWSIM_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--reps", type=int, default=None, help="replications (patterns for delay metrics)")
    common.add_argument("--threads", type=int, default=None, help=f"worker processes (default {THREADS})")

    run = sub.add_parser("run", parents=[common], help="run an experiment config")
    run.add_argument("config", help="path to a JSON config or the name of a bundled one")
    run.add_argument("--out", default=None, help="output file (default: config output or results/<name>.<format>)")
    run.add_argument(
        "--format", choices=[f.value for f in ExportFormat], default=None,
        help="csv or xlsx (default: from the --out suffix, else csv)",
    )

    verify = sub.add_parser("verify", parents=[common], help="run a property suite")
    verify.add_argument("suite", choices=[s.value for s in VerifySuite])
    verify.add_argument("--out", default=None, help="write the JSON report to this file")
    return parser


def _output_path(args, configs) -> Path:
    if args.out:
        return Path(args.out)
    if len(configs) == 1 and configs[0].output:
        return Path(configs[0].output)
    return Path(OUTPUT_DIR) / f"{Path(args.config).stem}.{args.format or ExportFormat.CSV.value}"


def cmd_run(args) -> int:
    configs = load_configs(args.config)
    rows = run_configs(configs, seed=args.seed, reps=args.reps, threads=args.threads)
    target = _output_path(args, configs)
    path = get_exporter(args.format or format_for_path(target)).to_path(rows, target)
    logger.info(f"Wrote {len(rows)} rows to {path}")
    print(summarize(rows).to_string(index=False))
    print(f"\n{len(rows)} rows -> {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, reps=args.reps, seed=args.seed, threads=args.threads)
    payload = report.model_dump_json(indent=2)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(payload, encoding="utf-8")
    print(payload)
    assert_passed(report)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    configure_logging(args.log_level)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_verify(args)
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        print(json.dumps({"error": str(e).splitlines()[0], "diagnostics": e.diagnostics}), file=sys.stderr)
        return EXIT_CONFIG
    except PropertyFailure as e:
        logger.error(str(e))
        return EXIT_PROPERTY
    except DivergenceError as e:
        logger.error(f"Numerical divergence: {e}")
        return EXIT_DIVERGENCE
    except (ValueError, NotImplementedError) as e:
        logger.error(f"Invalid parameters: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
