"""
Cartan Workbench Command Line
=============================

Entry point for the five workbench commands:

    construct   build the configured algebra and check its dimension
    count       count nilpotent points two ways (enumerate or sample)
    reduce      run a normal-form reduction and replay its chain
    sample      rejection-sample elements under a constraint
    verify      run the verification ledger

Usage:
    cartan-workbench construct --family zassenhaus-envelope --p 5 --n 2
    cartan-workbench count --family witt --p 5 --mode enumerate --workers 4
    cartan-workbench verify --suite zassenhaus --p 5 --n 2 --M 2 --format json

Command output goes to stdout, diagnostics to stderr. Exit codes: 0 when
everything checked out, 1 when a check failed or the library refused the
input, 2 for usage errors.
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from src.automorphisms import InvalidAutomorphismError, PreconditionError, ReductionError
from src.cli.config import FAMILIES, FORMATS, SCHEMA_VERSION, SessionConfig, build_config
from src.cli.counting import MODES, GuardExceededError, count_nilpotent
from src.cli.families import CONSTRAINTS, family_from_config
from src.cli.reduce import REDUCTION_FAMILIES, run_reduction
from src.cli.sampling import SamplingBudgetError, sample_elements
from src.cli.verify import SUITES, run_verification, ledger_passed
from src.restricted import NotNilpotentError
from src.semidirect import ConsistencyError
from src.utils.linalg import NotInSpanError
from src.utils.logging_config import get_logger, setup_environment_logging
from src.utils.rng import substream
from src.zassenhaus import CertificateError, zass_e_algebra

logger = get_logger(__name__)

COMMANDS = ("construct", "count", "reduce", "sample", "verify")

DEFAULT_REDUCTION = {
    "witt": "demushkin",
    "zassenhaus-envelope": "yao-shu",
    "sl2-semidirect": "semidirect",
}

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

# raised by the library when a computation cannot go through on valid arguments
LIBRARY_ERRORS = (
    PreconditionError,
    ReductionError,
    InvalidAutomorphismError,
    ConsistencyError,
    NotNilpotentError,
    CertificateError,
    SamplingBudgetError,
    NotInSpanError,
)


class WorkbenchCLI:
    """Runs workbench commands for one session configuration."""

    def __init__(self, config: SessionConfig, timings: bool = False):
        self.config = config.validate()
        self.timings = timings
        self.results: Dict[str, Any] = {}
        self.timing: Dict[str, float] = {}
        logger.info(f"Workbench session: {self.config.to_dict()}")

    def _banner(self, title: str):
        logger.info("=" * 60)
        logger.info(title)
        logger.info("=" * 60)

    def run_construct(self) -> Dict[str, Any]:
        """Build the algebra and compare its dimension with the closed form."""
        self._banner("CONSTRUCT")
        family = family_from_config(self.config)
        summary = family.summary()
        summary["constraints"] = list(family.constraints)
        if family.name == "zassenhaus-envelope" and self.config.M > 1:
            zalg = zass_e_algebra(self.config.p, family.n, self.config.e_algebra_degree())
            summary["e_algebra_dimension"] = zalg.dim
            summary["e_algebra_envelope_dimension"] = len(zalg.envelope().operators)
        status = "ok" if summary["dimension_matches"] else "failed"
        if status == "failed":
            logger.error(f"{summary['algebra']}: dimension {summary['dimension']}, "
                         f"expected {summary['expected_dimension']}")
        return {"status": status, **summary}

    def run_count(self) -> Dict[str, Any]:
        self._banner("COUNT NILPOTENT POINTS")
        family = family_from_config(self.config)
        run = self.config.run
        report = count_nilpotent(family.key, mode=run.mode, samples=run.samples, seed=run.seed, n_jobs=run.workers)
        return {"status": "ok" if report.passed else "failed", **report.to_dict(timings=self.timings)}

    def run_reduce(self, which: Optional[str] = None, element_text: Optional[str] = None) -> Dict[str, Any]:
        self._banner("REDUCE")
        family = family_from_config(self.config)
        which = which or DEFAULT_REDUCTION[family.name]
        outcome = run_reduction(family, which, element_text, rng=substream(self.config.run.seed, 0),
                                t=self.config.algebra.t)
        return {"status": "ok" if outcome["replay"] else "failed", **outcome}

    def run_sample(self, constraint: str = "any") -> Dict[str, Any]:
        self._banner("SAMPLE")
        family = family_from_config(self.config)
        run = self.config.run
        samples = sample_elements(family.key, constraint, count=run.samples, seed=run.seed,
                                  budget=run.retry_budget, n_jobs=run.workers)
        return {
            "status": "ok",
            "algebra": family.label(),
            "constraint": constraint,
            "elements": [s.element for s in samples],
            "attempts": [s.attempts for s in samples],
        }

    def run_verify(self, suite: str = "all", full: bool = False) -> Dict[str, Any]:
        self._banner(f"VERIFY ({suite})")
        ledger = run_verification(self.config, suite=suite, full=full)
        if not self.timings:
            ledger = ledger.drop(columns=["elapsed"])
        failed = int((ledger["passed"] == False).sum())  # noqa: E712
        return {
            "status": "ok" if ledger_passed(ledger) else "failed",
            "suite": suite,
            "checks": len(ledger),
            "failed": failed,
            "ledger": ledger,
        }

    def run(self, command: str, **options) -> Dict[str, Any]:
        """Dispatch one command and record its result."""
        start_time = time.time()
        self.config.validate(command)
        if command == "construct":
            result = self.run_construct()
        elif command == "count":
            result = self.run_count()
        elif command == "reduce":
            result = self.run_reduce(options.get("which"), options.get("element"))
        elif command == "sample":
            result = self.run_sample(options.get("constraint", "any"))
        elif command == "verify":
            result = self.run_verify(options.get("suite", "all"), options.get("full", False))
        else:
            raise ValueError(f"Unknown command {command!r}; choose one of {', '.join(COMMANDS)}")
        self.timing[command] = time.time() - start_time
        self.results[command] = result
        logger.info(f"{command} finished with status {result['status']} in {self.timing[command]:.2f}s")
        return result


def _ledger_text(ledger: pd.DataFrame) -> str:
    table = ledger.copy()
    table["passed"] = table["passed"].apply(lambda v: "skip" if v is None else ("PASS" if v else "FAIL"))
    return table.to_string(index=False)


def render(command: str, result: Dict[str, Any], config: SessionConfig, output_format: str) -> str:
    """Text or JSON rendering of a command result; JSON carries the schema version."""
    if output_format == "json":
        payload = {key: value for key, value in result.items() if key != "ledger"}
        if "ledger" in result:
            payload["ledger"] = result["ledger"].to_dict(orient="records")
        document = {"schema_version": SCHEMA_VERSION, "command": command, "config": config.to_dict(), **payload}
        return json.dumps(document, indent=2, sort_keys=True, default=str)

    lines: List[str] = [f"{command}: {result['status']}"]
    for key, value in result.items():
        if key in ("status", "ledger"):
            continue
        if isinstance(value, list) and value and isinstance(value[0], str):
            lines.append(f"{key}:")
            lines.extend(f"  {item}" for item in value)
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {v}" for k, v in value.items())
        else:
            lines.append(f"{key}: {value}")
    if "ledger" in result:
        lines.append(_ledger_text(result["ledger"]))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartan-workbench",
        description="Exact arithmetic for restricted Lie algebras of Cartan type over finite fields",
    )
    parser.add_argument("command", choices=COMMANDS, help="Command to run")
    parser.add_argument("--p", type=int, default=5, help="Characteristic of the base field")
    parser.add_argument("--M", type=int, default=None, help="Extension degree of F_{p^M} (zassenhaus-envelope)")
    parser.add_argument("--family", choices=FAMILIES, default="witt", help="Algebra family")
    parser.add_argument("--m", type=int, default=1, help="Number of variables of W(m;n)")
    parser.add_argument("--n", type=int, nargs="+", default=None,
                        help="Heights n_1 ... n_m for witt, the height n of W(1;n) for zassenhaus-envelope")
    parser.add_argument("--t", type=int, default=None, help="Leading tail order for the tyurin reduction")
    parser.add_argument("--seed", type=int, default=None, help="Seed (default: WORKBENCH_SEED or 0)")
    parser.add_argument("--mode", choices=MODES, default="enumerate", help="Counting mode")
    parser.add_argument("--samples", type=int, default=100, help="Points to sample when counting, elements to emit")
    parser.add_argument("--suite", choices=("all",) + SUITES, default="all", help="Verification suite")
    parser.add_argument("--workers", type=int, default=None, help="Worker count (default: WORKBENCH_WORKERS or 1)")
    parser.add_argument("--format", dest="output_format", choices=FORMATS, default="text", help="Output format")
    parser.add_argument("--which", choices=tuple(REDUCTION_FAMILIES), default=None,
                        help="Reduction to run (default depends on the family)")
    parser.add_argument("--element", default=None, help="Serialized input element for reduce")
    parser.add_argument("--element-file", default=None, help="File holding the serialized input element")
    parser.add_argument("--constraint", choices=CONSTRAINTS, default="any", help="Sampling constraint")
    parser.add_argument("--retry-budget", type=int, default=200, help="Attempts per sample before giving up")
    parser.add_argument("--full", action="store_true", help="Verification with acceptance-size sample counts")
    parser.add_argument("--timings", action="store_true", help="Include elapsed times in reports")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the exit code."""
    setup_environment_logging()
    parser = build_parser()
    args = parser.parse_args(argv)

    element = args.element
    try:
        if args.element_file:
            element = Path(args.element_file).read_text().strip()
        config = build_config(
            p=args.p, M=args.M, family=args.family, m=args.m, n=args.n, t=args.t, seed=args.seed,
            workers=args.workers, output_format=args.output_format, mode=args.mode, samples=args.samples,
            suite=args.suite, retry_budget=args.retry_budget,
        )
        cli = WorkbenchCLI(config, timings=args.timings)
        result = cli.run(args.command, which=args.which, element=element, constraint=args.constraint,
                         suite=args.suite, full=args.full)
    except LIBRARY_ERRORS as exc:
        logger.error(f"{args.command} failed: {type(exc).__name__}: {exc}")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (GuardExceededError, ValueError, OSError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    print(render(args.command, result, config, args.output_format))
    return EXIT_OK if result["status"] == "ok" else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
