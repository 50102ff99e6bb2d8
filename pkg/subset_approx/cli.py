"""Command-line front end: ``subset-approx <command> ...``.

Reports go to standard output as one JSON object per line (or an aligned text
table with ``--format text``); diagnostics go to standard error.

Exit codes: 0 success, 1 infeasible or NO outcome, 2 input error, 3 budget exceeded.
"""

from contextlib import contextmanager
from typing import Optional, Sequence, TextIO
import argparse
import logging
import sys

import fsspec
import fsspec.utils
from pydantic import ValidationError

from . import __version__
from .approx import available_oracles
from .exceptions import (
    BudgetExceeded,
    CommandFailed,
    InfeasibleInstance,
    InputError,
    UnsupportedRestriction,
)
from .experiment import (
    ExperimentManager,
    LoadedInstance,
    execute_run,
    format_records,
    format_table,
    run_experiment,
)
from .formats import parse_instance, render_instance
from .generate import generate
from .models import Command, ErrorRecord, GenModel, GenSpec, RunRecord, RunSpec
from .problems import ProblemKind

logger = logging.getLogger("subset_approx")

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

_NO_OUTCOMES = {"infeasible", "no-instance", "not-intersective"}
_BUDGET_OUTCOMES = {"node-cap-exceeded", "budget-exceeded", "inconclusive"}


def exit_code_for(record: RunRecord) -> int:
    if record.status == "failed":
        return EXIT_INPUT
    if record.outcome in _NO_OUTCOMES:
        return EXIT_NO
    if record.outcome in _BUDGET_OUTCOMES:
        return EXIT_BUDGET
    return EXIT_OK


def exit_code_for_error(error: BaseException) -> int:
    if isinstance(error, BudgetExceeded):
        return EXIT_BUDGET
    if isinstance(error, InfeasibleInstance):
        return EXIT_NO
    if isinstance(error, (InputError, UnsupportedRestriction, ValidationError)):
        return EXIT_INPUT
    return EXIT_NO


@contextmanager
def handle_exception(command: str, fmt: str, out: TextIO):
    """Report any failure as an error record and turn it into ``CommandFailed``."""
    try:
        yield
    except CommandFailed:
        raise
    except Exception as e:
        error_message = f"{type(e).__name__}: {str(e)}"
        logger.error(error_message)
        logger.debug("Traceback", exc_info=True)

        record = ErrorRecord(
            command=command, description=str(e), error_code=type(e).__name__
        )
        out.write(format_records([record], fmt))
        raise CommandFailed(exit_code_for_error(e)) from e


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with fsspec.open(path, "r") as f:
            return f.read()
    except FileNotFoundError:
        raise InputError(f"Instance file not found: {path}") from None


def _write_text(path: Optional[str], text: str, out: TextIO):
    if path is None or path == "-":
        out.write(text)
        return
    with fsspec.open(path, "w") as f:
        f.write(text)
    logger.info(f"Wrote {path}")


# ====================================================================================
# Subcommands
# ====================================================================================
def _require_problem(args) -> ProblemKind:
    if args.problem is None:
        raise InputError(f"'{args.command}' needs --problem")
    return ProblemKind(args.problem)


def _run_spec(args, problem: ProblemKind) -> RunSpec:
    command = Command(args.command)
    fields = {
        "command": command,
        "problem": problem,
        "budget": args.budget,
        "oracle": getattr(args, "oracle", None),
        "verify": getattr(args, "verify", False),
    }
    if command is Command.BRANCH:
        fields.update(
            k=args.k, k_offset=args.k_offset, node_cap=args.node_cap, prune=args.prune
        )
    elif command is Command.DUAL:
        fields.update(
            epsilon=args.epsilon,
            brute_cap=args.brute_cap,
            force_brute=args.force_brute,
            k_upper=args.k_upper,
            auto_upper_bound=args.auto_upper_bound,
        )
    elif command is Command.CHECK_INTERSECTIVE:
        fields.update(tree_depth=args.depth)
    return RunSpec(**fields)


def cmd_run(args, out: TextIO) -> int:
    problem = _require_problem(args)
    spec = _run_spec(args, problem)
    data = parse_instance(_read_text(args.instance), problem)
    instance = LoadedInstance(args.instance, data, args.seed)
    record = execute_run(spec, instance, timing=args.timing)
    out.write(format_records([record], args.format))
    return exit_code_for(record)


def cmd_gen(args, out: TextIO) -> int:
    spec = GenSpec(
        model=GenModel(args.model),
        n=args.n,
        p=args.p,
        n_ground=args.n_ground,
        m=args.m,
        min_set_size=args.min_size,
        max_set_size=args.max_size,
        seed=args.seed or 0,
    )
    _write_text(args.output, render_instance(generate(spec)), out)
    return EXIT_OK


def cmd_experiment(args, out: TextIO) -> int:
    manager = ExperimentManager(args.config)
    config = manager.config
    jobs = args.jobs or config.jobs
    table = run_experiment(
        manager.instances(), config.runs, jobs=jobs, fmt=args.format, timing=args.timing
    )
    _write_text(args.output, format_table(table, args.format), out)
    failed = sum(r.status == "failed" for r in table.records)
    if failed:
        logger.warning(f"{failed} of {len(table.records)} row(s) failed")
    return EXIT_OK


# ====================================================================================
# Parser
# ====================================================================================
def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--problem",
        choices=[k.value for k in ProblemKind],
        default=default(None),
        help="Problem kind to solve on the instance",
    )
    parser.add_argument(
        "--format", choices=["json", "text"], default=default("json"), help="Report format"
    )
    parser.add_argument(
        "--seed", type=int, default=default(None), help="Random seed (gen) or tag"
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=default(False),
        help="Debug logging on standard error",
    )
    parser.add_argument(
        "--timing",
        action="store_true",
        default=default(False),
        help="Record elapsed milliseconds (output is then no longer reproducible)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subset-approx",
        description="Branching and dual-schema algorithms for subset problems",
    )
    parser.add_argument("--version", action="version", version=__version__)
    _global_options(parser, suppress=False)

    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument("instance", help="Instance file or fsspec URL, '-' for stdin")
    instance.add_argument(
        "--budget", type=int, default=24, help="Largest universe searched exhaustively"
    )

    oracle = argparse.ArgumentParser(add_help=False)
    oracle.add_argument(
        "--oracle",
        choices=available_oracles(),
        help="Approximation oracle (default depends on the problem)",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common, instance], help="Exact optimum")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("approx", parents=[common, instance, oracle], help="Run one oracle")
    p.add_argument("--verify", action="store_true", help="Compare with the exact optimum")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser(
        "branch", parents=[common, instance, oracle], help="Branch on oracle outputs"
    )
    k = p.add_mutually_exclusive_group(required=True)
    k.add_argument("--k", type=int, help="Solution size bound")
    k.add_argument("--k-offset", type=int, help="Use k = opt + offset")
    p.add_argument("--no-prune", dest="prune", action="store_false")
    p.add_argument("--node-cap", type=int, default=1_000_000)
    p.add_argument("--verify", action="store_true", help="Compare with the exact optimum")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser(
        "dual", parents=[common, instance, oracle], help="Approximate the dual problem"
    )
    p.add_argument("--epsilon", required=True, help="Accuracy in (0, 1], e.g. 1/4")
    p.add_argument("--brute-cap", type=int, default=20)
    p.add_argument("--force-brute", action="store_true")
    p.add_argument("--k-upper", type=int, help="Known upper bound on the primal optimum")
    p.add_argument(
        "--no-auto-upper-bound", dest="auto_upper_bound", action="store_false"
    )
    p.add_argument("--verify", action="store_true", help="Compare with the exact optimum")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser(
        "check-intersective",
        parents=[common, instance, oracle],
        help="Check that the oracle output meets an optimum",
    )
    p.add_argument("--depth", type=int, help="Also check every branching node to this depth")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen", parents=[common], help="Generate a random instance")
    p.add_argument("model", choices=[m.value for m in GenModel])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--n-ground", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("-o", "--output", help="Destination (default standard output)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("experiment", parents=[common], help="Run a YAML experiment matrix")
    p.add_argument("config", help="Experiment YAML file or fsspec URL")
    p.add_argument("--jobs", type=int, help="Worker threads (overrides the file)")
    p.add_argument("-o", "--output", help="Destination (default standard output)")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    fsspec.utils.setup_logging(
        logger=logger, level="DEBUG" if args.verbose else "WARNING"
    )
    try:
        with handle_exception(args.command, args.format, out):
            return args.func(args, out)
    except CommandFailed as e:
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
