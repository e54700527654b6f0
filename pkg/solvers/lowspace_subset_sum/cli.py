"""
Command-line entry point: ``lowss gen | solve | verify | bench``.

CSV goes to standard output and logs to standard error, so with
``--omit-timing`` the output of any command is byte-identical across runs
with the same arguments.

Exit status of ``solve``: 0 = NO, 1 = YES, 2 = error. ``verify`` exits 3 when
a randomized solver answered YES on a NO instance.
"""

import argparse
import csv
import os
import statistics
import sys
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, TextIO

from pydantic import ValidationError

from .config import get_settings, reload_settings
from .domain.exceptions import ArgumentError, SubsetSumError
from .domain.models import CSV_COLUMNS, Answer, SolveOutcome, SubsetSumInstance, WssapQuery
from .factory import ALGORITHMS, RANDOMIZED, SolverFactory
from .instances import dp_oracle, generate_instance, read_instance, reconstruct_solution
from .logging import clear_context, get_logger, get_run_id, set_run_id, setup_logging
from .metrics import DetectionMetric, get_metrics_collector, profile_operation
from .randomness import RandomTape


logger = get_logger(__name__)

EXIT_NO = 0
EXIT_YES = 1
EXIT_ERROR = 2
EXIT_BREACH = 3


# =============================================================================
# Argument helpers
# =============================================================================


def _eps(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        num, den = WssapQuery.parse_eps(text)
    except ValueError as e:
        raise ArgumentError(f"invalid --eps {text!r}: {e}") from e
    if not 0 < num < den:
        raise ArgumentError(f"--eps must satisfy 0 < num < den, got {text}")
    return num, den


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _str_list(text: str) -> list[str]:
    return [v for v in text.split(",") if v]


def _writer(out: TextIO) -> Any:
    return csv.writer(out, lineterminator="\n")


def _factory(args: argparse.Namespace, k: int | None) -> SolverFactory:
    return SolverFactory(
        seed=args.seed,
        k=k,
        eps=_eps(getattr(args, "eps", None)),
        race=getattr(args, "race", False),
    )


# =============================================================================
# Commands
# =============================================================================


def cmd_gen(args: argparse.Namespace) -> int:
    """Write a reproducible random instance."""
    tape = RandomTape.for_stream(args.seed, args.stream)
    inst = generate_instance(args.n, args.t_max, tape, args.density, args.planted)
    text = inst.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    logger.info("instance_generated", n=inst.n, t=inst.target, planted=args.planted)
    return EXIT_NO


def cmd_solve(args: argparse.Namespace) -> int:
    """Solve one instance file and print its CSV row."""
    inst = read_instance(Path(args.instance))
    factory = _factory(args, args.k)
    outcome = factory.create_solver(args.algo).solve(inst)

    writer = _writer(sys.stdout)
    if args.header:
        writer.writerow(CSV_COLUMNS)
    writer.writerow(outcome.csv_row(omit_timing=args.omit_timing))

    if args.witness and outcome.answer is Answer.YES:
        decider = factory.create_decider(args.algo, stream=1)
        chosen = reconstruct_solution(inst, decider)
        listed = " ".join(str(i) for i in chosen) if chosen else "none"
        sys.stdout.write(f"# witness: {listed}\n")

    return EXIT_YES if outcome.answer is Answer.YES else EXIT_NO


def _corpus(args: argparse.Namespace) -> list[SubsetSumInstance]:
    if args.instances:
        return [read_instance(Path(p)) for p in args.instances]
    return [
        generate_instance(
            args.n,
            args.t_max,
            RandomTape.for_stream(args.seed, (1 << 32) + i),
            planted=i % 2 == 0,
        )
        for i in range(args.count)
    ]


def _log_run_metrics(command: str) -> None:
    logger.info("run_metrics", command=command, **get_metrics_collector().get_metrics())


def cmd_verify(args: argparse.Namespace) -> int:
    """Compare a solver with the dynamic program over a corpus."""
    if args.algo == "wssap":
        raise ArgumentError("verify compares exact deciders; wssap is a promise problem")

    factory = _factory(args, args.k)
    collector = get_metrics_collector()
    tally = DetectionMetric()
    matrix = {(truth, answer): 0 for truth in Answer for answer in Answer}

    for i, inst in enumerate(_corpus(args)):
        truth = dp_oracle(inst.normalized())
        answer = factory.create_solver(args.algo, stream=i).solve(inst).answer
        tally.record(truth, answer)
        collector.record_verdict(args.algo, truth, answer)
        matrix[(truth, answer)] += 1
        if truth is Answer.NO and answer is Answer.YES:
            logger.error("verify_breach", algo=args.algo, entry=i, n=inst.n, t=inst.target)

    writer = _writer(sys.stdout)
    writer.writerow(["truth", "answer", "count"])
    for (truth, answer), count in matrix.items():
        writer.writerow([truth.value, answer.value, count])
    if args.algo in RANDOMIZED:
        writer.writerow(["detection_rate", f"{tally.detection_rate:.4f}", tally.yes_instances])
    writer.writerow(["breaches", tally.breaches, tally.no_instances])
    _log_run_metrics("verify")

    if tally.breaches:
        return EXIT_BREACH
    if args.algo not in RANDOMIZED and tally.detected != tally.yes_instances:
        missed = tally.yes_instances - tally.detected
        logger.error("verify_disagreement", algo=args.algo, missed=missed)
        return EXIT_ERROR
    return EXIT_NO


def _bench_cell(
    args: argparse.Namespace, algo: str, n: int, t: int, k: int | None, cell: int
) -> SolveOutcome:
    tape = RandomTape.for_stream(args.seed, (2 << 32) + cell)
    inst = generate_instance(n, t, tape, planted=True)
    with profile_operation(f"bench:{algo}", log_threshold_ms=60_000):
        return _factory(args, k).create_solver(algo, stream=cell).solve(inst)


def cmd_bench(args: argparse.Namespace) -> int:
    """Sweep (algo, n, t, k) and print per-run rows followed by a MEDIAN row per group."""
    if args.reps < 1:
        raise ArgumentError(f"--reps must be >= 1, got {args.reps}")
    groups: list[tuple[str, int, int, int | None]] = []
    for algo in args.algos:
        if algo not in ALGORITHMS:
            raise ArgumentError(f"unknown algorithm {algo!r}")
        for n in args.n:
            for t in args.t:
                for k in args.k if algo == "tradeoff" else [None]:
                    if k is not None and k > min(n, t):
                        logger.warning("bench_cell_skipped", algo=algo, n=n, t=t, k=k)
                        continue
                    groups.append((algo, n, t, k))

    cells = [
        (algo, n, t, k, g * args.reps + rep)
        for g, (algo, n, t, k) in enumerate(groups)
        for rep in range(args.reps)
    ]
    threads = min(get_settings().threads, max(1, len(cells)))
    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="bench") as pool:
        outcomes = list(pool.map(lambda c: _bench_cell(args, *c), cells))

    writer = _writer(sys.stdout)
    writer.writerow(CSV_COLUMNS)
    for g in range(len(groups)):
        runs = outcomes[g * args.reps : (g + 1) * args.reps]
        for outcome in runs:
            writer.writerow(outcome.csv_row(omit_timing=args.omit_timing))
        first = runs[0]
        writer.writerow(
            [
                first.algo,
                first.n,
                first.t,
                "" if first.k is None else first.k,
                first.eps or "",
                "MEDIAN",
                statistics.median_low(o.random_bits_used for o in runs),
                statistics.median_low(o.space.peak_words for o in runs),
                0 if args.omit_timing else statistics.median_low(o.wall_time_micros for o in runs),
            ]
        )
    _log_run_metrics("bench")
    return EXIT_NO


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowss", description="Low-space Subset Sum solvers")
    parser.add_argument("--log-level", help="Override LOWSS_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a random instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--t-max", type=int, required=True)
    gen.add_argument("--density", type=float, default=1.0)
    gen.add_argument("--planted", action="store_true", help="Target is a random subset's sum")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--stream", type=int, default=0)
    gen.add_argument("--out", help="Output file (default: stdout)")
    gen.set_defaults(handler=cmd_gen)

    def solver_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--algo", choices=ALGORITHMS, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--k", type=int, help="Tradeoff parameter")
        p.add_argument("--eps", help="Approximation parameter as num/den")
        p.add_argument("--race", action="store_true", help="Race both wssap reductions")

    solve = sub.add_parser("solve", help="Solve one instance")
    solve.add_argument("instance")
    solver_options(solve)
    solve.add_argument("--witness", action="store_true", help="Print a solution on YES")
    solve.add_argument("--header", action="store_true", help="Print the CSV header first")
    solve.add_argument("--omit-timing", action="store_true")
    solve.set_defaults(handler=cmd_solve)

    verify = sub.add_parser("verify", help="Compare a solver with the dynamic program")
    verify.add_argument("instances", nargs="*")
    solver_options(verify)
    verify.add_argument("--count", type=int, default=20, help="Generated corpus size")
    verify.add_argument("--n", type=int, default=12)
    verify.add_argument("--t-max", type=int, default=64)
    verify.set_defaults(handler=cmd_verify)

    bench = sub.add_parser("bench", help="Benchmark sweep as CSV")
    bench.add_argument("--algos", type=_str_list, default=["bellman"])
    bench.add_argument("--n", type=_int_list, default=[8])
    bench.add_argument("--t", type=_int_list, default=[64])
    bench.add_argument("--k", type=_int_list, default=[1])
    bench.add_argument("--eps", help="Approximation parameter for wssap")
    bench.add_argument("--reps", type=int, default=3)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--omit-timing", action="store_true")
    bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the command and map failures to exit status 2."""
    args = build_parser().parse_args(argv)
    if args.log_level:
        os.environ["LOWSS_LOG_LEVEL"] = args.log_level
        reload_settings()
        setup_logging()

    owns_run = get_run_id() is None
    if owns_run:
        set_run_id()
    try:
        code: int = args.handler(args)
        return code
    except (SubsetSumError, ValidationError, OSError) as e:
        logger.debug("command_failed", command=args.command, error_type=type(e).__name__)
        print(f"lowss: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        if owns_run:
            clear_context()


if __name__ == "__main__":
    sys.exit(main())
