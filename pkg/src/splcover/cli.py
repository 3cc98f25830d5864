"""Command-line entry point.

Exit codes: 0 success, 2 input error, 3 infeasible or uncoverable inputs,
4 internal budget exhaustion.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    BudgetExhaustedError,
    InfeasibleInstanceError,
    InvalidProductError,
    ModelFormatError,
    SplcoverError,
    UncoverableConfigurationsError,
    UnsatisfiableModelError,
)
from .harness import (
    ALGORITHMS,
    AlgoOptions,
    aggregate,
    emit_aggregate_csv,
    emit_runs_csv,
    emit_suites,
    load_inputs,
    run_replications,
)
from .pairs import DEFAULT_LEVELS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splcover",
        description="Prioritized pairwise test-suite generation for software product lines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an algorithm over a model + prioritized products")
    run.add_argument("--model", required=True, help="feature model (.fm)")
    run.add_argument("--products", required=True, help="prioritized products (.pp)")
    run.add_argument("--algo", required=True, choices=ALGORITHMS)
    run.add_argument("--runs", type=int, default=1, help="independent replications")
    run.add_argument("--seed", type=int, default=0, help="base seed; run i uses seed+i")
    budget = run.add_mutually_exclusive_group()
    budget.add_argument("--iters", type=int, help="CMSA iteration budget (default 10)")
    budget.add_argument("--time-limit", type=float, help="CMSA wall-clock budget in seconds")
    run.add_argument("--na", type=int, default=5, help="CMSA solutions per iteration")
    run.add_argument("--age-max", type=int, default=4, help="CMSA maximum component age")
    run.add_argument("--pool", type=int, default=50, help="pool size for the sampled greedy")
    run.add_argument(
        "--levels",
        default=",".join(str(level) for level in DEFAULT_LEVELS),
        help="comma-separated coverage levels in percent",
    )
    run.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        levels = tuple(int(tok) for tok in args.levels.split(",") if tok)
    except ValueError:
        print(f"splcover: bad --levels value {args.levels!r}", file=sys.stderr)
        return 2
    if not levels or any(not 0 < level <= 100 for level in levels):
        print("splcover: levels must be percentages in (0, 100]", file=sys.stderr)
        return 2
    opts = AlgoOptions(
        iterations=args.iters if args.iters is not None else (None if args.time_limit else 10),
        time_limit_s=args.time_limit,
        n_a=args.na,
        age_max=args.age_max,
        pool_size=args.pool,
    )
    try:
        fm, cs = load_inputs(args.model, args.products)
        records = run_replications(fm, cs, args.algo, args.runs, args.seed, opts, levels)
        out = Path(args.out)
        emit_runs_csv(records, out / "runs.csv", levels)
        emit_aggregate_csv(aggregate(records), out / "aggregate.csv")
        emit_suites(records, fm, out)
    except (ModelFormatError, InvalidProductError, FileNotFoundError, ValueError) as exc:
        print(f"splcover: input error: {exc}", file=sys.stderr)
        return 2
    except (UnsatisfiableModelError, UncoverableConfigurationsError, InfeasibleInstanceError) as exc:
        print(f"splcover: infeasible: {exc}", file=sys.stderr)
        return 3
    except BudgetExhaustedError as exc:
        print(f"splcover: budget exhausted: {exc}", file=sys.stderr)
        return 4
    except SplcoverError as exc:
        print(f"splcover: input error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}/runs.csv, aggregate.csv and suites/ ({len(records)} runs)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
