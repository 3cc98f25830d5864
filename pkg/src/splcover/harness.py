"""Benchmark harness: replicated runs, level aggregation and CSV output."""

from __future__ import annotations

import os
import statistics
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .baselines import PpgsParams, ppgs, sampled_greedy, weighted_greedy
from .cmsa import CmsaParams, run_cmsa
from .errors import SplcoverError
from .model import FeatureModel, parse_model
from .pairs import (
    DEFAULT_LEVELS,
    WEIGHT_TOL,
    ConfigurationSet,
    derive_configurations,
    is_covering_array,
    products_to_levels,
    read_prioritized_products,
)

ALGORITHMS = ("cmsa", "greedy", "ppgs", "sampled")


@dataclass(frozen=True)
class AlgoOptions:
    iterations: int | None = 10
    time_limit_s: float | None = None
    n_a: int = 5
    age_max: int = 4
    pool_size: int = 50
    population: int = 10
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    evaluations: int = 1000


@dataclass
class RunRecord:
    run: int
    algorithm: str
    seed: int
    suite_size: int
    time_ms: int
    counts: dict  # level -> products needed
    suite: list  # ordered products


@dataclass(frozen=True)
class AggregateRow:
    algorithm: str
    level: int
    mean: float
    std: float


def load_inputs(model_path, pp_path):
    model_path, pp_path = Path(model_path), Path(pp_path)
    try:
        fm = parse_model(model_path.read_text(encoding="utf-8"))
    except SplcoverError as exc:
        raise type(exc)(f"{model_path}: {exc}") from exc
    try:
        pps = read_prioritized_products(pp_path.read_text(encoding="utf-8"), fm)
    except SplcoverError as exc:
        raise type(exc)(f"{pp_path}: {exc}") from exc
    cs = derive_configurations(fm, pps)
    if cs.n_obligations == 0:
        raise SplcoverError(f"{pp_path}: no weight-positive configurations")
    return fm, cs


def _run_once(fm, cs, algorithm, seed, opts: AlgoOptions):
    if algorithm == "cmsa":
        params = CmsaParams(
            n_a=opts.n_a,
            age_max=opts.age_max,
            iterations=opts.iterations if opts.time_limit_s is None else None,
            time_limit_s=opts.time_limit_s,
            seed=seed,
        )
        return run_cmsa(fm, cs, params).suite
    if algorithm == "greedy":
        return weighted_greedy(fm, cs)
    if algorithm == "ppgs":
        params = PpgsParams(
            population=opts.population,
            crossover_rate=opts.crossover_rate,
            mutation_rate=opts.mutation_rate,
            evaluations=opts.evaluations,
            seed=seed,
        )
        return ppgs(fm, cs, params)
    if algorithm == "sampled":
        return sampled_greedy(fm, cs, opts.pool_size, seed)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _check_run(fm, cs, suite, counts, levels):
    if not is_covering_array(suite, cs):
        raise SplcoverError("suite does not cover all weight-positive configurations")
    bits, prev = 0, -1.0
    for product in suite:
        bits |= cs.covered_bits(product)
        cov = cs.weight_of_bits(bits) / cs.total_weight
        if cov < prev - WEIGHT_TOL:
            raise SplcoverError("prefix coverage decreased")
        prev = cov
    ordered = sorted(levels)
    for lo, hi in zip(ordered, ordered[1:]):
        if counts[lo] > counts[hi]:
            raise SplcoverError("level counts are not non-decreasing")


def run_experiment(
    model_path,
    pp_path,
    algorithm: str,
    replications: int,
    base_seed: int,
    opts: AlgoOptions = AlgoOptions(),
    levels: Sequence[int] = DEFAULT_LEVELS,
) -> list[RunRecord]:
    """One RunRecord per replication; replication i uses seed base_seed + i."""
    fm, cs = load_inputs(model_path, pp_path)
    return run_replications(fm, cs, algorithm, replications, base_seed, opts, levels)


def run_replications(
    fm: FeatureModel,
    cs: ConfigurationSet,
    algorithm: str,
    replications: int,
    base_seed: int,
    opts: AlgoOptions = AlgoOptions(),
    levels: Sequence[int] = DEFAULT_LEVELS,
) -> list[RunRecord]:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if replications < 1:
        raise ValueError("replications must be >= 1")
    records = []
    for i in range(replications):
        seed = base_seed + i
        t0 = time.perf_counter()
        suite = _run_once(fm, cs, algorithm, seed, opts)
        elapsed_ms = int(round((time.perf_counter() - t0) * 1000))
        counts = products_to_levels(suite, cs, levels)
        _check_run(fm, cs, suite, counts, levels)
        records.append(
            RunRecord(i, algorithm, seed, len(suite), elapsed_ms, counts, suite)
        )
    return records


def aggregate(records: Sequence[RunRecord]) -> list[AggregateRow]:
    """Mean and population standard deviation of level counts per algorithm."""
    by_algo: dict[str, list[RunRecord]] = {}
    for rec in records:
        by_algo.setdefault(rec.algorithm, []).append(rec)
    rows = []
    for algo, recs in by_algo.items():
        levels = sorted(recs[0].counts)
        for level in levels:
            counts = [r.counts[level] for r in recs]
            rows.append(
                AggregateRow(algo, level, statistics.mean(counts), statistics.pstdev(counts))
            )
    return rows


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_runs_csv(records: Sequence[RunRecord], path, levels=DEFAULT_LEVELS) -> None:
    header = "run,algorithm,seed,suite_size,time_ms," + ",".join(
        f"p{level}" for level in levels
    )
    lines = [header]
    for rec in sorted(records, key=lambda r: (r.algorithm, r.run)):
        cells = [
            str(rec.run),
            rec.algorithm,
            str(rec.seed),
            str(rec.suite_size),
            str(rec.time_ms),
        ] + [str(rec.counts[level]) for level in levels]
        lines.append(",".join(cells))
    _atomic_write(path, "\n".join(lines) + "\n")


def emit_aggregate_csv(rows: Sequence[AggregateRow], path) -> None:
    # population standard deviation; two-decimal rendering
    lines = ["algorithm,level,mean,std"]
    for row in rows:
        lines.append(f"{row.algorithm},{row.level},{row.mean:.2f},{row.std:.2f}")
    _atomic_write(path, "\n".join(lines) + "\n")


def emit_suites(records: Sequence[RunRecord], fm: FeatureModel, out_dir) -> None:
    for rec in records:
        lines = [
            ";".join(f for f in fm.features if f in product) for product in rec.suite
        ]
        _atomic_write(
            Path(out_dir) / "suites" / f"{rec.algorithm}-{rec.run}.txt",
            "\n".join(lines) + "\n",
        )
