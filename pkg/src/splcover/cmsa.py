"""Construct-merge-solve-adapt loop for prioritized pairwise suite generation.

Each iteration constructs several random covering solutions, merges their
products into a working sub-instance, solves that sub-instance exactly as a
minimum set cover, keeps the smallest suite seen so far and ages out
products that stopped appearing in exact solutions.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .errors import UncoverableConfigurationsError
from .model import FeatureModel, Product
from .pairs import ConfigurationSet
from .sampling import random_valid_product
from .setcover import CoverInstance, solve_min_cover

STALL_LIMIT = 10_000  # consecutive useless samples before diagnosing


@dataclass(frozen=True)
class CmsaParams:
    n_a: int = 5
    age_max: int = 4
    iterations: int | None = None
    time_limit_s: float | None = None
    seed: int = 0
    solver_node_budget: int = 50_000

    def __post_init__(self):
        if self.n_a < 1 or self.age_max < 1:
            raise ValueError("n_a and age_max must be >= 1")
        if (self.iterations is None) == (self.time_limit_s is None):
            raise ValueError("set exactly one of iterations or time_limit_s")
        if self.iterations is not None and self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.time_limit_s is not None and self.time_limit_s <= 0:
            raise ValueError("time_limit_s must be positive")


@dataclass(frozen=True)
class IterationStat:
    subinstance_size: int
    solution_size: int
    solver_optimal: bool


@dataclass
class CmsaResult:
    suite: list  # ordered products
    iterations: int
    log: list = field(default_factory=list)


def probabilistic_solution(
    fm: FeatureModel, cs: ConfigurationSet, rng: random.Random
) -> list[Product]:
    """Random covering solution: sample valid products, keeping each one only
    if it covers a still-uncovered weight-positive configuration, until none
    remain.  Returned list is duplicate-free and covers all obligations."""
    if cs.n_obligations == 0:
        raise ValueError("configuration set has no weight-positive configurations")
    uncovered = cs.all_bits()
    solution: list[Product] = []
    seen = set()
    stall = 0
    while uncovered:
        product = random_valid_product(fm, rng)
        bits = cs.covered_bits(product)
        if bits & uncovered:
            if product not in seen:
                seen.add(product)
                solution.append(product)
            uncovered &= ~bits
            stall = 0
        else:
            stall += 1
            if stall >= STALL_LIMIT:
                covered = cs.all_bits() & ~uncovered
                raise UncoverableConfigurationsError(cs.uncovered_pairs(covered))
    return solution


def adapt(sub: dict, solution: Sequence[Product], age_max: int) -> dict:
    """Aging step: reset ages of solution members, increment the rest and
    evict components that reach ``age_max``.  Preserves component order."""
    in_solution = set(solution)
    out = {}
    for product, age in sub.items():
        if product in in_solution:
            out[product] = 0
        elif age + 1 < age_max:
            out[product] = age + 1
    return out


def order_suite(suite: Sequence[Product], cs: ConfigurationSet) -> list[Product]:
    """Greedy prioritized ordering: repeatedly append the member with the
    largest uncovered weighted gain, ties by smallest selection vector.
    Zero-gain members are still emitted at the tail."""
    remaining = list(suite)
    ordered = []
    covered = 0
    while remaining:
        best = min(
            remaining,
            key=lambda p: (
                -cs.weight_of_bits(cs.covered_bits(p) & ~covered),
                cs.fm.lexkey(p),
            ),
        )
        ordered.append(best)
        remaining.remove(best)
        covered |= cs.covered_bits(best)
    return ordered


def run_cmsa(fm: FeatureModel, cs: ConfigurationSet, params: CmsaParams) -> CmsaResult:
    """Full loop; returns the smallest covering suite found, greedily
    ordered for prioritized testing."""
    rng = random.Random(params.seed)
    ages: dict[Product, int] = {}
    best: list[Product] | None = None
    log: list[IterationStat] = []
    start = time.perf_counter()
    iteration = 0
    while True:
        if params.iterations is not None:
            if iteration >= params.iterations:
                break
        elif time.perf_counter() - start >= params.time_limit_s:
            break
        for _ in range(params.n_a):
            for product in probabilistic_solution(fm, cs, rng):
                if product not in ages:
                    ages[product] = 0
        candidates = list(ages)
        inst = CoverInstance.build(
            range(cs.n_obligations),
            [(p, cs.covered_bits(p)) for p in candidates],
        )
        result = solve_min_cover(inst, params.solver_node_budget)
        exact = list(result.chosen)
        if best is None or len(exact) < len(best):
            best = exact
        ages = adapt(ages, exact, params.age_max)
        log.append(IterationStat(len(candidates), len(exact), result.optimal))
        iteration += 1
    assert best is not None
    return CmsaResult(order_suite(best, cs), iteration, log)
