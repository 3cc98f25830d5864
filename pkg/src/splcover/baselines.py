"""Baseline suite generators: exact weighted greedy, a constructive genetic
algorithm, and a sampled-pool greedy.

The sampled-pool greedy is a stand-in comparison point only; it is NOT an
implementation of the prioritized-ICPL algorithm.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .errors import UncoverableConfigurationsError
from .model import FeatureModel, Product
from .pairs import ConfigurationSet
from .propagate import rules_for
from .sampling import best_product, random_valid_product

STALL_POOLS = 1_000  # consecutive zero-gain pools before diagnosing


@dataclass(frozen=True)
class PpgsParams:
    population: int = 10
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    evaluations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if not (0 <= self.crossover_rate <= 1 and 0 <= self.mutation_rate <= 1):
            raise ValueError("rates must be in [0, 1]")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


def _uncoverable(cs: ConfigurationSet, uncovered: int):
    covered = cs.all_bits() & ~uncovered
    return UncoverableConfigurationsError(cs.uncovered_pairs(covered))


def weighted_greedy(fm: FeatureModel, cs: ConfigurationSet) -> list[Product]:
    """Append the exact best marginal-gain product until every
    weight-positive configuration is covered.  Deterministic."""
    if cs.n_obligations == 0:
        raise ValueError("configuration set has no weight-positive configurations")
    uncovered = cs.all_bits()
    suite: list[Product] = []
    while uncovered:
        gains = {
            pair: w
            for k, (pair, w) in enumerate(zip(cs.obligations, cs.obligation_weights))
            if uncovered >> k & 1
        }
        product, gain = best_product(fm, gains)
        bits = cs.covered_bits(product) & uncovered
        if gain <= 0 or not bits:
            raise _uncoverable(cs, uncovered)
        suite.append(product)
        uncovered &= ~bits
    return suite


def ppgs(
    fm: FeatureModel,
    cs: ConfigurationSet,
    params: PpgsParams,
    observer: Callable[[Product], None] | None = None,
) -> list[Product]:
    """Constructive GA: per round, evolve valid products under a marginal
    weighted-coverage fitness and append the best one, until all
    weight-positive configurations are covered.

    ``observer`` is called with every evaluated individual (a testing hook).
    """
    if cs.n_obligations == 0:
        raise ValueError("configuration set has no weight-positive configurations")
    rng = random.Random(params.seed)
    rules = rules_for(fm)
    uncovered = cs.all_bits()
    suite: list[Product] = []
    zero_rounds = 0
    while uncovered:
        best, best_gain = _ga_round(fm, cs, params, rng, uncovered, rules, observer)
        bits = cs.covered_bits(best) & uncovered
        if best_gain <= 0 or not bits:
            zero_rounds += 1
            if zero_rounds >= 50:
                raise _uncoverable(cs, uncovered)
            continue
        zero_rounds = 0
        suite.append(best)
        uncovered &= ~bits
    return suite


def _ga_round(fm, cs, params, rng, uncovered, rules, observer):
    def fitness(product):
        if observer is not None:
            observer(product)
        return cs.weight_of_bits(cs.covered_bits(product) & uncovered)

    def key(entry):
        product, fit = entry
        return (-fit, fm.lexkey(product))

    population = [random_valid_product(fm, rng) for _ in range(params.population)]
    scored = [(p, fitness(p)) for p in population]
    evals = len(scored)

    def tournament():
        a, b = rng.randrange(len(scored)), rng.randrange(len(scored))
        return min(scored[a], scored[b], key=key)[0]

    while evals < params.evaluations:
        elite = min(scored, key=key)
        offspring = [elite]
        while len(offspring) < params.population and evals < params.evaluations:
            p1, p2 = tournament(), tournament()
            if rng.random() < params.crossover_rate:
                child_vec = _one_point_crossover(fm, p1, p2, rng)
            else:
                child_vec = [f in p1 for f in fm.features]
            _mutate(fm, child_vec, params.mutation_rate, rng)
            mask = rules.complete(child_vec)
            child = fm.selected_of(mask)
            offspring.append((child, fitness(child)))
            evals += 1
        scored = offspring
    return min(scored, key=key)


def _one_point_crossover(fm, p1, p2, rng):
    v1 = [f in p1 for f in fm.features]
    v2 = [f in p2 for f in fm.features]
    if len(v1) < 2:
        return v1
    point = rng.randrange(1, len(v1))
    return v1[:point] + v2[point:]


def _mutate(fm, vec, rate, rng):
    # replace a selected feature by a randomly chosen deselected one
    for i in range(len(vec)):
        if vec[i] and rng.random() < rate:
            deselected = [j for j in range(len(vec)) if not vec[j]]
            if deselected:
                vec[i] = False
                vec[rng.choice(deselected)] = True


def sampled_greedy(
    fm: FeatureModel,
    cs: ConfigurationSet,
    pool_size: int,
    seed: int,
) -> list[Product]:
    """Greedy selection restricted to a pool of random valid products; the
    pool is resampled whenever its best marginal gain drops to zero."""
    if pool_size < 1:
        raise ValueError("pool_size must be >= 1")
    if cs.n_obligations == 0:
        raise ValueError("configuration set has no weight-positive configurations")
    rng = random.Random(seed)
    uncovered = cs.all_bits()
    suite: list[Product] = []
    pool = [random_valid_product(fm, rng) for _ in range(pool_size)]
    zero_pools = 0
    while uncovered:
        best = min(
            pool,
            key=lambda p: (
                -cs.weight_of_bits(cs.covered_bits(p) & uncovered),
                fm.lexkey(p),
            ),
        )
        gain = cs.weight_of_bits(cs.covered_bits(best) & uncovered)
        if gain > 0:
            suite.append(best)
            uncovered &= ~cs.covered_bits(best)
            zero_pools = 0
        else:
            zero_pools += 1
            if zero_pools >= STALL_POOLS:
                raise _uncoverable(cs, uncovered)
            pool = [random_valid_product(fm, rng) for _ in range(pool_size)]
    return suite
