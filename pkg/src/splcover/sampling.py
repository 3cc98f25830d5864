"""Constraint-engine operations over the product space: seeded random valid
products and exact best-product search by branch-and-bound."""

from __future__ import annotations

import random
from typing import Mapping

from .errors import UnsatisfiableModelError
from .model import FeatureModel, Product
from .pairs import Pair
from .propagate import rules_for

GAIN_TOL = 1e-9


def random_valid_product(fm: FeatureModel, rng: random.Random) -> Product:
    """Sample a valid product.

    Draws a random preferred polarity per feature and completes it with
    backtracking, so every valid product has nonzero probability and the
    result is a pure function of the seed.
    """
    rules = rules_for(fm)
    prefer = [rng.random() < 0.5 for _ in range(rules.n)]
    mask = rules.complete(prefer)
    if mask is None:
        raise UnsatisfiableModelError("model has no valid product")
    return fm.selected_of(mask)


def is_satisfiable(fm: FeatureModel) -> bool:
    rules = rules_for(fm)
    return rules.complete([False] * rules.n) is not None


def best_product(
    fm: FeatureModel, gains: Mapping[Pair, float]
) -> tuple[Product, float]:
    """Valid product maximizing the summed gain of the configurations it
    covers, found exactly by branch-and-bound.

    The admissible bound at a node is the summed gain of all configurations
    not yet contradicted by the partial assignment.  Gain ties are broken by
    the lexicographically smallest selection vector.
    """
    rules = rules_for(fm)
    ix = fm.index
    configs = []
    by_feature = [[] for _ in range(rules.n)]
    for pair, w in gains.items():
        if w < 0:
            raise ValueError("gains must be non-negative")
        if w == 0:
            continue
        ci = len(configs)
        i, si = ix[pair.first[0]], pair.first[1]
        j, sj = ix[pair.second[0]], pair.second[1]
        configs.append((i, si, j, sj, w))
        by_feature[i].append(ci)
        by_feature[j].append(ci)

    # most-constrained feature first for stronger pruning
    branch_order = sorted(range(rules.n), key=lambda i: (-len(by_feature[i]), i))

    def apply_trail(state, dead, bound, trail):
        """Kill configurations contradicted by newly decided features.

        At a complete assignment every live configuration is fully matched,
        so the bound equals the achieved gain at leaves."""
        for f in trail:
            value = state[f]
            for ci in by_feature[f]:
                if dead[ci]:
                    continue
                i, si, j, sj, w = configs[ci]
                if (f == i and value is not si) or (f == j and value is not sj):
                    dead[ci] = 1
                    bound -= w
        return bound

    root_state = rules.initial_state()
    root_trail = [rules.root]  # the root is pre-assigned, not propagated
    if not rules.propagate(root_state, root_trail):
        raise UnsatisfiableModelError("model has no valid product")
    root_dead = bytearray(len(configs))
    root_bound = apply_trail(
        root_state, root_dead, float(sum(c[4] for c in configs)), root_trail
    )

    # phase 1: maximum achievable gain, strict-improvement pruning
    best_gain = -1.0

    def children_of(state, dead, bound, feature):
        out = []
        for value in (False, True):
            child = list(state)
            child[feature] = value
            trail = [feature]
            if not rules.propagate(child, trail):
                continue
            child_dead = bytearray(dead)
            out.append((child, child_dead, apply_trail(child, child_dead, bound, trail)))
        return out

    def dfs_max(state, dead, bound):
        nonlocal best_gain
        feature = None
        for i in branch_order:
            if state[i] is None:
                feature = i
                break
        if feature is None:
            if bound > best_gain:
                best_gain = bound
            return
        kids = children_of(state, dead, bound, feature)
        kids.sort(key=lambda kid: -kid[2])  # greedy descent for an early incumbent
        for child, child_dead, child_bound in kids:
            if child_bound <= best_gain + GAIN_TOL:
                break  # cannot strictly improve; siblings are no better
            dfs_max(child, child_dead, child_bound)

    dfs_max(root_state, root_dead, root_bound)

    # phase 2: first leaf reaching the maximum, visited in lexicographic
    # order of the selection vector, is the tie-broken optimum
    target = best_gain - GAIN_TOL

    def dfs_lex(state, dead, bound):
        feature = rules.first_undecided(state)
        if feature is None:
            return rules.mask(state) if bound >= target else None
        for value in (False, True):
            child = list(state)
            child[feature] = value
            trail = [feature]
            if not rules.propagate(child, trail):
                continue
            child_dead = bytearray(dead)
            child_bound = apply_trail(child, child_dead, bound, trail)
            if child_bound < target:
                continue
            found = dfs_lex(child, child_dead, child_bound)
            if found is not None:
                return found
        return None

    best_mask = dfs_lex(root_state, root_dead, root_bound)
    assert best_mask is not None
    return fm.selected_of(best_mask), max(best_gain, 0.0)
