import random

import pytest

import oracles
from splcover.errors import InfeasibleInstanceError
from splcover.setcover import CoverInstance, solve_min_cover


def _random_instance(seed, max_elems=10, max_sets=15):
    rng = random.Random(seed)
    n = rng.randint(1, max_elems)
    k = rng.randint(1, max_sets)
    bitsets = [rng.randrange(1, 1 << n) for _ in range(k)]
    union = 0
    for bits in bitsets:
        union |= bits
    missing = ((1 << n) - 1) & ~union
    if missing:
        bitsets[-1] |= missing  # keep every generated instance feasible
    return n, bitsets


def test_single_set_covers_everything():
    inst = CoverInstance.build([0, 1, 2], [("s", 0b111)])
    sol = solve_min_cover(inst)
    assert sol.chosen == ["s"]
    assert sol.optimal


def test_small_example():
    inst = CoverInstance.build(
        range(4), [("a", 0b0011), ("b", 0b1100), ("c", 0b0111)]
    )
    sol = solve_min_cover(inst)
    assert len(sol.chosen) == 2
    acc = 0
    by_id = dict(inst.sets)
    for cid in sol.chosen:
        acc |= by_id[cid]
    assert acc == inst.full


def test_empty_universe():
    sol = solve_min_cover(CoverInstance.build([], []))
    assert sol.chosen == []
    assert sol.optimal


def test_infeasible_instance():
    inst = CoverInstance.build(["x", "y"], [(0, 0b01)])
    with pytest.raises(InfeasibleInstanceError) as exc:
        solve_min_cover(inst)
    assert "y" in str(exc.value)


def test_matches_exhaustive_oracle():
    for seed in range(60):
        n, bitsets = _random_instance(seed)
        inst = CoverInstance.build(range(n), list(enumerate(bitsets)))
        sol = solve_min_cover(inst)
        assert sol.optimal
        assert len(sol.chosen) == oracles.brute_min_cover_size(n, bitsets), seed
        acc = 0
        for cid in sol.chosen:
            assert len([c for c in sol.chosen if c == cid]) == 1
            acc |= bitsets[cid]
        assert acc == inst.full


def test_deterministic():
    n, bitsets = _random_instance(17, max_elems=12, max_sets=20)
    inst = CoverInstance.build(range(n), list(enumerate(bitsets)))
    first = solve_min_cover(inst)
    second = solve_min_cover(inst)
    assert first.chosen == second.chosen
    assert first.nodes_explored == second.nodes_explored


def test_budget_falls_back_to_feasible_incumbent():
    n, bitsets = _random_instance(23, max_elems=12, max_sets=20)
    inst = CoverInstance.build(range(n), list(enumerate(bitsets)))
    sol = solve_min_cover(inst, node_budget=1)
    acc = 0
    for cid in sol.chosen:
        acc |= bitsets[cid]
    assert acc == inst.full
    assert len(sol.chosen) <= oracles.greedy_cover_size(n, bitsets)
    exact = solve_min_cover(inst)
    assert exact.optimal
    assert len(sol.chosen) >= len(exact.chosen)


def test_arbitrary_candidate_ids():
    inst = CoverInstance.build(["e1", "e2"], [("left", 0b01), ("right", 0b10), ("both", 0b11)])
    sol = solve_min_cover(inst)
    assert sol.chosen == ["both"]
