"""Exact minimum-cardinality set cover by branch-and-bound.

Candidate sets are bitsets over a universe of element indices.  The instance
is first reduced (duplicate and dominated elements dropped, dominated
candidates dropped, single-coverer candidates forced), then searched from a
greedy incumbent.  Branching picks the uncovered element with the fewest
covering candidates and tries candidates covering most uncovered elements
first; pruning uses an admissible disjoint-elements bound.  Everything is
deterministic for a given instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InfeasibleInstanceError


@dataclass(frozen=True)
class CoverInstance:
    universe: tuple  # element ids; element k maps to bit k
    sets: tuple  # (candidate id, bitset over universe)

    @staticmethod
    def build(universe: Sequence, sets: Sequence) -> "CoverInstance":
        return CoverInstance(tuple(universe), tuple(tuple(s) for s in sets))

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1


@dataclass
class CoverSolution:
    chosen: list
    optimal: bool
    nodes_explored: int


def _bits_of(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _greedy_cover(bitsets, uncovered):
    chosen = []
    while uncovered:
        best, best_new = None, 0
        for idx, bits in enumerate(bitsets):
            new = (bits & uncovered).bit_count()
            if new > best_new:
                best, best_new = idx, new
        if best is None:
            return None
        chosen.append(best)
        uncovered &= ~bitsets[best]
    return chosen


def _reduce(n_elems, bitsets):
    """Returns (kept element indices, kept candidate indices, forced candidate
    indices). Optimal covers of the reduced instance plus the forced
    candidates are optimal covers of the original."""
    elems = list(range(n_elems))
    cands = list(range(len(bitsets)))
    forced = []
    while True:
        changed = False
        # element signatures: which kept candidates cover them
        sigs = {}
        for e in elems:
            sig = 0
            for pos, c in enumerate(cands):
                if bitsets[c] >> e & 1:
                    sig |= 1 << pos
            sigs[e] = sig
        # forced: element covered by exactly one candidate
        for e in list(elems):
            if e not in sigs or sigs[e].bit_count() != 1:
                continue
            c = cands[sigs[e].bit_length() - 1]
            forced.append(c)
            cands.remove(c)
            elems = [x for x in elems if not bitsets[c] >> x & 1]
            changed = True
            break
        if changed:
            continue
        # drop elements whose coverer set contains another's (covering the
        # smaller-signature element covers them too); ties keep the first
        keep = []
        by_size = sorted(elems, key=lambda e: (sigs[e].bit_count(), e))
        kept_sigs = []
        for e in by_size:
            if any(s & sigs[e] == s for s in kept_sigs):
                continue
            keep.append(e)
            kept_sigs.append(sigs[e])
        if len(keep) != len(elems):
            changed = True
        elems = sorted(keep)
        # drop candidates dominated on the remaining elements
        elem_mask = 0
        for e in elems:
            elem_mask |= 1 << e
        reduced_bits = [bitsets[c] & elem_mask for c in cands]
        keep_c = []
        order = sorted(
            range(len(cands)), key=lambda p: (-reduced_bits[p].bit_count(), p)
        )
        kept_bits = []
        for pos in order:
            bits = reduced_bits[pos]
            if bits and not any(bits & kb == bits for kb in kept_bits):
                keep_c.append(cands[pos])
                kept_bits.append(bits)
        if len(keep_c) != len(cands):
            changed = True
        cands = sorted(keep_c)
        if not changed:
            return elems, cands, forced


def solve_min_cover(inst: CoverInstance, node_budget: int = 1_000_000) -> CoverSolution:
    """Exact minimum cover of ``inst``; falls back to the best incumbent
    with ``optimal=False`` when the node budget runs out."""
    ids = [cid for cid, _ in inst.sets]
    bitsets = [bits for _, bits in inst.sets]
    full = inst.full
    union = 0
    for bits in bitsets:
        union |= bits
    if union != full:
        missing = [e for k, e in enumerate(inst.universe) if not union >> k & 1]
        raise InfeasibleInstanceError(f"elements not covered by any set: {missing[:10]}")
    if full == 0:
        return CoverSolution([], True, 0)

    greedy_full = _greedy_cover(bitsets, full)

    elems, cands, forced = _reduce(len(inst.universe), bitsets)
    # re-index the reduced instance
    elem_pos = {e: k for k, e in enumerate(elems)}
    sub_bits = []
    for c in cands:
        bits = 0
        for e in elems:
            if bitsets[c] >> e & 1:
                bits |= 1 << elem_pos[e]
        sub_bits.append(bits)
    sub_full = (1 << len(elems)) - 1
    # per-element coverer signature: bitmask over candidate positions
    sigs = []
    for k in range(len(elems)):
        sig = 0
        for s, bits in enumerate(sub_bits):
            if bits >> k & 1:
                sig |= 1 << s
        sigs.append(sig)

    incumbent = _greedy_cover(sub_bits, sub_full)
    if incumbent is None:  # everything forced
        incumbent = []
    nodes = 0
    budget_hit = False

    def dfs(uncovered, chosen, banned):
        nonlocal incumbent, nodes, budget_hit
        nodes += 1
        if nodes > node_budget:
            budget_hit = True
            return
        if not uncovered:
            if len(chosen) < len(incumbent):
                incumbent = list(chosen)
            return
        # coverer signatures of uncovered elements, rarest first
        entries = []
        rest = uncovered
        while rest:
            k = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            sig = sigs[k] & ~banned
            count = sig.bit_count()
            if count == 0:
                return  # element no longer coverable on this path
            entries.append((count, sig))
        entries.sort()
        # disjoint-elements bound: any cover spends one candidate per
        # element whose coverers are disjoint from previously counted ones
        disjoint, used = 0, 0
        for _, sig in entries:
            if not sig & used:
                disjoint += 1
                used |= sig
        if len(chosen) + disjoint >= len(incumbent):
            return
        # uncovered-dominance filter on the branch candidates
        branch_sig = entries[0][1]
        effective = sorted(
            ((sub_bits[s] & uncovered, s) for s in _bits_of(branch_sig)),
            key=lambda item: (-item[0].bit_count(), item[1]),
        )
        kept = []
        for bits, s in effective:
            if not any(bits | other == other for other, _ in kept):
                kept.append((bits, s))
        newly_banned = 0
        for bits, s in kept:
            if budget_hit:
                return
            chosen.append(s)
            dfs(uncovered & ~bits, chosen, banned | newly_banned)
            chosen.pop()
            newly_banned |= 1 << s  # siblings must cover the element differently

    dfs(sub_full, [], 0)

    solution = forced + [cands[s] for s in incumbent]
    if budget_hit and greedy_full is not None and len(greedy_full) < len(solution):
        solution = greedy_full
    return CoverSolution([ids[i] for i in solution], not budget_hit, nodes)
