"""Unit propagation over partial feature assignments.

The working state is a list with one slot per feature: True (selected),
False (deselected) or None (undecided).  ``propagate`` closes a state under
the consequences of all tree relations and cross-tree constraints and
reports contradictions; ``complete`` extends a state to a full valid
assignment by preference-guided backtracking.
"""

from __future__ import annotations

from .model import CtcKind, FeatureModel, RelationKind


class Rules:
    """Index-based view of a model's constraints, built once per model."""

    def __init__(self, fm: FeatureModel):
        ix = fm.index
        self.n = len(fm.features)
        self.root = ix[fm.root]
        self.mandatory = []
        self.optional = []
        self.xor_groups = []
        self.or_groups = []
        for rel in fm.relations:
            children = [ix[c] for c in rel.children]
            if rel.kind is RelationKind.MANDATORY:
                self.mandatory.append((ix[rel.parent], children[0]))
            elif rel.kind is RelationKind.OPTIONAL:
                self.optional.append((ix[rel.parent], children[0]))
            elif rel.kind is RelationKind.XOR:
                self.xor_groups.append((ix[rel.parent], children))
            else:
                self.or_groups.append((ix[rel.parent], children))
        self.requires = [
            (ix[c.a], ix[c.b]) for c in fm.ctcs if c.kind is CtcKind.REQUIRES
        ]
        self.excludes = [
            (ix[c.a], ix[c.b]) for c in fm.ctcs if c.kind is CtcKind.EXCLUDES
        ]

    def initial_state(self) -> list:
        state = [None] * self.n
        state[self.root] = True
        return state

    def first_undecided(self, state) -> int | None:
        for i, v in enumerate(state):
            if v is None:
                return i
        return None

    def mask(self, state) -> int:
        m = 0
        for i, v in enumerate(state):
            if v:
                m |= 1 << i
        return m

    def propagate(self, state, trail=None) -> bool:
        """Close ``state`` under unit consequences; False on contradiction.

        When ``trail`` is given, indices of newly decided features are
        appended to it (explicitly assigned features are the caller's
        responsibility)."""
        while True:
            changed = False

            def assign(i, value):
                nonlocal changed
                if state[i] is None:
                    state[i] = value
                    changed = True
                    if trail is not None:
                        trail.append(i)
                    return True
                return state[i] is value

            for p, c in self.mandatory:
                # child <=> parent
                if state[p] is not None and not assign(c, state[p]):
                    return False
                if state[c] is not None and not assign(p, state[c]):
                    return False
            for p, c in self.optional:
                if state[c] is True and not assign(p, True):
                    return False
                if state[p] is False and not assign(c, False):
                    return False
            for p, children in self.xor_groups:
                chosen = [c for c in children if state[c] is True]
                if len(chosen) > 1:
                    return False
                if chosen:
                    if not assign(p, True):
                        return False
                    for c in children:
                        if c != chosen[0] and not assign(c, False):
                            return False
                if state[p] is False:
                    for c in children:
                        if not assign(c, False):
                            return False
                elif state[p] is True and not chosen:
                    undecided = [c for c in children if state[c] is None]
                    if not undecided:
                        return False
                    if len(undecided) == 1 and not assign(undecided[0], True):
                        return False
            for p, children in self.or_groups:
                if any(state[c] is True for c in children):
                    if not assign(p, True):
                        return False
                if state[p] is False:
                    for c in children:
                        if not assign(c, False):
                            return False
                elif state[p] is True and not any(state[c] is True for c in children):
                    undecided = [c for c in children if state[c] is None]
                    if not undecided:
                        return False
                    if len(undecided) == 1 and not assign(undecided[0], True):
                        return False
            for a, b in self.requires:
                if state[a] is True and not assign(b, True):
                    return False
                if state[b] is False and not assign(a, False):
                    return False
            for a, b in self.excludes:
                if state[a] is True and not assign(b, False):
                    return False
                if state[b] is True and not assign(a, False):
                    return False
            if not changed:
                return True

    def complete(self, prefer, state=None) -> int | None:
        """Extend to a full valid assignment, trying ``prefer[i]`` first at
        each undecided feature (feature order).  Returns a selection mask or
        None when no completion exists."""
        if state is None:
            state = self.initial_state()
            if not self.propagate(state):
                return None

        def dfs(st):
            i = self.first_undecided(st)
            if i is None:
                return st
            for value in (prefer[i], not prefer[i]):
                child = list(st)
                child[i] = value
                if self.propagate(child):
                    found = dfs(child)
                    if found is not None:
                        return found
            return None

        found = dfs(state)
        return None if found is None else self.mask(found)


def rules_for(fm: FeatureModel) -> Rules:
    rules = getattr(fm, "_rules", None)
    if rules is None:
        rules = Rules(fm)
        fm._rules = rules
    return rules
