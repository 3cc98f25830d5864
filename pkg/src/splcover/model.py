"""Feature models: parsing, serialization, and product validity.

A feature model is a tree of features connected by mandatory/optional edges
and xor/or groups, plus requires/excludes cross-tree constraints.  A product
is a total selection over the feature list; validity is decided against all
tree relations and cross-tree constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .errors import ModelFormatError, TooManyProducts


class RelationKind(Enum):
    MANDATORY = "mandatory"
    OPTIONAL = "optional"
    XOR = "xor"
    OR = "or"


class CtcKind(Enum):
    REQUIRES = "requires"
    EXCLUDES = "excludes"


@dataclass(frozen=True)
class Relation:
    kind: RelationKind
    parent: str
    children: tuple[str, ...]


@dataclass(frozen=True)
class CrossTreeConstraint:
    kind: CtcKind
    a: str
    b: str


Product = frozenset  # selected feature names; deselected is the complement


@dataclass(eq=False)
class FeatureModel:
    """Immutable after construction; safe to share across workers."""

    name: str
    features: tuple[str, ...]
    root: str
    relations: tuple[Relation, ...]
    ctcs: tuple[CrossTreeConstraint, ...]
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {f: i for i, f in enumerate(self.features)}
        _check_invariants(self)

    @property
    def n(self) -> int:
        return len(self.features)

    def mask_of(self, selected: Iterable[str]) -> int:
        mask = 0
        for f in selected:
            mask |= 1 << self.index[f]
        return mask

    def selected_of(self, mask: int) -> Product:
        return frozenset(f for i, f in enumerate(self.features) if mask >> i & 1)

    def lexkey(self, product: Iterable[str]) -> tuple:
        """Order products by their selection vector in feature order
        (deselected before selected at the earliest differing feature)."""
        sel = set(product)
        return tuple(f in sel for f in self.features)


def _check_invariants(fm: FeatureModel) -> None:
    if len(set(fm.features)) != len(fm.features):
        raise ModelFormatError("duplicate feature identifiers")
    if any(not f for f in fm.features):
        raise ModelFormatError("empty feature identifier")
    if fm.root not in fm.index:
        raise ModelFormatError("root is not a declared feature")
    parent_of = {}
    for rel in fm.relations:
        if rel.parent not in fm.index:
            raise ModelFormatError(f"unknown feature {rel.parent!r}")
        if not rel.children:
            raise ModelFormatError("relation with no children")
        if rel.kind in (RelationKind.MANDATORY, RelationKind.OPTIONAL):
            if len(rel.children) != 1:
                raise ModelFormatError(f"{rel.kind.value} relation must have one child")
        elif len(rel.children) < 2:
            raise ModelFormatError(f"{rel.kind.value} group needs at least 2 children")
        for c in rel.children:
            if c not in fm.index:
                raise ModelFormatError(f"unknown feature {c!r}")
            if c == fm.root or c in parent_of:
                raise ModelFormatError(f"multiple parents for {c}")
            parent_of[c] = rel.parent
    for f in fm.features:
        if f != fm.root and f not in parent_of:
            raise ModelFormatError(f"feature {f} is not attached to the tree")
    # parent chains must reach the root (no cycles)
    for f in fm.features:
        seen = set()
        while f != fm.root:
            if f in seen:
                raise ModelFormatError(f"relation cycle through {f}")
            seen.add(f)
            f = parent_of[f]
    for ctc in fm.ctcs:
        for endpoint in (ctc.a, ctc.b):
            if endpoint not in fm.index:
                raise ModelFormatError(f"unknown feature {endpoint!r} in constraint")
        if ctc.a == ctc.b:
            raise ModelFormatError(f"constraint endpoints must differ: {ctc.a}")


def parse_model(text: str) -> FeatureModel:
    """Parse the line-based .fm format.

    One directive per line, ``#`` starts a comment, tokens are whitespace
    separated: ``model``, ``root``, ``mandatory``, ``optional``, ``xor``,
    ``or``, ``requires``, ``excludes``.
    """
    name = "unnamed"
    features: list[str] = []
    known: set[str] = set()
    root = None
    relations: list[Relation] = []
    ctcs: list[CrossTreeConstraint] = []
    has_child = set()
    saw_directive = False

    def declare(feat, lineno):
        if not _is_name(feat):
            raise ModelFormatError(f"bad feature name {feat!r}", lineno)
        if feat not in known:
            known.add(feat)
            features.append(feat)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]
        if directive == "model":
            if saw_directive:
                raise ModelFormatError("model directive must come first", lineno)
            if len(args) != 1:
                raise ModelFormatError("model takes one name", lineno)
            name = args[0]
            saw_directive = True
            continue
        saw_directive = True
        if directive == "root":
            if root is not None:
                raise ModelFormatError("duplicate root directive", lineno)
            if len(args) != 1:
                raise ModelFormatError("root takes one feature", lineno)
            declare(args[0], lineno)
            root = args[0]
        elif directive in ("mandatory", "optional"):
            if len(args) != 2:
                raise ModelFormatError(f"{directive} takes parent and child", lineno)
            parent, child = args
            if parent not in known:
                raise ModelFormatError(f"unknown feature {parent!r}", lineno)
            if child == root or child in has_child:
                raise ModelFormatError(f"multiple parents for {child}", lineno)
            declare(child, lineno)
            has_child.add(child)
            kind = RelationKind.MANDATORY if directive == "mandatory" else RelationKind.OPTIONAL
            relations.append(Relation(kind, parent, (child,)))
        elif directive in ("xor", "or"):
            if len(args) < 3:
                raise ModelFormatError(f"{directive} takes a parent and >= 2 children", lineno)
            parent, children = args[0], args[1:]
            if parent not in known:
                raise ModelFormatError(f"unknown feature {parent!r}", lineno)
            if len(set(children)) != len(children):
                raise ModelFormatError("repeated child in group", lineno)
            for child in children:
                if child == root or child in has_child:
                    raise ModelFormatError(f"multiple parents for {child}", lineno)
                declare(child, lineno)
                has_child.add(child)
            kind = RelationKind.XOR if directive == "xor" else RelationKind.OR
            relations.append(Relation(kind, parent, tuple(children)))
        elif directive in ("requires", "excludes"):
            if len(args) != 2:
                raise ModelFormatError(f"{directive} takes two features", lineno)
            a, b = args
            for endpoint in (a, b):
                if endpoint not in known:
                    raise ModelFormatError(f"unknown feature {endpoint!r}", lineno)
            if a == b:
                raise ModelFormatError("constraint endpoints must differ", lineno)
            kind = CtcKind.REQUIRES if directive == "requires" else CtcKind.EXCLUDES
            ctcs.append(CrossTreeConstraint(kind, a, b))
        else:
            raise ModelFormatError(f"unknown directive {directive!r}", lineno)

    if root is None:
        raise ModelFormatError("missing root directive")
    return FeatureModel(name, tuple(features), root, tuple(relations), tuple(ctcs))


def _is_name(token: str) -> bool:
    return bool(token) and all(c.isalnum() or c == "_" for c in token) and token.isascii()


def serialize(fm: FeatureModel) -> str:
    """Canonical .fm text; parse_model(serialize(fm)) reproduces fm."""
    lines = [f"model {fm.name}", f"root {fm.root}"]
    for rel in fm.relations:
        lines.append(" ".join([rel.kind.value, rel.parent, *rel.children]))
    for ctc in fm.ctcs:
        lines.append(f"{ctc.kind.value} {ctc.a} {ctc.b}")
    return "\n".join(lines) + "\n"


def is_valid_product(fm: FeatureModel, selected: Iterable[str]) -> bool:
    """Total validity check of a product against every model rule."""
    sel = set(selected)
    if fm.root not in sel:
        return False
    for rel in fm.relations:
        parent_in = rel.parent in sel
        if rel.kind is RelationKind.MANDATORY:
            if (rel.children[0] in sel) != parent_in:
                return False
        elif rel.kind is RelationKind.OPTIONAL:
            if rel.children[0] in sel and not parent_in:
                return False
        else:
            count = sum(1 for c in rel.children if c in sel)
            if parent_in:
                if rel.kind is RelationKind.XOR and count != 1:
                    return False
                if rel.kind is RelationKind.OR and count == 0:
                    return False
            elif count != 0:
                return False
    for ctc in fm.ctcs:
        if ctc.kind is CtcKind.REQUIRES:
            if ctc.a in sel and ctc.b not in sel:
                return False
        else:
            if ctc.a in sel and ctc.b in sel:
                return False
    return True


def enumerate_valid_products(fm: FeatureModel, cap: int) -> list[Product]:
    """All valid products in lexicographic order of the selection vector.

    Raises TooManyProducts once more than ``cap`` products are found; the
    exception carries the lower bound reached.
    """
    from .propagate import rules_for

    rules = rules_for(fm)
    out: list[int] = []

    def dfs(state):
        i = rules.first_undecided(state)
        if i is None:
            if len(out) >= cap:
                raise TooManyProducts(cap + 1)
            out.append(rules.mask(state))
            return
        for value in (False, True):
            child = list(state)
            child[i] = value
            if rules.propagate(child):
                dfs(child)

    state = rules.initial_state()
    if rules.propagate(state):
        dfs(state)
    return [fm.selected_of(m) for m in out]
