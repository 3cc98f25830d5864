import pytest

import oracles
from modelgen import random_model
from splcover.errors import ModelFormatError, TooManyProducts
from splcover.model import (
    CtcKind,
    RelationKind,
    enumerate_valid_products,
    is_valid_product,
    parse_model,
    serialize,
)

GPL_VALID = frozenset(
    {"GPL", "Driver", "Benchmark", "GraphType", "Directed", "Algorithms", "Num",
     "Search", "DFS"}
)


def test_parse_gpl_structure(gpl):
    assert gpl.name == "GPL"
    assert gpl.root == "GPL"
    assert gpl.n == 18
    kinds = [rel.kind for rel in gpl.relations]
    assert kinds.count(RelationKind.MANDATORY) == 4
    assert kinds.count(RelationKind.OPTIONAL) == 2
    assert kinds.count(RelationKind.XOR) == 2
    assert kinds.count(RelationKind.OR) == 1
    or_rel = next(r for r in gpl.relations if r.kind is RelationKind.OR)
    assert or_rel.parent == "Algorithms"
    assert set(or_rel.children) == {"Num", "CC", "SCC", "Cycle", "Shortest", "Prim", "Kruskal"}
    assert len(gpl.ctcs) == 1
    assert gpl.ctcs[0].kind is CtcKind.REQUIRES
    assert (gpl.ctcs[0].a, gpl.ctcs[0].b) == ("Num", "Search")


def test_gpl_validity_examples(gpl):
    assert is_valid_product(gpl, GPL_VALID)
    # Num requires Search
    assert not is_valid_product(gpl, GPL_VALID - {"Search", "DFS"})
    # xor group admits exactly one child
    assert not is_valid_product(gpl, GPL_VALID | {"BFS"})
    assert not is_valid_product(gpl, frozenset())
    # mandatory child missing
    assert not is_valid_product(gpl, GPL_VALID - {"Driver"})


def test_gpl_product_count_matches_brute_force(gpl):
    products = enumerate_valid_products(gpl, 100_000)
    assert len(products) == 1268
    assert products == oracles.brute_products(gpl)


def test_enumerate_small_model(bc_model):
    A, B, C = "A", "B", "C"
    products = enumerate_valid_products(bc_model, 10)
    assert products == [frozenset({A}), frozenset({A, C}), frozenset({A, B})]


def test_enumerate_respects_cap(bc_model):
    with pytest.raises(TooManyProducts) as exc:
        enumerate_valid_products(bc_model, 2)
    assert exc.value.at_least == 3


def test_single_feature_model(single_model):
    assert enumerate_valid_products(single_model, 10) == [frozenset({"A"})]


def test_enumeration_is_lexicographic(gpl):
    products = enumerate_valid_products(gpl, 100_000)
    keys = [gpl.lexkey(p) for p in products]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_serialize_roundtrip(gpl):
    models = [gpl] + [random_model(seed, 10) for seed in range(8)]
    for fm in models:
        fm2 = parse_model(serialize(fm))
        assert fm2.name == fm.name
        assert fm2.features == fm.features
        assert fm2.root == fm.root
        assert fm2.relations == fm.relations
        assert fm2.ctcs == fm.ctcs


def test_enumeration_matches_brute_force_on_random_models():
    for seed in range(6):
        fm = random_model(seed, 9)
        assert enumerate_valid_products(fm, 1 << fm.n) == oracles.brute_products(fm)


@pytest.mark.parametrize(
    "text,fragment,line",
    [
        ("", "missing root", None),
        ("root A\nroot B\n", "duplicate root", 2),
        ("optional A B\n", "unknown feature 'A'", 1),
        ("root A\noptional A B\noptional A B\n", "multiple parents for B", 3),
        ("root A\noptional A B\nmandatory A B\n", "multiple parents for B", 3),
        ("root A\nmandatory A B C\n", "takes parent and child", 2),
        ("root A\nxor A B\n", ">= 2 children", 2),
        ("root A\nxor A B B\n", "repeated child", 2),
        ("root A\nfrob A B\n", "unknown directive", 2),
        ("root A\nrequires A A\n", "endpoints must differ", 2),
        ("root A\nexcludes A C\n", "unknown feature 'C'", 2),
        ("root A\noptional A B\nmodel X\n", "must come first", 3),
        ("root A-\n", "bad feature name", 1),
        ("model X Y\nroot A\n", "model takes one name", 1),
    ],
)
def test_parse_errors(text, fragment, line):
    with pytest.raises(ModelFormatError) as exc:
        parse_model(text)
    assert fragment in str(exc.value)
    if line is not None:
        assert exc.value.line == line
        assert f"line {line}:" in str(exc.value)


def test_comments_and_blank_lines_ignored():
    fm = parse_model("# heading\n\nroot A  # trailing\noptional A B\n")
    assert fm.features == ("A", "B")
