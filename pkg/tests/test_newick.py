from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from noness import (
    NetworkError,
    NewickSyntaxError,
    Network,
    canonical_tree_string,
    is_isomorphic,
    parse_enewick,
    random_tree,
    read_networks,
    serialize_enewick,
    write_networks,
)

from conftest import tree_child_networks


def multiset_shape(t: Network, v: int | None = None):
    """Recursive multiset form; two trees are isomorphic iff these are equal."""
    v = t.root if v is None else v
    if not t.children(v):
        return t.label(v)
    return frozenset(Counter(multiset_shape(t, c) for c in t.children(v)).items())


def test_two_leaf_tree():
    t = parse_enewick("(a,b);")
    assert t.is_tree and t.leaf_set == {"a", "b"}
    assert serialize_enewick(t) == "(a,b);"


def test_one_reticulation():
    n = parse_enewick("((a,(b)#H1),(#H1,c));")
    (r,) = n.reticulations
    assert len(n.parents(r)) == 2
    assert [n.label(c) for c in n.children(r)] == ["b"]
    assert n.num_vertices == 7


def test_single_vertex():
    n = parse_enewick("a;")
    assert n.is_single_vertex()
    assert serialize_enewick(n) == "a;"


@pytest.mark.parametrize(
    "text, offset",
    [("((a,b);", 6), ("(a,b)", 5), ("(a,b);x", 6), ("(a b);", 3), ("", 0)],
)
def test_syntax_errors_report_offset(text, offset):
    with pytest.raises(NewickSyntaxError) as info:
        parse_enewick(text)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)


@pytest.mark.parametrize("text", ["(a,a);", "(a,);", "((a)#H1,(b)#H1);", "(a,#H1);"])
def test_semantic_errors(text):
    with pytest.raises(NetworkError):
        parse_enewick(text)


def test_named_reticulation_leaf_and_branch_lengths():
    n = parse_enewick("((a:1.5,b#H1:0.2):1,(#H1,c):2e-3);")
    m = parse_enewick("((a,(b)#H1),(#H1,c));")
    assert is_isomorphic(n, m)


def test_quoted_labels_round_trip():
    t = parse_enewick("('a b','it''s');")
    assert t.leaf_set == {"a b", "it's"}
    assert parse_enewick(serialize_enewick(t)).leaf_set == t.leaf_set


def test_serialization_is_deterministic_under_relabelled_input_order():
    a = parse_enewick("((c,(b)#H1),(#H1,a));")
    b = parse_enewick("((a,#H7),((b)#H7,c));")
    assert serialize_enewick(a) == serialize_enewick(b)


@given(tree_child_networks(max_leaves=9, max_reticulations=6))
def test_round_trip_is_isomorphic(n):
    text = serialize_enewick(n)
    back = parse_enewick(text)
    assert is_isomorphic(back, n)
    assert serialize_enewick(back) == text


def test_file_round_trip(tmp_path):
    rng = random.Random(5)
    nets = [random_tree(n, rng) for n in (1, 2, 5)]
    path = tmp_path / "nets.nwk"
    write_networks(path, nets)
    assert all(is_isomorphic(a, b) for a, b in zip(nets, read_networks(path)))


def test_caterpillar_cherry_order_is_irrelevant():
    a = parse_enewick("(((1,2),3),4);")
    b = parse_enewick("(((2,1),3),4);")
    assert canonical_tree_string(a) == canonical_tree_string(b)


def test_same_shape_different_labels_differ():
    assert canonical_tree_string(parse_enewick("((a,b),c);")) != canonical_tree_string(parse_enewick("((a,c),b);"))


def test_canonical_string_rejects_networks():
    with pytest.raises(NetworkError):
        canonical_tree_string(parse_enewick("((a,(b)#H1),(#H1,c));"))


@given(st.integers(1, 7), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_canonical_string_agrees_with_multiset_oracle(n, s1, s2):
    a = random_tree(n, random.Random(s1), labels="abcdefg"[:n])
    b = random_tree(n, random.Random(s2), labels="abcdefg"[:n])
    same = canonical_tree_string(a) == canonical_tree_string(b)
    assert same == (multiset_shape(a) == multiset_shape(b))
    assert same == is_isomorphic(a, b)
