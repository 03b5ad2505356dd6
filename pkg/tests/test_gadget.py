from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from noness import (
    NetworkError,
    build_gadget,
    display_set,
    display_set_containment_bruteforce,
    is_essential_bruteforce,
    parse_enewick,
    random_network,
    validate,
    verify_reduction,
)
from noness.newick import canonical_tree_string

LEAVES = ["a", "b", "c"]


def small_pair(seed: int):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    labels = LEAVES[:n]
    k1, k2 = rng.randint(0, 1), rng.randint(0, 1)
    if n == 1:
        k1 = k2 = 0
    return (
        random_network(n, k1, rng, labels=labels, local_bias=0.0),
        random_network(n, k2, rng, labels=labels, local_bias=0.0),
    )


def test_single_leaf_gadget():
    one = parse_enewick("a;")
    g = build_gadget(one, one)
    assert validate(g.net.arcs, g.net.labels).ok
    assert g.net.leaf_set == {"a", g.x, g.y}
    assert len(g.net.reticulations) == 3  # p_x plus a 2-reticulation chain at u1
    u = g.named["u:a"]
    assert g.net.is_reticulation(u)
    assert sum(g.net.is_reticulation(p) for p in g.net.parents(u)) == 1
    assert verify_reduction(one, one)


def test_distinguished_arc_enters_a_reticulation():
    n1 = parse_enewick("((a,(b)#H1),(#H1,c));")
    g = build_gadget(n1, n1)
    assert g.net.is_reticulation(g.distinguished_arc[1])
    assert g.net.has_arc(*g.distinguished_arc)
    assert not {g.x, g.y} & n1.leaf_set


def test_fresh_labels_avoid_collisions():
    t = parse_enewick("(x,y);")
    g = build_gadget(t, t)
    assert g.x not in {"x", "y"} and g.y not in {"x", "y", g.x}
    assert len(g.net.leaf_set) == 4


@given(st.integers(0, 2**32 - 1))
def test_gadget_size_is_polynomial(seed):
    n1, n2 = small_pair(seed)
    g = build_gadget(n1, n2)
    n = len(n1.leaf_set)
    assert g.net.num_vertices <= 4 * (n1.num_vertices + (n + 1) * n2.num_vertices + n * n)
    assert validate(g.net.arcs, g.net.labels).ok


def test_leaf_set_mismatch():
    with pytest.raises(NetworkError):
        build_gadget(parse_enewick("(a,b);"), parse_enewick("(a,c);"))
    with pytest.raises(NetworkError):
        display_set_containment_bruteforce(parse_enewick("(a,b);"), parse_enewick("(a,c);"))


def test_containment_examples():
    n = parse_enewick("((a,(b)#H1),(#H1,c));")
    assert display_set_containment_bruteforce(n, n)
    (tree,) = [t for t in display_set(n) if t.startswith("((a,b)")]
    assert display_set_containment_bruteforce(parse_enewick(tree), n)
    two = parse_enewick("((((a)#H1,(b)#H2),#H1),(#H2,c));")
    assert len(two.reticulations) == 2
    other = parse_enewick("((a,c),b);")
    assert canonical_tree_string(other) not in display_set(two)
    assert not display_set_containment_bruteforce(two, other)


def test_two_leaf_trees():
    t = parse_enewick("(a,b);")
    g = build_gadget(t, t)
    assert not is_essential_bruteforce(g.net, g.distinguished_arc)
    assert verify_reduction(t, t)


def test_network_against_one_of_its_trees():
    n = parse_enewick("((a,(b)#H1),(#H1,c));")
    t = parse_enewick("((a,b),c);")
    assert not display_set_containment_bruteforce(n, t)
    g = build_gadget(n, t)
    assert is_essential_bruteforce(g.net, g.distinguished_arc)
    assert verify_reduction(n, t)


@pytest.mark.parametrize("order", ["forward", "reverse"])
@pytest.mark.parametrize("seed", range(12))
def test_reduction_holds_on_small_pairs(seed, order):
    n1, n2 = small_pair(seed)
    assert verify_reduction(n1, n2, order=order)


def test_unknown_order():
    t = parse_enewick("(a,b);")
    with pytest.raises(ValueError):
        build_gadget(t, t, order="sideways")
