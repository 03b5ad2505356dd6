from __future__ import annotations

import pytest
from hypothesis import given

from noness import (
    Network,
    NetworkError,
    NotTreeChildError,
    caterpillar_ladder,
    delete_arc_tree_child,
    full_simplification,
    has_directed_path,
    is_isomorphic,
    is_level_one,
    is_normal,
    is_shortcut,
    is_tree_child,
    validate,
)
from noness.network import cycle_blocks, has_tree_path, tree_path_leaf, tree_path_to_leaf

from conftest import net, tree_child_networks


def test_single_vertex_is_valid():
    assert validate([], {0: "a"}, vertices=[0]).ok
    n = Network([], {0: "a"}, vertices=[0])
    assert n.is_single_vertex() and n.leaf_set == {"a"}


def test_two_leaf_tree_is_valid():
    assert validate([(0, 1), (0, 2)], {1: "a", 2: "b"}).ok


def test_in2_out2_vertex_is_one_violation():
    arcs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 5), (3, 6), (3, 7)]
    labels = {4: "c", 5: "d", 6: "a", 7: "b"}
    report = validate(arcs, labels)
    assert not report.ok
    assert [v.rule for v in report.violations] == ["degree"]
    assert report.violations[0].where == 3


@pytest.mark.parametrize(
    "arcs, labels, rule",
    [
        ([], {}, "empty"),
        ([(0, 1), (1, 0)], {}, "cycle"),
        ([(0, 1), (0, 1)], {1: "a"}, "parallel-arc"),
        ([(0, 1), (0, 2)], {1: "a"}, "leaf-label"),
        ([(0, 1), (0, 2)], {1: "a", 2: "a"}, "duplicate-label"),
        ([(0, 1), (0, 2), (3, 4), (3, 5)], {1: "a", 2: "b", 4: "c", 5: "d"}, "root"),
        ([(0, 1), (1, 2), (1, 3)], {2: "a", 3: "b"}, "root-degree"),
    ],
)
def test_violation_rules(arcs, labels, rule):
    report = validate(arcs, labels)
    assert rule in {v.rule for v in report.violations}


def test_constructor_rejects_invalid():
    with pytest.raises(NetworkError) as info:
        Network([(0, 1), (1, 0)], {})
    assert not info.value.report.ok


def test_vertex_kinds():
    n = net("((a,(b)#H1),(#H1,c));")
    kinds = {n.kind(v).value for v in n.vertices}
    assert kinds == {"root", "tree", "reticulation", "leaf"}
    (r,) = n.reticulations
    assert n.label(n.children(r)[0]) == "b"


def test_tree_is_tree_child_normal_level_one():
    t = net("((a,b),(c,d));")
    assert is_tree_child(t) and is_normal(t) and is_level_one(t)


def test_vertex_with_two_reticulation_children_is_not_tree_child():
    n = net("((#H1,#H2),((a)#H1,((b)#H2,c)));")
    assert not is_tree_child(n)


def test_small_ladder_classes():
    n, ids = caterpillar_ladder(["l0", "l1"])
    assert is_tree_child(n)
    assert not is_normal(n)
    assert is_shortcut(n, (ids["q1"], ids["v1"]))
    assert not is_shortcut(n, (ids["p1"], ids["v1"]))


def test_incomparable_parents_are_normal():
    n = net("((a,(b)#H1),(#H1,c));")
    assert is_normal(n)
    assert not any(is_shortcut(n, a) for a in n.reticulation_arcs)


def test_two_rung_ladder_is_not_level_one():
    n, _ = caterpillar_ladder(["l0", "l1", "l2"])
    assert is_tree_child(n)
    assert not is_level_one(n)
    assert len(cycle_blocks(n)) == 1


def test_single_reticulation_is_level_one():
    assert is_level_one(net("((a,(b)#H1),(#H1,c));"))


def test_tree_paths():
    n, ids = caterpillar_ladder(["l0", "l1"])
    leaf = n.leaf("l0")
    assert tree_path_to_leaf(n, leaf) == [leaf]
    assert tree_path_leaf(n, ids["p1"]) == "l0"
    assert has_tree_path(n, ids["q1"], leaf)
    assert not has_tree_path(n, ids["q1"], n.leaf("l1"))  # passes through v1
    t = net("((a,b),(c,d));")
    assert tree_path_leaf(t, t.root) == "a"


def test_directed_paths():
    n = net("((a,(b)#H1),(#H1,c));")
    v = n.leaf("b")
    assert has_directed_path(n, v, v)
    assert all(has_directed_path(n, n.root, x) for x in n.vertices)
    assert not has_directed_path(n, v, n.root)


def test_delete_first_rung_of_small_ladder():
    n, ids = caterpillar_ladder(["l0", "l1"])
    out = delete_arc_tree_child(n, (ids["p1"], ids["v1"]))
    assert out.is_tree and out.leaf_set == {"l0", "l1"} and out.num_vertices == 3


def test_delete_from_root_parent():
    n = net("((a)#H1,(#H1,b));")
    root_arc = next(a for a in n.reticulation_arcs if a[0] == n.root)
    out = delete_arc_tree_child(n, root_arc)
    assert is_isomorphic(out, net("(a,b);"))


def test_tree_arc_deletion_is_rejected():
    n = net("((a,(b)#H1),(#H1,c));")
    with pytest.raises(NetworkError):
        delete_arc_tree_child(n, (n.root, n.children(n.root)[0]))


def test_tree_child_deletion_requires_tree_child():
    n = net("((#H1,#H2),((a)#H1,((b)#H2,c)));")
    with pytest.raises(NotTreeChildError):
        delete_arc_tree_child(n, n.reticulation_arcs[0])


@given(tree_child_networks(max_reticulations=5))
def test_deletion_keeps_tree_child_and_matches_full_simplification(n):
    for arc in n.reticulation_arcs:
        out = delete_arc_tree_child(n, arc)
        assert is_tree_child(out)
        assert out.leaf_set == n.leaf_set
        assert len(out.reticulations) == len(n.reticulations) - 1
        assert is_isomorphic(out, full_simplification(n, arc))


def test_full_simplification_collapses_parallel_arcs():
    # m has two reticulation children; deleting (m, z) leaves t with two arcs into r
    arcs = [(0, 1), (0, 2), (1, 3), (1, 4), (3, 4), (3, 5), (2, 5), (2, 6), (4, 7), (5, 8)]
    labels = {6: "B", 7: "A", 8: "C"}
    n = Network(arcs, labels)
    assert not is_tree_child(n)
    out = full_simplification(n, (3, 5))
    assert out.is_tree and out.num_vertices == 5
    assert is_isomorphic(out, net("(A,(B,C));"))


def test_full_simplification_strips_unary_root():
    n = net("((a)#H1,(#H1,b));")
    out = full_simplification(n, next(a for a in n.reticulation_arcs if a[0] == n.root))
    assert is_isomorphic(out, net("(a,b);"))


def test_surgery_preserves_vertex_ids():
    n, ids = caterpillar_ladder(["l0", "l1", "l2"])
    out = delete_arc_tree_child(n, (ids["p1"], ids["v1"]))
    assert ids["v2"] in out and ids["q2"] in out
    assert out.leaf("l2") == n.leaf("l2")
    assert out.compact().num_vertices == out.num_vertices
