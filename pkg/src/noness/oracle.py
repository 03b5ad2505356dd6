"""Exhaustive ground truth for displayed trees and arc essentiality.

Everything here is exponential in the number of reticulations and refuses to
run above an enumeration cap (default 20, or the ``NONESS_CAP`` environment
variable).

Two enumerations are provided.  :func:`enumerate_embeddings` walks all ``2^k``
in-arc choice vectors in binary-counter order; :func:`resolve_embedding` turns
one into a tree with the usual cleanup rules.  :func:`weighted_embeddings`
instead branches only on reticulations that actually lie on a root-to-leaf
path of the partial embedding, yielding each distinct embedding once with the
number of choice vectors that produce it.  The display-set functions use the
latter; the test suite checks both agree.
"""

from __future__ import annotations

import os
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import CapExceededError, NetworkError
from .network import (
    Arc,
    Network,
    _Draft,
    _require_reticulation_arc,
    delete_arc_tree_child,
    full_simplification,
    is_tree_child,
)
from .newick import canonical_tree_string, parse_enewick, quote_label

DEFAULT_CAP = 20


def default_cap() -> int:
    value = os.environ.get("NONESS_CAP")
    return int(value) if value else DEFAULT_CAP


def check_cap(net: Network, cap: int | None = None) -> None:
    cap = default_cap() if cap is None else cap
    k = len(net.reticulations)
    if k > cap:
        raise CapExceededError(k, cap)


@dataclass(frozen=True)
class Embedding:
    """One in-arc choice per reticulation (reticulations in increasing id order)."""

    network: Network = field(repr=False)
    choice: tuple[int, ...]

    @cached_property
    def selected(self) -> dict[int, int]:
        return dict(zip(self.network.reticulations, self.choice))

    @cached_property
    def arcs(self) -> frozenset[Arc]:
        """Arcs on root-to-leaf paths once the unchosen reticulation arcs are gone.

        The set is rooted at the network's root, so a unary chain above the
        embedded tree's root belongs to it.
        """
        return _embedding_arcs(self.network, self.selected)


def _embedding_arcs(net: Network, selected: dict[int, int]) -> frozenset[Arc]:
    used: dict[int, set[int]] = {}
    reached = set()
    for leaf in net.labels:
        v = leaf
        while v not in reached and v != net.root:
            reached.add(v)
            ps = net.parents(v)
            p = ps[0] if len(ps) == 1 else selected[v]
            used.setdefault(p, set()).add(v)
            v = p
    return frozenset((u, v) for u, vs in used.items() for v in vs)


def enumerate_embeddings(net: Network, cap: int | None = None) -> Iterator[Embedding]:
    """All ``2^k`` choice vectors; bit ``j`` of the counter picks the parent of reticulation ``j``."""
    check_cap(net, cap)
    rets = net.reticulations
    for counter in range(1 << len(rets)):
        yield Embedding(net, tuple(net.parents(r)[(counter >> j) & 1] for j, r in enumerate(rets)))


def resolve_embedding(net: Network, emb: Embedding, rng: random.Random | None = None) -> Network:
    """Delete the unchosen reticulation arcs and clean up to a phylogenetic tree.

    Cleanup repeatedly suppresses in-1/out-1 vertices, deletes unlabeled
    in-1/out-0 vertices and deletes in-0/out-1 vertices.  With ``rng`` the
    rules are applied in a random order, which must not change the result.
    """
    d = _Draft(net)
    for r, p in emb.selected.items():
        for q in net.parents(r):
            if q != p:
                d.remove_arc(q, r)

    def applicable(v: int) -> str | None:
        indeg, outdeg = len(d.parents[v]), len(d.children[v])
        if indeg == 1 and outdeg == 1:
            return "suppress"
        if indeg == 1 and outdeg == 0 and v not in d.labels:
            return "delete"
        if indeg == 0 and outdeg == 1:
            return "delete"
        return None

    while True:
        todo = [(v, rule) for v in d.parents if (rule := applicable(v))]
        if not todo:
            break
        if rng is not None:
            v, rule = rng.choice(todo)
        else:
            v, rule = todo[0]
        if rule == "suppress":
            d.suppress(v)
        else:
            if not d.parents[v]:
                (c,) = d.children[v]
                d.root = c
            d.remove_vertex(v)
    roots = [v for v, ps in d.parents.items() if not ps]
    d.root = roots[0]
    return d.freeze()


def weighted_embeddings(net: Network) -> Iterator[tuple[dict[int, int], int]]:
    """Distinct embeddings as partial choice maps, each with its choice-vector multiplicity.

    Branching happens only at reticulations reached while walking up from the
    leaves, so a reticulation that no leaf path touches is never split.  A
    partial map fixing ``d`` of the ``k`` reticulations stands for ``2^(k-d)``
    full choice vectors.
    """
    k = len(net.reticulations)
    leaves = sorted(net.labels, key=lambda v: net.labels[v])
    stack: list[dict[int, int]] = [{}]
    while stack:
        decided = stack.pop()
        pending = _first_undecided(net, leaves, decided)
        if pending is None:
            yield decided, 1 << (k - len(decided))
            continue
        for p in reversed(net.parents(pending)):
            nxt = dict(decided)
            nxt[pending] = p
            stack.append(nxt)


def _first_undecided(net: Network, leaves: list[int], decided: dict[int, int]) -> int | None:
    reached = set()
    for leaf in leaves:
        v = leaf
        while v not in reached and v != net.root:
            reached.add(v)
            ps = net.parents(v)
            if len(ps) == 1:
                v = ps[0]
            elif v in decided:
                v = decided[v]
            else:
                return v
    return None


def _tree_string(net: Network, decided: dict[int, int]) -> str:
    """Canonical string of the tree an embedding displays, without building it."""
    kids: dict[int, list[int]] = {}
    reached = set()
    for leaf in net.labels:
        v = leaf
        while v not in reached and v != net.root:
            reached.add(v)
            ps = net.parents(v)
            p = ps[0] if len(ps) == 1 else decided[v]
            kids.setdefault(p, []).append(v)
            v = p
    text: dict[int, str] = {}
    for v in reversed(net.topological_order):
        if v in net.labels:
            text[v] = quote_label(net.labels[v])
        elif v in kids:
            parts = [text[c] for c in kids[v]]
            text[v] = parts[0] if len(parts) == 1 else "(" + ",".join(sorted(parts)) + ")"
    return text[net.root] + ";"


@dataclass(frozen=True)
class DisplayMultiset:
    """Displayed trees (canonical strings) with the number of choice vectors yielding each."""

    counts: dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def distinct(self) -> int:
        return len(self.counts)

    def trees(self) -> frozenset[str]:
        return frozenset(self.counts)


def display_multiset(net: Network, cap: int | None = None) -> DisplayMultiset:
    check_cap(net, cap)
    counts: Counter[str] = Counter()
    for decided, weight in weighted_embeddings(net):
        counts[_tree_string(net, decided)] += weight
    return DisplayMultiset(dict(sorted(counts.items())))


def display_set(net: Network, cap: int | None = None) -> frozenset[str]:
    check_cap(net, cap)
    return frozenset(_tree_string(net, decided) for decided, _ in weighted_embeddings(net))


def restrict_tree(tree: Network, keep: Iterable[str]) -> Network:
    """The tree on ``keep`` spanned by those leaves, unary vertices suppressed."""
    if tree.reticulations:
        raise NetworkError("restrict_tree needs a tree")
    keep = set(keep)
    if not keep:
        raise NetworkError("cannot restrict to an empty leaf set")
    missing = keep - tree.leaf_set
    if missing:
        raise NetworkError(f"labels {sorted(missing)} are not leaves of the tree")
    d = _Draft(tree)
    needed = set()
    for lab in keep:
        v = tree.leaf(lab)
        while v not in needed:
            needed.add(v)
            if not tree.parents(v):
                break
            v = tree.parents(v)[0]
    for v in tree.vertices:
        if v not in needed:
            d.remove_vertex(v)
    d.strip_root()
    for v in [v for v in d.parents if d.is_unary(v)]:
        d.suppress(v)
    return d.freeze()


def displays(net: Network, tree: Network, cap: int | None = None) -> bool:
    """Whether ``net`` displays ``tree``, a tree on a subset of the network's leaves."""
    if not tree.leaf_set <= net.leaf_set:
        raise NetworkError(f"tree leaves {sorted(tree.leaf_set - net.leaf_set)} are not in the network")
    target = canonical_tree_string(tree)
    for s in display_set(net, cap):
        if tree.leaf_set == net.leaf_set:
            if s == target:
                return True
        elif canonical_tree_string(restrict_tree(parse_enewick(s), tree.leaf_set)) == target:
            return True
    return False


def delete_arc(net: Network, arc: Arc) -> Network:
    """``N \\ {e}``: the tree-child deletion when it applies, full simplification otherwise."""
    if is_tree_child(net):
        return delete_arc_tree_child(net, arc)
    return full_simplification(net, arc)


def is_essential_bruteforce(net: Network, arc: Arc, cap: int | None = None) -> bool:
    """Whether some tree displayed by ``net`` is not displayed by ``net`` minus ``arc``."""
    _require_reticulation_arc(net, arc)
    check_cap(net, cap)
    return bool(display_set(net, cap) - display_set(delete_arc(net, arc), cap))


def is_essential_by_embeddings(net: Network, arc: Arc, cap: int | None = None) -> bool:
    """Essentiality straight from the definition, for any arc.

    ``arc`` is essential when some displayed tree has no embedding avoiding it.
    """
    if not net.has_arc(*arc):
        raise NetworkError(f"{arc} is not an arc of the network")
    check_cap(net, cap)
    avoidable: dict[str, bool] = {}
    for decided, _ in weighted_embeddings(net):
        s = _tree_string(net, decided)
        uses = arc in _embedding_arcs(net, decided)
        avoidable[s] = avoidable.get(s, False) or not uses
    return not all(avoidable.values())


def nonessential_bruteforce(net: Network, cap: int | None = None) -> set[Arc]:
    """All reticulation arcs that brute force finds non-essential."""
    check_cap(net, cap)
    base = display_set(net, cap)
    return {a for a in net.reticulation_arcs if not (base - display_set(delete_arc(net, a), cap))}


def display_sets_equal(n1: Network, n2: Network, cap: int | None = None) -> bool:
    if n1.leaf_set != n2.leaf_set:
        raise NetworkError("networks have different leaf sets")
    return display_set(n1, cap) == display_set(n2, cap)
