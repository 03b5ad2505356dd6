"""Rooted binary phylogenetic networks.

A :class:`Network` is an immutable rooted DAG whose out-degree-zero vertices
carry distinct labels.  Vertex ids are integers; networks built from scratch
use dense ids, while arc-deletion surgery keeps the ids of surviving vertices
so that arcs and ladders can be traced between a network and its
simplification (call :meth:`Network.compact` for dense ids again).
"""

from __future__ import annotations

import enum
import hashlib
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

import networkx as nx

from .errors import NetworkError, NotTreeChildError

Arc = tuple[int, int]


class VertexKind(str, enum.Enum):
    ROOT = "root"
    TREE = "tree"
    RETICULATION = "reticulation"
    LEAF = "leaf"


@dataclass(frozen=True)
class VertexRecord:
    kind: VertexKind
    parents: tuple[int, ...]
    children: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    rule: str
    where: object
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"[{v.rule}] {v.where}: {v.message}" for v in self.violations)


def validate(arcs: Iterable[Arc], labels: Mapping[int, str], vertices: Iterable[int] = ()) -> ValidationReport:
    """Check a raw directed graph against the rooted binary phylogenetic network definition.

    ``labels`` maps leaf vertex ids to their labels. Every violated clause is
    reported; nothing is raised.
    """
    arcs = list(arcs)
    out: list[Violation] = []
    verts = set(vertices) | set(labels)
    seen: set[Arc] = set()
    parents: dict[int, list[int]] = {}
    children: dict[int, list[int]] = {}
    for u, v in arcs:
        verts.update((u, v))
        if u == v:
            out.append(Violation("cycle", (u, v), "self-loop"))
            continue
        if (u, v) in seen:
            out.append(Violation("parallel-arc", (u, v), "arc occurs more than once"))
            continue
        seen.add((u, v))
        children.setdefault(u, []).append(v)
        parents.setdefault(v, []).append(u)

    if not verts:
        return ValidationReport((Violation("empty", None, "graph has no vertices"),))

    if len(verts) == 1:
        (only,) = verts
        if only not in labels:
            out.append(Violation("leaf-label", only, "single-vertex network must be labeled"))
        return ValidationReport(tuple(out))

    roots = sorted(v for v in verts if not parents.get(v))
    if len(roots) != 1:
        out.append(Violation("root", tuple(roots), f"expected exactly one in-degree-0 vertex, found {len(roots)}"))

    label_owner: dict[str, int] = {}
    for v in sorted(verts):
        indeg = len(parents.get(v, ()))
        outdeg = len(children.get(v, ()))
        if v in labels:
            if labels[v] in label_owner:
                out.append(Violation("duplicate-label", v, f"label {labels[v]!r} also on vertex {label_owner[labels[v]]}"))
            else:
                label_owner[labels[v]] = v
            if outdeg != 0:
                out.append(Violation("leaf-label", v, "labeled vertex has children"))
        if indeg == 0:
            if outdeg != 2 and len(roots) == 1:
                out.append(Violation("root-degree", v, f"root has out-degree {outdeg}"))
            continue
        if outdeg == 0:
            if v not in labels:
                out.append(Violation("leaf-label", v, "unlabeled out-degree-0 vertex"))
            if indeg != 1:
                out.append(Violation("leaf-degree", v, f"leaf has in-degree {indeg}"))
            continue
        if (indeg, outdeg) not in ((1, 2), (2, 1)):
            out.append(Violation("degree", v, f"forbidden degree pair (in={indeg}, out={outdeg})"))

    # Kahn's algorithm; vertices left over lie on or below a cycle
    indeg = {v: len(parents.get(v, ())) for v in verts}
    queue = deque(v for v in verts if indeg[v] == 0)
    done = 0
    while queue:
        u = queue.popleft()
        done += 1
        for w in children.get(u, ()):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if done != len(verts):
        stuck = sorted(v for v in verts if indeg[v] > 0)
        out.append(Violation("cycle", tuple(stuck), "arc relation is not acyclic"))
    return ValidationReport(tuple(out))


class Network:
    """An immutable rooted binary phylogenetic network.

    >>> net = Network([(0, 1), (0, 2)], {1: "a", 2: "b"})
    >>> net.leaf_set == {"a", "b"}
    True
    """

    def __init__(self, arcs: Iterable[Arc], labels: Mapping[int, str], vertices: Iterable[int] = ()):
        arcs = list(arcs)
        report = validate(arcs, labels, vertices)
        if not report.ok:
            raise NetworkError(f"not a phylogenetic network: {report}", report)
        parents: dict[int, list[int]] = {v: [] for v in set(vertices) | set(labels)}
        children: dict[int, list[int]] = {v: [] for v in parents}
        for u, v in arcs:
            parents.setdefault(u, [])
            children.setdefault(v, [])
            children.setdefault(u, []).append(v)
            parents.setdefault(v, []).append(u)
        self._init(parents, children, labels)

    @classmethod
    def _trusted(cls, parents, children, labels) -> "Network":
        """Build without validation; callers guarantee the invariants."""
        net = cls.__new__(cls)
        net._init(parents, children, labels)
        return net

    def _init(self, parents, children, labels) -> None:
        self._parents = {v: tuple(sorted(ps)) for v, ps in parents.items()}
        self._children = {v: tuple(sorted(cs)) for v, cs in children.items()}
        self._labels = MappingProxyType(dict(labels))
        self._leaf_by_label = {lab: v for v, lab in labels.items()}
        roots = [v for v, ps in self._parents.items() if not ps]
        self._root = roots[0]

    # -- basic accessors ---------------------------------------------------

    @property
    def root(self) -> int:
        return self._root

    @property
    def labels(self) -> Mapping[int, str]:
        return self._labels

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._parents))

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(sorted((u, v) for u, cs in self._children.items() for v in cs))

    @cached_property
    def leaf_set(self) -> frozenset[str]:
        return frozenset(self._labels.values())

    def leaf(self, label: str) -> int:
        return self._leaf_by_label[label]

    def label(self, v: int) -> str | None:
        return self._labels.get(v)

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def __contains__(self, v: object) -> bool:
        return v in self._parents

    def has_arc(self, u: int, v: int) -> bool:
        return u in self._children and v in self._children[u]

    def kind(self, v: int) -> VertexKind:
        if not self._children[v]:
            return VertexKind.LEAF
        if not self._parents[v]:
            return VertexKind.ROOT
        if len(self._parents[v]) == 2:
            return VertexKind.RETICULATION
        return VertexKind.TREE

    def vertex(self, v: int) -> VertexRecord:
        return VertexRecord(self.kind(v), self._parents[v], self._children[v])

    def is_reticulation(self, v: int) -> bool:
        return len(self._parents.get(v, ())) == 2

    def is_tree_or_leaf(self, v: int) -> bool:
        return len(self._parents[v]) == 1

    def is_reticulation_arc(self, arc: Arc) -> bool:
        u, v = arc
        return self.has_arc(u, v) and self.is_reticulation(v)

    @cached_property
    def reticulations(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if len(self._parents[v]) == 2)

    @cached_property
    def reticulation_arcs(self) -> tuple[Arc, ...]:
        return tuple((u, v) for v in self.reticulations for u in self._parents[v])

    @property
    def num_vertices(self) -> int:
        return len(self._parents)

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    def is_tree(self) -> bool:
        return not self.reticulations

    def is_single_vertex(self) -> bool:
        return len(self._parents) == 1

    # -- derived structure -------------------------------------------------

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = {v: len(ps) for v, ps in self._parents.items()}
        queue = deque([self._root])
        order = []
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in self._children[u]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return tuple(order)

    @cached_property
    def min_leaf_label(self) -> Mapping[int, str]:
        """Smallest label among the leaves reachable from each vertex."""
        best: dict[int, str] = {}
        for v in reversed(self.topological_order):
            cs = self._children[v]
            best[v] = self._labels[v] if not cs else min(best[c] for c in cs)
        return MappingProxyType(best)

    @cached_property
    def shape_digest(self) -> Mapping[int, str]:
        """Id-free digest of the sub-network below each vertex.

        Equal digests mean isomorphic unfoldings; used only to break ties.
        """
        out: dict[int, str] = {}
        for v in reversed(self.topological_order):
            cs = self._children[v]
            if not cs:
                text = "L" + self._labels[v]
            else:
                text = ("R" if len(self._parents[v]) == 2 else "T") + ",".join(sorted(out[c] for c in cs))
            out[v] = hashlib.blake2b(text.encode("utf-8"), digest_size=8).hexdigest()
        return MappingProxyType(out)

    def ordered_children(self, v: int) -> list[int]:
        """Children sorted by smallest reachable leaf label, ties broken by shape then id."""
        mins = self.min_leaf_label
        shape = self.shape_digest
        return sorted(self._children[v], key=lambda c: (mins[c], shape[c], c))

    def bfs_order(self) -> list[int]:
        """Vertices in breadth-first order from the root, children visited in deterministic order."""
        seen = {self._root}
        order = []
        queue = deque([self._root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in self.ordered_children(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return order

    def compact(self) -> "Network":
        """Renumber vertices densely (0..n-1) in topological order."""
        ids = {v: i for i, v in enumerate(self.topological_order)}
        return Network._trusted(
            {ids[v]: [ids[p] for p in ps] for v, ps in self._parents.items()},
            {ids[v]: [ids[c] for c in cs] for v, cs in self._children.items()},
            {ids[v]: lab for v, lab in self._labels.items()},
        )

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for v in self.vertices:
            g.add_node(v, label=self._labels.get(v))
        g.add_edges_from(self.arcs)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.arcs == other.arcs and dict(self._labels) == dict(other._labels) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.arcs, tuple(sorted(self._labels.items()))))

    def __repr__(self) -> str:
        from .newick import serialize_enewick

        return f"Network({serialize_enewick(self)!r})"


def is_isomorphic(n1: Network, n2: Network) -> bool:
    """Graph isomorphism respecting leaf labels."""
    if n1.num_vertices != n2.num_vertices or n1.num_arcs != n2.num_arcs or n1.leaf_set != n2.leaf_set:
        return False
    return nx.is_isomorphic(
        n1.to_networkx(), n2.to_networkx(), node_match=lambda a, b: a["label"] == b["label"]
    )


# -- classifiers -----------------------------------------------------------


def is_tree_child(net: Network) -> bool:
    return _tree_child(net)


def _tree_child(net: Network) -> bool:
    cached = net.__dict__.get("_is_tree_child")
    if cached is None:
        cached = all(
            any(net.is_tree_or_leaf(c) for c in net.children(v))
            for v in net.vertices
            if net.children(v)
        )
        net.__dict__["_is_tree_child"] = cached
    return cached


def _require_tree_child(net: Network) -> None:
    if not _tree_child(net):
        raise NotTreeChildError("network is not tree-child")


def has_directed_path(net: Network, u: int, v: int, avoid: Arc | None = None) -> bool:
    """Breadth-first reachability from ``u`` to ``v``, optionally ignoring one arc."""
    if u == v:
        return True
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in net.children(x):
            if (x, y) == avoid or y in seen:
                continue
            if y == v:
                return True
            seen.add(y)
            queue.append(y)
    return False


def is_shortcut(net: Network, arc: Arc) -> bool:
    if not net.is_reticulation_arc(arc):
        raise NetworkError(f"{arc} is not a reticulation arc")
    u, v = arc
    return has_directed_path(net, u, v, avoid=arc)


def is_normal(net: Network) -> bool:
    return _tree_child(net) and not any(is_shortcut(net, a) for a in net.reticulation_arcs)


def is_level_one(net: Network) -> bool:
    """Every biconnected block of the underlying graph holds at most one reticulation."""
    if not net.reticulations:
        return True
    block_of: dict[frozenset, int] = {}
    g = nx.Graph(net.arcs)
    for i, edges in enumerate(nx.biconnected_component_edges(g)):
        for a, b in edges:
            block_of[frozenset((a, b))] = i
    counts: dict[int, int] = {}
    for r in net.reticulations:
        # both in-arcs of a reticulation lie on a common cycle, hence in one block
        block = block_of[frozenset((net.parents(r)[0], r))]
        counts[block] = counts.get(block, 0) + 1
    return max(counts.values()) <= 1


def cycle_blocks(net: Network) -> list[frozenset[int]]:
    """Vertex sets of the non-bridge biconnected blocks of the underlying graph."""
    if net.is_single_vertex():
        return []
    g = nx.Graph(net.arcs)
    return [frozenset(c) for c in nx.biconnected_components(g) if len(c) > 2]


def tree_path_to_leaf(net: Network, v: int) -> list[int]:
    """Deterministic tree path from ``v`` to a leaf.

    At each step the walk moves to the tree-vertex or leaf child whose smallest
    reachable leaf label is least (ties broken by vertex id).
    """
    _require_tree_child(net)
    path = [v]
    mins = net.min_leaf_label
    while net.children(v):
        v = min((c for c in net.children(v) if net.is_tree_or_leaf(c)), key=lambda c: (mins[c], c))
        path.append(v)
    return path


def tree_path_leaf(net: Network, v: int) -> str:
    return net.label(tree_path_to_leaf(net, v)[-1])


def has_tree_path(net: Network, u: int, v: int) -> bool:
    """Whether a directed path from ``u`` to ``v`` exists whose non-initial vertices are tree vertices or leaves."""
    if u == v:
        return True
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in net.children(x):
            if y in seen or not net.is_tree_or_leaf(y):
                continue
            if y == v:
                return True
            seen.add(y)
            stack.append(y)
    return False


# -- surgery ---------------------------------------------------------------


class _Draft:
    """Mutable working copy used by surgery routines."""

    def __init__(self, net: Network):
        self.parents = {v: set(net.parents(v)) for v in net.vertices}
        self.children = {v: set(net.children(v)) for v in net.vertices}
        self.labels = dict(net.labels)
        self.root = net.root

    def remove_arc(self, u: int, v: int) -> None:
        self.children[u].discard(v)
        self.parents[v].discard(u)

    def remove_vertex(self, v: int) -> None:
        for p in self.parents.pop(v):
            self.children[p].discard(v)
        for c in self.children.pop(v):
            self.parents[c].discard(v)
        self.labels.pop(v, None)

    def suppress(self, v: int) -> None:
        """Replace the in-1/out-1 vertex ``v`` by a single arc; parallel arcs collapse."""
        (p,) = self.parents[v]
        (c,) = self.children[v]
        self.remove_vertex(v)
        self.children[p].add(c)
        self.parents[c].add(p)

    def is_unary(self, v: int) -> bool:
        return len(self.parents[v]) == 1 and len(self.children[v]) == 1

    def strip_root(self) -> None:
        while len(self.children[self.root]) == 1 and self.root not in self.labels:
            (c,) = self.children[self.root]
            self.remove_vertex(self.root)
            self.root = c

    def freeze(self) -> Network:
        return Network._trusted(self.parents, self.children, self.labels)

    def arcs(self) -> list[Arc]:
        return [(u, v) for u, cs in self.children.items() for v in cs]


def _require_reticulation_arc(net: Network, arc: Arc) -> None:
    if not net.has_arc(*arc):
        raise NetworkError(f"{arc} is not an arc of the network")
    if not net.is_reticulation(arc[1]):
        raise NetworkError(f"{arc} is a tree arc, not a reticulation arc")


def delete_arc_tree_child(net: Network, arc: Arc) -> Network:
    """``N \\ {e}`` for a reticulation arc ``e = (u, v)`` of a tree-child network.

    Deletes ``e`` and suppresses ``u`` and ``v``; when ``u`` is the root, the
    root and both its arcs go instead and only ``v`` is suppressed.
    """
    _require_tree_child(net)
    _require_reticulation_arc(net, arc)
    u, v = arc
    d = _Draft(net)
    d.remove_arc(u, v)
    if u == d.root:
        (c,) = d.children[u]
        d.remove_vertex(u)
        d.root = c
    else:
        d.suppress(u)
    d.suppress(v)
    return d.freeze()


def full_simplification(net: Network, arc: Arc) -> Network:
    """``N \\ {e}`` for a reticulation arc of an arbitrary network.

    Deletes ``e``, prunes everything not on a root-to-leaf path, then suppresses
    in-1/out-1 vertices and merges parallel arcs until neither applies.  A
    root left with out-degree one is removed.
    """
    _require_reticulation_arc(net, arc)
    d = _Draft(net)
    d.remove_arc(*arc)

    down = _reach(d.children, [d.root])
    leaves = [v for v in d.labels]
    up = _reach(d.parents, leaves)
    missing = [d.labels[x] for x in leaves if x not in down]
    assert not missing, f"leaves {missing} unreachable after deleting a reticulation arc"
    for v in list(d.parents):
        if v not in down or v not in up:
            d.remove_vertex(v)

    pending = [v for v in d.parents if d.is_unary(v)]
    while pending:
        v = pending.pop()
        if v not in d.parents or not d.is_unary(v):
            continue
        (p,) = d.parents[v]
        (c,) = d.children[v]
        d.suppress(v)
        # a collapsed parallel arc leaves both endpoints with one fewer arc
        pending.extend((p, c))
    d.strip_root()
    out = d.freeze()
    report = validate(out.arcs, out.labels, out.vertices)
    if not report.ok:
        raise NetworkError(f"full simplification produced an invalid network: {report}", report)
    return out


def _reach(adjacency: Mapping[int, set[int]], sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for y in adjacency[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen
