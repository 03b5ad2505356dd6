"""Network constructors: fixed families and seeded random generators."""

from __future__ import annotations

import random
from typing import Callable, Sequence

from .network import Network, cycle_blocks, is_level_one, is_normal


def caterpillar_ladder(leaves: Sequence[str]) -> tuple[Network, dict[str, int]]:
    """The caterpillar ladder ``<l0, l1, ..., lk>`` and the ids of its named vertices.

    The returned map has keys ``v1.., p1.., q1..`` and the leaf labels.
    """
    k = len(leaves) - 1
    if k < 1:
        raise ValueError("a caterpillar ladder needs at least two leaves")
    ids: dict[str, int] = {}
    for name in [f"{s}{j}" for j in range(1, k + 1) for s in "qpv"] + list(leaves):
        ids[name] = len(ids)
    arcs = []
    p = [ids[f"p{j}"] for j in range(1, k + 1)]
    q = [ids[f"q{j}"] for j in range(1, k + 1)]
    from .ladders import spine_arcs

    arcs.extend(spine_arcs(p, q))
    arcs.append((ids["p1"], ids[leaves[0]]))
    for j in range(1, k + 1):
        v = ids[f"v{j}"]
        arcs += [(ids[f"p{j}"], v), (ids[f"q{j}"], v), (v, ids[leaves[j]])]
    labels = {ids[x]: x for x in leaves}
    return Network(arcs, labels), ids


def stack_network(k: int, a: str = "a", b: str = "b", x: str = "x") -> Network:
    """A network with ``k`` reticulations that displays exactly two trees.

    Leaf ``x`` hangs below a chain of reticulations ``r1 -> ... -> rk``.  Each
    ``rj`` has one parent on the path from the root to ``a``; ``r1``'s other
    parent sits beside ``b``.  Only the all-``b``-side choice puts ``x`` next to
    ``b``; the other ``2^k - 1`` choices put it next to ``a``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    root, beta = 0, 1
    side = [2 + j for j in range(k)]  # a-side path vertices
    chain = [2 + k + j for j in range(k)]
    la, lb, lx = 2 + 2 * k, 3 + 2 * k, 4 + 2 * k
    arcs = [(root, side[0]), (root, beta), (beta, lb), (beta, chain[0])]
    for j in range(k):
        arcs.append((side[j], chain[j]))
        arcs.append((side[j], side[j + 1] if j + 1 < k else la))
        arcs.append((chain[j], chain[j + 1] if j + 1 < k else lx))
    return Network(arcs, {la: a, lb: b, lx: x})


def leaf_names(n: int) -> list[str]:
    return [f"t{i}" for i in range(1, n + 1)]


class _Builder:
    """Mutable adjacency used while growing random networks."""

    def __init__(self):
        self.children: dict[int, list[int]] = {}
        self.parents: dict[int, list[int]] = {}
        self.labels: dict[int, str] = {}

    def add_vertex(self) -> int:
        v = len(self.children)
        self.children[v] = []
        self.parents[v] = []
        return v

    def add_arc(self, u: int, v: int) -> None:
        self.children[u].append(v)
        self.parents[v].append(u)

    def remove_arc(self, u: int, v: int) -> None:
        self.children[u].remove(v)
        self.parents[v].remove(u)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self.children for v in self.children[u]]

    def subdivide(self, u: int, v: int) -> int:
        s = self.add_vertex()
        self.remove_arc(u, v)
        self.add_arc(u, s)
        self.add_arc(s, v)
        return s

    def network(self) -> Network:
        return Network(self.arcs(), self.labels)


def _grow_tree(n: int, rng: random.Random, labels: Sequence[str] | None = None) -> _Builder:
    labels = list(labels) if labels is not None else leaf_names(n)
    b = _Builder()
    if n == 1:
        b.labels[b.add_vertex()] = labels[0]
        return b
    root = b.add_vertex()
    order = labels[:]
    rng.shuffle(order)
    for lab in order[:2]:
        leaf = b.add_vertex()
        b.labels[leaf] = lab
        b.add_arc(root, leaf)
    for lab in order[2:]:
        u, v = rng.choice(b.arcs())
        s = b.subdivide(u, v)
        leaf = b.add_vertex()
        b.labels[leaf] = lab
        b.add_arc(s, leaf)
    return b


def random_tree(n: int, rng: random.Random, labels: Sequence[str] | None = None) -> Network:
    """A random rooted binary tree grown by attaching leaves to uniformly chosen arcs."""
    return _grow_tree(n, rng, labels).network()


def _near_arcs(b: _Builder, c: int, radius: int) -> list[tuple[int, int]]:
    """Arcs with an endpoint within ``radius`` undirected steps of ``c``."""
    dist = {c: 0}
    frontier = [c]
    for d in range(radius):
        nxt = []
        for x in frontier:
            for y in b.children[x] + b.parents[x]:
                if y not in dist:
                    dist[y] = d + 1
                    nxt.append(y)
        frontier = nxt
    return [(u, v) for u, v in b.arcs() if u in dist or v in dist]


def _locally_tree_child(b: _Builder, vertices) -> bool:
    for x in vertices:
        cs = b.children[x]
        if cs and not any(len(b.parents[c]) == 1 for c in cs):
            return False
    return True


def random_network(
    n: int,
    k: int,
    rng: random.Random,
    *,
    tree_child: bool = True,
    local_bias: float = 0.5,
    accept: Callable[[Network], bool] | None = None,
    max_attempts: int = 2000,
    labels: Sequence[str] | None = None,
) -> Network:
    """Grow a random tree on ``n`` leaves, then add ``k`` reticulations one at a time.

    Each reticulation subdivides two distinct arcs ``(a, b)`` and ``(c, d)``
    with new vertices ``s`` and ``r`` and adds the arc ``(s, r)``.  Candidates
    that would create a cycle or (when ``tree_child``) break tree-childness are
    re-sampled, as are those rejected by ``accept``.  With probability
    ``local_bias`` the two arcs are drawn close together, which makes shortcuts
    and caterpillar ladders common.
    """
    if tree_child and k > max(n - 1, 0):
        raise ValueError(f"a tree-child network on {n} leaves has at most {n - 1} reticulations")
    b = _grow_tree(n, rng, labels)
    for _ in range(k):
        for _attempt in range(max_attempts):
            arcs = b.arcs()
            c, d = rng.choice(arcs)
            if rng.random() < local_bias:
                a, bb = rng.choice(_near_arcs(b, c, 3))
            else:
                a, bb = rng.choice(arcs)
            if (a, bb) == (c, d):
                continue
            if d == a or _reaches(b, d, a):
                continue
            s = b.subdivide(a, bb)
            r = b.subdivide(c, d)
            b.add_arc(s, r)
            ok = not tree_child or _locally_tree_child(b, {a, s, c, r, b.parents[s][0], b.parents[r][0]})
            if ok and accept is not None:
                ok = accept(b.network())
            if ok:
                break
            _undo(b, s, r)
        else:
            raise RuntimeError(f"could not place reticulation after {max_attempts} attempts")
    return b.network()


def _reaches(b: _Builder, u: int, v: int) -> bool:
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in b.children[x]:
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def _undo(b: _Builder, s: int, r: int) -> None:
    b.remove_arc(s, r)
    for x in (r, s):  # r was created last
        (p,) = b.parents[x]
        (c,) = b.children[x]
        b.remove_arc(p, x)
        b.remove_arc(x, c)
        b.add_arc(p, c)
        del b.children[x]
        del b.parents[x]


def random_tree_child(n: int, k: int, rng: random.Random, local_bias: float = 0.5) -> Network:
    return random_network(n, k, rng, local_bias=local_bias)


def random_normal(n: int, k: int, rng: random.Random) -> Network:
    if k > max(n - 2, 0):
        raise ValueError(f"a normal network on {n} leaves has at most {max(n - 2, 0)} reticulations")
    return random_network(n, k, rng, local_bias=0.2, accept=is_normal)


def _level_one_min_cycle(min_cycle: int) -> Callable[[Network], bool]:
    def accept(net: Network) -> bool:
        return is_level_one(net) and all(len(c) >= min_cycle for c in cycle_blocks(net))

    return accept


def random_level_one(n: int, k: int, rng: random.Random, min_cycle: int = 4, restarts: int = 50) -> Network:
    """Random tree-child level-1 network whose cycles all have at least ``min_cycle`` vertices.

    Contracting each cycle leaves a vertex with at least ``min_cycle - 1``
    children, so ``n >= 1 + k * (min_cycle - 2)``.  Near that bound the
    incremental placement can paint itself into a corner; it then starts
    over from a fresh tree.
    """
    if k and n < 1 + k * max(min_cycle - 2, 1):
        raise ValueError(f"no level-1 network on {n} leaves has {k} cycles of length >= {min_cycle}")
    accept = _level_one_min_cycle(min_cycle)
    for _ in range(restarts):
        try:
            return random_network(n, k, rng, local_bias=0.5, accept=accept, max_attempts=300)
        except RuntimeError:
            continue
    raise RuntimeError(f"no level-1 network found after {restarts} restarts")


__all__ = [
    "caterpillar_ladder",
    "leaf_names",
    "random_level_one",
    "random_network",
    "random_normal",
    "random_tree",
    "random_tree_child",
    "stack_network",
]
