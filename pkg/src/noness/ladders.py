"""Caterpillar ladders in tree-child networks and removal of non-essential arcs.

A ladder ``<l0, l1, ..., lk>`` embedded in a network is described by the
images of its reticulations ``v1..vk`` and spine vertices ``p1..pk``,
``q1..qk``.  Each reticulation ``vj`` has parents ``pj`` and ``qj``; the rung
``ej = (pj, vj)`` and ``fj = (qj, vj)``.  A reticulation arc of a tree-child
network is non-essential exactly when it is the first rung ``e1`` or the last
rung ``fk`` of a tight ladder.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NetworkError
from .network import (
    Arc,
    Network,
    _require_tree_child,
    delete_arc_tree_child,
    has_directed_path,
    has_tree_path,
    tree_path_to_leaf,
)


class Tightness(str, enum.Enum):
    TIGHT = "tight"
    NEARLY_TIGHT_PLUS = "nearly_tight_plus"
    NEARLY_TIGHT_MINUS = "nearly_tight_minus"
    LOOSE_UP = "loose_up"
    LOOSE_DOWN = "loose_down"


@dataclass(frozen=True)
class LadderEmbedding:
    leaves: tuple[str, ...]
    v: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]
    tightness: Tightness = Tightness.TIGHT

    @property
    def k(self) -> int:
        return len(self.v)

    @property
    def phi(self) -> dict[str, int]:
        out = {}
        for j in range(self.k):
            out[f"v{j + 1}"] = self.v[j]
            out[f"p{j + 1}"] = self.p[j]
            out[f"q{j + 1}"] = self.q[j]
        return out

    @property
    def rung_e(self) -> tuple[Arc, ...]:
        return tuple(zip(self.p, self.v))

    @property
    def rung_f(self) -> tuple[Arc, ...]:
        return tuple(zip(self.q, self.v))

    @property
    def first_rung(self) -> Arc:
        return self.rung_e[0]

    @property
    def last_rung(self) -> Arc:
        return self.rung_f[-1]

    @property
    def spine(self) -> tuple[Arc, ...]:
        """Spine arcs from the top, as pairs of network vertices."""
        return spine_arcs(self.p, self.q)

    @property
    def spine_vertices(self) -> frozenset[int]:
        return frozenset(self.p) | frozenset(self.q)

    @property
    def identity(self) -> frozenset[int]:
        """Reticulation and spine vertices; equivalent ladders share it."""
        return frozenset(self.v) | self.spine_vertices

    def with_tightness(self, tightness: Tightness) -> "LadderEmbedding":
        return LadderEmbedding(self.leaves, self.v, self.p, self.q, tightness)


def spine_arcs(p: Sequence, q: Sequence) -> tuple[tuple, ...]:
    """The spine ``q_k, q_{k-1}, p_k, q_{k-2}, ..., q_1, p_2, p_1`` as a tuple of arcs."""
    k = len(p)
    if k == 1:
        return ((q[0], p[0]),)
    # q_0 = p_1; 0-based lists hold index j-1 for symbol j
    qq = lambda j: p[0] if j == 0 else q[j - 1]  # noqa: E731
    pp = lambda j: p[j - 1]  # noqa: E731
    arcs = [(qq(k), qq(k - 1))]
    for j in range(k - 1, 0, -1):
        arcs.append((qq(j), pp(j + 1)))
        arcs.append((pp(j + 1), qq(j - 1)))
    return tuple(arcs)


def check_ladder(net: Network, cand: LadderEmbedding) -> bool:
    """Whether ``cand`` satisfies (P1), (P2) and its declared variant of (P3) in ``net``."""
    k = cand.k
    if k < 1 or len(cand.p) != k or len(cand.q) != k or len(cand.leaves) != k + 1:
        raise NetworkError("ladder needs k >= 1 rungs and k + 1 leaves")
    missing = [x for x in cand.leaves if x not in net.leaf_set]
    if missing:
        raise NetworkError(f"ladder leaves {missing} are not leaves of the network")
    images = list(cand.v) + list(cand.p) + list(cand.q) + [net.leaf(x) for x in cand.leaves]
    if len(set(images)) != len(images):
        raise NetworkError("ladder map is not injective")
    if any(x not in net for x in images):
        return False

    # (P1)
    if not has_tree_path(net, cand.p[0], net.leaf(cand.leaves[0])):
        return False
    for j in range(k):
        if not has_tree_path(net, cand.v[j], net.leaf(cand.leaves[j + 1])):
            return False
    # (P2)
    for j in range(k):
        if not (net.has_arc(cand.p[j], cand.v[j]) and net.has_arc(cand.q[j], cand.v[j])):
            return False
    # (P3) and its relaxations
    spine = cand.spine
    top, bottom = spine[0], spine[-1]
    t = cand.tightness
    if t is Tightness.TIGHT:
        return all(net.has_arc(*a) for a in spine)
    relaxed = top if t in (Tightness.NEARLY_TIGHT_PLUS, Tightness.LOOSE_UP) else bottom
    step = net.has_arc if t in (Tightness.NEARLY_TIGHT_PLUS, Tightness.NEARLY_TIGHT_MINUS) else (
        lambda a, b: has_tree_path(net, a, b)
    )
    if not has_directed_path(net, *relaxed):
        return False
    return all(step(*a) for a in spine if a != relaxed)


def _other(pair: Iterable[int], x: int) -> int:
    (y,) = [z for z in pair if z != x]
    return y


def _tree_arc_path(net: Network, *vertices: int) -> bool:
    """Consecutive arcs along ``vertices`` with every vertex after the first a tree vertex."""
    return all(net.has_arc(a, b) for a, b in zip(vertices, vertices[1:])) and all(
        net.is_tree_or_leaf(x) for x in vertices[1:]
    )


def find_tight_ladder(net: Network, w: int) -> LadderEmbedding | None:
    """A tight ladder whose first reticulation is ``w``, or None if there is none."""
    _require_tree_child(net)
    if not net.is_reticulation(w):
        raise NetworkError(f"vertex {w} is not a reticulation")
    # Steps 1-7
    v = [w]
    u, u2 = net.parents(w)
    if has_directed_path(net, u, u2):
        p, q = [u2], [u]
    elif has_directed_path(net, u2, u):
        p, q = [u], [u2]
    else:
        return None
    # Step 8, i = 1; "tree path q1, p1, v1" is read as the arcs q1 -> p1 -> v1
    # since v1 itself is a reticulation
    if _tree_arc_path(net, q[0], p[0]):
        return _finish(net, v, p, q)
    if not net.parents(p[0]):
        return None
    p2 = net.parents(p[0])[0]
    if not _tree_arc_path(net, q[0], p2, p[0]):
        return None
    v2 = _other(net.children(p2), p[0])
    if not net.is_reticulation(v2):
        return None
    v.append(v2)
    p.append(p2)
    q.append(_other(net.parents(v2), p2))
    # Step 9, i >= 2
    while True:
        i = len(v)
        qi, qprev = q[i - 1], q[i - 2]
        if net.has_arc(qi, qprev):
            return _finish(net, v, p, q)
        if not net.parents(qprev):
            return None
        pnext = net.parents(qprev)[0]
        if not _tree_arc_path(net, qi, pnext, qprev):
            return None
        vnext = _other(net.children(pnext), qprev)
        if not net.is_reticulation(vnext) or vnext in v:
            return None
        v.append(vnext)
        p.append(pnext)
        q.append(_other(net.parents(vnext), pnext))


def _finish(net: Network, v: list[int], p: list[int], q: list[int]) -> LadderEmbedding:
    leaves = [tree_path_to_leaf(net, p[0])[-1]] + [tree_path_to_leaf(net, x)[-1] for x in v]
    return LadderEmbedding(tuple(net.label(x) for x in leaves), tuple(v), tuple(p), tuple(q))


def reticulations_bfs(net: Network) -> list[int]:
    return [x for x in net.bfs_order() if net.is_reticulation(x)]


def all_tight_ladders(net: Network) -> list[LadderEmbedding]:
    """One tight ladder per equivalence class, seeded from every reticulation in BFS order."""
    _require_tree_child(net)
    found: dict[frozenset[int], LadderEmbedding] = {}
    for w in reticulations_bfs(net):
        ladder = find_tight_ladder(net, w)
        if ladder is not None and ladder.identity not in found:
            found[ladder.identity] = ladder
    return list(found.values())


def nonessential_arcs(net: Network) -> set[Arc]:
    """First and last rungs of all tight ladders."""
    out: set[Arc] = set()
    for ladder in all_tight_ladders(net):
        out.add(ladder.first_rung)
        out.add(ladder.last_rung)
    return out


@dataclass
class SimplificationTrace:
    deleted: list[Arc] = field(default_factory=list)
    ladders: list[LadderEmbedding] = field(default_factory=list)
    network: Network | None = None

    @property
    def deletions(self) -> int:
        return len(self.deleted)


def simplify(
    net: Network,
    rung: str = "first",
    order: Sequence[int] | None = None,
    rng: random.Random | None = None,
) -> SimplificationTrace:
    """Delete one rung of every tight ladder, leaving a network without non-essential arcs.

    Reticulations are visited in BFS order unless ``order`` is given (or
    ``rng`` shuffles the BFS order); each visit runs the ladder search on the
    current network and deletes the first (or last) rung of any ladder found.
    """
    if rung not in ("first", "last"):
        raise ValueError("rung must be 'first' or 'last'")
    _require_tree_child(net)
    visit = list(order) if order is not None else reticulations_bfs(net)
    if rng is not None:
        rng.shuffle(visit)
    trace = SimplificationTrace(network=net)
    current = net
    for w in visit:
        if w not in current or not current.is_reticulation(w):
            continue
        ladder = find_tight_ladder(current, w)
        if ladder is None:
            continue
        arc = ladder.first_rung if rung == "first" else ladder.last_rung
        current = delete_arc_tree_child(current, arc)
        trace.deleted.append(arc)
        trace.ladders.append(ladder)
    trace.network = current
    return trace
