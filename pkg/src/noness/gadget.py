"""Reduction network from display-set containment to arc non-essentiality.

Given networks ``n1`` and ``n2`` on the same leaf set ``X`` (``|X| = n``),
:func:`build_gadget` starts from the caterpillar ``(w0, w1, ..., w_{n+1})``,
puts ``n1`` at ``w0`` and copies of ``n2`` at ``w1..w_{n+1}``, merges every
copy of each leaf into one vertex ``u_i`` above a fresh leaf, and attaches
two new leaves ``x`` and ``y`` next to ``w0`` and ``w1``.  Every tree of
``n1`` is displayed by ``n2`` exactly when the arc ``(v0, p_x)`` is
non-essential in the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NetworkError
from .network import Arc, Network
from .oracle import check_cap, display_set, is_essential_bruteforce


@dataclass(frozen=True)
class GadgetInstance:
    net: Network
    distinguished_arc: Arc
    # copy index -> {vertex id in the input network -> vertex id in the gadget}
    copies: tuple[dict[int, int], ...] = field(repr=False)
    named: dict[str, int] = field(repr=False)
    x: str = "x"
    y: str = "y"


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


def build_gadget(n1: Network, n2: Network, order: str = "forward") -> GadgetInstance:
    """Build the reduction network.

    Each merged leaf vertex ``u_i`` is refined into a chain of ``n + 1``
    reticulations.  With ``order="forward"`` the arcs coming from the copies
    at ``w0`` and ``w1`` enter the top of the chain and the copy at ``w_{n+1}``
    enters lowest; ``order="reverse"`` flips this.
    """
    if n1.leaf_set != n2.leaf_set:
        raise NetworkError("input networks have different leaf sets")
    if order not in ("forward", "reverse"):
        raise ValueError("order must be 'forward' or 'reverse'")
    X = sorted(n1.leaf_set)
    n = len(X)
    arcs: list[Arc] = []
    labels: dict[int, str] = {}
    named: dict[str, int] = {}
    counter = 0

    def new(name: str | None = None) -> int:
        nonlocal counter
        counter += 1
        if name is not None:
            named[name] = counter - 1
        return counter - 1

    # caterpillar spine: c_{n+1} (root) -> c_n -> ... -> c_1 = p, where c_i is the parent of w_i
    root = new("rho")
    spine = {n + 1: root}
    for i in range(n, 0, -1):
        spine[i] = new(f"c{i}")
    p = spine[1]
    named["p"] = p
    for i in range(n + 1, 1, -1):
        named[f"v{i}"] = spine[i]
        if i - 1 >= 1:
            arcs.append((spine[i], spine[i - 1]))

    p_y = new("p_y")
    v0 = new("v0")
    v1 = new("v1")
    p_x = new("p_x")
    taken = set(X)
    x_label = _fresh("x", taken)
    y_label = _fresh("y", taken | {x_label})
    leaf_x = new("x")
    leaf_y = new("y")
    labels[leaf_x] = x_label
    labels[leaf_y] = y_label
    arcs += [(p, p_y), (p_y, leaf_y), (p_y, v0), (p, v1), (v0, p_x), (v1, p_x), (p_x, leaf_x)]

    # parent vertex of each copy's root
    attach = {0: v0, 1: v1}
    for i in range(2, n + 2):
        attach[i] = spine[i]

    copies: list[dict[int, int]] = []
    # leaf_parents[label][copy] = gadget vertex whose arc enters u_label
    leaf_parents: dict[str, dict[int, int]] = {lab: {} for lab in X}
    for i in range(n + 2):
        src = n1 if i == 0 else n2
        ids: dict[int, int] = {}
        for v in src.vertices:
            if src.label(v) is None:
                ids[v] = new()
        for v in src.vertices:
            if src.label(v) is not None:
                continue
            for c in src.children(v):
                if src.label(c) is None:
                    arcs.append((ids[v], ids[c]))
                else:
                    leaf_parents[src.label(c)][i] = ids[v]
        if src.is_single_vertex():
            leaf_parents[src.label(src.root)][i] = attach[i]
        else:
            arcs.append((attach[i], ids[src.root]))
        copies.append(ids)

    for lab in X:
        sources = [leaf_parents[lab][i] for i in range(n + 2)]
        if order == "reverse":
            sources.reverse()
        leaf = new(f"leaf:{lab}")
        labels[leaf] = lab
        chain = [new(f"u:{lab}:{j}") for j in range(1, n + 2)]
        arcs += [(sources[0], chain[0]), (sources[1], chain[0])]
        for j in range(1, n + 1):
            arcs += [(chain[j - 1], chain[j]), (sources[j + 1], chain[j])]
        arcs.append((chain[-1], leaf))
        named[f"u:{lab}"] = chain[-1]

    net = Network(arcs, labels)
    return GadgetInstance(net, (v0, p_x), tuple(copies), named, x_label, y_label)


def display_set_containment_bruteforce(n1: Network, n2: Network, cap: int | None = None) -> bool:
    """Whether every tree displayed by ``n1`` is displayed by ``n2``."""
    if n1.leaf_set != n2.leaf_set:
        raise NetworkError("input networks have different leaf sets")
    return display_set(n1, cap) <= display_set(n2, cap)


def verify_reduction(n1: Network, n2: Network, cap: int | None = None, order: str = "forward") -> bool:
    """Check the reduction's biconditional by brute force on one input pair.

    True when containment of the display sets agrees with non-essentiality
    of the distinguished arc in the gadget.
    """
    gadget = build_gadget(n1, n2, order=order)
    check_cap(gadget.net, cap)
    contained = display_set_containment_bruteforce(n1, n2, cap)
    nonessential = not is_essential_bruteforce(gadget.net, gadget.distinguished_arc, cap)
    return contained == nonessential
