"""Extended Newick (eNewick) reading and writing.

Reticulations are written as tagged nodes ``#H1``: the occurrence carrying a
child subtree is the definition, bare occurrences are references that add a
parent.  A labeled tagged leaf such as ``b#H1`` with no definition elsewhere
is read as a reticulation whose only child is the leaf ``b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import NetworkError, NewickSyntaxError
from .network import Network

_BARE = re.compile(r"[^\s()\[\]',:;]+")
_SAFE = re.compile(r"[^\s()\[\]',:;#]+")
_LENGTH = re.compile(r":\s*[-+0-9.eE]*")


@dataclass
class _Node:
    name: str | None = None
    tag: str | None = None
    children: list["_Node"] = field(default_factory=list)
    start: int = 0


def quote_label(label: str) -> str:
    if _SAFE.fullmatch(label):
        return label
    return "'" + label.replace("'", "''") + "'"


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> NewickSyntaxError:
        pos = self.pos if pos is None else pos
        return NewickSyntaxError(message, len(self.text[:pos].encode("utf-8")))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def read_label(self, node: _Node) -> None:
        """Read an optional label, tag and ignored branch length after a node."""
        self.skip_ws()
        text = self.text
        if self.pos < len(text) and text[self.pos] == "'":
            start = self.pos
            self.pos += 1
            chars = []
            while True:
                if self.pos >= len(text):
                    raise self.error("unterminated quoted label", start)
                ch = text[self.pos]
                if ch == "'":
                    if text[self.pos + 1 : self.pos + 2] == "'":
                        chars.append("'")
                        self.pos += 2
                        continue
                    self.pos += 1
                    break
                chars.append(ch)
                self.pos += 1
            node.name = "".join(chars)
            m = _BARE.match(text, self.pos)
            if m and m.group().startswith("#"):
                node.tag = m.group()[1:]
                self.pos = m.end()
        else:
            m = _BARE.match(text, self.pos)
            if m:
                word = m.group()
                self.pos = m.end()
                if "#" in word:
                    name, _, tag = word.partition("#")
                    node.name = name or None
                    node.tag = tag
                    if not tag:
                        raise self.error("empty reticulation tag", self.pos - 1)
                else:
                    node.name = word
        self.skip_ws()
        m = _LENGTH.match(text, self.pos)
        if m:
            self.pos = m.end()


def _parse_tree(text: str) -> _Node:
    sc = _Scanner(text)
    if sc.peek() == "":
        raise sc.error("empty input")
    root = _Node(start=sc.pos)
    # stack of internal nodes whose child list is still open
    stack: list[_Node] = []
    node = root
    while True:
        ch = sc.peek()
        if ch == "(":
            node.start = sc.pos
            sc.pos += 1
            stack.append(node)
            child = _Node(start=sc.pos)
            node.children.append(child)
            node = child
            continue
        # a leaf position: read its label
        sc.read_label(node)
        # close as many subtrees as the text does
        while True:
            ch = sc.peek()
            if not stack:
                break
            if ch == ",":
                sc.pos += 1
                child = _Node(start=sc.pos)
                stack[-1].children.append(child)
                node = child
                break
            if ch == ")":
                sc.pos += 1
                node = stack.pop()
                sc.read_label(node)
                continue
            raise sc.error(f"expected ',' or ')' but found {ch or 'end of input'!r}")
        if not stack:
            break
    if sc.peek() != ";":
        raise sc.error(f"expected ';' but found {sc.peek() or 'end of input'!r}")
    sc.pos += 1
    if sc.peek() != "":
        raise sc.error("trailing characters after ';'")
    return root


def parse_enewick(text: str) -> Network:
    """Parse one eNewick string (terminated by ``;``) into a :class:`Network`."""
    tree = _parse_tree(text)
    ids: dict[int, int] = {}  # id(_Node) or tag -> vertex
    tag_vertex: dict[str, int] = {}
    tag_definition: dict[str, _Node] = {}
    tag_named_leaf: dict[str, str] = {}
    arcs: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    counter = 0

    def new_vertex() -> int:
        nonlocal counter
        counter += 1
        return counter - 1

    # first pass: assign vertices, find definitions
    order: list[_Node] = []
    stack = [tree]
    while stack:
        n = stack.pop()
        order.append(n)
        if n.tag is not None:
            if n.tag not in tag_vertex:
                tag_vertex[n.tag] = new_vertex()
            if n.children:
                if n.tag in tag_definition:
                    raise NetworkError(f"reticulation #{n.tag} is defined more than once")
                tag_definition[n.tag] = n
            elif n.name:
                if n.tag in tag_named_leaf and tag_named_leaf[n.tag] != n.name:
                    raise NetworkError(f"reticulation #{n.tag} carries two leaf labels")
                tag_named_leaf[n.tag] = n.name
            ids[id(n)] = tag_vertex[n.tag]
        else:
            ids[id(n)] = new_vertex()
        stack.extend(reversed(n.children))

    for n in order:
        for c in n.children:
            arcs.append((ids[id(n)], ids[id(c)]))
        if n.tag is None and not n.children:
            if not n.name:
                raise NetworkError("unlabeled leaf")
            labels[ids[id(n)]] = n.name

    for tag, v in tag_vertex.items():
        if tag in tag_definition:
            continue
        if tag not in tag_named_leaf:
            raise NetworkError(f"reticulation #{tag} has no child subtree")
        leaf = new_vertex()
        arcs.append((v, leaf))
        labels[leaf] = tag_named_leaf[tag]

    seen: dict[str, int] = {}
    for v, lab in labels.items():
        if lab in seen:
            raise NetworkError(f"leaf label {lab!r} occurs more than once")
        seen[lab] = v
    return Network(arcs, labels, vertices=ids.values())


def serialize_enewick(net: Network) -> str:
    """Deterministic eNewick text; children are ordered by smallest descendant leaf label."""
    if net.is_single_vertex():
        return quote_label(net.label(net.root)) + ";"
    # pre-order walk fixes where each reticulation is defined and its tag number
    definition_parent: dict[int, int] = {}
    tag: dict[int, int] = {}
    stack = [(net.root, -1)]
    while stack:
        v, parent = stack.pop()
        if net.is_reticulation(v):
            if v in tag:
                continue
            tag[v] = len(tag) + 1
            definition_parent[v] = parent
        for c in reversed(net.ordered_children(v)):
            stack.append((c, v))

    text: dict[int, str] = {}
    for v in reversed(net.topological_order):
        if not net.children(v):
            text[v] = quote_label(net.label(v))
            continue
        parts = []
        for c in net.ordered_children(v):
            if net.is_reticulation(c) and definition_parent[c] != v:
                parts.append(f"#H{tag[c]}")
            else:
                parts.append(text[c])
        body = "(" + ",".join(parts) + ")"
        text[v] = body + (f"#H{tag[v]}" if v in tag else "")
    return text[net.root] + ";"


def canonical_tree_string(tree: Network) -> str:
    """A string that is equal for two trees exactly when they are isomorphic."""
    if tree.reticulations:
        raise NetworkError("canonical_tree_string needs a tree, got a network with reticulations")
    text: dict[int, str] = {}
    for v in reversed(tree.topological_order):
        cs = tree.children(v)
        if not cs:
            text[v] = quote_label(tree.label(v))
        else:
            text[v] = "(" + ",".join(sorted(text[c] for c in cs)) + ")"
    return text[tree.root] + ";"


def iter_enewick_lines(text: str) -> Iterator[tuple[int, str]]:
    """Yield (line number, line) for each non-blank line."""
    for i, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield i, line.strip()


def read_networks(path: str | Path) -> list[Network]:
    text = Path(path).read_text(encoding="utf-8")
    return [parse_enewick(line) for _, line in iter_enewick_lines(text)]


def write_networks(path: str | Path, networks: Iterable[Network]) -> None:
    Path(path).write_text("".join(serialize_enewick(n) + "\n" for n in networks), encoding="utf-8")
