"""Command-line front end.

Reports are line-oriented ``key=value`` records, one per network (or per
arc/ladder where that is the natural unit), preceded by a header record.
Exit status is 0 on success, 1 if any record carries an error, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .errors import CapExceededError, NetworkError, NewickSyntaxError
from .gadget import build_gadget, display_set_containment_bruteforce
from .generators import random_tree_child
from .ladders import all_tight_ladders, nonessential_arcs, simplify
from .network import Network, is_level_one, is_normal, is_tree_child
from .newick import iter_enewick_lines, parse_enewick, serialize_enewick
from .oracle import (
    default_cap,
    display_set,
    display_sets_equal,
    is_essential_bruteforce,
    nonessential_bruteforce,
)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    input_digest: str
    records: list[dict] = field(default_factory=list)
    wall_time: float | None = None

    def add(self, **fields) -> dict:
        self.records.append(fields)
        return fields

    @property
    def failed(self) -> bool:
        return any("error" in r for r in self.records)

    def to_text(self) -> str:
        header = {"command": self.command, "input": self.input_digest, "records": len(self.records)}
        if self.wall_time is not None:
            header["wall_time"] = f"{self.wall_time:.3f}s"
        lines = [_format_record(header)] + [_format_record(r) for r in self.records]
        return "\n".join(lines) + "\n"


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, tuple) and len(value) == 2 and all(isinstance(x, int) for x in value):
        return f"{value[0]}->{value[1]}"
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return ",".join(_format_value(x) for x in items) or "-"
    text = str(value)
    if not text or any(ch.isspace() or ch in '="' for ch in text):
        return json.dumps(text, ensure_ascii=False)
    return text


def _format_record(record: dict) -> str:
    return " ".join(f"{k}={_format_value(v)}" for k, v in record.items())


def _digest(paths: Sequence[str]) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return "sha256:" + h.hexdigest()[:16]


def _load(path: str) -> list[Network]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    nets = []
    for lineno, line in iter_enewick_lines(text):
        try:
            nets.append(parse_enewick(line))
        except (NewickSyntaxError, NetworkError) as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from exc
    return nets


def _per_network(report: RunReport, nets: list[Network], body: Callable[[int, Network], None]) -> None:
    for i, net in enumerate(nets, start=1):
        try:
            body(i, net)
        except (NetworkError, CapExceededError) as exc:
            report.add(network=i, error=str(exc))


def cmd_validate(args) -> RunReport:
    nets = _load(args.path)
    report = RunReport("validate", _digest([args.path]))

    def body(i, net):
        report.add(
            network=i,
            leaves=len(net.leaf_set),
            reticulations=len(net.reticulations),
            tree_child=is_tree_child(net),
            normal=is_normal(net),
            level_1=is_level_one(net),
        )

    _per_network(report, nets, body)
    return report


def cmd_ladders(args) -> RunReport:
    nets = _load(args.path)
    report = RunReport("ladders", _digest([args.path]))

    def body(i, net):
        ladders = all_tight_ladders(net)
        report.add(network=i, ladders=len(ladders))
        for j, lad in enumerate(ladders, start=1):
            report.add(
                network=i,
                ladder=j,
                k=lad.k,
                leaves=list(lad.leaves),
                first_rung=lad.first_rung,
                last_rung=lad.last_rung,
            )

    _per_network(report, nets, body)
    return report


def cmd_simplify(args) -> RunReport:
    nets = _load(args.path)
    report = RunReport("simplify", _digest([args.path]))
    outputs: list[str] = []

    def body(i, net):
        trace = simplify(net, rung=args.rung)
        text = serialize_enewick(trace.network)
        outputs.append(text)
        report.add(
            network=i,
            rung=args.rung,
            deletions=trace.deletions,
            deleted=list(trace.deleted),
            reticulations_before=len(net.reticulations),
            reticulations_after=len(trace.network.reticulations),
            enewick=text,
        )

    _per_network(report, nets, body)
    if args.output:
        Path(args.output).write_text("".join(t + "\n" for t in outputs), encoding="utf-8")
    return report


def cmd_oracle(args) -> RunReport:
    nets = _load(args.path)
    paths = [args.path] + ([args.against] if args.against else [])
    check = "characterization" if args.check == "theorem1" else args.check
    report = RunReport(f"oracle:{check}", _digest(paths))
    cap = args.cap if args.cap is not None else default_cap()

    if args.check == "essential":

        def body(i, net):
            for arc in net.reticulation_arcs:
                report.add(network=i, arc=arc, essential=is_essential_bruteforce(net, arc, cap))

        _per_network(report, nets, body)

    elif args.check == "display-equal":
        others = _load(args.against) if args.against else None
        if others is not None and len(others) != len(nets):
            raise InputError(f"{args.path} has {len(nets)} networks but {args.against} has {len(others)}")

        def body(i, net):
            other = others[i - 1] if others is not None else simplify(net).network
            report.add(network=i, display_equal=display_sets_equal(net, other, cap), trees=len(display_set(net, cap)))

        _per_network(report, nets, body)

    else:
        agree = 0
        checked = 0

        def body(i, net):
            nonlocal agree, checked
            fast = nonessential_arcs(net)
            slow = nonessential_bruteforce(net, cap)
            checked += 1
            agree += fast == slow
            report.add(network=i, agree=fast == slow, characterization=fast, bruteforce=slow)

        _per_network(report, nets, body)
        report.add(summary="characterization", agree=f"{agree}/{checked}")
    return report


def cmd_gadget(args) -> RunReport:
    n1s, n2s = _load(args.n1), _load(args.n2)
    if len(n1s) != len(n2s):
        raise InputError(f"{args.n1} has {len(n1s)} networks but {args.n2} has {len(n2s)}")
    report = RunReport("gadget", _digest([args.n1, args.n2]))
    outputs: list[str] = []
    cap = args.cap if args.cap is not None else default_cap()
    for i, (a, b) in enumerate(zip(n1s, n2s), start=1):
        try:
            g = build_gadget(a, b)
            text = serialize_enewick(g.net)
            outputs.append(text)
            rec = report.add(
                pair=i,
                leaves=len(g.net.leaf_set),
                reticulations=len(g.net.reticulations),
                arc=g.distinguished_arc,
                enewick=text,
            )
            if args.verify:
                contained = display_set_containment_bruteforce(a, b, cap)
                nonessential = not is_essential_bruteforce(g.net, g.distinguished_arc, cap)
                rec.update(
                    contained=contained,
                    nonessential=nonessential,
                    reduction="holds" if contained == nonessential else "fails",
                )
                if contained != nonessential:
                    rec["error"] = "reduction biconditional violated"
        except (NetworkError, CapExceededError) as exc:
            report.add(pair=i, error=str(exc))
    if args.output:
        Path(args.output).write_text("".join(t + "\n" for t in outputs), encoding="utf-8")
    return report


def cmd_random(args) -> str:
    rng = random.Random(args.seed)
    lines = []
    for _ in range(args.count):
        net = random_tree_child(args.leaves, args.reticulations, rng)
        lines.append(serialize_enewick(net) + "\n")
    return "".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--timing", action="store_true", help="include wall time in the report header")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse, validate and classify networks")
    p.add_argument("path")

    p = sub.add_parser("ladders", help="list tight caterpillar ladders")
    p.add_argument("path")

    p = sub.add_parser("simplify", help="delete one rung of every tight ladder")
    p.add_argument("path")
    p.add_argument("--rung", choices=["first", "last"], default="first")
    p.add_argument("-o", "--output", help="write simplified networks here, one per line")

    p = sub.add_parser("oracle", help="brute-force checks")
    p.add_argument("path")
    p.add_argument(
        "--check",
        choices=["essential", "display-equal", "characterization", "theorem1"],
        default="characterization",
        help="'theorem1' is an alias of 'characterization'",
    )
    p.add_argument("--cap", type=int, default=None, help="max reticulations to enumerate (default: $NONESS_CAP or 20)")
    p.add_argument("--against", help="for display-equal: compare line by line with this file")

    p = sub.add_parser("gadget", help="build the containment-to-essentiality reduction network")
    p.add_argument("n1")
    p.add_argument("n2")
    p.add_argument("--verify", action="store_true", help="check the reduction by brute force")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("-o", "--output")

    p = sub.add_parser("random", help="seeded random tree-child networks")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--reticulations", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("-o", "--output")
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "ladders": cmd_ladders,
    "simplify": cmd_simplify,
    "oracle": cmd_oracle,
    "gadget": cmd_gadget,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "random":
            try:
                text = cmd_random(args)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            if args.output:
                Path(args.output).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
            return EXIT_OK
        start = time.perf_counter()
        report = COMMANDS[args.command](args)
        if args.timing:
            report.wall_time = time.perf_counter() - start
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(report.to_text())
    return EXIT_DOMAIN if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
