"""``bbs`` command line front end."""
from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter
from typing import Sequence, TextIO

from . import checks
from .core import BallConfig, Excursion, format_config, parse_config, parse_excursion, split_excursions
from .dynamics import METHODS, evolve, evolve_reverse
from .errors import BoxBallError
from .measures import RNG_ALGORITHM, alpha_of_lambda, nu_weight, sample_excursions
from .render import FORMATS, OBJECTS, render
from .solitons import SlotDiagram, YoungDiagram, decompose, merge_young, slot_diagram
from .trees import (
    ALGORITHMS,
    build_tree,
    contour_of,
    count_trees,
    count_vectors,
    tree_of,
    tree_slot_diagram,
    tree_solitons,
)

_EMIT = ("excursions", "diagrams", "stats")


def _lines(source: str | None, stdin: TextIO) -> list[str]:
    text = stdin.read() if source in (None, "-") else source
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def _fmt_ints(values: Sequence[int]) -> str:
    return " ".join(map(str, values)) if values else "-"


# -- subcommands ----------------------------------------------------------

def cmd_evolve(args, out: TextIO, stdin: TextIO) -> int:
    step = evolve_reverse if args.reverse else evolve
    for line in _lines(args.config, stdin):
        c = parse_config(line)
        states = [c]
        for _ in range(args.steps):
            states.append(step(states[-1], args.method))
        shown = states if args.trace else [states[-1]]
        # align every printed state on a common box range
        filled = [s for s in [c, *shown] if not s.is_empty()]
        start = min((s.origin for s in filled), default=None)
        stop = max((s.end + 1 for s in filled), default=None)
        for s in shown:
            out.write(format_config(s, start, stop) + "\n")
    return 0


def _solitons(e: Excursion, flavor: str):
    if flavor == "tree":
        return tree_solitons(e)
    return decompose(e, flavor.upper())


def cmd_decompose(args, out: TextIO, stdin: TextIO) -> int:
    for line in _lines(args.config, stdin):
        c = parse_config(line)
        out.write(f"config {format_config(c)}\n")
        for gap, e in split_excursions(c):
            out.write(f"excursion gap={gap} {e}\n")
            sols = _solitons(e, args.flavor)
            for g in sorted(sols, key=lambda g: g.boxes):
                out.write(f"  soliton {g.size} head {_fmt_ints(g.head)} tail {_fmt_ints(g.tail)}\n")
            if args.flavor == "tree":
                d = tree_slot_diagram(tree_of(e))
            else:
                d = slot_diagram(e, args.flavor.upper(), sols)
            out.write(f"  diagram {d.to_json()}\n")
    return 0


def _young_from_input(lines: list[str]) -> YoungDiagram:
    diagrams = []
    for ln in lines:
        body = ln.split(None, 1)[1] if ln.startswith("diagram ") else ln
        if body.startswith("{"):
            diagrams.append(SlotDiagram.from_json(body))
    if diagrams:
        return merge_young(YoungDiagram.from_counts(d.counts) for d in diagrams)
    parts = []
    for ln in lines:
        if ln.startswith(("config ", "excursion ", "soliton ")):
            continue
        c = parse_config(ln)
        parts.extend(YoungDiagram.from_counts(slot_diagram(e).counts) for _, e in split_excursions(c))
    return merge_young(parts)


def cmd_young(args, out: TextIO, stdin: TextIO) -> int:
    if args.rows is not None:
        y = YoungDiagram(tuple(_ints(args.rows)))
    elif args.counts is not None:
        y = YoungDiagram.from_counts(_ints(args.counts))
    elif args.merge:
        y = merge_young(YoungDiagram(tuple(_ints(p))) for p in args.merge)
    else:
        y = _young_from_input(_lines(args.input, stdin))
    out.write(f"rows {_fmt_ints(y.rows)}\n")
    out.write(f"counts {_fmt_ints(y.counts)}\n")
    out.write(f"conjugate {_fmt_ints(y.conjugate().rows)}\n")
    return 0


def cmd_tree(args, out: TextIO, stdin: TextIO) -> int:
    if args.diagram is not None:
        t = build_tree(SlotDiagram.from_json(args.diagram))
    else:
        source = args.of if args.of is not None else args.input
        t = tree_of(parse_excursion(_lines(source, stdin)[0] if source in (None, "-") else source))
    out.write(f"{contour_of(t)}\n")
    if args.format == "svg":
        out.write(render(t, "tree", "svg"))
    else:
        out.write(render(t, "tree", "ascii", branches=args.branches))
        if args.branches:
            out.write(f"diagram {tree_slot_diagram(t).to_json()}\n")
    return 0


def cmd_sample(args, out: TextIO, stdin: TextIO) -> int:
    params = alpha_of_lambda(args.lam)
    samples = sample_excursions(params, args.count, seed=args.seed)
    out.write(f"# rng={RNG_ALGORITHM} seed={args.seed} lambda={args.lam} K={params.K} "
              f"tail_bound={params.tail_bound:.3g}\n")
    if args.emit == "excursions":
        for _, e in samples:
            out.write(f"{e}\n")
    elif args.emit == "diagrams":
        for d, _ in samples:
            out.write(f"{d.to_json()}\n")
    else:
        freq = Counter(e for _, e in samples)
        out.write("excursion,n,count,empirical,exact,stderr\n")
        for e in sorted(freq, key=lambda e: (e.n, e.steps)):
            p = nu_weight(e, params)
            se = math.sqrt(p * (1 - p) / args.count)
            out.write(f"{e},{e.n},{freq[e]},{freq[e] / args.count:.6f},{p:.6f},{se:.6f}\n")
    return 0


def cmd_count(args, out: TextIO, stdin: TextIO) -> int:
    if args.counts is not None:
        out.write(f"{count_trees(_ints(args.counts))}\n")
        return 0
    from .core import catalan

    total = 0
    out.write("counts,trees\n")
    for v in count_vectors(args.n):
        c = count_trees(v)
        total += c
        out.write(f"{' '.join(map(str, v)) or '-'},{c}\n")
    out.write(f"total,{total}\ncatalan,{catalan(args.n)}\n")
    return 0


def cmd_verify(args, out: TextIO, stdin: TextIO) -> int:
    results = checks.run_all(args.max_n, args.random, args.seed)
    for r in results:
        out.write(r.line() + "\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        sys.stderr.write(f"error:verify-failed: {', '.join(failed)}\n")
        return 1
    return 0


def cmd_render(args, out: TextIO, stdin: TextIO) -> int:
    text = args.input
    lines = _lines(text, stdin)
    obj: BallConfig | Excursion = parse_config(lines[0]) if lines else BallConfig(0, b"")
    out.write(render(obj, args.object, args.format, branches=args.branches))
    return 0


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bbs", description="Box-ball system toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", help="apply T (or T*) to a configuration")
    ev.add_argument("config", nargs="?", help="configuration text; stdin when omitted")
    ev.add_argument("--steps", type=int, default=1)
    ev.add_argument("--method", choices=METHODS, default="carrier")
    ev.add_argument("--reverse", action="store_true", help="apply T* instead of T")
    ev.add_argument("--trace", action="store_true", help="print every intermediate state")
    ev.set_defaults(func=cmd_evolve)

    de = sub.add_parser("decompose", help="soliton decomposition and slot diagrams")
    de.add_argument("config", nargs="?")
    de.add_argument("--flavor", type=str.lower, choices=("ts", "ht", "tree"), default="ht")
    de.set_defaults(func=cmd_decompose)

    yo = sub.add_parser("young", help="Young diagram bookkeeping")
    yo.add_argument("input", nargs="?")
    yo.add_argument("--rows")
    yo.add_argument("--counts")
    yo.add_argument("--merge", nargs="+", metavar="ROWS")
    yo.set_defaults(func=cmd_young)

    tr = sub.add_parser("tree", help="planar tree of an excursion")
    tr.add_argument("input", nargs="?")
    tr.add_argument("--of", help="excursion word")
    tr.add_argument("--diagram", help="slot diagram JSON to build the tree from")
    tr.add_argument("--branches", type=str.upper, choices=ALGORITHMS)
    tr.add_argument("--format", choices=FORMATS, default="ascii")
    tr.set_defaults(func=cmd_tree)

    sa = sub.add_parser("sample", help="sample random-walk excursions")
    sa.add_argument("--lambda", dest="lam", type=float, required=True)
    sa.add_argument("--count", type=int, default=10)
    sa.add_argument("--seed", type=int, default=0)
    sa.add_argument("--emit", choices=_EMIT, default="excursions")
    sa.set_defaults(func=cmd_sample)

    co = sub.add_parser("count", help="count planar trees by branch content")
    g = co.add_mutually_exclusive_group(required=True)
    g.add_argument("--counts", help="n_1 .. n_M")
    g.add_argument("--n", type=int, help="tabulate all contents with sum k n_k = n")
    co.set_defaults(func=cmd_count)

    ve = sub.add_parser("verify", help="run the cross-check suites")
    ve.add_argument("--max-n", type=int, default=6)
    ve.add_argument("--random", type=int, default=200)
    ve.add_argument("--seed", type=int, default=0)
    ve.set_defaults(func=cmd_verify)

    re_ = sub.add_parser("render", help="draw a configuration, walk, pairing or tree")
    re_.add_argument("input", nargs="?")
    re_.add_argument("--object", choices=OBJECTS, default="walk")
    re_.add_argument("--format", choices=FORMATS, default="ascii")
    re_.add_argument("--branches", type=str.upper, choices=ALGORITHMS)
    re_.set_defaults(func=cmd_render)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, stdin: TextIO | None = None) -> int:
    out = out or sys.stdout
    stdin = stdin or sys.stdin
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out, stdin)
    except BoxBallError as exc:
        sys.stderr.write(f"error:{exc.category}: {exc}\n")
        return 1
    except (ValueError, IndexError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error:invalid-input: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
