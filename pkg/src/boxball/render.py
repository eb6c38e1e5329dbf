"""Text and SVG pictures of configurations, walks, pairings and trees."""
from __future__ import annotations

import xml.etree.ElementTree as ET

from .core import BallConfig, Excursion, extent, find_records, split_excursions
from .dynamics import pairing_profile
from .trees import PlanarTree, branch_decompose, tree_of

FORMATS = ("ascii", "svg")
OBJECTS = ("config", "walk", "pairing", "tree")

_CELL = 20


def flattened_walk(config: BallConfig) -> list[tuple[int, str]]:
    """``(height before the box, glyph)`` for every box, both bracketing records included.

    Record boxes are drawn as ``_`` at level 0; every other box is a ``/``
    or ``\\`` step measured from the current record level.
    """
    if config.is_empty():
        return [(0, "_")]
    rec = find_records(config)
    lo, hi = extent(config)
    out = [(0, "_")]
    h = 0
    for box in range(lo, hi + 1):
        if rec.is_record(box):
            out.append((0, "_"))
            h = 0
        elif config[box]:
            out.append((h, "/"))
            h += 1
        else:
            out.append((h - 1, "\\"))
            h -= 1
    return out


def ascii_walk(config: BallConfig) -> str:
    cols = flattened_walk(config)
    top = max(y for y, _ in cols)
    rows = [[" "] * len(cols) for _ in range(top + 1)]
    for x, (y, g) in enumerate(cols):
        rows[y][x] = g
    return "\n".join("".join(r).rstrip() for r in reversed(rows)) + "\n"


def ascii_config(config: BallConfig) -> str:
    if config.is_empty():
        return ".@0\n"
    body = "".join("x" if c else "." for c in config.cells)
    return f"{body}@{config.origin}\n"


def ascii_pairing(config: BallConfig) -> str:
    """The parenthesis word, then one line of ``[--]`` arcs per iteration."""
    forest = pairing_profile(config)
    if not forest.pairs:
        return "\n"
    lo = config.origin
    hi = max(b for _, b, _ in forest.pairs)
    word = "".join("(" if config[i] else ")" for i in range(lo, hi + 1))
    lines = [word]
    for layer in forest.layers():
        row = [" "] * (hi - lo + 1)
        for a, b in layer:
            row[a - lo] = "["
            row[b - lo] = "]"
            for i in range(a + 1, b):
                row[i - lo] = "-"
        lines.append("".join(row).rstrip())
    return "\n".join(lines) + "\n"


def ascii_tree(t: PlanarTree, branches: str | None = None) -> str:
    """Root ``*`` and nodes ``o``; with ``branches`` each node shows its branch size."""
    label = ["o"] * len(t)
    if branches:
        col = branch_decompose(t, branches)
        label = ["*"] + [f"o{col.size_of(v)}" for v in range(1, len(t))]
    lines = ["*"]
    stack = [(c, "", i == len(t.children[0]) - 1) for i, c in reversed(list(enumerate(t.children[0])))]
    while stack:
        v, prefix, last = stack.pop()
        lines.append(prefix + ("`-- " if last else "|-- ") + label[v])
        inner = prefix + ("    " if last else "|   ")
        ch = t.children[v]
        for i in range(len(ch) - 1, -1, -1):
            stack.append((ch[i], inner, i == len(ch) - 1))
    return "\n".join(lines) + "\n"


# -- svg ------------------------------------------------------------------

def _svg(width: int, height: int) -> ET.Element:
    return ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(width), "height": str(height),
        "viewBox": f"0 0 {width} {height}",
    })


def _dump(root: ET.Element) -> str:
    return ET.tostring(root, encoding="unicode") + "\n"


def svg_walk(config: BallConfig) -> str:
    cols = flattened_walk(config)
    top = max(y for y, _ in cols) + 1
    w, h = (len(cols) + 2) * _CELL, (top + 2) * _CELL
    root = _svg(w, h)
    base = h - _CELL
    ET.SubElement(root, "line", {"x1": "0", "y1": str(base), "x2": str(w), "y2": str(base),
                                 "stroke": "#bbb", "stroke-dasharray": "4 4"})
    pts = []
    x = _CELL
    level = 0
    pts.append((x, base))
    for y, g in cols:
        x += _CELL
        if g == "/":
            level = y + 1
        elif g == "\\":
            level = y
        else:
            level = 0
        pts.append((x, base - level * _CELL))
    ET.SubElement(root, "polyline", {"points": " ".join(f"{a},{b}" for a, b in pts),
                                     "fill": "none", "stroke": "black", "stroke-width": "2"})
    return _dump(root)


def svg_config(config: BallConfig) -> str:
    n = max(len(config), 1)
    root = _svg((n + 2) * _CELL, 3 * _CELL)
    for i in range(n):
        x = (i + 1) * _CELL
        ET.SubElement(root, "rect", {"x": str(x), "y": str(_CELL), "width": str(_CELL), "height": str(_CELL),
                                     "fill": "white", "stroke": "black"})
        if config.cells and config.cells[i]:
            ET.SubElement(root, "circle", {"cx": str(x + _CELL // 2), "cy": str(_CELL + _CELL // 2),
                                           "r": str(_CELL // 3), "fill": "black"})
    return _dump(root)


def svg_pairing(config: BallConfig) -> str:
    forest = pairing_profile(config)
    hi = max((b for _, b, _ in forest.pairs), default=config.origin)
    n = hi - config.origin + 1
    root = _svg((n + 2) * _CELL, (forest.M + 3) * _CELL)
    base = (forest.M + 2) * _CELL
    for i in range(n):
        box = config.origin + i
        ET.SubElement(root, "text", {"x": str((i + 1) * _CELL + 6), "y": str(base + 14),
                                     "font-family": "monospace"}).text = "(" if config[box] else ")"
    for a, b, it in forest.pairs:
        x1 = (a - config.origin + 1) * _CELL + _CELL // 2
        x2 = (b - config.origin + 1) * _CELL + _CELL // 2
        ry = it * _CELL
        ET.SubElement(root, "path", {"d": f"M {x1} {base} A {(x2 - x1) // 2} {ry} 0 0 1 {x2} {base}",
                                     "fill": "none", "stroke": "black", "data-iteration": str(it)})
    return _dump(root)


def svg_tree(t: PlanarTree) -> str:
    g, w, h = _tree_group(t)
    root = _svg(w, h)
    root.append(g)
    return _dump(root)


def svg_forest(trees: list[PlanarTree]) -> str:
    """Trees side by side, one per excursion."""
    groups = [_tree_group(t) for t in trees] or [_tree_group(PlanarTree())]
    root = _svg(sum(w for _, w, _ in groups), max(h for _, _, h in groups))
    x = 0
    for g, w, _ in groups:
        g.set("transform", f"translate({x},0)")
        root.append(g)
        x += w
    return _dump(root)


def _tree_group(t: PlanarTree) -> tuple[ET.Element, int, int]:
    # leaves get consecutive columns; inner nodes sit over their children
    xs = [0.0] * len(t)
    depth = [0] * len(t)
    for v in range(1, len(t)):
        depth[v] = depth[t.parents[v]] + 1
    nxt = 0
    order = []
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(t.children[v]))
    for v in order:
        if not t.children[v]:
            xs[v] = nxt
            nxt += 1
    for v in reversed(order):
        ch = t.children[v]
        if ch:
            xs[v] = (xs[ch[0]] + xs[ch[-1]]) / 2
    w = (max(nxt, 1) + 1) * 2 * _CELL
    h = (max(depth) + 2) * 2 * _CELL

    def pos(v: int) -> tuple[int, int]:
        return int((xs[v] + 1) * 2 * _CELL), int((depth[v] + 1) * 2 * _CELL)

    root = ET.Element("g")
    for v in range(1, len(t)):
        (x1, y1), (x2, y2) = pos(t.parents[v]), pos(v)
        ET.SubElement(root, "line", {"x1": str(x1), "y1": str(y1), "x2": str(x2), "y2": str(y2), "stroke": "black"})
    for v in range(len(t)):
        x, y = pos(v)
        ET.SubElement(root, "circle", {"cx": str(x), "cy": str(y), "r": "6",
                                       "fill": "black" if v == 0 else "white", "stroke": "black"})
    return root, w, h


def render(obj, kind: str = "walk", fmt: str = "ascii", branches: str | None = None) -> str:
    """Dispatch on ``kind`` (config, walk, pairing, tree) and ``fmt`` (ascii, svg)."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    if kind == "tree":
        if isinstance(obj, Excursion):
            obj = tree_of(obj)
        if isinstance(obj, PlanarTree):
            return ascii_tree(obj, branches) if fmt == "ascii" else svg_tree(obj)
        trees = [tree_of(e) for _, e in split_excursions(obj)]
        if fmt == "svg":
            return svg_forest(trees)
        return "\n".join(ascii_tree(t, branches) for t in trees) if trees else ascii_tree(PlanarTree(), branches)
    if isinstance(obj, Excursion):
        obj = obj.to_config()
    table = {
        ("config", "ascii"): ascii_config, ("config", "svg"): svg_config,
        ("walk", "ascii"): ascii_walk, ("walk", "svg"): svg_walk,
        ("pairing", "ascii"): ascii_pairing, ("pairing", "svg"): svg_pairing,
    }
    try:
        return table[(kind, fmt)](obj)
    except KeyError:
        raise ValueError(f"unknown object {kind!r}") from None
