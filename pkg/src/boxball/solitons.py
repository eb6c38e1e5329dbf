"""Soliton decompositions of an excursion, slot diagrams and Young diagrams.

Box positions inside an excursion are ``1 .. 2n``; box ``0`` is the record
preceding it and box ``2n + 1`` the record that closes it.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import Excursion
from .errors import MalformedDiagramError, MalformedYoungError

FLAVORS = ("TS", "HT")


@dataclass(frozen=True)
class Soliton:
    head: tuple[int, ...]
    tail: tuple[int, ...]
    flavor: str = "TS"

    @property
    def size(self) -> int:
        return len(self.head)

    @property
    def boxes(self) -> tuple[int, ...]:
        return tuple(sorted(self.head + self.tail))

    def h(self, i: int) -> int:
        """``i``-th head box, 1-based."""
        return self.head[i - 1]

    def t(self, i: int) -> int:
        return self.tail[i - 1]


def _norm_flavor(flavor: str) -> str:
    f = flavor.upper()
    if f not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected TS or HT")
    return f


def decompose(e: Excursion, flavor: str = "TS") -> list[Soliton]:
    """Peel solitons off the leftmost smallest run until nothing is left.

    TS pairs the run with the first boxes of the run on its right.  HT does
    the same for a run of balls, but pairs a run of empty boxes with the
    nearest balls on its left, so every HT soliton has its head first.
    The trailing run of empty boxes merges with the vacuum and is never
    selected.
    """
    flavor = _norm_flavor(flavor)
    # runs[j] = [content, positions]; the last run is the infinite one
    runs: list[list] = []
    for pos, s in enumerate(e.steps, start=1):
        bit = 1 if s == "U" else 0
        if runs and runs[-1][0] == bit:
            runs[-1][1].append(pos)
        else:
            runs.append([bit, [pos]])
    out = []
    while runs:
        last = len(runs) - 1
        j = min(range(last), key=lambda i: len(runs[i][1]), default=None)
        if j is None:
            break
        bit, boxes = runs[j]
        k = len(boxes)
        if bit == 1 or flavor == "TS":
            partner = runs[j + 1][1]
            taken, runs[j + 1][1] = partner[:k], partner[k:]
        else:
            partner = runs[j - 1][1]
            taken, runs[j - 1][1] = partner[-k:], partner[:-k]
        if bit == 1:
            out.append(Soliton(tuple(boxes), tuple(taken), flavor))
        else:
            out.append(Soliton(tuple(taken), tuple(boxes), flavor))
        del runs[j]
        runs = _merge_runs(runs)
    return out


def _merge_runs(runs: list[list]) -> list[list]:
    last = len(runs) - 1
    merged: list[list] = []
    for i, (bit, boxes) in enumerate(runs):
        if not boxes and i != last:
            continue
        if merged and merged[-1][0] == bit:
            merged[-1][1] = merged[-1][1] + boxes
        else:
            merged.append([bit, boxes])
    if len(merged) == 1 and not merged[0][1]:
        return []
    return merged


def identify_slots(e: Excursion, solitons: Sequence[Soliton], k: int, flavor: str | None = None) -> tuple[int, ...]:
    """Positions of the ``k``-slots, the preceding record (box 0) first.

    TS: boxes ``h_l, t_l`` with ``l > k`` of every bigger soliton.
    HT: boxes ``h_l, t_{m-l+1}`` with ``l = 1 .. m-k``.
    """
    if flavor is None:
        flavor = solitons[0].flavor if solitons else "TS"
    flavor = _norm_flavor(flavor)
    slots = [0]
    for g in solitons:
        m = g.size
        if m <= k:
            continue
        if flavor == "TS":
            slots.extend(g.head[k:])
            slots.extend(g.tail[k:])
        else:
            slots.extend(g.head[: m - k])
            slots.extend(g.tail[k:])
    return tuple(sorted(slots))


@dataclass(frozen=True)
class SlotDiagram:
    """Soliton counts per slot.

    ``x[k - 1]`` is the vector ``x_k``; its length must be the slot count
    ``s_k = 1 + 2 * sum_{l > k} (l - k) n_l``.  The empty diagram has
    ``x == ()``.
    """

    x: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        x = tuple(tuple(int(v) for v in comp) for comp in self.x)
        object.__setattr__(self, "x", x)
        m = len(x)
        if m == 0:
            return
        if len(x[-1]) != 1 or x[-1][0] < 1:
            raise MalformedDiagramError(f"top component x_{m} must be a single positive entry, got {x[-1]}")
        for comp in x:
            if any(v < 0 for v in comp):
                raise MalformedDiagramError("slot occupancies must be nonnegative")
        for k in range(m - 1, 0, -1):
            want = self.expected_slots(k)
            if len(x[k - 1]) != want:
                raise MalformedDiagramError(f"x_{k} has {len(x[k - 1])} entries, expected s_{k}={want}")

    @classmethod
    def from_components(cls, comps: Mapping[int, Sequence[int]]) -> SlotDiagram:
        """Build from ``{k: x_k}``; components above the maximum are dropped."""
        m = max((k for k, v in comps.items() if any(v)), default=0)
        return cls(tuple(tuple(comps.get(k, (0,))) for k in range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.x)

    def component(self, k: int) -> tuple[int, ...]:
        if 1 <= k <= self.m:
            return self.x[k - 1]
        if k > self.m:
            return (0,)
        raise IndexError(k)

    def n(self, k: int) -> int:
        return sum(self.component(k))

    @property
    def counts(self) -> tuple[int, ...]:
        """``(n_1, ..., n_m)``."""
        return tuple(sum(c) for c in self.x)

    def expected_slots(self, k: int) -> int:
        return 1 + 2 * sum((l - k) * self.n(l) for l in range(k + 1, self.m + 1))

    def s(self, k: int) -> int:
        return len(self.component(k))

    @property
    def slot_counts(self) -> tuple[int, ...]:
        """``(s_1, ..., s_m)``."""
        return tuple(len(c) for c in self.x)

    @property
    def half_length(self) -> int:
        return sum(k * nk for k, nk in enumerate(self.counts, start=1))

    def to_json(self) -> str:
        return json.dumps({"m": self.m, "x": [list(c) for c in reversed(self.x)]}, separators=(", ", ": "))

    @classmethod
    def from_json(cls, text: str | Mapping) -> SlotDiagram:
        doc = json.loads(text) if isinstance(text, str) else text
        try:
            m = int(doc["m"])
            comps = [tuple(c) for c in doc["x"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDiagramError(f"bad slot diagram document: {exc}") from None
        if len(comps) != m:
            raise MalformedDiagramError(f"m={m} but {len(comps)} components given")
        return cls(tuple(reversed(comps)))


def slot_diagram(e: Excursion, flavor: str = "HT", solitons: Sequence[Soliton] | None = None) -> SlotDiagram:
    """Slot diagram of ``e`` from its TS or HT soliton decomposition.

    A ``k``-soliton is attached to slot ``i`` when its boxes lie between
    slots ``i`` and ``i + 1``; past the last slot the segment runs to the
    closing record.
    """
    flavor = _norm_flavor(flavor)
    if solitons is None:
        solitons = decompose(e, flavor)
    if not solitons:
        return SlotDiagram(())
    m = max(g.size for g in solitons)
    comps = []
    for k in range(1, m + 1):
        slots = identify_slots(e, solitons, k, flavor)
        x = [0] * len(slots)
        for g in solitons:
            if g.size != k:
                continue
            boxes = g.boxes
            i = bisect_left(slots, boxes[0]) - 1
            if i + 1 < len(slots) and boxes[-1] > slots[i + 1]:
                raise RuntimeError(f"{flavor} soliton {boxes} straddles slot {slots[i + 1]}")
            x[i] += 1
        comps.append(tuple(x))
    return SlotDiagram(tuple(comps))


def build_excursion(d: SlotDiagram, route: str = "tree") -> Excursion:
    """The excursion whose slot diagram is ``d``.

    ``route="tree"`` attaches branches to a planar tree and reads off its
    contour.  ``route="insertion"`` glues ``U^k D^k`` blocks directly into
    the word right after the chosen HT slot box.
    """
    if route == "tree":
        from .trees import build_tree, contour_of

        return contour_of(build_tree(d))
    if route == "insertion":
        return _build_by_insertion(d)
    raise ValueError(f"unknown route {route!r}")


def _build_by_insertion(d: SlotDiagram) -> Excursion:
    # each entry: (bit, soliton id, 1-based index inside head or tail)
    word: list[tuple[int, int, int]] = []
    sizes: list[int] = []
    for k in range(d.m, 0, -1):
        xk = d.component(k)
        slots = [-1]
        for pos, (bit, sid, idx) in enumerate(word):
            m = sizes[sid]
            if (bit and idx <= m - k) or (not bit and idx > k):
                slots.append(pos)
        if len(slots) != len(xk):
            raise MalformedDiagramError(f"x_{k} has {len(xk)} entries but the word offers {len(slots)} slots")
        for i in range(len(slots) - 1, -1, -1):
            block = []
            for _ in range(xk[i]):
                sid = len(sizes)
                sizes.append(k)
                block.extend((1, sid, j) for j in range(1, k + 1))
                block.extend((0, sid, j) for j in range(1, k + 1))
            at = slots[i] + 1
            word[at:at] = block
    return Excursion("".join("U" if b else "D" for b, _, _ in word))


# -- Young diagrams -------------------------------------------------------

@dataclass(frozen=True)
class YoungDiagram:
    """Rows ``r_1 >= r_2 >= ... >= r_M > 0``.

    Row ``i`` counts pairing arcs drawn at iteration ``i``; a column of
    height ``k`` is a ``k``-soliton.
    """

    rows: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows):
            raise MalformedYoungError(f"rows must be positive, got {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise MalformedYoungError(f"rows must be non-increasing, got {rows}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> YoungDiagram:
        """From ``(n_1, ..., n_M)``: ``r_i = sum_{m >= i} n_m``."""
        if any(c < 0 for c in counts):
            raise MalformedYoungError("column counts must be nonnegative")
        rows = []
        acc = 0
        for c in reversed(counts):
            acc += c
            rows.append(acc)
        return cls(tuple(r for r in reversed(rows) if r))

    @classmethod
    def from_columns(cls, columns: Iterable[int]) -> YoungDiagram:
        cols = sorted((c for c in columns if c), reverse=True)
        if not cols:
            return cls(())
        return cls(tuple(sum(1 for c in cols if c >= i) for i in range(1, cols[0] + 1)))

    @property
    def M(self) -> int:
        return len(self.rows)

    @property
    def counts(self) -> tuple[int, ...]:
        """``n_i = r_i - r_{i+1}`` with ``r_{M+1} = 0``."""
        r = self.rows + (0,)
        return tuple(r[i] - r[i + 1] for i in range(self.M))

    @property
    def columns(self) -> tuple[int, ...]:
        return self.conjugate().rows

    def conjugate(self) -> YoungDiagram:
        if not self.rows:
            return self
        return YoungDiagram(tuple(sum(1 for r in self.rows if r >= j) for j in range(1, self.rows[0] + 1)))

    @property
    def size(self) -> int:
        return sum(self.rows)

    def __str__(self) -> str:
        return " ".join(map(str, self.rows))


def young_convert(rows: Sequence[int] | None = None, counts: Sequence[int] | None = None,
                  diagram: SlotDiagram | None = None) -> YoungDiagram:
    """Young diagram from exactly one of: rows, column counts, slot diagram."""
    given = [a is not None for a in (rows, counts, diagram)]
    if sum(given) != 1:
        raise ValueError("pass exactly one of rows, counts, diagram")
    if rows is not None:
        return YoungDiagram(tuple(rows))
    if counts is not None:
        return YoungDiagram.from_counts(tuple(counts))
    return YoungDiagram.from_counts(diagram.counts)


def merge_young(parts: Iterable[YoungDiagram]) -> YoungDiagram:
    """Pool the columns of all parts and re-sort them."""
    cols: list[int] = []
    for p in parts:
        cols.extend(p.columns)
    return YoungDiagram.from_columns(cols)


def soliton_counts(solitons: Iterable[Soliton]) -> tuple[int, ...]:
    sizes = [g.size for g in solitons]
    if not sizes:
        return ()
    out = [0] * max(sizes)
    for s in sizes:
        out[s - 1] += 1
    return tuple(out)


def slot_count_formula(counts: Sequence[int], k: int) -> int:
    return 1 + 2 * sum((l - k) * counts[l - 1] for l in range(k + 1, len(counts) + 1))


def excursion_length(counts: Sequence[int]) -> int:
    return 2 * sum(k * c for k, c in enumerate(counts, start=1))


INF = math.inf
