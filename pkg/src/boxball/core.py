"""Ball configurations, walks, records, runs and excursions.

A configuration lives on the integer line.  Only a finite window is stored;
every box outside it is empty.  The walk of a configuration goes one unit up
at a ball and one unit down at an empty box, and is anchored so that its
height is 0 just before the first stored box.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import groupby
from typing import Iterable, Sequence

from .errors import (
    EnumerationLimitError,
    MalformedExcursionError,
    MalformedWalkError,
    NotStrictError,
    ParseError,
)

ENUMERATION_LIMIT = 12

_BIT_ALIASES = {
    "0": 0, "1": 1,
    ")": 0, "(": 1,
    ".": 0, "x": 1,
    "D": 0, "U": 1,
}
_EMPTY_WORDS = {"", "-", "∅"}


@dataclass(frozen=True)
class BallConfig:
    """Finite-support occupancy of boxes.

    ``cells[i]`` is the content of box ``origin + i``.  Leading and trailing
    zeros are folded into the vacuum on construction, so two configurations
    compare equal exactly when they have the same balls.  The empty
    configuration has ``origin == 0``.
    """

    origin: int
    cells: bytes

    def __post_init__(self):
        cells = self.cells
        if not isinstance(cells, bytes):
            cells = bytes(cells)
        if cells.translate(None, b"\x00\x01"):
            raise ParseError("cells must be 0/1 values")
        lo = cells.find(1)
        if lo < 0:
            object.__setattr__(self, "origin", 0)
            object.__setattr__(self, "cells", b"")
            return
        hi = cells.rfind(1)
        object.__setattr__(self, "origin", self.origin + lo)
        object.__setattr__(self, "cells", cells[lo:hi + 1])

    @classmethod
    def from_bits(cls, bits: Iterable[int], origin: int = 1) -> BallConfig:
        return cls(origin, bytes(bits))

    @classmethod
    def from_positions(cls, positions: Iterable[int]) -> BallConfig:
        pos = sorted(set(positions))
        if not pos:
            return cls(0, b"")
        buf = bytearray(pos[-1] - pos[0] + 1)
        for p in pos:
            buf[p - pos[0]] = 1
        return cls(pos[0], bytes(buf))

    @classmethod
    def parse(cls, text: str) -> BallConfig:
        return parse_config(text)

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, box: int) -> int:
        i = box - self.origin
        if 0 <= i < len(self.cells):
            return self.cells[i]
        return 0

    def __str__(self) -> str:
        return format_config(self)

    @property
    def end(self) -> int:
        """Last box of the support (``origin - 1`` when empty)."""
        return self.origin + len(self.cells) - 1

    @property
    def balls(self) -> int:
        return self.cells.count(1)

    def is_empty(self) -> bool:
        return not self.cells

    def positions(self) -> list[int]:
        o = self.origin
        return [o + i for i, c in enumerate(self.cells) if c]

    def window(self, start: int, stop: int) -> tuple[int, ...]:
        """Contents of boxes ``start .. stop - 1``."""
        return tuple(self[i] for i in range(start, stop))

    def shifted(self, offset: int) -> BallConfig:
        return BallConfig(self.origin + offset, self.cells) if self.cells else self


@dataclass(frozen=True)
class Walk:
    """Heights ``heights[j]`` of the walk at index ``anchor_index + j``.

    The step ending at index ``i`` encodes box ``i``.
    """

    anchor_index: int
    heights: tuple[int, ...]

    def __post_init__(self):
        h = tuple(self.heights)
        if not h:
            raise MalformedWalkError("a walk needs at least one height")
        for a, b in zip(h, h[1:]):
            if abs(b - a) != 1:
                raise MalformedWalkError(f"non-unit increment {a} -> {b}")
        object.__setattr__(self, "heights", h)

    def __len__(self) -> int:
        return len(self.heights) - 1

    def at(self, index: int) -> int:
        return self.heights[index - self.anchor_index]

    def normalized(self) -> Walk:
        h0 = self.heights[0]
        return Walk(self.anchor_index, tuple(h - h0 for h in self.heights))


@dataclass(frozen=True)
class Excursion:
    """A soft excursion as a word over ``U``/``D``; ``""`` is the empty one."""

    steps: str = ""

    def __post_init__(self):
        h = 0
        for s in self.steps:
            if s == "U":
                h += 1
            elif s == "D":
                h -= 1
                if h < 0:
                    raise MalformedExcursionError(f"{self.steps!r} goes below zero")
            else:
                raise MalformedExcursionError(f"bad step {s!r}")
        if h:
            raise MalformedExcursionError(f"{self.steps!r} does not return to zero")

    @classmethod
    def parse(cls, text: str) -> Excursion:
        return parse_excursion(text)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> Excursion:
        return cls("".join("U" if b else "D" for b in bits))

    def __str__(self) -> str:
        return self.steps or "∅"

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def n(self) -> int:
        return len(self.steps) // 2

    def bits(self) -> tuple[int, ...]:
        return tuple(1 if s == "U" else 0 for s in self.steps)

    def heights(self) -> tuple[int, ...]:
        out = [0]
        for s in self.steps:
            out.append(out[-1] + (1 if s == "U" else -1))
        return tuple(out)

    def is_strict(self) -> bool:
        return self.n > 0 and 0 not in self.heights()[1:-1]

    def to_config(self, origin: int = 1) -> BallConfig:
        return BallConfig(origin, bytes(self.bits()))

    def parens(self) -> str:
        return self.steps.replace("U", "(").replace("D", ")")


EMPTY = Excursion("")


@dataclass(frozen=True)
class Run:
    """A maximal block of equal contents.

    The two vacuum end-runs have ``length == math.inf`` and
    ``start == -math.inf`` / the first box after the support.
    """

    start: int | float
    length: int | float
    content: int

    @property
    def infinite(self) -> bool:
        return self.length == math.inf


@dataclass(frozen=True)
class RecordSet:
    """Records of the walk of a configuration.

    ``positions`` runs from the box just left of the support (level 0) to the
    first record after the terminal descent.  Every box at or left of the
    first position, and at or right of the last, is a record.  For the empty
    configuration ``positions`` is empty and every box is a record.
    """

    positions: tuple[int, ...]
    levels: tuple[int, ...]

    def is_record(self, box: int) -> bool:
        if not self.positions:
            return True
        if box <= self.positions[0] or box >= self.positions[-1]:
            return True
        i = _bisect(self.positions, box)
        return i < len(self.positions) and self.positions[i] == box

    def level(self, box: int) -> int:
        if not self.positions:
            raise KeyError(box)
        if box <= self.positions[0]:
            return self.levels[0] - (self.positions[0] - box)
        if box >= self.positions[-1]:
            return self.levels[-1] + (box - self.positions[-1])
        i = _bisect(self.positions, box)
        if i < len(self.positions) and self.positions[i] == box:
            return self.levels[i]
        raise KeyError(box)


def _bisect(seq: Sequence[int], x: int) -> int:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


# -- text formats ---------------------------------------------------------

_ORIGIN_RE = re.compile(r"^(.*?)@\s*([+-]?\d+)\s*$", re.S)


def parse_config(text: str) -> BallConfig:
    """Parse ``0110@3``-style text.

    Accepted alphabets: ``01``, ``()``, ``.x`` and ``UD``.  Whitespace is
    ignored.  Without an ``@origin`` suffix the first character is box 1.
    """
    origin = 1
    m = _ORIGIN_RE.match(text)
    if m:
        text, origin = m.group(1), int(m.group(2))
    word = "".join(text.split())
    if word in _EMPTY_WORDS:
        return BallConfig(origin, b"")
    try:
        bits = bytes(_BIT_ALIASES[c] for c in word)
    except KeyError as exc:
        raise ParseError(f"unexpected character {exc.args[0]!r} in configuration") from None
    return BallConfig(origin, bits)


def format_config(config: BallConfig, start: int | None = None, stop: int | None = None) -> str:
    """Inverse of :func:`parse_config`, padding with zeros to ``start``/``stop``."""
    if config.is_empty():
        lo = 0 if start is None else start
        hi = lo + 1 if stop is None else max(stop, lo + 1)
        return "0" * (hi - lo) + f"@{lo}"
    lo = config.origin if start is None else min(start, config.origin)
    hi = config.end + 1 if stop is None else max(stop, config.end + 1)
    body = "".join("1" if config[i] else "0" for i in range(lo, hi))
    return f"{body}@{lo}"


def parse_excursion(text: str) -> Excursion:
    word = "".join(text.split())
    if word in _EMPTY_WORDS:
        return EMPTY
    table = {"U": "U", "D": "D", "(": "U", ")": "D", "1": "U", "0": "D"}
    try:
        return Excursion("".join(table[c] for c in word))
    except KeyError as exc:
        raise ParseError(f"unexpected character {exc.args[0]!r} in excursion") from None


# -- walks ----------------------------------------------------------------

def _extent_end(config: BallConfig) -> int:
    """Last box that is not a record (``origin - 1`` for an empty config)."""
    if config.is_empty():
        return config.origin - 1
    h = low = 0
    for c in config.cells:
        h += 1 if c else -1
        if h < low:
            low = h
    # boxes after the support descend one level each; they are non-records
    # until the running minimum is beaten
    return config.end + (h - low)


def extent(config: BallConfig) -> tuple[int, int]:
    """Half-open box range holding every ball and every non-record box."""
    return config.origin, _extent_end(config) + 1


def encode_walk(config: BallConfig, window: tuple[int, int] | None = None) -> Walk:
    """Walk over ``window`` (half-open boxes), height 0 just before it.

    The default window is :func:`extent`, so the walk ends on the level of
    the next record.
    """
    start, stop = extent(config) if window is None else window
    if stop < start:
        raise ValueError("window stop before start")
    h = 0
    heights = [0]
    for i in range(start, stop):
        h += 1 if config[i] else -1
        heights.append(h)
    return Walk(start - 1, tuple(heights))


def decode_walk(walk: Walk) -> BallConfig:
    h = walk.heights
    bits = bytearray(len(h) - 1)
    for j in range(1, len(h)):
        d = h[j] - h[j - 1]
        if d == 1:
            bits[j - 1] = 1
        elif d != -1:
            raise MalformedWalkError(f"non-unit increment at index {walk.anchor_index + j}")
    return BallConfig(walk.anchor_index + 1, bytes(bits))


def find_records(config: BallConfig) -> RecordSet:
    if config.is_empty():
        return RecordSet((), ())
    positions = [config.origin - 1]
    levels = [0]
    h = low = 0
    box = config.origin
    for c in config.cells:
        h += 1 if c else -1
        if h < low:
            low = h
            positions.append(box)
            levels.append(-h)
        box += 1
    # the terminal descent reaches a fresh minimum after h - low more steps
    positions.append(config.end + (h - low) + 1)
    levels.append(-low + 1)
    return RecordSet(tuple(positions), tuple(levels))


def excursion_sequence(config: BallConfig) -> list[tuple[int, Excursion]]:
    """Every excursion between consecutive records, empty ones included.

    Returns ``(first_box, excursion)`` pairs from the record left of the
    support up to the record after the terminal descent.
    """
    rec = find_records(config)
    out = []
    for a, b in zip(rec.positions, rec.positions[1:]):
        word = "".join("U" if config[i] else "D" for i in range(a + 1, b))
        out.append((a + 1, Excursion(word)))
    return out


def split_excursions(config: BallConfig) -> list[tuple[int, Excursion]]:
    """Nonempty excursions with the number of empty excursions before each.

    The first gap is always 0; pass ``origin=config.origin`` to
    :func:`concatenate` to invert.
    """
    parts = []
    gap = 0
    for _, e in excursion_sequence(config):
        if e.n == 0:
            gap += 1
        else:
            parts.append((gap if parts else 0, e))
            gap = 0
    return parts


def concatenate(parts: Sequence[tuple[int, Excursion]], origin: int = 1) -> BallConfig:
    """Glue excursions, each followed by its record down-step.

    A gap ``g`` inserts ``g`` extra record boxes (empty excursions) before
    its excursion; the first gap shifts the start away from ``origin``.
    """
    bits = bytearray()
    for i, (gap, e) in enumerate(parts):
        if gap < 0:
            raise ValueError("gaps must be nonnegative")
        if i:
            bits.append(0)
        bits.extend(bytes(gap))
        bits.extend(e.bits())
    return BallConfig(origin, bytes(bits))


def runs(config: BallConfig) -> list[Run]:
    """Alternating tiling of the line, vacuum end-runs included."""
    if config.is_empty():
        return [Run(-math.inf, math.inf, 0)]
    out = [Run(-math.inf, math.inf, 0)]
    box = config.origin
    for c, grp in groupby(config.cells):
        n = sum(1 for _ in grp)
        out.append(Run(box, n, c))
        box += n
    out.append(Run(box, math.inf, 0))
    return out


# -- enumeration ----------------------------------------------------------

def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _dyck_words(n: int) -> tuple[str, ...]:
    words = []

    def grow(prefix: list[str], ups: int, downs: int) -> None:
        if ups == downs == n:
            words.append("".join(prefix))
            return
        if ups < n:
            prefix.append("U")
            grow(prefix, ups + 1, downs)
            prefix.pop()
        if downs < ups:
            prefix.append("D")
            grow(prefix, ups, downs + 1)
            prefix.pop()

    grow([], 0, 0)
    return tuple(sorted(words))


def enumerate_excursions(n: int, limit: int = ENUMERATION_LIMIT) -> list[Excursion]:
    """All soft excursions of length ``2n`` in lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > limit:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration bound {limit}")
    return [Excursion(w) for w in _dyck_words(n)]


def strictify(e: Excursion) -> Excursion:
    return Excursion("U" + e.steps + "D")


def soften(e: Excursion) -> Excursion:
    if not e.is_strict():
        raise NotStrictError(f"{e} is not a strict excursion")
    return Excursion(e.steps[1:-1])


def strict_count(n: int) -> int:
    """Number of strict excursions of length ``2n``."""
    if n <= 0:
        return 0
    return math.comb(2 * (n - 1), n - 1) // n
