"""One-step evolution T under the equivalent update rules.

``carrier`` is the fast path (vectorised, linear time).  The remaining
rules are kept as independent oracles and are cross-checked against it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import BallConfig, encode_walk
from .errors import UndefinedDynamicsError

METHODS = ("carrier", "pairing", "parentheses", "reflection", "sequential")


@dataclass(frozen=True)
class PairingForest:
    """Arcs of the iterated ball/empty-box pairing.

    ``pairs`` holds ``(ball_box, empty_box, iteration)`` sorted by ball box;
    ``r[i - 1]`` is the number of arcs drawn at iteration ``i``.
    """

    pairs: tuple[tuple[int, int, int], ...]
    r: tuple[int, ...]

    @property
    def M(self) -> int:
        return len(self.r)

    def transport(self) -> BallConfig:
        return BallConfig.from_positions(b for _, b, _ in self.pairs)

    def layers(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in self.r]
        for a, b, it in self.pairs:
            out[it - 1].append((a, b))
        return out


def carrier_stream(bits: Iterable[int]) -> Iterator[int]:
    """Run the carrier over a stream of box contents.

    Yields one output bit per input bit, then drains the carrier into the
    vacuum (one extra ``1`` per ball still carried).
    """
    load = 0
    for b in bits:
        if b:
            load += 1
            yield 0
        elif load:
            load -= 1
            yield 1
        else:
            yield 0
    for _ in range(load):
        yield 1


def _carrier(config: BallConfig) -> BallConfig:
    if config.is_empty():
        return config
    eta = np.frombuffer(config.cells, dtype=np.uint8)
    steps = eta.astype(np.int32)
    steps *= 2
    steps -= 1
    walk = np.empty(len(eta) + 1, dtype=np.int32)
    walk[0] = 0
    np.cumsum(steps, out=walk[1:])
    # carrier load entering box i is the height above the running minimum
    low = np.minimum.accumulate(walk)
    load = walk - low
    out = np.zeros(len(eta) + int(load[-1]), dtype=np.uint8)
    out[: len(eta)] = (eta == 0) & (load[:-1] > 0)
    out[len(eta):] = 1
    return BallConfig(config.origin, out.tobytes())


def pairing_profile(config: BallConfig) -> PairingForest:
    """Iterate the pairing of adjacent ball/empty boxes.

    At each iteration every ball immediately followed (among the boxes not
    yet paired) by an empty box is joined to it, all such pairs at once.
    """
    if config.is_empty():
        return PairingForest((), ())
    cells = config.cells
    n = len(cells)
    # the vacuum on the right supplies at most one empty box per ball
    width = n + config.balls
    bit = bytearray(cells) + bytearray(width - n)
    nxt = list(range(1, width + 1))
    prv = list(range(-1, width - 1))
    alive = bytearray(b"\x01") * width
    cand = [i for i in range(n) if bit[i] and not bit[i + 1]]
    pairs = []
    r = []
    it = 0
    while cand:
        it += 1
        joints = []
        for a in cand:
            b = nxt[a]
            pairs.append((a, b, it))
            alive[a] = alive[b] = 0
            p, q = prv[a], nxt[b]
            if p >= 0:
                nxt[p] = q
            if q < width:
                prv[q] = p
            joints.append(p)
        r.append(len(cand))
        cand = []
        for p in joints:
            if p >= 0 and alive[p] and bit[p]:
                q = nxt[p]
                if q < width and not bit[q]:
                    cand.append(p)
        cand = sorted(set(cand))
    o = config.origin
    pairs.sort()
    return PairingForest(tuple((a + o, b + o, k) for a, b, k in pairs), tuple(r))


def _pairing(config: BallConfig) -> BallConfig:
    return pairing_profile(config).transport()


def _parentheses(config: BallConfig) -> BallConfig:
    stack: list[int] = []
    targets = []
    box = config.origin
    for c in config.cells:
        if c:
            stack.append(box)
        elif stack:
            stack.pop()
            targets.append(box)
        box += 1
    # unmatched open parentheses close in the vacuum, innermost first
    while stack:
        stack.pop()
        targets.append(box)
        box += 1
    return BallConfig.from_positions(targets)


def _reflection(config: BallConfig) -> BallConfig:
    if config.is_empty():
        return config
    walk = encode_walk(config)
    low = 0
    prev = 0
    bits = bytearray()
    for h in walk.heights[1:]:
        low = min(low, h)
        reflected = 2 * low - h
        bits.append(1 if reflected > prev else 0)
        prev = reflected
    return BallConfig(walk.anchor_index + 1, bytes(bits))


def _sequential(config: BallConfig, order: Sequence[int] | None = None) -> BallConfig:
    """Clone every ball and push clones to the first free box on the right.

    ``order`` lists ball boxes in processing order; the default is left to
    right.  The outcome does not depend on the order.
    """
    balls = config.positions()
    if order is None:
        order = balls
    elif sorted(order) != balls:
        raise ValueError("order must be a permutation of the ball boxes")
    if not balls:
        return config
    o = config.origin
    width = len(config) + len(balls) + 1
    # parent[i] points towards the first box >= i holding no ball
    parent = list(range(width + 1))
    for p in balls:
        parent[p - o] = p - o + 1

    def free(i: int) -> int:
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    clones = []
    for p in order:
        y = free(p - o + 1)
        parent[y] = y + 1
        clones.append(y + o)
    return BallConfig.from_positions(clones)


_RULES = {
    "carrier": _carrier,
    "pairing": _pairing,
    "parentheses": _parentheses,
    "reflection": _reflection,
    "sequential": _sequential,
}


def evolve(config: BallConfig, method: str = "carrier") -> BallConfig:
    """One step of the dynamics; every method gives the same configuration.

    The result keeps absolute box positions, so ``result.origin -
    config.origin`` is the net translation of the support start.
    """
    try:
        rule = _RULES[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}") from None
    return rule(config)


def evolve_sequential(config: BallConfig, order: Sequence[int] | None = None) -> BallConfig:
    return _sequential(config, order)


def random_order(config: BallConfig, rng: random.Random) -> list[int]:
    order = config.positions()
    rng.shuffle(order)
    return order


def evolve_t(config: BallConfig, t: int, method: str = "carrier") -> BallConfig:
    if t < 0:
        raise ValueError("t must be nonnegative")
    for _ in range(t):
        config = evolve(config, method)
    return config


def trajectory(config: BallConfig, t: int, method: str = "carrier") -> list[BallConfig]:
    out = [config]
    for _ in range(t):
        out.append(evolve(out[-1], method))
    return out


def mirror(config: BallConfig) -> BallConfig:
    """Reflect box ``i`` to box ``-i``."""
    if config.is_empty():
        return config
    return BallConfig(-config.end, config.cells[::-1])


def evolve_reverse(config: BallConfig, method: str = "carrier") -> BallConfig:
    """T*: balls pair with empty boxes on their left."""
    return mirror(evolve(mirror(config), method))


# -- ring -----------------------------------------------------------------

@dataclass(frozen=True)
class RingConfig:
    cells: tuple[int, ...]

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        if any(c not in (0, 1) for c in cells):
            raise ValueError("cells must be 0/1 values")
        if not cells:
            raise ValueError("a ring needs at least one site")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def parse(cls, text: str) -> RingConfig:
        return cls(tuple(int(c) for c in "".join(text.split())))

    @property
    def N(self) -> int:
        return len(self.cells)

    @property
    def balls(self) -> int:
        return sum(self.cells)

    def rotated(self, k: int) -> RingConfig:
        k %= self.N
        return RingConfig(self.cells[k:] + self.cells[:k])

    def __str__(self) -> str:
        return "".join(map(str, self.cells))


def ring_record(ring: RingConfig) -> int:
    """A site of the unrolled periodic walk that is a record.

    The smallest index attaining the one-period minimum.  Only exists when
    fewer than half of the sites hold balls.
    """
    if 2 * ring.balls >= ring.N:
        raise UndefinedDynamicsError(
            f"{ring.balls} balls on {ring.N} sites: the periodic walk has no records"
        )
    h = 0
    best, where = 1, -1
    for i, c in enumerate(ring.cells):
        h += 1 if c else -1
        if h < best:
            best, where = h, i
    return where


def evolve_ring(ring: RingConfig) -> RingConfig:
    N, b = ring.N, ring.balls
    if 2 * b > N:
        raise UndefinedDynamicsError(f"{b} balls on {N} sites: dynamics needs b <= N/2")
    if 2 * b == N:
        return RingConfig(tuple(1 - c for c in ring.cells))
    start = ring_record(ring) + 1
    order = [(start + j) % N for j in range(N)]
    out = [0] * N
    # the carrier starts empty right after a record and is empty again one
    # period later, so a single lap is exact
    for site, bit in zip(order, carrier_stream(ring.cells[s] for s in order)):
        out[site] = bit
    return RingConfig(tuple(out))


def evolve_ring_t(ring: RingConfig, t: int) -> RingConfig:
    for _ in range(t):
        ring = evolve_ring(ring)
    return ring
