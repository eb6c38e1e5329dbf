"""Planar rooted trees of excursions, branch decompositions and tree slots.

A tree is stored as its preorder parent array: node 0 is the root and
``parents[v] < v`` for every other node.  Children keep the left to right
order of the excursion contour.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb, prod
from typing import Iterator, Sequence

from .core import Excursion, enumerate_excursions
from .dynamics import pairing_profile
from .errors import MalformedDiagramError
from .solitons import Soliton, SlotDiagram

ALGORITHMS = ("I", "II", "III")


@dataclass(frozen=True)
class PlanarTree:
    parents: tuple[int, ...] = (-1,)

    def __post_init__(self):
        p = tuple(int(v) for v in self.parents)
        if not p or p[0] != -1:
            raise ValueError("node 0 must be the root with parent -1")
        for v in range(1, len(p)):
            if not 0 <= p[v] < v:
                raise ValueError(f"node {v} has parent {p[v]}; expected a preorder parent array")
        # a preorder array must visit a node's subtree contiguously
        stack = [0]
        for v in range(1, len(p)):
            while stack[-1] != p[v]:
                stack.pop()
                if not stack:
                    raise ValueError("parent array is not in preorder")
            stack.append(v)
        object.__setattr__(self, "parents", p)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in self.parents]
        for v, p in enumerate(self.parents):
            if p >= 0:
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    def __len__(self) -> int:
        return len(self.parents)

    @property
    def size(self) -> int:
        return len(self.parents)

    def depth(self, v: int) -> int:
        d = 0
        while v:
            v = self.parents[v]
            d += 1
        return d

    def __str__(self) -> str:
        return contour_of(self).steps

    @classmethod
    def from_children(cls, children: Sequence[Sequence[int]], root: int = 0) -> PlanarTree:
        """Relabel an arbitrary child-list tree into preorder."""
        parents: list[int] = []
        stack = [(root, -1)]
        while stack:
            v, p = stack.pop()
            parents.append(p)
            me = len(parents) - 1
            for c in reversed(children[v]):
                stack.append((c, me))
        return cls(tuple(parents))


def tree_of(e: Excursion) -> PlanarTree:
    """Each matched ``U ... D`` pair becomes a node under its enclosing pair."""
    parents = [-1]
    stack = [0]
    for s in e.steps:
        if s == "U":
            parents.append(stack[-1])
            stack.append(len(parents) - 1)
        else:
            stack.pop()
    return PlanarTree(tuple(parents))


def tree_from_pairing(e: Excursion) -> PlanarTree:
    """Build the tree from the arcs of the iterated ball/empty pairing.

    Each arc is a node; its parent is the innermost arc around it, and arcs
    not surrounded by any other hang from the root.
    """
    forest = pairing_profile(e.to_config(origin=1))
    arcs = sorted((a, b) for a, b, _ in forest.pairs)
    parents = [-1]
    stack: list[tuple[int, int]] = []  # (closing box, node)
    for a, b in arcs:
        while stack and stack[-1][0] < a:
            stack.pop()
        parents.append(stack[-1][1] if stack else 0)
        stack.append((b, len(parents) - 1))
    return PlanarTree(tuple(parents))


def contour_of(t: PlanarTree) -> Excursion:
    out = []
    depth = [0] * len(t)
    prev = 0
    for v in range(1, len(t)):
        depth[v] = depth[t.parents[v]] + 1
        # climb back up to the parent of v, then step down into v
        out.append("D" * (depth[prev] - depth[v] + 1))
        out.append("U")
        prev = v
    out.append("D" * depth[prev])
    return Excursion("".join(out))


def generations(t: PlanarTree) -> tuple[int, ...]:
    """Number of nodes on the longest downward path from each node."""
    g = [1] * len(t)
    for v in range(len(t) - 1, 0, -1):
        p = t.parents[v]
        g[p] = max(g[p], g[v] + 1)
    return tuple(g)


@dataclass(frozen=True)
class BranchColoring:
    """``branch[v]`` is the top node of the branch holding ``v`` (root: -1)."""

    branch: tuple[int, ...]
    sizes: dict = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self):
        sizes: dict[int, int] = {}
        for v, b in enumerate(self.branch):
            if v:
                sizes[b] = sizes.get(b, 0) + 1
        object.__setattr__(self, "sizes", sizes)

    def size_of(self, v: int) -> int:
        return self.sizes[self.branch[v]]

    @property
    def tops(self) -> tuple[int, ...]:
        return tuple(sorted(self.sizes))

    @property
    def counts(self) -> tuple[int, ...]:
        if not self.sizes:
            return ()
        out = [0] * max(self.sizes.values())
        for s in self.sizes.values():
            out[s - 1] += 1
        return tuple(out)


def _rightmost_max(children: Sequence[int], g: Sequence[int]) -> int:
    best = children[0]
    for c in children[1:]:
        if g[c] >= g[best]:
            best = c
    return best


def _alg_I(t: PlanarTree) -> tuple[int, ...]:
    # every leaf starts its own color; a parent takes the color of its
    # rightmost child with the largest generation number
    g = generations(t)
    color = list(range(len(t)))
    for v in range(len(t) - 1, 0, -1):
        ch = t.children[v]
        if ch:
            color[v] = color[_rightmost_max(ch, g)]
    color[0] = -1
    return _canonical(t, color)


def _alg_II(t: PlanarTree) -> tuple[int, ...]:
    # color = size; at step l every node of generation l repaints the
    # rightmost path of l nodes hanging from it
    g = generations(t)
    color = [0] * len(t)
    by_gen: dict[int, list[int]] = {}
    for v in range(1, len(t)):
        by_gen.setdefault(g[v], []).append(v)
    for step in sorted(by_gen):
        for v in by_gen[step]:
            u = v
            while True:
                color[u] = step
                ch = t.children[u]
                if not ch:
                    break
                u = _rightmost_max(ch, g)
    # branches are the connected same-color pieces
    top = [-1] * len(t)
    for v in range(1, len(t)):
        p = t.parents[v]
        top[v] = top[p] if p and color[p] == color[v] else v
    return tuple(top)


def _alg_III(t: PlanarTree) -> tuple[int, ...]:
    # remove the root, keep its edges; each round takes the longest leaf
    # paths and keeps the rightmost one in every component
    top = [-1] * len(t)
    removed = [False] * len(t)
    removed[0] = True
    while not all(removed):
        comps = [v for v in range(1, len(t)) if not removed[v] and removed[t.parents[v]]]
        g = _generations_within(t, removed)
        length = max(g[c] for c in comps)
        for c in comps:
            if g[c] != length:
                continue
            u = c
            while True:
                top[u] = c
                removed[u] = True
                live = [w for w in t.children[u] if not removed[w]]
                if not live:
                    break
                u = _rightmost_max(live, g)
    return tuple(top)


def _generations_within(t: PlanarTree, removed: Sequence[bool]) -> list[int]:
    g = [0] * len(t)
    for v in range(len(t) - 1, 0, -1):
        if removed[v]:
            continue
        g[v] = max(g[v], 1)
        p = t.parents[v]
        if not removed[p]:
            g[p] = max(g[p], g[v] + 1)
    return g


def _canonical(t: PlanarTree, color: Sequence[int]) -> tuple[int, ...]:
    top = [-1] * len(t)
    for v in range(1, len(t)):
        p = t.parents[v]
        top[v] = top[p] if p and color[p] == color[v] else v
    return tuple(top)


def branch_decompose(t: PlanarTree, algorithm: str = "III") -> BranchColoring:
    algs = {"I": _alg_I, "II": _alg_II, "III": _alg_III}
    try:
        fn = algs[str(algorithm).upper()]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected I, II or III") from None
    return BranchColoring(fn(t))


def tree_solitons(e: Excursion, algorithm: str = "III") -> list[Soliton]:
    """Solitons read off the branches: a node owns its ``U`` and matching ``D``."""
    t = tree_of(e)
    up = [0] * len(t)
    down = [0] * len(t)
    stack = []
    node = 0
    for pos, s in enumerate(e.steps, start=1):
        if s == "U":
            node += 1
            up[node] = pos
            stack.append(node)
        else:
            down[stack.pop()] = pos
    col = branch_decompose(t, algorithm)
    members: dict[int, list[int]] = {}
    for v in range(1, len(t)):
        members.setdefault(col.branch[v], []).append(v)
    out = []
    for top in sorted(members, key=lambda b: up[b]):
        vs = members[top]
        out.append(Soliton(tuple(sorted(up[v] for v in vs)), tuple(sorted(down[v] for v in vs)), "HT"))
    return out


# -- slots* ---------------------------------------------------------------

def _subtree_above(t: PlanarTree, keep: Sequence[bool]) -> tuple[list[list[int]], list[int]]:
    """Children lists and generation numbers of the kept nodes."""
    ch: list[list[int]] = [[] for _ in range(len(t))]
    for v in range(1, len(t)):
        if keep[v]:
            ch[t.parents[v]].append(v)
    g = [1] * len(t)
    for v in range(len(t) - 1, 0, -1):
        if keep[v]:
            p = t.parents[v]
            g[p] = max(g[p], g[v] + 1)
    return ch, g


def _slot_arcs(children: Sequence[Sequence[int]], g: Sequence[int], k: int) -> list[tuple[int, int]]:
    """``k``-slots* as ``(node, arc)`` pairs in contour order.

    Arc ``j`` of a node lies between its children ``j - 1`` and ``j``.  Every
    arc of the root and of nodes with more than ``k + 1`` generations is a
    slot; a node with exactly ``k + 1`` generations only offers the arcs left
    of its rightmost ``k``-generation child.
    """
    out: list[tuple[int, int]] = []
    # an explicit stack keeps deep trees off the recursion limit
    stack: list[tuple[int, int]] = [(0, 0)]
    while stack:
        v, j = stack.pop()
        ch = children[v]
        if v == 0 or g[v] > k + 1:
            ok = len(ch)
        elif g[v] == k + 1:
            ok = max(i for i, c in enumerate(ch) if g[c] == k)
        else:
            ok = -1
        if j <= ok:
            out.append((v, j))
        if j < len(ch):
            stack.append((v, j + 1))
            stack.append((ch[j], 0))
    return out


def tree_slot_diagram(t: PlanarTree, coloring: BranchColoring | None = None) -> SlotDiagram:
    """Count the ``k``-branches hanging from every ``k``-slot*."""
    if coloring is None:
        coloring = branch_decompose(t)
    if len(t) == 1:
        return SlotDiagram(())
    size = [0] + [coloring.size_of(v) for v in range(1, len(t))]
    m = max(size)
    comps = []
    for k in range(1, m + 1):
        keep = [v == 0 or size[v] > k for v in range(len(t))]
        ch, g = _subtree_above(t, keep)
        slots = _slot_arcs(ch, g, k)
        index = {s: i for i, s in enumerate(slots)}
        x = [0] * len(slots)
        for w in coloring.tops:
            if size[w] != k:
                continue
            p = t.parents[w]
            arc = sum(1 for c in t.children[p] if c < w and keep[c])
            try:
                x[index[(p, arc)]] += 1
            except KeyError:
                raise RuntimeError(f"{k}-branch at node {w} does not sit on a {k}-slot*") from None
        comps.append(tuple(x))
    return SlotDiagram(tuple(comps))


def build_tree(d: SlotDiagram) -> PlanarTree:
    """Attach ``x_k(i)`` fresh ``k``-paths to ``k``-slot* ``i``, for ``k = m .. 1``."""
    if not isinstance(d, SlotDiagram):
        d = SlotDiagram(tuple(d))
    children: list[list[int]] = [[]]
    parent = [-1]
    gen = [0]  # recomputed per stage

    def new_path(top_parent: int, k: int) -> int:
        first = len(parent)
        prev = top_parent
        for _ in range(k):
            v = len(parent)
            parent.append(prev)
            children.append([])
            if prev != top_parent:
                children[prev].append(v)
            prev = v
        return first

    for k in range(d.m, 0, -1):
        xk = d.component(k)
        gen = [1] * len(parent)
        order = _postorder(children)
        for v in order:
            for c in children[v]:
                gen[v] = max(gen[v], gen[c] + 1)
        slots = _slot_arcs(children, gen, k)
        if len(slots) != len(xk):
            raise MalformedDiagramError(f"x_{k} has {len(xk)} entries but the tree offers {len(slots)} slots*")
        for i in range(len(slots) - 1, -1, -1):
            v, arc = slots[i]
            for _ in range(xk[i]):
                top = new_path(v, k)
                children[v].insert(arc, top)
    return PlanarTree.from_children(children)


def _postorder(children: Sequence[Sequence[int]]) -> list[int]:
    out = []
    stack = [(0, False)]
    while stack:
        v, done = stack.pop()
        if done:
            out.append(v)
            continue
        stack.append((v, True))
        for c in children[v]:
            stack.append((c, False))
    return out


# -- counting -------------------------------------------------------------

def count_trees(counts: Sequence[int]) -> int:
    """Planar trees with ``counts[k-1]`` branches of size ``k``."""
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    M = len(counts)
    return prod(
        comb(counts[k - 1] + 2 * sum((j - k) * counts[j - 1] for j in range(k + 1, M + 1)), counts[k - 1])
        for k in range(1, M + 1)
    )


def count_vectors(n: int) -> Iterator[tuple[int, ...]]:
    """All ``(n_1, .., n_n)`` with ``sum k n_k = n``, trailing zeros trimmed."""
    def rec(k: int, left: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            if left == 0:
                yield ()
            return
        for c in range(left // k + 1):
            for rest in rec(k - 1, left - c * k):
                yield rest + (c,)

    for v in rec(n, n):
        while v and v[-1] == 0:
            v = v[:-1]
        yield v


def enumerate_trees(nodes: int, limit: int = 13) -> Iterator[PlanarTree]:
    """All planar rooted trees with ``nodes`` nodes."""
    for e in enumerate_excursions(nodes - 1, limit=limit - 1):
        yield tree_of(e)


def branch_counts(t: PlanarTree) -> tuple[int, ...]:
    return branch_decompose(t).counts


__all__ = [
    "ALGORITHMS", "PlanarTree", "BranchColoring", "tree_of", "tree_from_pairing", "contour_of",
    "generations", "branch_decompose", "tree_solitons", "tree_slot_diagram", "build_tree", "count_trees",
    "count_vectors", "enumerate_trees", "branch_counts",
]
