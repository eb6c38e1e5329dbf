"""Cross-check suites behind ``bbs verify``.

Each suite returns a :class:`CheckResult`; none of them raise on failure.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

from .core import (
    BallConfig,
    catalan,
    concatenate,
    decode_walk,
    encode_walk,
    enumerate_excursions,
    split_excursions,
)
from .dynamics import METHODS, evolve, evolve_reverse, pairing_profile
from .solitons import build_excursion, merge_young, slot_diagram, YoungDiagram
from .trees import count_trees, count_vectors, contour_of, tree_of, tree_slot_diagram, branch_decompose, ALGORITHMS


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  {self.detail}" if self.detail else ""
        return f"{self.name:<14} {status}  {self.cases:>7} cases  {self.seconds:6.2f}s{tail}"


def small_configs(max_support: int) -> Iterator[BallConfig]:
    """Every configuration whose support fits in ``max_support`` boxes."""
    yield BallConfig(1, b"")
    for length in range(1, max_support + 1):
        if length == 1:
            yield BallConfig(1, b"\x01")
            continue
        for mid in product((0, 1), repeat=length - 2):
            yield BallConfig(1, bytes((1, *mid, 1)))


def _timed(name: str, fn: Callable[[], tuple[int, str]]) -> CheckResult:
    t0 = time.perf_counter()
    cases, failure = fn()
    return CheckResult(name, not failure, cases, failure, time.perf_counter() - t0)


def check_methods(max_support: int) -> CheckResult:
    def run():
        cases = 0
        for c in small_configs(max_support):
            ref = evolve(c, "carrier")
            for m in METHODS[1:]:
                if evolve(c, m) != ref:
                    return cases, f"{m} differs on {c}"
            cases += 1
        return cases, ""

    return _timed("methods", run)


def check_conservation(max_support: int, steps: int = 10) -> CheckResult:
    def run():
        cases = 0
        for c in small_configs(max_support):
            r = pairing_profile(c).r
            cur = c
            for t in range(steps):
                cur = evolve(cur)
                if pairing_profile(cur).r != r:
                    return cases, f"r changes at t={t + 1} for {c}"
            cases += 1
        return cases, ""

    return _timed("conservation", run)


def check_reversibility(max_support: int) -> CheckResult:
    def run():
        cases = 0
        for c in small_configs(max_support):
            if evolve_reverse(evolve(c)) != c:
                return cases, f"T*T differs from the identity on {c}"
            cases += 1
        return cases, ""

    return _timed("reversibility", run)


def check_codecs(max_support: int) -> CheckResult:
    def run():
        cases = 0
        for c in small_configs(max_support):
            if decode_walk(encode_walk(c)) != c:
                return cases, f"walk round trip fails on {c}"
            if concatenate(split_excursions(c), origin=c.origin) != c:
                return cases, f"split/concatenate fails on {c}"
            cases += 1
        return cases, ""

    return _timed("codecs", run)


def check_young(max_support: int) -> CheckResult:
    def run():
        cases = 0
        for c in small_configs(max_support):
            parts = [YoungDiagram.from_counts(slot_diagram(e).counts) for _, e in split_excursions(c)]
            if merge_young(parts).rows != pairing_profile(c).r:
                return cases, f"merged Young diagram differs from r on {c}"
            cases += 1
        return cases, ""

    return _timed("young", run)


def check_slot_chain(max_n: int) -> CheckResult:
    def run():
        cases = 0
        for n in range(max_n + 1):
            for e in enumerate_excursions(n):
                ts = slot_diagram(e, "TS")
                ht = slot_diagram(e, "HT")
                t = tree_of(e)
                if not ts == ht == tree_slot_diagram(t):
                    return cases, f"TS/HT/tree diagrams differ on {e}"
                if contour_of(t) != e or build_excursion(ht) != e or build_excursion(ht, "insertion") != e:
                    return cases, f"reconstruction fails on {e}"
                cols = [branch_decompose(t, a) for a in ALGORITHMS]
                if not cols[0] == cols[1] == cols[2]:
                    return cases, f"branch algorithms disagree on {e}"
                cases += 1
        return cases, ""

    return _timed("slot-chain", run)


def check_counting(max_n: int) -> CheckResult:
    def run():
        cases = 0
        for n in range(max_n + 1):
            total = sum(count_trees(v) for v in count_vectors(n))
            if total != catalan(n):
                return cases, f"tree counts sum to {total}, not C_{n}"
            cases += 1
        return cases, ""

    return _timed("counting", run)


def check_random_methods(count: int, seed: int = 0, length: int = 200) -> CheckResult:
    def run():
        rng = random.Random(seed)
        for i in range(count):
            c = BallConfig(1, bytes(rng.random() < 0.4 for _ in range(rng.randint(1, length))))
            ref = evolve(c)
            for m in METHODS[1:]:
                if evolve(c, m) != ref:
                    return i, f"{m} differs on {c}"
        return count, ""

    return _timed("random-methods", run)


def run_all(max_n: int = 6, random_count: int = 200, seed: int = 0) -> list[CheckResult]:
    support = min(2 * max_n, 12)
    return [
        check_methods(support),
        check_conservation(min(support, 10)),
        check_reversibility(support),
        check_codecs(support),
        check_young(min(support, 10)),
        check_slot_chain(max_n),
        check_counting(max(max_n, 1)),
        check_random_methods(random_count, seed),
    ]
