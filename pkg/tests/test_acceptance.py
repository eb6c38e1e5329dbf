"""Acceptance suite: one test per criterion, at the stated tolerances and time limits.

Each test carries a ``criterion`` marker; ``conftest.py`` prints a
``criterion N: PASS|FAIL`` line per criterion at the end of the run.
"""
import math
import random
import time
from collections import Counter

import numpy as np
import pytest

from boxball.checks import small_configs
from boxball.core import EMPTY, BallConfig, catalan, enumerate_excursions, parse_config
from boxball.dynamics import METHODS, evolve, pairing_profile
from boxball.measures import (
    alpha_of_lambda,
    nu_weight,
    random_walk_weight,
    sample_bernoulli_config,
    sample_excursions,
    zeta_concat,
)
from boxball.solitons import (
    SlotDiagram,
    YoungDiagram,
    build_excursion,
    decompose,
    identify_slots,
    merge_young,
    slot_diagram,
)
from boxball.trees import count_trees, count_vectors, tree_of, tree_slot_diagram
import oracles

PAREN_WORD = "((()()(()())()()())(()))"
SAMPLER_SEED = 20240101  # fixed before the first run


def _random_configs(count: int, seed: int, max_len: int = 200) -> list[BallConfig]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(0, max_len)
        p = rng.uniform(0.05, 0.7)
        out.append(BallConfig(rng.randint(-50, 50), bytes(rng.random() < p for _ in range(n))))
    return out


@pytest.mark.criterion(1, "parenthesis word: pairing rows, Young codings, under 1 ms")
def test_criterion_01_pairing_profile():
    def work():
        f = pairing_profile(parse_config(PAREN_WORD))
        y = YoungDiagram(f.r)
        return f, y

    f, y = work()
    assert f.M == 4 and f.r == (8, 2, 1, 1)
    assert y.rows == (8, 2, 1, 1)
    assert y.conjugate().rows == (4, 2, 1, 1, 1, 1, 1, 1)
    assert y.counts == (6, 1, 0, 1)
    best = math.inf
    for _ in range(20):
        t0 = time.perf_counter()
        work()
        best = min(best, time.perf_counter() - t0)
    assert best < 1e-3, f"best of 20 runs took {best * 1e3:.3f} ms"


@pytest.mark.criterion(2, "conservation of the pairing rows for ten steps, all methods")
def test_criterion_02_conservation():
    t0 = time.perf_counter()
    cases = [parse_config(PAREN_WORD)] + _random_configs(1000, seed=2)
    for c in cases:
        r = pairing_profile(c).r
        for m in METHODS:
            s = c
            for _ in range(10):
                s = evolve(s, m)
                assert pairing_profile(s).r == r, (m, c)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10, f"{elapsed:.1f} s"


@pytest.mark.criterion(3, "five evolution methods agree bit for bit")
def test_criterion_03_methods_agree():
    t0 = time.perf_counter()
    exhaustive = 0
    for c in small_configs(12):
        ref = evolve(c, "carrier")
        assert set(ref.positions()) == oracles.naive_step(set(c.positions()))
        for m in METHODS[1:]:
            assert evolve(c, m) == ref, (m, c)
        exhaustive += 1
    # up to translation: a leading ball then 11 free boxes, plus the empty config
    assert exhaustive == 2**11 + 1
    for c in _random_configs(10_000, seed=3):
        ref = evolve(c, "carrier")
        for m in METHODS[1:]:
            assert evolve(c, m) == ref, (m, c)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60, f"{elapsed:.1f} s"


@pytest.mark.criterion(4, "TS, HT and tree slot diagrams coincide for n <= 6")
def test_criterion_04_slot_diagram_chain():
    t0 = time.perf_counter()
    count = 0
    for n in range(7):
        for e in enumerate_excursions(n):
            ts = slot_diagram(e, "TS")
            assert ts == slot_diagram(e, "HT") == tree_slot_diagram(tree_of(e)), e
            count += 1
    assert count == 197
    elapsed = time.perf_counter() - t0
    assert elapsed < 5, f"{elapsed:.1f} s"


@pytest.mark.criterion(5, "published slot diagram round trip with slot counts 21, 11, 5, 1")
def test_criterion_05_published_diagram():
    x1 = [0] * 21
    x1[17] = x1[19] = 1
    d = SlotDiagram((tuple(x1), (0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0), (2,)))
    e = build_excursion(d)
    for flavor in ("TS", "HT"):
        assert slot_diagram(e, flavor) == d
        sols = decompose(e, flavor)
        assert tuple(len(identify_slots(e, sols, k, flavor)) for k in range(1, 5)) == (21, 11, 5, 1)
    assert d.slot_counts == (21, 11, 5, 1)


@pytest.mark.criterion(6, "tree counts sum to Catalan numbers and match enumeration")
def test_criterion_06_counting():
    t0 = time.perf_counter()
    for n in range(9):
        assert sum(count_trees(v) for v in count_vectors(n)) == catalan(n)
    for n in range(7):
        tally = Counter()
        for w in oracles.dyck_words(n):
            sizes = oracles.branch_sizes(oracles.nested_tree(w))
            vec = [0] * (max(sizes) if sizes else 0)
            for s in sizes:
                vec[s - 1] += 1
            tally[tuple(vec)] += 1
        for v in count_vectors(n):
            assert count_trees(v) == tally[v], v
    elapsed = time.perf_counter() - t0
    assert elapsed < 30, f"{elapsed:.1f} s"


@pytest.mark.criterion(7, "Young merge of (3,1,1), (2) and (1,1)")
def test_criterion_07_young_merge():
    parts = [YoungDiagram((3, 1, 1)), YoungDiagram((2,)), YoungDiagram((1, 1))]
    assert merge_young(parts).rows == (6, 2, 1)


@pytest.mark.criterion(8, "slot product weight equals the random walk excursion probability")
def test_criterion_08_measure_identity():
    t0 = time.perf_counter()
    for lam in (0.1, 0.25, 0.4):
        p = alpha_of_lambda(lam)
        assert abs(p.partition_function - 1 / (1 - lam)) < 1e-12
        assert abs(nu_weight(EMPTY, p) - (1 - lam)) < 1e-12
        for n in range(7):
            for e in enumerate_excursions(n):
                assert abs(nu_weight(e, p) - lam**n * (1 - lam) ** (n + 1)) < 1e-12
                assert nu_weight(e, p) == pytest.approx(random_walk_weight(e, lam), abs=1e-12)
    elapsed = time.perf_counter() - t0
    assert elapsed < 5, f"{elapsed:.1f} s"


@pytest.mark.criterion(9, "sampler frequencies and conditional x_1 mean at lambda 1/4")
def test_criterion_09_sampler():
    t0 = time.perf_counter()
    N = 100_000
    p = alpha_of_lambda(0.25)
    samples = sample_excursions(p, N, seed=SAMPLER_SEED)
    freq = Counter(e for _, e in samples)
    empty = freq[EMPTY] / N
    assert 0.74 <= empty <= 0.76, empty
    for n in range(4):
        for e in enumerate_excursions(n):
            w = nu_weight(e, p)
            se = math.sqrt(w * (1 - w) / N)
            assert abs(freq[e] / N - w) <= 3 * se, (e, freq[e] / N, w, se)
    # below the top size every x_1 entry is an independent Geometric(q_1)
    entries = np.array([v for d, _ in samples if d.m >= 2 for v in d.component(1)])
    q1 = p.q[0]
    mean = (1 - q1) / q1
    assert abs(mean - 3 / 13) < 1e-15
    se = math.sqrt((1 - q1) / q1**2 / entries.size)
    assert abs(entries.mean() - mean) <= 3 * se, (entries.mean(), mean, se)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60, f"{elapsed:.1f} s"


@pytest.mark.criterion(10, "zeta concatenation example gives zeta_2(7) = 1")
def test_criterion_10_zeta():
    d0 = SlotDiagram(((0, 0, 2, 0, 1), (0, 0, 0), (1,)))
    d2 = SlotDiagram(((2,),))
    d5 = SlotDiagram(((0, 0, 0), (1,)))
    empty = SlotDiagram(())
    z = zeta_concat([d0, empty, d2, empty, empty, d5])
    assert z(2, 7) == 1


@pytest.mark.criterion(11, "one carrier step on 10^7 boxes in under a second")
def test_criterion_11_throughput():
    c = sample_bernoulli_config(0.25, 10**7, seed=11)
    t0 = time.perf_counter()
    out = evolve(c, "carrier")
    elapsed = time.perf_counter() - t0
    assert out.balls == c.balls
    assert elapsed < 1.0, f"{elapsed:.2f} s"
