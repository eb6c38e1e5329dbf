import math
import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxball.core import EMPTY, Excursion, catalan, enumerate_excursions, excursion_sequence
from boxball.dynamics import evolve
from boxball.errors import (
    DegenerateParameterError,
    NotInAError,
    TruncationError,
    UnsupportedDensityError,
)
from boxball.measures import (
    RNG_ALGORITHM,
    MeasureParams,
    alpha_of_lambda,
    map_A,
    map_Q,
    nu_weight,
    nu_weight_alpha,
    random_walk_weight,
    sample_bernoulli_config,
    sample_diagram,
    sample_excursion,
    sample_excursions,
    make_rng,
    zeta_concat,
    zeta_of_config,
)
from boxball.solitons import SlotDiagram, build_excursion, slot_diagram
from conftest import configs, excursions

LAMBDAS = (0.1, 0.25, 0.4)


# -- parameter maps -------------------------------------------------------

def test_map_A_exact_example():
    h = Fraction(1, 2)
    assert map_A([h, h, h]) == [Fraction(1, 2), Fraction(1, 8), Fraction(1, 128)]
    assert map_Q([Fraction(1, 2), Fraction(1, 8), Fraction(1, 128)]) == [h, h, h]


def test_map_A_first_entry():
    assert map_A([0.3])[0] == pytest.approx(0.7)


def test_maps_inverse_random():
    # float round trips lose digits through the high powers of small q_j;
    # the exact test below covers small entries
    rng = random.Random(1)
    for _ in range(100):
        q = [rng.uniform(0.5, 1.0) for _ in range(8)]
        back = map_Q(map_A(q, 8), 8)
        assert max(abs(a - b) for a, b in zip(q, back)) < 1e-12


@given(st.lists(st.fractions(min_value=Fraction(1, 100), max_value=1), min_size=1, max_size=6))
@settings(max_examples=50)
def test_maps_inverse_exact(q):
    assert map_Q(map_A(q)) == q


def test_map_errors():
    with pytest.raises(NotInAError):
        map_A([0.0])
    with pytest.raises(NotInAError):
        map_A([1.5])
    with pytest.raises(NotInAError):
        map_Q([0.5, 0.9])  # q_2 would be negative
    with pytest.raises(NotInAError):
        map_Q([1.0])  # q_1 = 0
    with pytest.raises(DegenerateParameterError):
        # q_1 = 2^-53 makes the float product underflow a few steps later
        map_Q([1 - 2**-53] + [0.0] * 14)


def test_lambda_quarter_q_values():
    p = alpha_of_lambda(0.25)
    assert p.q[0] == pytest.approx(13 / 16, abs=1e-15)
    assert p.q[1] == pytest.approx(160 / 169, abs=1e-15)
    assert p.alpha[:2] == pytest.approx((3 / 16, 9 / 256))
    exact = map_Q([Fraction(3, 16) ** k for k in range(1, 5)])
    assert exact[:2] == [Fraction(13, 16), Fraction(160, 169)]
    assert p.q[:4] == pytest.approx([float(v) for v in exact], abs=1e-15)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_partition_function(lam):
    p = alpha_of_lambda(lam)
    assert p.partition_function == pytest.approx(1 / (1 - lam), rel=1e-13)
    assert nu_weight(EMPTY, p) == pytest.approx(1 - lam, rel=1e-13)
    assert p.tail_bound < 1e-12
    assert p.describe()["K"] == p.K


def test_alpha_of_lambda_errors_and_edges():
    with pytest.raises(UnsupportedDensityError):
        alpha_of_lambda(0.5)
    with pytest.raises(UnsupportedDensityError):
        alpha_of_lambda(-0.1)
    zero = alpha_of_lambda(0.0)
    assert nu_weight(EMPTY, zero) == 1.0
    assert alpha_of_lambda(0.25, K=3).K == 3


def test_truncation_error():
    p = alpha_of_lambda(0.25, K=2)
    with pytest.raises(TruncationError):
        nu_weight(Excursion("UUUDDD"), p)
    with pytest.raises(TruncationError):
        nu_weight_alpha(Excursion("UUUDDD"), p)


def test_sampler_refuses_large_tail():
    p = MeasureParams.from_q([0.5], tail_bound=0.1)
    with pytest.raises(TruncationError):
        sample_excursion(p, seed=0)


# -- weights --------------------------------------------------------------

def test_weight_examples():
    p = alpha_of_lambda(0.25)
    assert nu_weight(EMPTY, p) == pytest.approx(3 / 4, abs=1e-15)
    assert nu_weight(Excursion("UD"), p) == pytest.approx(9 / 64, abs=1e-15)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_two_formulas_and_random_walk(lam):
    p = alpha_of_lambda(lam)
    for n in range(7):
        for e in enumerate_excursions(n):
            a = nu_weight(e, p)
            assert abs(a - nu_weight_alpha(e, p)) < 1e-12
            assert abs(a - random_walk_weight(e, lam)) < 1e-12


def test_generic_q_two_formulas():
    rng = random.Random(4)
    for _ in range(20):
        p = MeasureParams.from_q([rng.uniform(0.3, 1.0) for _ in range(6)])
        for n in range(6):
            for e in enumerate_excursions(n):
                assert nu_weight(e, p) == pytest.approx(nu_weight_alpha(e, p), rel=1e-12)


def test_total_mass_converges():
    lam = 0.25
    p = alpha_of_lambda(lam)
    total = 0.0
    prev_defect = 1.0
    for n in range(11):
        total += sum(nu_weight(e, p) for e in enumerate_excursions(n))
        exact = sum(catalan(j) * Fraction(1, 4) ** j * Fraction(3, 4) ** (j + 1) for j in range(n + 1))
        assert total == pytest.approx(float(exact), abs=1e-12)
        defect = 1 - total
        # tail of the excursion length law, bounded with C_j <= 4^j
        assert 0 < defect <= 3 * 0.75 ** (n + 1) + 1e-12
        assert defect < prev_defect
        prev_defect = defect


# -- sampling -------------------------------------------------------------

def test_trivial_q_always_empty():
    p = MeasureParams.from_q([1.0, 1.0, 1.0])
    assert all(e == EMPTY for _, e in sample_excursions(p, 200, seed=3))


def test_sampler_is_deterministic():
    p = alpha_of_lambda(0.25)
    a = sample_excursions(p, 500, seed=42)
    b = sample_excursions(p, 500, seed=42)
    assert a == b
    assert sample_excursion(p, seed=9) == sample_excursion(p, seed=9)
    assert "PCG64" in RNG_ALGORITHM


def test_sampled_diagrams_are_consistent():
    p = alpha_of_lambda(0.4)
    rng = make_rng(7)
    for _ in range(500):
        d = sample_diagram(p, rng)
        e = build_excursion(d)
        assert slot_diagram(e) == d


def test_sampler_law_small_run():
    # lighter version of the acceptance check, on a different seed
    p = alpha_of_lambda(0.25)
    N = 20_000
    freq = Counter(e for _, e in sample_excursions(p, N, seed=123))
    for n in range(3):
        for e in enumerate_excursions(n):
            w = nu_weight(e, p)
            se = math.sqrt(w * (1 - w) / N)
            assert abs(freq[e] / N - w) < 4 * se


def test_bernoulli_config_basics():
    assert sample_bernoulli_config(0.0, 1000, seed=1).is_empty()
    a = sample_bernoulli_config(0.25, 5000, seed=8)
    assert a == sample_bernoulli_config(0.25, 5000, seed=8)
    assert a != sample_bernoulli_config(0.25, 5000, seed=9)
    assert abs(a.balls / 5000 - 0.25) < 0.03
    with pytest.raises(UnsupportedDensityError):
        sample_bernoulli_config(0.6, 10)


def test_bernoulli_interior_excursions_x1_mean():
    c = sample_bernoulli_config(0.25, 100_000, seed=2718)
    seq = excursion_sequence(c)[1:-1]
    entries = []
    for _, e in seq:
        d = slot_diagram(e)
        if d.m >= 2:
            entries.extend(d.component(1))
    q1 = 13 / 16
    mean = (1 - q1) / q1
    se = math.sqrt((1 - q1) / q1**2 / len(entries))
    assert abs(np.mean(entries) - mean) < 3 * se


# -- zeta -----------------------------------------------------------------

def _forest():
    d0 = SlotDiagram(((0, 0, 2, 0, 1), (0, 0, 0), (1,)))
    d2 = SlotDiagram(((2,),))
    d5 = SlotDiagram(((0, 0, 0), (1,)))
    e = SlotDiagram(())
    return [d0, e, d2, e, e, d5]


def test_zeta_example():
    z = zeta_concat(_forest())
    assert z(2, 7) == 1
    assert z.row(2) == (0, 0, 0, 0, 0, 0, 0, 1)
    assert z.offsets[1] == (0, 3, 4, 5, 6, 7)
    assert z.row(1)[:5] == (0, 0, 2, 0, 1)
    assert z(3, 0) == 1 and z(3, 1) == 0 and z(9, 0) == 0


def test_zeta_all_empty():
    z = zeta_concat([SlotDiagram(())] * 4, height=2)
    for k in (1, 2):
        assert z.row(k) == (0, 0, 0, 0)
        assert z.offsets[k - 1] == (0, 1, 2, 3)


def test_zeta_zero_index_moves_origin():
    z = zeta_concat(_forest(), zero_index=2)
    assert z.offsets[0][2] == 0
    assert z(1, 0) == 2  # x^2_1(0) = 2


def test_zeta_inversion():
    assert zeta_concat(_forest()).diagrams() == _forest()


@given(st.lists(excursions(max_n=8), min_size=1, max_size=6), st.data())
def test_zeta_inversion_random(es, data):
    ds = [slot_diagram(e) for e in es]
    zi = data.draw(st.integers(0, len(ds) - 1))
    z = zeta_concat(ds, zero_index=zi)
    assert z.diagrams() == ds
    for k in range(1, z.height + 1):
        assert z.slot_counts(k) == tuple(d.expected_slots(k) if k <= d.m else 1 for d in ds)


def _nonzero_rows(z, height):
    return [Counter(v for v in (z.row(k) if k <= z.height else ()) if v) for k in range(1, height + 1)]


@settings(max_examples=300)
@given(configs(max_len=80))
def test_zeta_row_values_preserved_by_dynamics(c):
    a = zeta_of_config(c)
    b = zeta_of_config(evolve(c))
    h = max(a.height, b.height)
    assert _nonzero_rows(a, h) == _nonzero_rows(b, h)


def test_zeta_of_config_splits_excursions():
    c = build_excursion(SlotDiagram(((1,),))).to_config(1)
    z = zeta_of_config(c)
    assert z.diagrams()[0] == SlotDiagram(((1,),))
