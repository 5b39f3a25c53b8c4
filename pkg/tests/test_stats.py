import math
import random
from fractions import Fraction

import pytest

from subsetprod.errors import CapabilityError, InputError, UsageError
from subsetprod.groups import ZnGroup, make_group
from subsetprod.sequences import Sequence, build_random_sequence
from subsetprod.stats import (
    expected_stats,
    pushforward,
    tv_distance,
    tv_to_uniform,
)


def test_expected_stats_table_examples():
    m = expected_stats(2**20, 20, 20)
    assert m.expected_c == 3.00
    assert abs(m.expected_rho_tot - 3144) <= 1
    m = expected_stats(2**20, 30, 30)
    assert abs(m.expected_c - 2.00) < 0.01
    assert abs(m.expected_rho_tot - 2568) <= 1


def test_expected_stats_exact_density_two():
    # k = 2 log2 n with equal halves gives r = 1/2 exactly
    for bits in (10, 20, 30):
        n = 2**bits
        m = expected_stats(n, bits, bits)
        assert m.expected_c == 3.0
        assert m.expected_rho_tot == math.sqrt(3 * math.pi * n)


def test_expected_stats_r_limit():
    m = expected_stats(2**20, 40, 40)
    assert abs(m.expected_c - 2.0) < 1e-5
    assert abs(m.expected_rho_tot - math.sqrt(2 * math.pi * 2**20)) < 1.0


def test_expected_stats_validation():
    with pytest.raises(UsageError):
        expected_stats(1, 4, 4)
    with pytest.raises(UsageError):
        expected_stats(100, 0, 4)


def test_tv_distance_basics():
    assert tv_distance({0: 0.5, 1: 0.5}, {0: 0.5, 1: 0.5}) == 0.0
    n = 100
    point = {0: 1.0}
    uniform = {g: 1.0 / n for g in range(n)}
    assert abs(tv_distance(point, uniform) - (1 - 1 / n)) < 1e-12
    assert abs(tv_to_uniform({0: Fraction(1)}, n) - (1 - 1 / n)) < 1e-12


def test_tv_distance_is_metric():
    rng = random.Random(2)
    keys = list(range(12))

    def rand_dist():
        w = [rng.random() for _ in keys]
        s = sum(w)
        return {k: v / s for k, v in zip(keys, w)}

    for _ in range(100):
        a, b, c = rand_dist(), rand_dist(), rand_dist()
        dab, dba = tv_distance(a, b), tv_distance(b, a)
        assert abs(dab - dba) < 1e-12
        assert tv_distance(a, a) < 1e-12
        assert tv_distance(a, c) <= dab + tv_distance(b, c) + 1e-12
        assert 0.0 <= dab <= 1.0


def test_tv_distance_normalization_check():
    with pytest.raises(InputError):
        tv_distance({0: 0.7}, {0: 1.0})


def test_pushforward_point_mass():
    group = ZnGroup(101)
    seq = Sequence(group, (0,) * 8, provenance="random")
    dist = pushforward(seq, "A")
    assert dist == {0: Fraction(1)}


def test_pushforward_uniform_two():
    group = ZnGroup(2)
    seq = Sequence(group, (1, 1), provenance="random")
    dist = pushforward(seq, "A")
    assert dist == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert tv_to_uniform(dist, 2) == 0.0


def test_pushforward_sums_to_one_exactly():
    for desc in ("zn:1021", "curve:1009", "gl2:37"):
        seq, _ = build_random_sequence(make_group(desc), 16, 3)
        for side in ("A", "B"):
            dist = pushforward(seq, side)
            assert sum(dist.values()) == 1


def test_pushforward_matches_enumeration():
    from oracles import subset_product

    for desc in ("zn:1021", "gl2:37"):
        group = make_group(desc)
        seq, _ = build_random_sequence(group, 12, 5)
        dist = pushforward(seq, "B")
        counts = {}
        for bits in range(1 << seq.size_b):
            v = subset_product(group, seq.b_elems, bits)
            counts[v] = counts.get(v, 0) + 1
        expect = {g: Fraction(c, 1 << seq.size_b) for g, c in counts.items()}
        assert dist == expect


def test_pushforward_caps():
    group = make_group("cl:-100000000000003")
    seq, _ = build_random_sequence(group, 8, 0)
    with pytest.raises(CapabilityError):
        pushforward(seq, "A")  # group order unknown


def test_side_pushforward_quantiles_density5():
    # Informational companion to the full-sequence acceptance check: at
    # n = 1021 the half-sequence distances have a heavy tail, and the
    # asymptotic n^(-3/4) level holds for most but not 99% of seeds.
    # Pinned for the fixed seed set.
    group = ZnGroup(1021)
    k = round(5 * math.log2(1021))
    bound = 1021**-0.75
    within = 0
    values = []
    for seed in range(200):
        seq, _ = build_random_sequence(group, k, seed)
        tv = tv_to_uniform(pushforward(seq, "A"), 1021)
        values.append(tv)
        if tv <= bound:
            within += 1
    values.sort()
    assert within == 193
    assert values[100] < bound / 2  # median well under the bound
    assert within >= 180
