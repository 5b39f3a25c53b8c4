import math
import random

import pytest

from subsetprod.errors import CapabilityError, UsageError
from subsetprod.quadratic import (
    class_group_order_analytic,
    class_number,
    class_numbers_up_to,
    compose,
    discriminant,
    form_pow,
    fundamental_discriminants,
    identity_form,
    inverse_form,
    is_reduced,
    prime_form,
    reduce_form,
)


def sample_classes(disc, count, rng):
    """Random classes as power products of small prime forms."""
    from subsetprod.modmath import is_prime

    gens = []
    ell = 2
    while len(gens) < 6:
        f = prime_form(ell, disc)
        if f is not None:
            gens.append(reduce_form(f))
        ell += 1
        while not is_prime(ell):
            ell += 1
    out = []
    for _ in range(count):
        acc = identity_form(disc)
        for g in gens:
            acc = compose(acc, form_pow(g, rng.randrange(64), disc))
        out.append(acc)
    return out


def test_reduce_examples():
    assert reduce_form((3, 1, 2)) == (2, -1, 3)
    assert reduce_form((1, 1, 6)) == (1, 1, 6)
    assert reduce_form((2, 1, 3)) == (2, 1, 3)


def test_reduce_rejects_bad_forms():
    with pytest.raises(UsageError):
        reduce_form((1, 3, 2))  # positive discriminant
    with pytest.raises(UsageError):
        reduce_form((-1, 1, -6))


def test_reduce_idempotent_and_invariant():
    rng = random.Random(3)
    for _ in range(300):
        a = rng.randrange(1, 50)
        b = rng.randrange(-100, 100)
        # force a negative discriminant
        c = (b * b + rng.randrange(3, 4000)) // (4 * a) + 1
        f = (a, b, c)
        if discriminant(f) >= 0:
            continue
        r = reduce_form(f)
        assert is_reduced(r)
        assert discriminant(r) == discriminant(f)
        assert reduce_form(r) == r


def test_compose_example():
    assert compose((2, 1, 3), (2, 1, 3)) == (2, -1, 3)


def test_inverse_is_opposite_form():
    assert inverse_form((2, 1, 3)) == (2, -1, 3)
    assert inverse_form((1, 1, 6)) == (1, 1, 6)


def test_prime_form_examples():
    assert prime_form(2, -23) == (2, 1, 3)
    assert prime_form(3, -23) == (3, 1, 2)
    assert prime_form(5, -23) is None


def test_prime_form_smallest_nonnegative_root():
    # For every admissible odd prime the returned b is the least value in
    # [0, 2 ell) with the right parity and b^2 = D mod 4 ell.
    for disc in (-23, -47, -71, -163, -999883):
        for ell in (3, 5, 7, 11, 13, 17, 19, 23):
            f = prime_form(ell, disc)
            if f is None:
                continue
            a, b, c = f
            assert a == ell
            assert 0 <= b < 2 * ell
            assert (b - disc) % 2 == 0
            assert (b * b - disc) % (4 * ell) == 0
            assert b * b - 4 * a * c == disc
            for smaller in range(b):
                if (smaller - disc) % 2 == 0 and (smaller * smaller - disc) % (4 * ell) == 0:
                    sc = (smaller * smaller - disc) // (4 * ell)
                    assert math.gcd(math.gcd(ell, smaller), sc) > 1
                    break


def test_prime_form_conductor_prime_gives_none():
    # D = -12 has conductor 2 (fundamental part -3); no invertible norm-2 ideal.
    assert prime_form(2, -12) is None
    # D = -75 has conductor 5.
    assert prime_form(5, -75) is None


def test_class_number_examples():
    assert class_number(-23) == 3
    assert class_number(-4) == 1
    assert class_number(-3) == 1
    assert class_number(-163) == 1
    assert class_number(-5460) == 16  # large 2-rank example


def test_class_number_bound():
    with pytest.raises(CapabilityError):
        class_number(-(10**8) - 3)


def test_group_axioms_random_classes():
    rng = random.Random(11)
    for disc in (-23, -479, -100003, -399964):
        pool = sample_classes(disc, 40, rng)
        ident = identity_form(disc)
        for f in pool:
            assert is_reduced(f) and discriminant(f) == disc
            assert compose(f, inverse_form(f)) == ident
            assert compose(f, ident) == f
        for _ in range(200):
            x, y, z = rng.choice(pool), rng.choice(pool), rng.choice(pool)
            assert compose(compose(x, y), z) == compose(x, compose(y, z))
            assert compose(x, y) == compose(y, x)


def test_annihilation_by_class_number():
    rng = random.Random(12)
    for disc in (-23, -10007, -999883):
        h = class_number(disc)
        for f in sample_classes(disc, 20, rng):
            assert form_pow(f, h, disc) == identity_form(disc)


def test_class_numbers_sieve_matches_enumeration():
    counts = class_numbers_up_to(5000)
    rng = random.Random(13)
    fds = fundamental_discriminants(5000)
    for disc in rng.sample(fds, 60):
        assert counts[-disc] == class_number(disc), disc


def test_fundamental_discriminants():
    fds = set(fundamental_discriminants(100))
    assert -3 in fds and -4 in fds and -23 in fds
    assert -12 not in fds  # 4 * -3, conductor 2
    assert -25 not in fds
    assert -75 not in fds
    assert all(d % 4 in (0, 1) for d in fds)


def test_frozen_benchmark_orders_recomputable():
    from subsetprod.reference import BENCHMARK_ROWS, CLASS_GROUP_ORDERS

    published_log2 = {
        row.descriptor: row.log2n_published for row in BENCHMARK_ROWS if row.group_kind == "cl"
    }
    for m, frozen in CLASS_GROUP_ORDERS.items():
        disc = 1 - 2**m
        assert class_group_order_analytic(disc) == frozen
        assert abs(math.log2(frozen) - published_log2[f"cl:{disc}"]) <= 0.005


def test_analytic_order_matches_enumeration():
    rng = random.Random(14)
    checked = 0
    while checked < 4:
        m = rng.randrange(2 * 10**6, 2 * 10**7)
        if m % 4 not in (0, 3):
            continue
        disc = -m
        assert class_group_order_analytic(disc, prime_bound=200_000) == class_number(disc)
        checked += 1
