import random

import pytest

from subsetprod.errors import InputError, InternalError, UsageError
from subsetprod.groups import make_group
from subsetprod.quadratic import prime_form, reduce_form
from subsetprod.sequences import (
    Mask,
    SubsetDescriptor,
    admissible_primes,
    assemble_answer,
    build_class_sequence,
    build_curve_sequence,
    build_random_sequence,
    build_sequence,
    build_toy_sequence,
    descriptor_product,
    mu_product,
    product,
)

BACKENDS = ["zn:10007", "curve:1009", "cl:-10007", "gl2:37"]


def test_toy_sequence_values():
    seq, tgt = build_toy_sequence()
    assert seq.a_elems == (3, 9, 27, 81, 116, 94)
    assert seq.b_elems == (5, 25, 125, 117, 77, 4)
    assert tgt.z == 2
    assert product(seq, Mask.from_indices("A", [3, 5], 6)) == 16
    assert product(seq, Mask("A", 0, 6)) == 0
    assert mu_product(seq, Mask.from_indices("B", [1, 2, 3, 6], 6), 2) == 97
    assert mu_product(seq, Mask("B", 0, 6), 2) == 2


def test_split_sizes():
    seq, _ = build_random_sequence(make_group("zn:127"), 13, 0)
    assert seq.size_a == 7 and seq.size_b == 6
    assert abs(seq.size_a - seq.size_b) <= 1


def test_mask_validation():
    with pytest.raises(UsageError):
        Mask("C", 0, 4)
    with pytest.raises(UsageError):
        Mask("A", 1 << 4, 4)
    with pytest.raises(UsageError):
        Mask.from_indices("A", [5], 4)


def test_product_split_homomorphism():
    # ordered concatenation: pi(x ++ y) = pi(x) * pi(y) for disjoint halves
    rng = random.Random(5)
    for desc in BACKENDS:
        seq, _ = build_random_sequence(make_group(desc), 12, 17)
        group = seq.group
        for _ in range(100):
            xb = rng.getrandbits(seq.size_a)
            yb = rng.getrandbits(seq.size_b)
            full = descriptor_product(seq, SubsetDescriptor(seq.k, xb | yb << seq.size_a))
            split = group.op(
                product(seq, Mask("A", xb, seq.size_a)),
                product(seq, Mask("B", yb, seq.size_b)),
            )
            assert full == split


def test_mu_inverts_product():
    rng = random.Random(6)
    for desc in BACKENDS:
        seq, _ = build_random_sequence(make_group(desc), 14, 23)
        group = seq.group
        ident = group.identity()
        for _ in range(1000):
            bits = rng.getrandbits(seq.size_b)
            mask = Mask("B", bits, seq.size_b)
            assert group.op(mu_product(seq, mask, ident), product(seq, mask)) == ident


def test_builders_pure():
    for desc, kind in [("curve:1009", "auto"), ("cl:-10007", "auto"), ("gl2:37", "random")]:
        s1, t1 = build_sequence(desc, 10, seed=4, kind=kind)
        s2, t2 = build_sequence(desc, 10, seed=4, kind=kind)
        assert s1.elems == s2.elems and t1.z == t2.z


def test_curve_sequence_small():
    seq, tgt = build_curve_sequence(7, 2)
    assert seq.elems == ((2, 2), (0, 1))
    assert tgt.z == (2, 2)
    group = seq.group
    for pt in seq.elems:
        assert group.contains(pt)


def test_curve_sequence_y_convention():
    seq, tgt = build_curve_sequence(2**20 + 7, 40)
    p = 2**20 + 7
    for x, y in seq.elems + (tgt.z,):
        assert y <= (p - 1) // 2
        assert (y * y - (x**3 + x + 1)) % p == 0


def test_curve_sequence_published_target():
    _, tgt = build_curve_sequence(2**80 + 13, 200)
    assert tgt.z[0] == 391


def test_class_sequence_small():
    seq, tgt = build_class_sequence(-23, 2)
    assert seq.elems == ((2, 1, 3), (2, -1, 3))
    assert tgt.z == (2, -1, 3)  # the norm-13 class reduces to this
    assert admissible_primes(-23, 3) == [2, 3, 13]


def test_class_sequence_classes_have_prime_norm_form():
    disc = -10007
    ells = admissible_primes(disc, 12)
    seq, _ = build_class_sequence(disc, 12)
    for ell, cls in zip(ells, seq.elems):
        f = prime_form(ell, disc)
        assert f[0] == ell
        assert reduce_form(f) == cls


def test_class_sequence_published_norm():
    assert admissible_primes(1 - 2**160, 201)[-1] == 2671


def test_two_admissible_for_small_disc():
    # ell = 2 is admissible iff D = 1 mod 8 (odd D) or the even cases; scan
    # agreement with a direct congruence check.
    for disc in range(-7, -200, -1):
        if disc % 4 not in (0, 1):
            continue
        f = prime_form(2, disc)
        solvable = any((b * b - disc) % 8 == 0 for b in range(4) if (b - disc) % 2 == 0)
        if f is not None:
            assert solvable
            assert admissible_primes(disc, 1) == [2]


def test_descriptor_hex_roundtrip():
    rng = random.Random(9)
    for k in (4, 12, 13, 200):
        for _ in range(50):
            bits = rng.getrandbits(k)
            d = SubsetDescriptor(k, bits)
            assert SubsetDescriptor.from_hex(k, d.to_hex(), "msb") == d
    d = SubsetDescriptor(12, 0)
    assert d.to_hex() == "000"
    toy = SubsetDescriptor.from_hex(12, "eb7", "msb")
    assert toy.indices == (1, 2, 3, 5, 7, 8, 10, 11, 12)


def test_descriptor_hex_errors():
    with pytest.raises(InputError):
        SubsetDescriptor.from_hex(200, "abc", "msb")
    with pytest.raises(InputError):
        SubsetDescriptor.from_hex(12, "zzz", "msb")
    with pytest.raises(InputError):
        SubsetDescriptor.from_hex(12, "eb7", "middle")


def test_assemble_answer_verifies():
    seq, tgt = build_toy_sequence()
    x = Mask.from_indices("A", [1, 2, 3, 5], 6)
    y = Mask.from_indices("B", [1, 2, 4, 5, 6], 6)
    desc = assemble_answer(seq, 2, x, y)
    assert desc.indices == (1, 2, 3, 5, 7, 8, 10, 11, 12)
    with pytest.raises(InternalError):
        assemble_answer(seq, 3, x, y)


def test_assemble_empty_for_identity_target():
    seq, _ = build_toy_sequence()
    desc = assemble_answer(seq, 0, Mask("A", 0, 6), Mask("B", 0, 6))
    assert desc.popcount() == 0


def test_curve_sequence_insufficient_abscissas():
    with pytest.raises(InputError):
        build_curve_sequence(11, 8, scan_limit=4)
