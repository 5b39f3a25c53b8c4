"""Generator sequences, their A/B split, masks, and the product maps.

A sequence S of k group elements is split as S = AB with #A = ceil(k/2).
Masks select a subsequence of one half (bit i, counting from 0, selects
element i+1 of that half).  The walk and the solvers work with the ordered
product map pi and with the reversed-inverse map mu, where
pi(z mu(y)) = z * y_m^-1 * ... * y_1^-1 for the selected y_1..y_m.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .errors import InputError, InternalError, UsageError
from .groups import ClassGroup, CurveGroup, GroupHandle, ZnGroup, make_group
from .modmath import is_prime, is_square_mod, sqrt_mod
from . import quadratic


@dataclass(frozen=True)
class Sequence:
    group: GroupHandle
    elems: Tuple
    provenance: str = "random"

    def __post_init__(self):
        if len(self.elems) < 2:
            raise UsageError("sequences need k >= 2 elements")

    @property
    def k(self) -> int:
        return len(self.elems)

    @property
    def size_a(self) -> int:
        return (self.k + 1) // 2

    @property
    def size_b(self) -> int:
        return self.k // 2

    @property
    def a_elems(self) -> Tuple:
        return self.elems[: self.size_a]

    @property
    def b_elems(self) -> Tuple:
        return self.elems[self.size_a :]

    def density(self) -> Optional[float]:
        import math

        n = self.group.order
        if n is None or n < 2:
            return None
        return self.k / math.log2(n)


@dataclass(frozen=True)
class Mask:
    """Subset of one half: bit i selects element i+1 of that half."""

    side: str
    bits: int
    size: int

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise UsageError(f"mask side must be 'A' or 'B', got {self.side!r}")
        if self.bits < 0 or self.bits >> self.size:
            raise UsageError("mask bits exceed the half length")

    @classmethod
    def from_indices(cls, side: str, indices: Iterable[int], size: int) -> "Mask":
        bits = 0
        for i in indices:
            if not 1 <= i <= size:
                raise UsageError(f"index {i} outside 1..{size}")
            bits |= 1 << (i - 1)
        return cls(side, bits, size)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i in range(self.size) if self.bits >> i & 1)

    def popcount(self) -> int:
        return self.bits.bit_count()


@dataclass(frozen=True)
class TargetSpec:
    z: object
    provenance: str = "explicit"  # next-generator | explicit | random


def _half_for(seq: Sequence, mask: Mask) -> Tuple:
    elems = seq.a_elems if mask.side == "A" else seq.b_elems
    if mask.size != len(elems):
        raise UsageError(
            f"mask length {mask.size} does not match half {mask.side} of size {len(elems)}"
        )
    return elems


def product(seq: Sequence, mask: Mask):
    """Ordered product of the selected elements; empty mask gives identity."""
    elems = _half_for(seq, mask)
    acc = seq.group.identity()
    bits = mask.bits
    i = 0
    op = seq.group.op
    while bits:
        if bits & 1:
            acc = op(acc, elems[i])
        bits >>= 1
        i += 1
    return acc


def mu_product(seq: Sequence, mask: Mask, z):
    """pi(z mu(y)): z times the inverses of the selected B elements in
    reverse order."""
    if mask.side != "B":
        raise UsageError("mu_product takes a B-side mask")
    elems = _half_for(seq, mask)
    group = seq.group
    acc = z
    for i in range(mask.size - 1, -1, -1):
        if mask.bits >> i & 1:
            acc = group.op(acc, group.inv(elems[i]))
    return acc


@dataclass(frozen=True)
class SubsetDescriptor:
    """Indicator over the whole sequence: bit i (from 0) selects S_{i+1}."""

    k: int
    bits: int

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i in range(self.k) if self.bits >> i & 1)

    def popcount(self) -> int:
        return self.bits.bit_count()

    def to_hex(self) -> str:
        """Lowercase hex, bit j counted from the string's most significant
        bit selecting S_{j+1}; trailing pad bits are zero."""
        nibbles = (self.k + 3) // 4
        total = 4 * nibbles
        value = 0
        for i in range(self.k):
            if self.bits >> i & 1:
                value |= 1 << (total - 1 - i)
        return format(value, f"0{nibbles}x")

    @classmethod
    def from_hex(cls, k: int, text: str, bit_order: str = "msb") -> "SubsetDescriptor":
        nibbles = (k + 3) // 4
        if len(text) != nibbles:
            raise InputError(f"hex string must have {nibbles} chars for k={k}, got {len(text)}")
        try:
            value = int(text, 16)
        except ValueError:
            raise InputError(f"bad hex string {text!r}") from None
        total = 4 * nibbles
        bits = 0
        if bit_order == "msb":
            for i in range(k):
                if value >> (total - 1 - i) & 1:
                    bits |= 1 << i
        elif bit_order == "lsb":
            bits = value & ((1 << k) - 1)
        else:
            raise InputError(f"bit_order must be 'msb' or 'lsb', got {bit_order!r}")
        return cls(k, bits)


def descriptor_product(seq: Sequence, desc: SubsetDescriptor):
    """Ordered product of the subsequence a descriptor selects."""
    if desc.k != seq.k:
        raise UsageError("descriptor length does not match the sequence")
    acc = seq.group.identity()
    op = seq.group.op
    for i in range(seq.k):
        if desc.bits >> i & 1:
            acc = op(acc, seq.elems[i])
    return acc


def masks_to_descriptor(seq: Sequence, x: Mask, y: Mask) -> SubsetDescriptor:
    if x.side != "A" or y.side != "B":
        raise UsageError("need an A mask and a B mask")
    _half_for(seq, x), _half_for(seq, y)
    return SubsetDescriptor(seq.k, x.bits | y.bits << seq.size_a)


def assemble_answer(seq: Sequence, z, x: Mask, y: Mask) -> SubsetDescriptor:
    """Combine a colliding pair into a full-sequence descriptor, re-verifying
    that its ordered product equals the target."""
    desc = masks_to_descriptor(seq, x, y)
    if descriptor_product(seq, desc) != z:
        raise InternalError(
            "assembled answer failed re-verification; solver produced an invalid collision"
        )
    return desc


# ---------------------------------------------------------------------------
# Sequence builders
# ---------------------------------------------------------------------------


def build_curve_sequence(
    p: int, k: int, scan_limit: Optional[int] = None
) -> Tuple[Sequence, TargetSpec]:
    """Points P_i = (x_i, y_i) where x_i is the i-th smallest positive integer
    making x^3 + x + 1 a square mod p, taking the root y_i <= (p-1)/2; the
    target is P_{k+1}."""
    group = CurveGroup(p)
    pts: List[Tuple[int, int]] = []
    limit = scan_limit if scan_limit is not None else 64 + 16 * (k + 1)
    x = 0
    while len(pts) < k + 1:
        x += 1
        if x > limit:
            raise InputError(
                f"could not find {k + 1} curve abscissas for p={p} within {limit} candidates"
            )
        xr = x % p
        rhs = (xr * xr * xr + xr + 1) % p
        if not is_square_mod(rhs, p):
            continue
        y = sqrt_mod(rhs, p)
        y = min(y, (p - y) % p)
        pts.append((xr, y))
    return (
        Sequence(group, tuple(pts[:k]), provenance="curve-points"),
        TargetSpec(pts[k], provenance="next-generator"),
    )


def admissible_primes(disc: int, count: int) -> List[int]:
    """The first `count` primes carrying an invertible ideal of that norm."""
    out: List[int] = []
    ell = 2
    while len(out) < count:
        if quadratic.prime_form(ell, disc) is not None:
            out.append(ell)
        ell += 1
        while not is_prime(ell):
            ell += 1
    return out


def build_class_sequence(disc: int, k: int) -> Tuple[Sequence, TargetSpec]:
    """Classes of the norm-ell_i prime forms for the k smallest admissible
    primes; the target is the class for the (k+1)-st."""
    group = ClassGroup(disc)
    forms: List = []
    ell = 2
    while len(forms) < k + 1:
        f = quadratic.prime_form(ell, disc)
        if f is not None:
            forms.append(quadratic.reduce_form(f))
        ell += 1
        while not is_prime(ell):
            ell += 1
    return (
        Sequence(group, tuple(forms[:k]), provenance="class-primes"),
        TargetSpec(forms[k], provenance="next-generator"),
    )


def build_random_sequence(
    group: GroupHandle, k: int, seed: int
) -> Tuple[Sequence, TargetSpec]:
    """k independent random elements plus a random target, reproducible
    from the seed."""
    rng = random.Random(seed)
    elems = tuple(group.random_element(rng) for _ in range(k))
    z = group.random_element(rng)
    return Sequence(group, elems, provenance="random"), TargetSpec(z, provenance="random")


TOY_MODULUS = 127
TOY_K = 12
TOY_TARGET = 2


def build_toy_sequence() -> Tuple[Sequence, TargetSpec]:
    """The walkthrough instance: Z/127 with A = (3^i), B = (5^i), z = 2."""
    group = ZnGroup(TOY_MODULUS)
    half = TOY_K // 2
    a = [pow(3, i, TOY_MODULUS) for i in range(1, half + 1)]
    b = [pow(5, i, TOY_MODULUS) for i in range(1, half + 1)]
    return (
        Sequence(group, tuple(a + b), provenance="toy"),
        TargetSpec(TOY_TARGET, provenance="explicit"),
    )


def build_sequence(
    descriptor: str, k: int, seed: int = 0, kind: str = "auto"
) -> Tuple[Sequence, TargetSpec]:
    """Build the conventional sequence for a group descriptor: curve points
    for curve:<p>, prime-form classes for cl:<D>, seeded random elements
    otherwise (or with kind='random')."""
    if kind == "toy":
        return build_toy_sequence()
    group = make_group(descriptor)
    if kind == "auto":
        kind = {"curve": "curve-points", "cl": "class-primes"}.get(group.kind, "random")
    if kind == "curve-points":
        if group.kind != "curve":
            raise UsageError("curve-points sequences need a curve group")
        return build_curve_sequence(group.p, k)
    if kind == "class-primes":
        if group.kind != "cl":
            raise UsageError("class-primes sequences need a class group")
        return build_class_sequence(group.disc, k)
    if kind == "random":
        return build_random_sequence(group, k, seed)
    raise UsageError(f"unknown sequence kind {kind!r}")
