"""Low-memory collision-walk solver.

The walk lives on C, the disjoint union of the subsequences of A and the
target-shifted reversed-inverse subsequences of B.  A hash eta maps group
elements back into C; iterating phi = eta o pi finds collisions with O(1)
stored elements via Floyd's cycle finder, and a colliding pair with one
point on each side assembles into an answer.

Internally a point of C is packed into an int: (mask_bits << 1) | side_bit,
side bit 1 for the A side.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import CapabilityError, UsageError
from .sequences import (
    Mask,
    Sequence,
    SubsetDescriptor,
    assemble_answer,
)

# A walk point is a Mask; the side tag says which half the bits select.
CPoint = Mask

DEFAULT_RESTART_BUDGET = 64
PRECOMPUTE_ENTRY_CAP = 1 << 26


@dataclass(frozen=True)
class EtaSpec:
    """Hash from group elements into C.

    toy-linear: for Z/nZ with even k, the bits of (multiplier * x mod n)
    choose the side (bit 0, set = A side) and the mask (bits 1..k/2; the B
    side reads them reflected, index i meaning k/2+1-i).
    keyed-hash: a keyed 128-bit hash of the canonical encoding, extended by
    counter blocks when the halves need more bits; bit 0 set picks side A,
    the next #side bits form the mask.
    """

    mode: str = "keyed-hash"
    key: bytes = b""
    multiplier: int = 96


def _hash_stream_int(data: bytes, key: bytes, nbits: int) -> int:
    """nbits pseudorandom bits of the keyed hash of data, as an int."""
    out = 0
    filled = 0
    counter = 0
    while filled < nbits:
        block = hashlib.blake2b(
            data + counter.to_bytes(4, "little"), key=key, digest_size=16
        ).digest()
        out |= int.from_bytes(block, "little") << filled
        filled += 128
        counter += 1
    return out & ((1 << nbits) - 1)


def _reflect_bits(bits: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = out << 1 | bits & 1
        bits >>= 1
    return out


def _pack(point: Mask, seq: Sequence) -> int:
    if point.side == "A":
        if point.size != seq.size_a:
            raise UsageError("A-side mask length mismatch")
        return point.bits << 1 | 1
    if point.size != seq.size_b:
        raise UsageError("B-side mask length mismatch")
    return point.bits << 1


def _unpack(packed: int, seq: Sequence) -> Mask:
    if packed & 1:
        return Mask("A", packed >> 1, seq.size_a)
    return Mask("B", packed >> 1, seq.size_b)


@dataclass
class PrecomputeTable:
    """Per-block partial products: forward products for A blocks,
    reversed-inverse products for B blocks, indexed by the block's mask."""

    m: int
    a_blocks: Tuple[Tuple[int, int, Tuple], ...]  # (shift, submask, entries)
    b_blocks: Tuple[Tuple[int, int, Tuple], ...]

    @property
    def stored(self) -> int:
        return sum(len(e) for _, _, e in self.a_blocks) + sum(
            len(e) for _, _, e in self.b_blocks
        )


def build_precompute_table(
    seq: Sequence, m: int, max_entries: int = PRECOMPUTE_ENTRY_CAP
) -> PrecomputeTable:
    """Tables of the 2^m partial products of each length-m block of A and of
    B (the B entries already reversed and inverted, so walks need no
    inversions)."""
    if m < 1:
        raise UsageError("block length m must be >= 1")
    group = seq.group
    total = sum(
        1 << min(m, size - start)
        for size in (seq.size_a, seq.size_b)
        for start in range(0, size, m)
    )
    if total > max_entries:
        raise CapabilityError(
            f"precompute tables need {total} entries, over the cap {max_entries}"
        )

    def blocks_for(elems, mu_side: bool):
        out = []
        for start in range(0, len(elems), m):
            width = min(m, len(elems) - start)
            block = elems[start : start + width]
            entries: List = [group.identity()] * (1 << width)
            source = [group.inv(e) for e in block] if mu_side else list(block)
            for bits in range(1, 1 << width):
                hb = bits.bit_length() - 1
                rest = bits ^ (1 << hb)
                if mu_side:
                    entries[bits] = group.op(source[hb], entries[rest])
                else:
                    entries[bits] = group.op(entries[rest], source[hb])
            out.append((start, (1 << width) - 1, tuple(entries)))
        return tuple(out)

    return PrecomputeTable(m, blocks_for(seq.a_elems, False), blocks_for(seq.b_elems, True))


class WalkEngine:
    """Bundles the walk-value and hash maps for one (sequence, target, eta)
    triple, with group-operation and phi counters."""

    def __init__(self, seq: Sequence, z, spec: EtaSpec, table: Optional[PrecomputeTable] = None):
        self.seq = seq
        self.z = z
        self.spec = spec
        self.table = table
        self.group_ops = 0
        self.phi_evals = 0
        group = seq.group
        self._op = group.op
        self._identity = group.identity()
        self._encode = group.encode
        if table is None:
            self._b_invs = tuple(group.inv(e) for e in seq.b_elems)
        if spec.mode == "toy-linear":
            if group.kind != "zn" or seq.k % 2:
                raise UsageError("toy-linear eta needs a zn group and even k")
            half = seq.size_a
            self._toy_half = half
            self._toy_mask = (1 << half) - 1
            self._reflect = (
                tuple(_reflect_bits(i, half) for i in range(1 << half))
                if half <= 16
                else None
            )
        elif spec.mode != "keyed-hash":
            raise UsageError(f"unknown eta mode {spec.mode!r}")

    # -- pi on C ------------------------------------------------------------

    def value(self, packed: int):
        op = self._op
        bits = packed >> 1
        if self.table is None:
            if packed & 1:
                acc = self._identity
                elems = self.seq.a_elems
                i = 0
                ops = 0
                while bits:
                    if bits & 1:
                        acc = op(acc, elems[i])
                        ops += 1
                    bits >>= 1
                    i += 1
                self.group_ops += ops
                return acc
            acc = self.z
            invs = self._b_invs
            ops = 0
            for i in range(len(invs) - 1, -1, -1):
                if bits >> i & 1:
                    acc = op(acc, invs[i])
                    ops += 1
            self.group_ops += ops
            return acc
        if packed & 1:
            acc = None
            ops = 0
            for shift, sub_mask, entries in self.table.a_blocks:
                sub = bits >> shift & sub_mask
                if sub:
                    e = entries[sub]
                    if acc is None:
                        acc = e
                    else:
                        acc = op(acc, e)
                        ops += 1
            self.group_ops += ops
            return self._identity if acc is None else acc
        acc = self.z
        ops = 0
        for shift, sub_mask, entries in reversed(self.table.b_blocks):
            sub = bits >> shift & sub_mask
            if sub:
                acc = op(acc, entries[sub])
                ops += 1
        self.group_ops += ops
        return acc

    # -- eta ------------------------------------------------------------------

    def eta_packed(self, g) -> int:
        spec = self.spec
        if spec.mode == "toy-linear":
            v = spec.multiplier * g % self.seq.group.n
            raw = (v >> 1) & self._toy_mask
            if v & 1:
                return raw << 1 | 1
            if self._reflect is not None:
                return self._reflect[raw] << 1
            return _reflect_bits(raw, self._toy_half) << 1
        h = _hash_stream_int(self._encode(g), spec.key, 1 + max(self.seq.size_a, self.seq.size_b))
        if h & 1:
            return (h >> 1 & (1 << self.seq.size_a) - 1) << 1 | 1
        return (h >> 1 & (1 << self.seq.size_b) - 1) << 1

    def step(self, packed: int) -> int:
        self.phi_evals += 1
        return self.eta_packed(self.value(packed))


def eta(spec: EtaSpec, g, seq: Sequence) -> CPoint:
    """Hash a group element into the walk domain."""
    engine = WalkEngine(seq, seq.group.identity(), spec)
    return _unpack(engine.eta_packed(g), seq)


def walk_value(seq: Sequence, z, point: CPoint, table: Optional[PrecomputeTable] = None):
    """pi on the walk domain: the subsequence product for an A point, the
    target-shifted inverse product for a B point."""
    engine = WalkEngine(seq, z, EtaSpec(), table)
    return engine.value(_pack(point, seq))


def phi(seq: Sequence, z, spec: EtaSpec, point: CPoint,
        table: Optional[PrecomputeTable] = None) -> CPoint:
    """One walk step: phi = eta o pi. Collision-preserving by construction."""
    engine = WalkEngine(seq, z, spec, table)
    return _unpack(engine.step(_pack(point, seq)), seq)


def walk_trajectory(seq: Sequence, z, spec: EtaSpec, start: CPoint, steps: int,
                    table: Optional[PrecomputeTable] = None) -> List[CPoint]:
    """The first `steps` points of the walk from `start` (inclusive)."""
    engine = WalkEngine(seq, z, spec, table)
    packed = _pack(start, seq)
    out = [start]
    for _ in range(steps):
        packed = engine.step(packed)
        out.append(_unpack(packed, seq))
    return out


@dataclass
class FloydOutcome:
    tail: int
    cycle: int
    s: Optional[CPoint]
    t: Optional[CPoint]
    phi_evals: int

    @property
    def restart(self) -> bool:
        return self.tail == 0


def _floyd(engine: WalkEngine, start: int) -> Tuple[int, int, Optional[int], Optional[int]]:
    """Floyd's cycle finder on packed points. Returns (tail, cycle,
    s_packed, t_packed); s and t are None when the start lies on the cycle
    (tail 0, restart case)."""
    step = engine.step
    tort = step(start)
    hare = step(step(start))
    while tort != hare:
        tort = step(tort)
        hare = step(step(hare))
    # tort == phi^nu(start) with nu a positive multiple of the cycle length.
    if start == tort:
        # Start is on the cycle: measure its length for reporting and bail.
        cycle = 1
        probe = step(tort)
        while probe != tort:
            probe = step(probe)
            cycle += 1
        return 0, cycle, None, None
    p1, p2 = start, tort
    prev1 = prev2 = None
    tail = 0
    while p1 != p2:
        prev1, p1 = p1, step(p1)
        prev2, p2 = p2, step(p2)
        tail += 1
    cycle = 1
    probe = step(p1)
    while probe != p1:
        probe = step(probe)
        cycle += 1
    # prev1 = phi^(tail-1): last point before the cycle entry; prev2 sits
    # one lap ahead on the cycle, phi^(tail+cycle-1).
    return tail, cycle, prev2, prev1


def floyd_collide(seq: Sequence, z, spec: EtaSpec, start: CPoint,
                  table: Optional[PrecomputeTable] = None,
                  engine: Optional[WalkEngine] = None) -> FloydOutcome:
    """Find the colliding predecessors of the walk from `start`: the points
    s (on the cycle) and t (end of the tail) with phi(s) = phi(t).  A zero
    tail signals a restart."""
    eng = engine if engine is not None else WalkEngine(seq, z, spec, table)
    before = eng.phi_evals
    tail, cycle, s_packed, t_packed = _floyd(eng, _pack(start, seq))
    return FloydOutcome(
        tail=tail,
        cycle=cycle,
        s=_unpack(s_packed, seq) if s_packed is not None else None,
        t=_unpack(t_packed, seq) if t_packed is not None else None,
        phi_evals=eng.phi_evals - before,
    )


@dataclass(frozen=True)
class RhoOptions:
    eta_mode: str = "keyed-hash"
    multiplier: int = 96
    seed: int = 0
    start: Optional[CPoint] = None
    precompute_m: Optional[int] = None
    restart_budget: int = DEFAULT_RESTART_BUDGET


@dataclass
class WalkOutcome:
    tail: int = 0
    cycle: int = 0
    s: Optional[CPoint] = None
    t: Optional[CPoint] = None
    collisions: int = 0
    rho_total: int = 0
    phi_evals: int = 0
    group_ops: int = 0


@dataclass
class RhoResult:
    descriptor: Optional[SubsetDescriptor]
    found: bool
    budget_exhausted: bool
    outcome: WalkOutcome


def _derive_key(seed: int, label: bytes, index: int) -> bytes:
    material = seed.to_bytes(16, "little", signed=True) + label + index.to_bytes(8, "little")
    return hashlib.blake2b(material, digest_size=16).digest()


def random_cpoint(seq: Sequence, seed: int, index: int = 0) -> CPoint:
    """Deterministic pseudorandom walk start: a fair side coin, then a
    uniform mask over that side."""
    h = _hash_stream_int(
        _derive_key(seed, b"start", index), b"", 1 + max(seq.size_a, seq.size_b)
    )
    if h & 1:
        return Mask("A", h >> 1 & (1 << seq.size_a) - 1, seq.size_a)
    return Mask("B", h >> 1 & (1 << seq.size_b) - 1, seq.size_b)


def rho_solve(seq: Sequence, z, opts: RhoOptions = RhoOptions()) -> RhoResult:
    """Run collision walks until one yields a short product representation.

    Each attempt picks a start point and (in keyed mode) a fresh hash key,
    finds colliding predecessors with Floyd's method, and keeps the answer
    when the collision is a genuine product collision with one point on
    each side; everything else restarts.  Accumulates the number of
    collisions examined and the total walk length rho = tail + cycle.
    """
    table = (
        build_precompute_table(seq, opts.precompute_m)
        if opts.precompute_m is not None
        else None
    )
    outcome = WalkOutcome()
    for attempt in range(opts.restart_budget):
        spec = EtaSpec(
            mode=opts.eta_mode,
            key=_derive_key(opts.seed, b"eta", attempt),
            multiplier=opts.multiplier,
        )
        engine = WalkEngine(seq, z, spec, table)
        if attempt == 0 and opts.start is not None:
            start = opts.start
        else:
            start = random_cpoint(seq, opts.seed, attempt)
        res = floyd_collide(seq, z, spec, start, table, engine=engine)
        outcome.collisions += 1
        outcome.rho_total += res.tail + res.cycle
        outcome.tail, outcome.cycle = res.tail, res.cycle
        outcome.s, outcome.t = res.s, res.t
        descriptor = None
        if not res.restart:
            pi_s = engine.value(_pack(res.s, seq))
            pi_t = engine.value(_pack(res.t, seq))
            if pi_s == pi_t and res.s.side != res.t.side:
                x, y = (res.s, res.t) if res.s.side == "A" else (res.t, res.s)
                descriptor = assemble_answer(seq, z, x, y)
        outcome.phi_evals += engine.phi_evals
        outcome.group_ops += engine.group_ops
        if descriptor is not None:
            return RhoResult(descriptor, True, False, outcome)
    return RhoResult(None, False, True, outcome)
