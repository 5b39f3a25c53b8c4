"""Baby-step giant-step solvers for short product representations.

The deterministic solver tabulates the products of every subsequence of one
half and scans the other half incrementally; the randomized variant trades
exhaustiveness for sqrt(n)-scale tables on dense sequences.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

from .errors import CapabilityError, UsageError
from .sequences import Sequence, SubsetDescriptor, descriptor_product
from .errors import InternalError


@dataclass(frozen=True)
class BsgsConfig:
    split_bits: Optional[int] = None
    randomized: bool = False
    max_table_entries: int = 1 << 22
    seed: int = 0
    step_budget: Optional[int] = None

    def __post_init__(self):
        if self.max_table_entries < 1:
            raise UsageError("max_table_entries must be >= 1")


@dataclass
class BsgsResult:
    descriptor: Optional[SubsetDescriptor]
    found: bool
    budget_exhausted: bool
    group_ops: int
    table_entries: int
    scan_steps: int


def _is_abelian(group) -> bool:
    return group.kind in ("zn", "curve", "cl")


def _gray_products(group, elems, counter) -> Iterator[Tuple[int, object]]:
    """All (mask_bits, ordered product) pairs in Gray-code order, one group
    operation per step after the empty mask.  Abelian groups only: a
    single-bit toggle multiplies by the element or its inverse."""
    invs = [group.inv(e) for e in elems]
    value = group.identity()
    bits = 0
    yield bits, value
    for t in range(1, 1 << len(elems)):
        i = (t & -t).bit_length() - 1  # ruler sequence: lowest set bit of t
        bits ^= 1 << i
        value = group.op(value, elems[i] if bits >> i & 1 else invs[i])
        counter[0] += 1
        yield bits, value


def _dfs_products(group, elems, counter, prefix_value=None) -> Iterator[Tuple[int, object]]:
    """All (mask_bits, product) pairs, one group operation per nonempty mask.

    Ordered products need appends only, so subsets are extended by the
    element with the highest index; works in non-abelian groups.
    """
    start = prefix_value if prefix_value is not None else group.identity()
    stack = [(start, 0, -1)]
    while stack:
        value, bits, top = stack.pop()
        yield bits, value
        for i in range(top + 1, len(elems)):
            child = group.op(value, elems[i])
            counter[0] += 1
            stack.append((child, bits | 1 << i, i))


def _mu_scan(group, elems, z, counter) -> Iterator[Tuple[int, object]]:
    """All (mask_bits, pi(z mu(y))) pairs, one group operation per nonempty
    mask.  mu reverses and inverts, so extending a subset by a lower index
    appends that inverse on the right; valid in non-abelian groups."""
    invs = [group.inv(e) for e in elems]
    stack = [(z, 0, len(elems))]
    while stack:
        value, bits, low = stack.pop()
        yield bits, value
        for i in range(low - 1, -1, -1):
            child = group.op(value, invs[i])
            counter[0] += 1
            stack.append((child, bits | 1 << i, i))


def _gray_mu_scan(group, elems, z, counter) -> Iterator[Tuple[int, object]]:
    invs = [group.inv(e) for e in elems]
    value = z
    bits = 0
    yield bits, value
    for t in range(1, 1 << len(elems)):
        i = (t & -t).bit_length() - 1
        bits ^= 1 << i
        value = group.op(value, invs[i] if bits >> i & 1 else elems[i])
        counter[0] += 1
        yield bits, value


def bsgs_solve(seq: Sequence, z, cfg: BsgsConfig = BsgsConfig()) -> BsgsResult:
    """Deterministic meet-in-the-middle solve.

    Tabulates pi over every subsequence of the first `split` elements
    (Gray-code enumeration where the group is abelian, prefix extension
    otherwise; exactly 2^split - 1 operations either way), then scans the
    complementary subsequences computing pi(z mu(y)) incrementally.  Returns
    NotFound only after the scan proves z unreachable.
    """
    group = seq.group
    split = cfg.split_bits if cfg.split_bits is not None else seq.size_a
    if not 0 <= split <= seq.k:
        raise UsageError(f"split_bits must be in [0, {seq.k}]")
    if 1 << split > cfg.max_table_entries:
        raise CapabilityError(
            f"baby-step table needs 2^{split} entries, over the cap "
            f"{cfg.max_table_entries}; use randomized mode or the walk solver"
        )
    front, back = seq.elems[:split], seq.elems[split:]
    counter = [0]
    enum = _gray_products if _is_abelian(group) else _dfs_products
    table: Dict = {}
    for bits, value in enum(group, front, counter):
        table.setdefault(value, bits)
    scan = _gray_mu_scan if _is_abelian(group) else _mu_scan
    steps = 0
    for bits, value in scan(group, back, z, counter):
        steps += 1
        hit = table.get(value)
        if hit is not None:
            desc = SubsetDescriptor(seq.k, hit | bits << split)
            if descriptor_product(seq, desc) != z:
                raise InternalError("bsgs collision failed re-verification")
            return BsgsResult(desc, True, False, counter[0], len(table), steps)
    return BsgsResult(None, False, False, counter[0], len(table), steps)


def _mask_product(group, elems, bits, counter):
    acc = group.identity()
    i = 0
    while bits:
        if bits & 1:
            acc = group.op(acc, elems[i])
            counter[0] += 1
        bits >>= 1
        i += 1
    return acc


def _mask_mu_product(group, invs, bits, z, counter):
    acc = z
    for i in range(len(invs) - 1, -1, -1):
        if bits >> i & 1:
            acc = group.op(acc, invs[i])
            counter[0] += 1
    return acc


def bsgs_solve_randomized(seq: Sequence, z, cfg: BsgsConfig = BsgsConfig()) -> BsgsResult:
    """Randomized variant: ceil(sqrt(n)) random baby masks, then random giant
    masks until a collision or the step budget (default 100 sqrt(n)) runs out.
    """
    group = seq.group
    n = group.order
    if n is None:
        raise UsageError("randomized mode needs the group order")
    rng = random.Random(cfg.seed)
    n_baby = math.isqrt(n - 1) + 1
    if n_baby > cfg.max_table_entries:
        raise CapabilityError(f"sqrt(n) = {n_baby} baby steps exceed the table cap")
    counter = [0]
    a_elems, b_elems = seq.a_elems, seq.b_elems
    table: Dict = {}
    for _ in range(n_baby):
        bits = rng.getrandbits(seq.size_a)
        table.setdefault(_mask_product(group, a_elems, bits, counter), bits)
    b_invs = [group.inv(e) for e in b_elems]
    budget = cfg.step_budget if cfg.step_budget is not None else 100 * n_baby
    for step in range(budget):
        bits = rng.getrandbits(seq.size_b)
        value = _mask_mu_product(group, b_invs, bits, z, counter)
        hit = table.get(value)
        if hit is not None:
            desc = SubsetDescriptor(seq.k, hit | bits << seq.size_a)
            if descriptor_product(seq, desc) != z:
                raise InternalError("bsgs collision failed re-verification")
            return BsgsResult(desc, True, False, counter[0], len(table), step + 1)
    return BsgsResult(None, False, True, counter[0], len(table), budget)
