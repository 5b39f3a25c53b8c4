"""Expected-cost model for the collision walk, empirical aggregation, and
distribution diagnostics for subsequence-product pushforwards."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable

from .errors import CapabilityError, InputError, UsageError

PUSHFORWARD_MASK_CAP = 2**26
PUSHFORWARD_ORDER_CAP = 2**22


@dataclass(frozen=True)
class CostModel:
    """Expected collision statistics for a walk over C = P(A) u {z mu(y)}.

    The model treats the walk as simultaneous random walks on the group
    (order n) and on C (size 2^kA + 2^kB): a collision is useful when the
    group-side walk repeats first, which happens with probability
    1/(1 + r) for r = n / #C, and a useful collision yields an answer half
    the time.
    """

    n: int
    size_c: int
    r: float
    expected_c: float
    expected_rho_tot: float


def expected_stats(n: int, k_a: int, k_b: int) -> CostModel:
    if n < 2:
        raise UsageError(f"group order must be >= 2, got {n}")
    if k_a < 1 or k_b < 1:
        raise UsageError("both halves need at least one element")
    size_c = (1 << k_a) + (1 << k_b)
    r = n / size_c
    expected_c = 2.0 * (1.0 + r)
    expected_rho_tot = math.sqrt(2.0 * math.pi * n * (1.0 + r))
    return CostModel(n=n, size_c=size_c, r=r, expected_c=expected_c,
                     expected_rho_tot=expected_rho_tot)


@dataclass(frozen=True)
class RunAggregate:
    runs: int
    mean_c: float
    mean_rho_tot: float
    mean_phi_evals: float
    mean_group_ops: float
    wall_seconds: float


def aggregate_runs(outcomes: Iterable, wall_seconds: float = 0.0) -> RunAggregate:
    outcomes = list(outcomes)
    if not outcomes:
        raise UsageError("aggregate_runs needs at least one run")
    n = len(outcomes)
    return RunAggregate(
        runs=n,
        mean_c=sum(o.collisions for o in outcomes) / n,
        mean_rho_tot=sum(o.rho_total for o in outcomes) / n,
        mean_phi_evals=sum(o.phi_evals for o in outcomes) / n,
        mean_group_ops=sum(o.group_ops for o in outcomes) / n,
        wall_seconds=wall_seconds,
    )


def tv_distance(dist1: Dict, dist2: Dict) -> float:
    """Variation distance between two distributions over a common finite set
    (half the L1 distance, equal to the max over subsets of the
    probability gap)."""
    for d in (dist1, dist2):
        total = math.fsum(float(v) for v in d.values())
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"distribution sums to {total}, not 1")
    keys = set(dist1) | set(dist2)
    return 0.5 * math.fsum(
        abs(float(dist1.get(k, 0)) - float(dist2.get(k, 0))) for k in keys
    )


def tv_to_uniform(dist: Dict, n: int) -> float:
    """Variation distance from a distribution on a group of order n to the
    uniform distribution, counting mass the distribution misses."""
    u = Fraction(1, n)
    covered = len(dist)
    acc = math.fsum(abs(float(Fraction(v) - u)) for v in dist.values())
    acc += float(u) * (n - covered)
    return 0.5 * acc


def pushforward(seq, side: str) -> Dict:
    """Exact distribution of the ordered-product map over all subsequences
    of one half ('A' or 'B') or of the whole sequence ('S'), as Fractions
    with denominator 2^(subsequence pool size).

    The B side uses the plain product of the selected elements; shifting by
    the target is a bijection of the group and leaves the distance to
    uniform unchanged.  Additive groups use an exact counting convolution;
    other backends enumerate subsequences and are bounded by the mask cap.
    """
    if side == "A":
        elems = seq.a_elems
    elif side == "B":
        elems = seq.b_elems
    elif side == "S":
        elems = seq.elems
    else:
        raise UsageError(f"side must be 'A', 'B', or 'S', got {side!r}")
    size = len(elems)
    group = seq.group
    n = group.order
    if n is None or n > PUSHFORWARD_ORDER_CAP:
        raise CapabilityError("group order unknown or too large to index")
    denom = 1 << size
    if group.kind == "zn":
        counts = [0] * n
        counts[0] = 1
        for e in elems:
            shifted = counts[-e:] + counts[:-e] if e else counts[:]
            counts = [a + b for a, b in zip(counts, shifted)]
        return {g: Fraction(c, denom) for g, c in enumerate(counts) if c}
    if denom > PUSHFORWARD_MASK_CAP:
        raise CapabilityError(f"2^{size} masks exceed the enumeration cap")
    counts_map = {group.identity(): 1}
    for e in elems:
        nxt = dict(counts_map)
        for g, c in counts_map.items():
            key = group.op(g, e)
            nxt[key] = nxt.get(key, 0) + c
        counts_map = nxt
    return {g: Fraction(c, denom) for g, c in counts_map.items()}
