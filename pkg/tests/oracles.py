"""Independent brute-force oracles the solver tests are checked against.

These deliberately avoid the package's enumeration and product helpers:
products are recomputed per subset with a plain loop.
"""

from __future__ import annotations

from typing import Dict


def subset_product(group, elems, bits: int):
    acc = group.identity()
    for i, e in enumerate(elems):
        if bits >> i & 1:
            acc = group.op(acc, e)
    return acc


def exhaustive_products(group, elems) -> Dict:
    """Map every reachable ordered subsequence product to one subset mask."""
    out: Dict = {}
    for bits in range(1 << len(elems)):
        v = subset_product(group, elems, bits)
        out.setdefault(v, bits)
    return out


def curve_point_count(p: int) -> int:
    """#E(F_p) for y^2 = x^3 + x + 1 by scanning all (x, y) pairs' squares."""
    squares: Dict[int, int] = {}
    for y in range(p):
        squares.setdefault(y * y % p, 0)
        squares[y * y % p] += 1
    count = 1  # infinity
    for x in range(p):
        count += squares.get((x * x * x + x + 1) % p, 0)
    return count
