"""Black-box finite groups with canonical element encodings.

Four backends: additive Z/nZ, the elliptic curve y^2 = x^3 + x + 1 over a
prime field, imaginary-quadratic class groups as reduced binary quadratic
forms, and GL2 over a prime field.  Elements are plain hashable values
(ints, tuples, or None for the curve point at infinity); equality of
canonical values is group equality.
"""

from __future__ import annotations

import math
import random
from typing import List, Optional, Tuple

from . import quadratic
from .errors import CapabilityError, UsageError
from .modmath import is_prime, is_square_mod, sqrt_mod

CURVE_A = 1
CURVE_B = 1
INFINITY = None


def _as_rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


class GroupHandle:
    """Generic-group interface; subclasses supply the backend operations."""

    descriptor: str
    kind: str

    def op(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def random_element(self, seed_or_rng):
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def encode(self, g) -> bytes:
        raise NotImplementedError

    def decode(self, raw: bytes):
        raise NotImplementedError

    @property
    def order(self) -> Optional[int]:
        return None

    def power(self, g, e: int):
        """Square-and-multiply; power(g, 0) is the identity."""
        if e < 0:
            g = self.inv(g)
            e = -e
        result = self.identity()
        while e:
            if e & 1:
                result = self.op(result, g)
            e >>= 1
            if e:
                g = self.op(g, g)
        return result

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


class ZnGroup(GroupHandle):
    """Additive group of integers mod n."""

    kind = "zn"

    def __init__(self, n: int):
        if n < 2:
            raise UsageError(f"zn modulus must be >= 2, got {n}")
        self.n = n
        self.descriptor = f"zn:{n}"
        self._width = max(1, ((n - 1).bit_length() + 7) // 8)

    @property
    def order(self) -> int:
        return self.n

    def op(self, g, h):
        return (g + h) % self.n

    def inv(self, g):
        return (-g) % self.n

    def identity(self):
        return 0

    def random_element(self, seed_or_rng):
        return _as_rng(seed_or_rng).randrange(self.n)

    def contains(self, g) -> bool:
        return isinstance(g, int) and 0 <= g < self.n

    def encode(self, g) -> bytes:
        return g.to_bytes(self._width, "little")

    def decode(self, raw: bytes):
        v = int.from_bytes(raw, "little")
        if v >= self.n:
            raise UsageError(f"decoded residue {v} out of range for {self.descriptor}")
        return v


class CurveGroup(GroupHandle):
    """E(F_p) for E: y^2 = x^3 + x + 1, affine points plus None for infinity."""

    kind = "curve"

    def __init__(self, p: int):
        if p < 5 or not is_prime(p):
            raise UsageError(f"curve backend needs a prime p >= 5, got {p}")
        if p == 31:
            # 4a^3 + 27b^2 = 31: the curve is singular exactly mod 31.
            raise UsageError("curve y^2 = x^3 + x + 1 is singular mod 31")
        self.p = p
        self.descriptor = f"curve:{p}"
        self._width = ((p - 1).bit_length() + 7) // 8
        self._order: Optional[int] = None

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = curve_order(self.p)
        return self._order

    def op(self, g, h):
        if g is INFINITY:
            return h
        if h is INFINITY:
            return g
        p = self.p
        x1, y1 = g
        x2, y2 = h
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return INFINITY
            lam = (3 * x1 * x1 + CURVE_A) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        y3 = (lam * (x1 - x3) - y1) % p
        return (x3, y3)

    def inv(self, g):
        if g is INFINITY:
            return INFINITY
        x, y = g
        return (x, (-y) % self.p)

    def identity(self):
        return INFINITY

    def random_element(self, seed_or_rng):
        rng = _as_rng(seed_or_rng)
        p = self.p
        while True:
            x = rng.randrange(p)
            rhs = (x * x * x + CURVE_A * x + CURVE_B) % p
            if not is_square_mod(rhs, p):
                continue
            y = sqrt_mod(rhs, p)
            if rng.getrandbits(1) and y:
                y = p - y
            return (x, y)

    def contains(self, g) -> bool:
        if g is INFINITY:
            return True
        if not (isinstance(g, tuple) and len(g) == 2):
            return False
        x, y = g
        if not (0 <= x < self.p and 0 <= y < self.p):
            return False
        return (y * y - (x * x * x + CURVE_A * x + CURVE_B)) % self.p == 0

    def encode(self, g) -> bytes:
        if g is INFINITY:
            return b"\xff" * (2 * self._width)
        x, y = g
        return x.to_bytes(self._width, "little") + y.to_bytes(self._width, "little")

    def decode(self, raw: bytes):
        if raw == b"\xff" * (2 * self._width):
            return INFINITY
        x = int.from_bytes(raw[: self._width], "little")
        y = int.from_bytes(raw[self._width :], "little")
        pt = (x, y)
        if not self.contains(pt):
            raise UsageError("decoded point is not on the curve")
        return pt


class ClassGroup(GroupHandle):
    """Form class group of discriminant D < 0; elements are reduced forms."""

    kind = "cl"

    def __init__(self, disc: int):
        if disc >= 0 or disc % 4 not in (0, 1):
            raise UsageError(f"class group needs D < 0 with D = 0,1 mod 4, got {disc}")
        self.disc = disc
        self.descriptor = f"cl:{disc}"
        # a <= sqrt(|D|/3) and |b| <= a for reduced forms; sign byte included.
        self._width = (math.isqrt(-disc) .bit_length() + 1 + 7) // 8 + 1
        self._order: Optional[int] = None

    @property
    def order(self) -> Optional[int]:
        if self._order is None and -self.disc <= quadratic.CLASS_NUMBER_ENUM_BOUND:
            self._order = quadratic.class_number(self.disc)
        return self._order

    def set_order(self, h: int) -> None:
        """Install an externally computed group order."""
        self._order = h

    def op(self, g, h):
        return quadratic.compose(g, h)

    def inv(self, g):
        a, b, c = g
        return quadratic.reduce_form((a, -b, c))

    def identity(self):
        return quadratic.identity_form(self.disc)

    def random_element(self, seed_or_rng):
        # Heuristically uniform: a power product of small prime forms with
        # exponents far exceeding the group exponent.
        rng = _as_rng(seed_or_rng)
        gens = self._small_prime_forms(8)
        bound = 4 * math.isqrt(-self.disc) * max(8, (-self.disc).bit_length())
        acc = self.identity()
        for g in gens:
            acc = quadratic.compose(acc, quadratic.form_pow(g, rng.randrange(bound), self.disc))
        return acc

    def _small_prime_forms(self, count: int) -> List[Tuple[int, int, int]]:
        out = []
        ell = 2
        while len(out) < count:
            f = quadratic.prime_form(ell, self.disc)
            if f is not None:
                out.append(quadratic.reduce_form(f))
            ell += 1
            while not is_prime(ell):
                ell += 1
        return out

    def contains(self, g) -> bool:
        if not (isinstance(g, tuple) and len(g) == 3):
            return False
        a, b, c = g
        return (
            quadratic.discriminant(g) == self.disc
            and a > 0
            and quadratic.is_reduced(g)
            and math.gcd(math.gcd(a, b), c) == 1
        )

    def encode(self, g) -> bytes:
        a, b, _ = g
        w = self._width
        return a.to_bytes(w, "little", signed=True) + b.to_bytes(w, "little", signed=True)

    def decode(self, raw: bytes):
        w = self._width
        a = int.from_bytes(raw[:w], "little", signed=True)
        b = int.from_bytes(raw[w:], "little", signed=True)
        num = b * b - self.disc
        if a <= 0 or num % (4 * a):
            raise UsageError("bytes do not encode a form of this discriminant")
        f = (a, b, num // (4 * a))
        if not self.contains(f):
            raise UsageError("decoded form is not reduced/primitive")
        return f


class GL2Group(GroupHandle):
    """Invertible 2x2 matrices over F_p, stored row-major as 4-tuples."""

    kind = "gl2"

    def __init__(self, p: int):
        if not is_prime(p):
            raise UsageError(f"gl2 backend needs a prime p, got {p}")
        self.p = p
        self.descriptor = f"gl2:{p}"
        self._width = max(1, ((p - 1).bit_length() + 7) // 8)

    @property
    def order(self) -> int:
        return gl2_order(self.p)

    def op(self, g, h):
        p = self.p
        a, b, c, d = g
        e, f, gg, hh = h
        return (
            (a * e + b * gg) % p,
            (a * f + b * hh) % p,
            (c * e + d * gg) % p,
            (c * f + d * hh) % p,
        )

    def inv(self, g):
        p = self.p
        a, b, c, d = g
        det_inv = pow(a * d - b * c, -1, p)
        return (d * det_inv % p, -b * det_inv % p, -c * det_inv % p, a * det_inv % p)

    def identity(self):
        return (1, 0, 0, 1)

    def random_element(self, seed_or_rng):
        rng = _as_rng(seed_or_rng)
        p = self.p
        while True:
            m = (rng.randrange(p), rng.randrange(p), rng.randrange(p), rng.randrange(p))
            if (m[0] * m[3] - m[1] * m[2]) % p:
                return m

    def contains(self, g) -> bool:
        if not (isinstance(g, tuple) and len(g) == 4):
            return False
        if not all(isinstance(v, int) and 0 <= v < self.p for v in g):
            return False
        return (g[0] * g[3] - g[1] * g[2]) % self.p != 0

    def encode(self, g) -> bytes:
        w = self._width
        return b"".join(v.to_bytes(w, "little") for v in g)

    def decode(self, raw: bytes):
        w = self._width
        m = tuple(int.from_bytes(raw[i * w : (i + 1) * w], "little") for i in range(4))
        if not self.contains(m):
            raise UsageError("decoded matrix is not invertible")
        return m


def gl2_order(p: int) -> int:
    """#GL2(F_p) = (p^2 - 1)(p^2 - p)."""
    if not is_prime(p):
        raise UsageError(f"gl2_order needs a prime, got {p}")
    return (p * p - 1) * (p * p - p)


def _curve_order_bruteforce(p: int) -> int:
    # Count y^2 = x^3 + x + 1 solutions via the Legendre symbol, plus infinity.
    n = p + 1
    for x in range(p):
        rhs = (x * x * x + CURVE_A * x + CURVE_B) % p
        if rhs == 0:
            continue
        n += 1 if pow(rhs, (p - 1) // 2, p) == 1 else -1
    return n


def annihilator_in_window(group: GroupHandle, g, lo: int, hi: int) -> Optional[int]:
    """Smallest e in [lo, hi] with g^e = identity, by baby-step giant-step."""
    ident = group.identity()
    width = hi - lo + 1
    m = math.isqrt(width) + 1
    baby = {}
    cur = ident
    for j in range(m):
        baby.setdefault(cur, j)
        cur = group.op(cur, g)
    pos = group.power(g, lo)
    for i in range((width + m - 1) // m + 1):
        j = baby.get(group.inv(pos))
        if j is not None:
            e = lo + i * m + j
            if lo <= e <= hi:
                return e
        pos = group.op(pos, cur)  # cur == g^m
    return None


def element_order(group: GroupHandle, g, annihilator: int) -> int:
    """Exact order of g given some e with g^e = identity."""
    from sympy import factorint

    ident = group.identity()
    order = annihilator
    for q in factorint(annihilator):
        while order % q == 0 and group.power(g, order // q) == ident:
            order //= q
    return order


def curve_order(p: int) -> int:
    """Exact #E(F_p) for y^2 = x^3 + x + 1: brute force below 2^16, otherwise
    baby-step giant-step over the Hasse interval with fresh random points
    until a unique multiple-of-point-order candidate survives."""
    if not is_prime(p):
        raise UsageError(f"curve_order needs a prime, got {p}")
    if p < 2**16:
        return _curve_order_bruteforce(p)
    group = CurveGroup(p)
    two_sqrt = 2 * math.isqrt(p) + 2
    lo, hi = p + 1 - two_sqrt, p + 1 + two_sqrt
    rng = random.Random(0xC0FFEE ^ p)
    lcm_orders = 1
    for _ in range(64):
        pt = group.random_element(rng)
        e = annihilator_in_window(group, pt, lo, hi)
        if e is None:
            raise CapabilityError(f"no annihilator in the Hasse interval for p={p}")
        lcm_orders = math.lcm(lcm_orders, element_order(group, pt, e))
        count = hi // lcm_orders - (lo + lcm_orders - 1) // lcm_orders + 1
        if count == 1:
            return (lo + lcm_orders - 1) // lcm_orders * lcm_orders
    raise CapabilityError(f"curve order for p={p} remained ambiguous")


_PARSERS = {
    "zn": lambda v: ZnGroup(int(v)),
    "curve": lambda v: CurveGroup(int(v)),
    "cl": lambda v: ClassGroup(int(v)),
    "gl2": lambda v: GL2Group(int(v)),
}


def make_group(descriptor: str) -> GroupHandle:
    """Parse a descriptor string: zn:<n>, curve:<p>, cl:<D>, gl2:<p>."""
    kind, sep, value = descriptor.partition(":")
    if not sep or kind not in _PARSERS:
        raise UsageError(
            f"bad group descriptor {descriptor!r}; expected zn:<n>, curve:<p>, cl:<D>, or gl2:<p>"
        )
    try:
        return _PARSERS[kind](value)
    except ValueError as exc:
        raise UsageError(f"bad group descriptor {descriptor!r}: {exc}") from None
