"""Exact arithmetic in the finite local rings O/p^r.

Two flavors are supported: "padic" is Z/p^r with uniformizer p, and
"laurent" is F_p[t]/t^r with uniformizer t.  The residue field is F_p in
both cases.

Elements are integer codes in range(p**r).  A padic code is the residue
itself; a laurent code packs the polynomial coefficients base p, least
significant digit first.  With this packing, reduction to a lower level
is ``code % p**m`` in both flavors, the canonical section back up is the
identity on codes, and multiplication by the uniformizer is a digit
shift, ``code * p % p**r``.

The module also provides the additive character of conductor exactly
p^r, and a toolkit for linear characters of finite abelian groups:
enumeration of the full dual, and extension of a character from a
subgroup along a chain of cyclic steps.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from math import pi

TOL = 1e-6

# op tables are precomputed below this ring size; larger rings fall back
# to per-call arithmetic
_TABLE_LIMIT = 1024


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def root_of_unity(k, n):
    """exp(2*pi*i*k/n), generated from the exact angle."""
    return cmath.exp(2j * pi * (k % n) / n)


@dataclass(frozen=True)
class RingSpec:
    """Names one ring O/p^r: flavor, residue characteristic, level."""

    flavor: str
    p: int
    r: int

    def __post_init__(self):
        if self.flavor not in ("padic", "laurent"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.r < 1:
            raise ValueError("level r must be >= 1")

    @property
    def size(self):
        return self.p ** self.r

    def quotient(self, m):
        """The spec of O/p^m for 1 <= m <= r."""
        if not 1 <= m <= self.r:
            raise ValueError("quotient level out of range")
        return RingSpec(self.flavor, self.p, m)


class Ring:
    """Arithmetic context for one RingSpec.

    add/sub/mul/neg are total.  inv is defined exactly on the units
    (valuation 0) and raises ValueError("non-unit") elsewhere.
    valuation(x) is the largest i with x in (pi^i); valuation(0) = r by
    convention.
    """

    def __init__(self, spec):
        self.spec = spec
        self.p = spec.p
        self.r = spec.r
        self.size = spec.size
        self.zero = 0
        self.one = 1
        self.elements = tuple(range(self.size))

        if spec.flavor == "padic":
            add = lambda x, y: (x + y) % self.size
            mul = lambda x, y: (x * y) % self.size
            neg = lambda x: (-x) % self.size
        else:
            self._digits = [self._decode(x) for x in self.elements]
            add = self._add_laurent
            mul = self._mul_laurent
            neg = self._neg_laurent

        if self.size <= _TABLE_LIMIT:
            add_t = [[add(x, y) for y in self.elements] for x in self.elements]
            mul_t = [[mul(x, y) for y in self.elements] for x in self.elements]
            neg_t = [neg(x) for x in self.elements]
            self.add = lambda x, y: add_t[x][y]
            self.mul = lambda x, y: mul_t[x][y]
            self.neg = lambda x: neg_t[x]
        else:
            self.add = add
            self.mul = mul
            self.neg = neg

        self._val = [self._valuation_raw(x) for x in self.elements]
        self.units = tuple(x for x in self.elements if self._val[x] == 0)
        self.unit_set = frozenset(self.units)
        m = len(self.units)
        self._inv = {u: self.pow(u, m - 1) for u in self.units}
        for u, v in self._inv.items():
            assert self.mul(u, v) == self.one
        self._unit_gens = None

    # laurent digit helpers

    def _decode(self, x):
        p = self.p
        digits = []
        for _ in range(self.r):
            digits.append(x % p)
            x //= p
        return tuple(digits)

    def _encode(self, digits):
        code = 0
        for d in reversed(digits):
            code = code * self.p + d
        return code

    def _add_laurent(self, x, y):
        p = self.p
        dx, dy = self._digits[x], self._digits[y]
        return self._encode([(a + b) % p for a, b in zip(dx, dy)])

    def _neg_laurent(self, x):
        p = self.p
        return self._encode([(-a) % p for a in self._digits[x]])

    def _mul_laurent(self, x, y):
        p, r = self.p, self.r
        dx, dy = self._digits[x], self._digits[y]
        out = [0] * r
        for i, a in enumerate(dx):
            if a == 0:
                continue
            for j in range(r - i):
                out[i + j] = (out[i + j] + a * dy[j]) % p
        return self._encode(out)

    def _valuation_raw(self, x):
        if x == 0:
            return self.r
        if self.spec.flavor == "padic":
            v = 0
            while x % self.p == 0:
                x //= self.p
                v += 1
            return v
        for i, d in enumerate(self._digits[x]):
            if d != 0:
                return i
        return self.r

    # arithmetic API

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def inv(self, x):
        try:
            return self._inv[x]
        except KeyError:
            raise ValueError("non-unit") from None

    def valuation(self, x):
        return self._val[x]

    def is_unit(self, x):
        return x in self.unit_set

    def pow(self, x, k):
        out = self.one
        acc = x
        while k:
            if k & 1:
                out = self.mul(out, acc)
            acc = self.mul(acc, acc)
            k >>= 1
        return out

    def reduce_code(self, x, m):
        """Canonical projection to O/p^m (same digits, top digits dropped)."""
        return x % self.p ** m

    def pi_mul(self, x, i=1):
        """Multiply by the i-th power of the uniformizer (digit shift)."""
        return (x * self.p ** i) % self.size

    def mul_order(self, u):
        if not self.is_unit(u):
            raise ValueError("non-unit")
        k, x = 1, u
        while x != self.one:
            x = self.mul(x, u)
            k += 1
        return k

    def unit_gens(self):
        """A generating set for O^x, found by order search."""
        if self._unit_gens is None:
            by_order = sorted(self.units, key=lambda u: (-self.mul_order(u), u))
            gens = []
            closure = {self.one}
            for u in by_order:
                if len(closure) == len(self.units):
                    break
                if u in closure:
                    continue
                gens.append(u)
                frontier = [self.one]
                while frontier:
                    new = []
                    for x in frontier:
                        for g in gens:
                            y = self.mul(x, g)
                            if y not in closure:
                                closure.add(y)
                                new.append(y)
                    frontier = new
            assert len(closure) == len(self.units)
            self._unit_gens = tuple(gens)
        return self._unit_gens


@lru_cache(maxsize=None)
def ring_make(spec):
    """Build (and memoize) the ring context for a spec."""
    return Ring(spec)


class AdditiveChar:
    """The additive character psi of conductor p^r, optionally
    precomposed with multiplication by a unit.

    padic: psi(x) = exp(2 pi i x / p^r).
    laurent: psi reads the top coefficient, psi(sum a_i t^i) =
    exp(2 pi i a_{r-1} / p).
    """

    def __init__(self, ring, unit=1):
        unit = unit % ring.size
        if not ring.is_unit(unit):
            raise ValueError("non-unit")
        self.ring = ring
        self.unit = unit
        p, r = ring.p, ring.r
        vals = []
        for x in ring.elements:
            y = ring.mul(unit, x)
            if ring.spec.flavor == "padic":
                vals.append(root_of_unity(y, ring.size))
            else:
                vals.append(root_of_unity(y // p ** (r - 1), p))
        self._vals = vals

    def __call__(self, x):
        return self._vals[x % self.ring.size]


def additive_char(spec, unit=1):
    return AdditiveChar(ring_make(spec), unit)


def character_extensions(elements, mul, base, identity):
    """All extensions of a linear character to a bigger group.

    ``base`` is a dict mapping a subgroup B to complex units; the return
    value lists the [A:B] extensions to the group A given by
    ``elements``, each again as a dict.  The extension proceeds along a
    chain of cyclic steps: a new generator g of relative order d over
    the current domain contributes the d roots of chi(g^d).  Each step
    checks that the partial character is conjugation-invariant under g,
    which is exactly the condition making the extension multiplicative;
    violation raises ValueError.
    """
    elems = sorted(elements)
    elem_set = set(elems)
    if identity not in base:
        raise ValueError("base character must contain the identity")
    for x in base:
        if x not in elem_set:
            raise ValueError("base domain is not inside the group")

    # discover the extension chain once; it depends only on domains
    dom = set(base)
    chain = []
    for g in elems:
        if g in dom:
            continue
        powers = [identity]
        y = g
        d = 1
        while y not in dom:
            powers.append(y)
            y = mul(y, g)
            d += 1
        gd = y
        ginv = g
        while mul(ginv, g) != identity:
            ginv = mul(ginv, g)
        new_elems = []
        snapshot = sorted(dom)
        for j in range(1, d):
            gj = powers[j]
            for a in snapshot:
                x = mul(gj, a)
                dom.add(x)
                new_elems.append((x, j, a))
        chain.append((g, d, gd, ginv, snapshot, new_elems))
    if dom != elem_set:
        raise ValueError("elements do not form a group over the base domain")

    chars = [dict(base)]
    for g, d, gd, ginv, snapshot, new_elems in chain:
        out = []
        for chi in chars:
            for a in snapshot:
                if abs(chi[mul(mul(g, a), ginv)] - chi[a]) > TOL:
                    raise ValueError("character is not stable under the chain")
            w = chi[gd]
            base_root = cmath.exp(1j * cmath.phase(w) / d)
            for k in range(d):
                v = base_root * root_of_unity(k, d)
                nc = dict(chi)
                vpow = [1.0 + 0j]
                for _ in range(1, d):
                    vpow.append(vpow[-1] * v)
                for x, j, a in new_elems:
                    nc[x] = vpow[j] * chi[a]
                out.append(nc)
        chars = out
    return chars


@dataclass
class AbelianCharTable:
    """The full dual of a finite abelian group, as explicit value maps."""

    elements: tuple
    identity: object
    op: object
    characters: list

    def extend(self, base):
        """All [A:B] extensions of a character given on a subgroup B."""
        return character_extensions(self.elements, self.op, base, self.identity)

    def orthogonality_residual(self):
        n = len(self.elements)
        worst = 0.0
        for a in self.elements:
            s = sum(chi[a] for chi in self.characters)
            target = n if a == self.identity else 0.0
            worst = max(worst, abs(s - target))
        return worst


def abelian_chars(elements, op):
    """Character table of a finite abelian group given by its elements
    and operation.  Raises ValueError on non-abelian input."""
    elems = sorted(elements)
    if not elems:
        raise ValueError("empty group")
    identity = None
    for e in elems:
        if all(op(e, x) == x for x in elems[: min(4, len(elems))]):
            if all(op(e, x) == x for x in elems):
                identity = e
                break
    if identity is None:
        raise ValueError("no identity found; input is not a group")
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            if op(a, b) != op(b, a):
                raise ValueError("non-abelian")
    chars = character_extensions(elems, op, {identity: 1.0 + 0j}, identity)
    if len(chars) != len(elems):
        raise ValueError("character count mismatch; input is not a group")
    return AbelianCharTable(tuple(elems), identity, op, chars)
