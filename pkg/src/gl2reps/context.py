"""Shared computation context for one group GL2(O/p^r).

Bundles the ring, the additive character, the enumerated group with its
canonical conjugacy classes, the congruence kernels, and a few caches
(coset transversals, the unit character table).  Everything inside is
immutable once built; contexts are memoized per (spec, psi unit, cap).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ring import abelian_chars, additive_char, ring_make
from .matgroup import (
    ENUMERATION_CAP,
    congruence_subgroup,
    conjugacy_classes,
    coset_reps,
    group_enumerate,
    upper_triangular_subgroup,
)
from .orbits import level_constants


@dataclass
class GroupContext:
    spec: object
    ring: object
    psi: object
    G: object
    classes: object
    l: int
    lp: int
    cache_dir: object = None
    _K: dict = field(default_factory=dict)
    _B: object = None
    _unit_chars: object = None
    _transversals: dict = field(default_factory=dict)

    @property
    def r(self):
        return self.spec.r

    def K(self, i):
        if i not in self._K:
            self._K[i] = congruence_subgroup(self.G, i)
        return self._K[i]

    def B(self):
        if self._B is None:
            self._B = upper_triangular_subgroup(self.G)
        return self._B

    def unit_char_table(self):
        """Characters of O_r^x (used for det twists and extensions)."""
        if self._unit_chars is None:
            self._unit_chars = abelian_chars(self.ring.units, self.ring.mul)
        return self._unit_chars

    def transversal(self, sub_elems):
        key = frozenset(sub_elems)
        if key not in self._transversals:
            self._transversals[key] = coset_reps(self.G, sorted(key))
        return self._transversals[key]


_REGISTRY = {}


def build_context(spec, psi_unit=1, cap=ENUMERATION_CAP, cache_dir=None):
    key = (spec, psi_unit, cap, cache_dir)
    if key not in _REGISTRY:
        ring = ring_make(spec)
        psi = additive_char(spec, psi_unit)
        G = group_enumerate(spec, cap=cap)
        classes = conjugacy_classes(G, cache_dir=cache_dir)
        l, lp = level_constants(spec.r)
        _REGISTRY[key] = GroupContext(
            spec, ring, psi, G, classes, l, lp, cache_dir
        )
    return _REGISTRY[key]
