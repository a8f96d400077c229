"""gl2reps: the irreducible characters of GL2 over Z/p^r and F_p[t]/t^r.

The library builds every irreducible character of the finite groups
GL2(O/p^r) for small p and r by orbit methods (twisted inflation from
level r-1 plus explicit induced constructions for the regular orbits),
and certifies the result against counting identities, orthogonality,
and an independent brute-force character-table oracle.
"""

from .ring import RingSpec, TOL, abelian_chars, additive_char, ring_make
from .matgroup import (
    ENUMERATION_CAP,
    GroupTooLargeError,
    Subgroup,
    ConjClasses,
    congruence_subgroup,
    conjugacy_classes,
    coset_reps,
    group_enumerate,
    lift_iso,
    subgroup_closure,
)

__version__ = "0.1.0"

__all__ = [
    "RingSpec",
    "TOL",
    "abelian_chars",
    "additive_char",
    "ring_make",
    "ENUMERATION_CAP",
    "GroupTooLargeError",
    "Subgroup",
    "ConjClasses",
    "congruence_subgroup",
    "conjugacy_classes",
    "coset_reps",
    "group_enumerate",
    "lift_iso",
    "subgroup_closure",
    "__version__",
]
