"""2x2 matrices over O/p^r, the group GL2(O/p^r), congruence kernels,
subgroup and coset machinery, and conjugacy classes.

A matrix is a 4-tuple of ring codes in row-major order (a, b, c, d).
An invertible matrix is one whose determinant is a unit; inverses are
exact via the adjugate.  Subgroups are stored as hashed element sets
with a cached sorted order, which makes every derived computation
deterministic.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

from .ring import RingSpec, ring_make

ENUMERATION_CAP = 30000


class GroupTooLargeError(ValueError):
    pass


# matrix primitives


def mat_identity(R):
    return (R.one, R.zero, R.zero, R.one)


def mat_scalar(R, c):
    return (c, R.zero, R.zero, c)


def mat_mul(R, x, y):
    a, b, c, d = x
    e, f, g, h = y
    A, M = R.add, R.mul
    return (
        A(M(a, e), M(b, g)),
        A(M(a, f), M(b, h)),
        A(M(c, e), M(d, g)),
        A(M(c, f), M(d, h)),
    )


def mat_add(R, x, y):
    return tuple(R.add(u, v) for u, v in zip(x, y))


def mat_sub(R, x, y):
    return tuple(R.sub(u, v) for u, v in zip(x, y))

def mat_neg(R, x):
    return tuple(R.neg(u) for u in x)


def mat_det(R, x):
    a, b, c, d = x
    return R.sub(R.mul(a, d), R.mul(b, c))


def mat_trace(R, x):
    return R.add(x[0], x[3])


def mat_inv(R, x):
    """Exact inverse via adjugate over determinant; the determinant must
    be a unit."""
    a, b, c, d = x
    u = R.inv(mat_det(R, x))  # raises ValueError("non-unit") if singular
    return (R.mul(d, u), R.mul(R.neg(b), u), R.mul(R.neg(c), u), R.mul(a, u))


def mat_conj(R, g, x):
    """g x g^-1."""
    return mat_mul(R, mat_mul(R, g, x), mat_inv(R, g))


def mat_commutator(R, x, y):
    """x y x^-1 y^-1."""
    return mat_mul(R, mat_mul(R, x, y), mat_mul(R, mat_inv(R, x), mat_inv(R, y)))


def mat_reduce(R, x, m):
    """Entrywise canonical projection to O/p^m."""
    return tuple(R.reduce_code(e, m) for e in x)


def mat_pow(R, x, k):
    out = mat_identity(R)
    acc = x
    while k:
        if k & 1:
            out = mat_mul(R, out, acc)
        acc = mat_mul(R, acc, acc)
        k >>= 1
    return out


def is_invertible(R, x):
    return R.is_unit(mat_det(R, x))


def all_matrices(R):
    size = R.size
    for a in range(size):
        for b in range(size):
            for c in range(size):
                for d in range(size):
                    yield (a, b, c, d)


# subgroups


@dataclass
class Subgroup:
    """A subgroup of GL2(O/p^r), stored as a hashed element set.

    Iteration runs over the cached sorted order, so everything derived
    from a Subgroup is reproducible.
    """

    ring: object
    elems: frozenset
    gens: tuple = ()
    _sorted: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._sorted is None:
            object.__setattr__(self, "_sorted", tuple(sorted(self.elems)))

    def __len__(self):
        return len(self.elems)

    def __contains__(self, x):
        return x in self.elems

    def __iter__(self):
        return iter(self._sorted)

    @property
    def identity(self):
        return mat_identity(self.ring)

    def check_group(self):
        """Closure under product and inverse, identity membership."""
        R = self.ring
        if self.identity not in self.elems:
            return False
        for x in self._sorted:
            if mat_inv(R, x) not in self.elems:
                return False
            for y in self._sorted:
                if mat_mul(R, x, y) not in self.elems:
                    return False
        return True

    def product(self, other):
        """The set product {xy}; a subgroup whenever one factor
        normalizes the other (the caller's responsibility)."""
        R = self.ring
        out = set()
        for x in self._sorted:
            for y in other:
                out.add(mat_mul(R, x, y))
        return Subgroup(R, frozenset(out))

    def intersection(self, other):
        return Subgroup(self.ring, self.elems & other.elems)

    def conjugated(self, g):
        R = self.ring
        gi = mat_inv(R, g)
        return Subgroup(
            R, frozenset(mat_mul(R, mat_mul(R, g, x), gi) for x in self.elems)
        )

    def is_normalized_by(self, elems):
        return all(self.conjugated(g).elems == self.elems for g in elems)


def mulclose(R, gens, maxsize=None):
    """Multiplicative closure of a generator list (BFS)."""
    els = {mat_identity(R)}
    els.update(gens)
    frontier = sorted(els)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = mat_mul(R, x, g)
                if y not in els:
                    els.add(y)
                    new.append(y)
                    if maxsize and len(els) > maxsize:
                        raise GroupTooLargeError("too large; raise cap")
        frontier = new
    return els


def subgroup_closure(R, gens):
    """Subgroup generated by a list of matrices; closure({}) = {1}."""
    return Subgroup(R, frozenset(mulclose(R, list(gens))), gens=tuple(gens))


def group_order_formula(spec):
    p, r = spec.p, spec.r
    return p ** (4 * (r - 1)) * (p * p - 1) * (p * p - p)


def standard_generators(R):
    """Both elementary transvections plus diag(u, 1) over generators of
    the unit group.  Adequacy is verified by group_enumerate, never
    assumed."""
    gens = [
        (R.one, R.one, R.zero, R.one),
        (R.one, R.zero, R.one, R.one),
    ]
    for u in R.unit_gens():
        gens.append((u, R.zero, R.zero, R.one))
    return gens


class Group(Subgroup):
    """All of GL2(O/p^r), with a verified generating set."""

    def __init__(self, spec, elems, gens):
        super().__init__(ring_make(spec), frozenset(elems), tuple(gens))
        self.spec = spec


def group_enumerate(spec, cap=ENUMERATION_CAP):
    """Enumerate GL2(O/p^r).  Exact contract: precisely the matrices
    with unit determinant; fails fast when the formula order exceeds the
    cap."""
    order = group_order_formula(spec)
    if order > cap:
        raise GroupTooLargeError("too large; raise cap")
    R = ring_make(spec)
    elems = [x for x in all_matrices(R) if is_invertible(R, x)]
    assert len(elems) == order
    gens = standard_generators(R)
    closure = mulclose(R, gens)
    if len(closure) != order:
        raise AssertionError("standard generators failed the adequacy check")
    return Group(spec, elems, gens)


def congruence_subgroup(G, i):
    """K_i = {g congruent to 1 mod p^i}, for 1 <= i <= r-1."""
    R = G.ring
    r = R.r
    if not 1 <= i <= r - 1:
        raise ValueError("congruence level out of range")
    q = R.p ** i
    one = mat_identity(R)
    elems = frozenset(
        g
        for g in G.elems
        if all(R.sub(e, o) % q == 0 for e, o in zip(g, one))
    )
    sub = Subgroup(R, elems)
    assert len(sub) == R.p ** (4 * (r - i))
    return sub


def upper_triangular_subgroup(G):
    """B_r: the invertible upper-triangular matrices."""
    return Subgroup(G.ring, frozenset(g for g in G.elems if g[2] == 0))


def find_generators(sub):
    """Small generating set for an enumerated subgroup, greedy."""
    R = sub.ring
    gens = []
    closure = {mat_identity(R)}
    for x in sub:
        if x in closure:
            continue
        gens.append(x)
        closure = mulclose(R, gens)
        if len(closure) == len(sub):
            break
    assert len(closure) == len(sub)
    return gens


def coset_reps(G, H):
    """Left transversal of H in G: one representative per coset gH, in
    first-seen order over the sorted elements of G."""
    R = G.ring
    if isinstance(H, Subgroup):
        h_elems = H._sorted
    else:
        h_elems = tuple(sorted(H))
    for h in h_elems:
        if h not in G.elems:
            raise ValueError("H is not contained in G")
    reps = []
    covered = set()
    for g in G:
        if g in covered:
            continue
        reps.append(g)
        for h in h_elems:
            covered.add(mat_mul(R, g, h))
    assert len(reps) * len(h_elems) == len(G)
    return reps


# conjugacy classes


@dataclass
class ConjClasses:
    """Conjugation-orbit partition of a group.

    Classes are ordered by their minimal element code and represented by
    that minimal element, so the layout is canonical for the group.
    """

    group: Subgroup
    reps: tuple
    sizes: tuple
    index: dict

    def __len__(self):
        return len(self.reps)

    @property
    def identity_index(self):
        return self.index[mat_identity(self.group.ring)]


def conjugacy_classes(G, gens=None, cache_dir=None):
    """Orbit partition of G under conjugation, by BFS over a generating
    set (G.gens when present, else a greedy verified set)."""
    if cache_dir is not None:
        cached = _load_class_cache(G, cache_dir)
        if cached is not None:
            return cached
    R = G.ring
    if gens is None:
        gens = list(G.gens) if G.gens else find_generators(G)
    gen_invs = [(g, mat_inv(R, g)) for g in gens]
    index = {}
    classes = []
    for seed in G:
        if seed in index:
            continue
        orbit = {seed}
        frontier = [seed]
        while frontier:
            new = []
            for x in frontier:
                for g, gi in gen_invs:
                    y = mat_mul(R, mat_mul(R, g, x), gi)
                    if y not in orbit:
                        orbit.add(y)
                        new.append(y)
            frontier = new
        classes.append(orbit)
        k = len(classes) - 1
        for x in orbit:
            index[x] = k
    order = sorted(range(len(classes)), key=lambda k: min(classes[k]))
    relabel = {old: new for new, old in enumerate(order)}
    reps = tuple(min(classes[k]) for k in order)
    sizes = tuple(len(classes[k]) for k in order)
    index = {x: relabel[k] for x, k in index.items()}
    assert sum(sizes) == len(G)
    result = ConjClasses(G, reps, sizes, index)
    if cache_dir is not None:
        _store_class_cache(G, result, cache_dir)
    return result


# conjugacy-class cache (JSON, binary-free)

CLASS_CACHE_SCHEMA = 1


def _spec_key(spec):
    return f"{spec.flavor}-p{spec.p}-r{spec.r}"


def _class_cache_path(spec, cache_dir):
    return os.path.join(
        cache_dir, f"classes-{_spec_key(spec)}-v{CLASS_CACHE_SCHEMA}.json"
    )


def classes_to_jsonable(classes):
    spec = getattr(classes.group, "spec", None)
    return {
        "schema_version": CLASS_CACHE_SCHEMA,
        "spec": {"flavor": spec.flavor, "p": spec.p, "r": spec.r},
        "group_order": len(classes.group),
        "class_reps": [list(map(int, rep)) for rep in classes.reps],
        "sizes": list(classes.sizes),
    }


def _load_class_cache(G, cache_dir):
    spec = getattr(G, "spec", None)
    if spec is None:
        return None
    path = _class_cache_path(spec, cache_dir)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if data.get("schema_version") != CLASS_CACHE_SCHEMA:
        return None
    if data.get("group_order") != len(G):
        return None
    reps = [tuple(rep) for rep in data["class_reps"]]
    # regenerate the partition from the cached representatives
    fresh = conjugacy_classes(G, cache_dir=None)
    if list(fresh.reps) != reps or list(fresh.sizes) != data["sizes"]:
        return None
    return fresh


def _store_class_cache(G, classes, cache_dir):
    spec = getattr(G, "spec", None)
    if spec is None:
        return
    os.makedirs(cache_dir, exist_ok=True)
    path = _class_cache_path(spec, cache_dir)
    atomic_write_json(path, classes_to_jsonable(classes))


def atomic_write_json(path, data):
    """Write-temp-then-rename so readers never see partial files."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# lift isomorphism M2(O/p^(r-i)) <-> K_i for i >= r/2


def lift_to_congruence(R, i, x):
    """1 + pi^i * x for a matrix x over O/p^(r-i).

    Only a group isomorphism onto K_i for i >= r/2, where squares of
    pi^i vanish; refuses smaller i.
    """
    if 2 * i < R.r:
        raise ValueError("lift is not a homomorphism below r/2")
    one = mat_identity(R)
    shifted = tuple(R.pi_mul(e, i) for e in x)
    return mat_add(R, one, shifted)


def congruence_to_matrix(R, i, g):
    """Inverse of lift_to_congruence: digits i..r-1 of g - 1, as a
    matrix over O/p^(r-i)."""
    if 2 * i < R.r:
        raise ValueError("lift is not a homomorphism below r/2")
    one = mat_identity(R)
    q = R.p ** i
    diff = mat_sub(R, g, one)
    for e in diff:
        if e % q != 0:
            raise ValueError("element is not in K_i")
    return tuple(e // q for e in diff)


def lift_iso(spec, i):
    """The pair of mutually inverse maps M2(O/p^(r-i)) <-> K_i."""
    R = ring_make(spec)
    return (lambda x: lift_to_congruence(R, i, x),
            lambda g: congruence_to_matrix(R, i, g))
