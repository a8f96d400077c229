"""Conjugation orbits on M2(O/p^l') and their stabilizers.

Characters of the congruence kernel K_l correspond to matrices over the
level-l' quotient (l = ceil(r/2), l' = floor(r/2)), and the group acts
on both sides by conjugation.  This module lists one representative per
regular orbit in three reduced families:

  split_diag              diag(a, d) with a != d mod p,
  cuspidal                companion(Delta, s), x^2 - s x + Delta
                          irreducible mod p,
  scalar_plus_nilpotent   companion(Delta, s) with s, Delta in (p),

canonicalizes arbitrary matrices onto that list (recording a scalar
twist when one has to be split off first), and builds the stabilizer
subgroup O_r[b]^x K_l' from a lift b of the representative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ring import ring_make
from .matgroup import (
    Subgroup,
    mat_conj,
    mat_det,
    mat_identity,
    mat_mul,
    mat_inv,
    mat_reduce,
    mat_scalar,
    mat_sub,
    mat_trace,
    all_matrices,
    is_invertible,
)

SCALAR = "scalar"
SPLIT_DIAG = "split_diag"
CUSPIDAL = "cuspidal"
SCALAR_PLUS_NILPOTENT = "scalar_plus_nilpotent"

REDUCED_TAGS = (SPLIT_DIAG, CUSPIDAL, SCALAR_PLUS_NILPOTENT)


def level_constants(r):
    """(l, l') with l = floor((r+1)/2), l' = floor(r/2); l + l' = r."""
    return (r + 1) // 2, r // 2


@dataclass(frozen=True)
class OrbitDescriptor:
    """One orbit representative beta over O/p^l' together with a lift
    beta_hat over O/p^r.

    params is (a, d) for split_diag and (s, Delta) for the two companion
    families.  The default lift reuses the codes of beta (same digits,
    zero top digits); alternative lifts are allowed and must give the
    same constructed characters.
    """

    spec: object  # RingSpec at full level r
    beta: tuple
    beta_hat: tuple
    type_tag: str
    params: tuple

    @property
    def level(self):
        return level_constants(self.spec.r)[1]


def companion(R, s, delta):
    """[[0, 1], [-Delta, s]], the matrix with char poly x^2 - s x + Delta."""
    return (R.zero, R.one, R.neg(delta), s)


def _char_poly_roots(R, s, delta):
    """All x in R with x^2 - s x + Delta = 0."""
    return [
        x
        for x in R.elements
        if R.add(R.sub(R.mul(x, x), R.mul(s, x)), delta) == R.zero
    ]


def _residue_ring(spec):
    return ring_make(spec.quotient(1))


def classify_mod_p(R, beta):
    """Type of the reduction of beta mod p: scalar, split_diag,
    cuspidal, or scalar_plus_nilpotent.  Total on M2(O/p^m) for any m.

    Returns (tag, data) where data is the scalar a mod p for the two
    scalar-ish tags and the pair of distinct roots or (s, Delta) mod p
    otherwise.
    """
    k = ring_make(R.spec.quotient(1))
    b = mat_reduce(R, beta, 1)
    a, bb, c, d = b
    if bb == k.zero and c == k.zero and a == d:
        return SCALAR, a
    s = mat_trace(k, b)
    delta = mat_det(k, b)
    roots = sorted(set(_char_poly_roots(k, s, delta)))
    if not roots:
        return CUSPIDAL, (s, delta)
    if len(roots) == 2:
        return SPLIT_DIAG, tuple(roots)
    # double root: conjugate to a I + nilpotent
    return SCALAR_PLUS_NILPOTENT, roots[0]


def make_descriptor(spec, beta, type_tag, params, lift_delta=None):
    """Descriptor with the canonical lift, or beta_hat + p^l' * lift_delta."""
    Rr = ring_make(spec)
    lp = level_constants(spec.r)[1]
    beta_hat = tuple(beta)
    if lift_delta is not None:
        shift = tuple(Rr.pi_mul(e, lp) for e in lift_delta)
        beta_hat = tuple(Rr.add(x, y) for x, y in zip(beta_hat, shift))
    assert mat_reduce(Rr, beta_hat, lp) == tuple(beta)
    return OrbitDescriptor(spec, tuple(beta), beta_hat, type_tag, tuple(params))


def orbit_reps(spec, lift_delta=None):
    """The reduced orbit representatives over O/p^l'.

    split_diag: unordered pairs a != d mod p, listed with a < d in code
    order; cuspidal: all (s, Delta) with x^2 - s x + Delta irreducible
    mod p; scalar_plus_nilpotent: all (s, Delta) with s, Delta in (p).
    Distinct listed representatives lie in distinct orbits.
    """
    r = spec.r
    l, lp = level_constants(r)
    if lp < 1:
        raise ValueError("no orbit level below r = 2")
    Rq = ring_make(spec.quotient(lp))
    k = _residue_ring(spec)
    out = []
    for a in Rq.elements:
        for d in Rq.elements:
            if a < d and Rq.reduce_code(a, 1) != Rq.reduce_code(d, 1):
                beta = (a, Rq.zero, Rq.zero, d)
                out.append(
                    make_descriptor(spec, beta, SPLIT_DIAG, (a, d), lift_delta)
                )
    for s in Rq.elements:
        for delta in Rq.elements:
            sbar = Rq.reduce_code(s, 1)
            dbar = Rq.reduce_code(delta, 1)
            if not _char_poly_roots(k, sbar, dbar):
                beta = companion(Rq, s, delta)
                out.append(
                    make_descriptor(spec, beta, CUSPIDAL, (s, delta), lift_delta)
                )
    for s in Rq.elements:
        for delta in Rq.elements:
            if Rq.valuation(s) >= 1 and Rq.valuation(delta) >= 1:
                beta = companion(Rq, s, delta)
                out.append(
                    make_descriptor(
                        spec, beta, SCALAR_PLUS_NILPOTENT, (s, delta), lift_delta
                    )
                )
    return out


@dataclass(frozen=True)
class Canonicalization:
    """g conjugates (beta - twist * I) onto descriptor.beta; descriptor
    is None exactly when beta is a scalar twist of something living one
    level down (reduction scalar), which the recursion handles without
    an orbit."""

    conjugator: tuple
    twist: object  # code in O/p^l' subtracted from beta, or None
    descriptor: object


def _find_cyclic_basis(R, beta):
    """P with P^-1 beta P = companion(char poly); exists whenever the
    reduction of beta mod p is non-scalar."""
    s = mat_trace(R, beta)
    for v in ((R.one, R.zero), (R.zero, R.one), (R.one, R.one)):
        bv = (
            R.add(R.mul(beta[0], v[0]), R.mul(beta[1], v[1])),
            R.add(R.mul(beta[2], v[0]), R.mul(beta[3], v[1])),
        )
        p1 = (R.sub(bv[0], R.mul(s, v[0])), R.sub(bv[1], R.mul(s, v[1])))
        P = (p1[0], v[0], p1[1], v[1])
        if is_invertible(R, P):
            return P
    raise ValueError("no cyclic vector; reduction is scalar")


def canonicalize(spec, beta):
    """Conjugator g in GL2(O/p^l') and twist data landing beta on the
    reduced orbit list.  Total: scalar reductions return a twist with no
    descriptor."""
    lp = level_constants(spec.r)[1]
    Rq = ring_make(spec.quotient(lp))
    tag, data = classify_mod_p(Rq, beta)
    ident = mat_identity(Rq)

    if tag == SCALAR:
        a = data  # residue code; canonical section to O/p^l'
        rest = mat_sub(Rq, beta, mat_scalar(Rq, a))
        sub_tag, _ = classify_mod_p(Rq, rest)
        assert sub_tag == SCALAR
        return Canonicalization(ident, a, None)

    if tag == SPLIT_DIAG:
        s = mat_trace(Rq, beta)
        delta = mat_det(Rq, beta)
        roots = _char_poly_roots(Rq, s, delta)
        pair = None
        for a in roots:
            d = Rq.sub(s, a)
            if a < d and Rq.reduce_code(a, 1) != Rq.reduce_code(d, 1):
                pair = (a, d)
        assert pair is not None, "split char poly without a distinct root pair"
        a, d = pair
        target = (a, Rq.zero, Rq.zero, d)
        g = _conjugator_to(Rq, beta, target)
        desc = make_descriptor(spec, target, SPLIT_DIAG, (a, d))
        return Canonicalization(g, None, desc)

    if tag == CUSPIDAL:
        s = mat_trace(Rq, beta)
        delta = mat_det(Rq, beta)
        target = companion(Rq, s, delta)
        P = _find_cyclic_basis(Rq, beta)
        g = mat_inv(Rq, P)
        assert mat_conj(Rq, g, beta) == target
        desc = make_descriptor(spec, target, CUSPIDAL, (s, delta))
        return Canonicalization(g, None, desc)

    # scalar plus nilpotent: split off the scalar, then companion form
    a = data  # double root mod p, canonical section
    rest = mat_sub(Rq, beta, mat_scalar(Rq, a))
    s = mat_trace(Rq, rest)
    delta = mat_det(Rq, rest)
    assert Rq.valuation(s) >= 1 and Rq.valuation(delta) >= 1
    target = companion(Rq, s, delta)
    P = _find_cyclic_basis(Rq, rest)
    g = mat_inv(Rq, P)
    assert mat_conj(Rq, g, rest) == target
    desc = make_descriptor(spec, target, SCALAR_PLUS_NILPOTENT, (s, delta))
    return Canonicalization(g, a, desc)


def _conjugator_to(R, beta, target):
    """g with g beta g^-1 = target, by eigenvector assembly for split
    pairs and exhaustive fallback otherwise."""
    a, d = target[0], target[3]
    va = _kernel_vector(R, mat_sub(R, beta, mat_scalar(R, a)))
    vd = _kernel_vector(R, mat_sub(R, beta, mat_scalar(R, d)))
    for u in va:
        for v in vd:
            P = (u[0], v[0], u[1], v[1])
            if is_invertible(R, P):
                g = mat_inv(R, P)
                if mat_conj(R, g, beta) == target:
                    return g
    raise ValueError("no conjugator found")


def _kernel_vector(R, m):
    out = []
    for x in R.elements:
        for y in R.elements:
            if (x, y) == (R.zero, R.zero):
                continue
            if (
                R.add(R.mul(m[0], x), R.mul(m[1], y)) == R.zero
                and R.add(R.mul(m[2], x), R.mul(m[3], y)) == R.zero
            ):
                out.append((x, y))
    return out


def adjoined_units(Rr, beta_hat):
    """O_r[beta_hat]^x: the invertible matrices x + y beta_hat.  Abelian
    for every regular orbit (asserted)."""
    seen = {}
    for x in Rr.elements:
        for y in Rr.elements:
            m = (
                Rr.add(x, Rr.mul(y, beta_hat[0])),
                Rr.mul(y, beta_hat[1]),
                Rr.mul(y, beta_hat[2]),
                Rr.add(x, Rr.mul(y, beta_hat[3])),
            )
            if is_invertible(Rr, m):
                seen[m] = True
    sub = Subgroup(Rr, frozenset(seen))
    return sub


def stabilizer(G, orbit):
    """T(psi_beta) = O_r[beta_hat]^x K_l' as a set product; equals the
    exhaustive stabilizer of psi_beta for the regular orbits (checked in
    the test suite, not assumed here)."""
    from .matgroup import congruence_subgroup  # local to avoid cycle noise

    Rr = G.ring
    lp = level_constants(Rr.r)[1]
    C = adjoined_units(Rr, orbit.beta_hat)
    Klp = congruence_subgroup(G, lp)
    T = C.product(Klp)
    assert Klp.elems <= T.elems
    return T
