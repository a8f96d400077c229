"""Class functions, linear characters of subgroups, induction,
restriction, and inner products.

A LinearChar stores explicit values on its domain subgroup; no formula
compression is attempted at these sizes.  Induction uses the transversal
form of the Frobenius formula, evaluated only at class representatives,
so the cost is [G:H] per class instead of |G|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ring import TOL, ring_make
from .matgroup import (
    ConjClasses,
    Subgroup,
    congruence_to_matrix,
    coset_reps,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_trace,
)


@dataclass
class LinearChar:
    """A one-dimensional character of a subgroup, as a value map."""

    domain: Subgroup
    values: dict

    def __call__(self, x):
        return self.values[x]

    def __contains__(self, x):
        return x in self.values

    def conjugated(self, g):
        """x -> chi(g x g^-1); a character of g^-1 (domain) g."""
        R = self.domain.ring
        gi = mat_inv(R, g)
        dom = self.domain.conjugated(gi)
        vals = {x: self.values[mat_mul(R, mat_mul(R, g, x), gi)] for x in dom}
        return LinearChar(dom, vals)

    def restricted(self, sub):
        return LinearChar(sub, {x: self.values[x] for x in sub})

    def kernel(self):
        R = self.domain.ring
        elems = frozenset(x for x, v in self.values.items() if abs(v - 1) < TOL)
        return Subgroup(R, elems)

    def multiplicativity_residual(self, pairs=None):
        """Worst |chi(xy) - chi(x)chi(y)| over all pairs (or a given
        iterable of pairs)."""
        R = self.domain.ring
        worst = 0.0
        if pairs is None:
            pairs = ((x, y) for x in self.domain for y in self.domain)
        for x, y in pairs:
            worst = max(
                worst,
                abs(self.values[mat_mul(R, x, y)] - self.values[x] * self.values[y]),
            )
        return worst


@dataclass
class ClassFunction:
    """A complex function on the conjugacy classes of a group."""

    classes: ConjClasses
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        assert len(self.values) == len(self.classes)

    def at(self, g):
        return self.values[self.classes.index[g]]

    @property
    def degree(self):
        return self.values[self.classes.identity_index]


@dataclass
class IrrepRecord:
    """One constructed irreducible: provenance label, dimension, and the
    character as a class function.  orbit_type records which mod-p orbit
    family produced it (internal bookkeeping only)."""

    label: str
    dim: int
    chi: ClassFunction
    orbit_type: str = ""


@dataclass
class CharacterTable:
    spec: object
    classes: ConjClasses
    irreps: list

    def value_matrix(self):
        return np.array([rec.chi.values for rec in self.irreps])


def psi_beta(G, beta, i, psi):
    """The character of K_i attached to a matrix beta over O/p^(r-i):
    x -> psi(Tr(beta (x - 1))).  Requires i >= r/2 so that K_i is
    abelian and the correspondence is a bijection."""
    from .matgroup import congruence_subgroup

    R = G.ring
    r = R.r
    if 2 * i < r:
        raise ValueError("psi_beta needs i >= r/2")
    Rq = ring_make(R.spec.quotient(r - i))
    Ki = congruence_subgroup(G, i)
    vals = {}
    for g in Ki:
        m = congruence_to_matrix(R, i, g)
        t = mat_trace(Rq, mat_mul(Rq, beta, m))
        # Tr(beta (g-1)) in O/p^r is pi^i times the level-(r-i) trace
        vals[g] = psi(R.pi_mul(t, i))
    return LinearChar(Ki, vals)


def induce(H, chi, G, classes, transversal=None):
    """Frobenius induction of a character of H (a LinearChar or a value
    map on the elements of H, traces allowed) to a class function on G."""
    R = G.ring
    values = chi.values if isinstance(chi, LinearChar) else chi
    dom = frozenset(values)
    if transversal is None:
        transversal = coset_reps(G, sorted(dom))
    pairs = [(x, mat_inv(R, x)) for x in transversal]
    out = np.zeros(len(classes), dtype=complex)
    for idx, rep in enumerate(classes.reps):
        acc = 0.0 + 0j
        for x, xi in pairs:
            y = mat_mul(R, mat_mul(R, xi, rep), x)
            if y in dom:
                acc += values[y]
        out[idx] = acc
    return ClassFunction(classes, out)


def inner(f, g):
    """(1/|G|) sum over classes of size * f * conj(g)."""
    if f.classes is not g.classes and f.classes.reps != g.classes.reps:
        raise ValueError("mismatched class data")
    sizes = np.array(f.classes.sizes)
    total = np.sum(sizes * f.values * np.conj(g.values))
    return total / sizes.sum()


def inner_on_subgroup(H, f, g):
    """Inner product of two value maps on an enumerated subgroup."""
    total = sum(f[x] * np.conj(g[x]) for x in H)
    return total / len(H)


def mult_by_linear(f, lam):
    """Twist a class function by lam(det): pointwise product with the
    one-dimensional character lam o det."""
    R = f.classes.group.ring
    twist = np.array([lam[mat_det(R, rep)] for rep in f.classes.reps])
    return ClassFunction(f.classes, f.values * twist)


def psi_beta_matrix(G, i, psi):
    """Value matrix of every kernel character of K_i at once: rows
    indexed by beta over O/p^(r-i), columns by the elements of K_i."""
    from .matgroup import congruence_subgroup, all_matrices

    R = G.ring
    r = R.r
    Rq = ring_make(R.spec.quotient(r - i))
    Ki = congruence_subgroup(G, i)
    elems = list(Ki)
    ms = [congruence_to_matrix(R, i, g) for g in elems]
    betas = list(all_matrices(Rq))
    out = np.empty((len(betas), len(elems)), dtype=complex)
    for bi, beta in enumerate(betas):
        for gi, m in enumerate(ms):
            t = mat_trace(Rq, mat_mul(Rq, beta, m))
            out[bi, gi] = psi(R.pi_mul(t, i))
    return betas, elems, out


def restriction_multiplicities(G, classes, cf, i, psi):
    """<Res_{K_i} cf, psi_beta> for every beta over O/p^(r-i), as a dict
    keyed by beta.  Used to check that each irreducible lies over
    exactly one orbit with a single multiplicity."""
    from .matgroup import congruence_subgroup, all_matrices

    R = G.ring
    r = R.r
    Rq = ring_make(R.spec.quotient(r - i))
    Ki = congruence_subgroup(G, i)
    elems = list(Ki)
    cf_vals = np.array([cf.values[classes.index[g]] for g in elems])
    out = {}
    for beta in all_matrices(Rq):
        pb = np.array(
            [
                psi(R.pi_mul(mat_trace(Rq, mat_mul(Rq, beta,
                    congruence_to_matrix(R, i, g))), i))
                for g in elems
            ]
        )
        out[beta] = np.sum(cf_vals * np.conj(pb)) / len(elems)
    return out
