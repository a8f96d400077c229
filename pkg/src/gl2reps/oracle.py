"""Brute-force character tables for enumerated finite groups, via the
class-sum eigenvector method, plus a generic orbit-partition helper.

This module is the independent witness for the constructed tables: it
must never import from the construction side (clifford, driver), only
from the shared group plumbing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ring import TOL
from .charfun import CharacterTable, ClassFunction, IrrepRecord
from .matgroup import (
    ConjClasses,
    Subgroup,
    conjugacy_classes,
    find_generators,
    mat_inv,
    mat_mul,
)

MAX_ORDER = 30000
MAX_CLASSES = 200


@dataclass
class ClassAlgebra:
    """Structure constants a[i][j][k] with C_i C_j = sum_k a_ijk C_k."""

    classes: ConjClasses
    constants: np.ndarray  # (k, k, k) integer array, axes (i, j, k)

    def check(self):
        sizes = np.array(self.classes.sizes)
        lhs = self.constants @ sizes  # sum_k a_ijk |C_k|
        rhs = np.outer(sizes, sizes)
        return np.array_equal(lhs, rhs)


def class_algebra(G, classes):
    """Count, for each target class representative g_k, the pairs
    (x, y) in C_i x C_j with x y = g_k."""
    R = G.ring
    k = len(classes)
    invs = {g: mat_inv(R, g) for g in G}
    index = classes.index
    constants = np.zeros((k, k, k), dtype=np.int64)
    for kk, rep in enumerate(classes.reps):
        for x in G:
            i = index[x]
            j = index[mat_mul(R, invs[x], rep)]
            constants[i, j, kk] += 1
    return ClassAlgebra(classes, constants)


def _subgroup_classes(G):
    gens = list(G.gens) if G.gens else find_generators(G)
    return conjugacy_classes(G, gens=gens)


def oracle_table(G, seed=0, classes=None, spec=None):
    """Character table of an enumerated group by simultaneous
    diagonalization of a random combination of class-sum matrices.

    Degrees come back from the orthogonality relation and are checked to
    be integers; rows and columns must be orthogonal within tolerance or
    the combination is retried with fresh coefficients.
    """
    if len(G) > MAX_ORDER:
        raise ValueError("too large; raise cap")
    if classes is None:
        classes = _subgroup_classes(G)
    k = len(classes)
    if k > MAX_CLASSES:
        raise ValueError(f"too many classes ({k} > {MAX_CLASSES})")
    algebra = class_algebra(G, classes)
    assert algebra.check()
    sizes = np.array(classes.sizes, dtype=float)
    order = len(G)
    e_idx = classes.identity_index
    rng = np.random.default_rng(seed)

    last_err = None
    for _ in range(20):
        coeff = rng.normal(size=k) + 1j * rng.normal(size=k)
        M = np.einsum("i,ijk->jk", coeff, algebra.constants)
        eigvals, eigvecs = np.linalg.eig(M)
        gaps = np.abs(eigvals[:, None] - eigvals[None, :])
        np.fill_diagonal(gaps, np.inf)
        scale = max(np.abs(eigvals).max(), 1.0)
        if gaps.min() < 1e-8 * scale:
            last_err = "eigenvalue collision"
            continue
        rows = []
        ok = True
        for n in range(k):
            v = eigvecs[:, n]
            if abs(v[e_idx]) < 1e-12:
                ok = False
                last_err = "vanishing identity coordinate"
                break
            omega = v / v[e_idx]
            denom = np.sum(np.abs(omega) ** 2 / sizes)
            d = np.sqrt(order / denom)
            if abs(d - round(d.real)) > 1e-4:
                ok = False
                last_err = f"non-integer degree {d}"
                break
            d = float(round(d.real))
            rows.append(d * omega / sizes)
        if not ok:
            continue
        X = np.array(rows)
        gram = (X * sizes) @ X.conj().T / order
        if np.abs(gram - np.eye(k)).max() > TOL:
            last_err = "row orthogonality failed"
            continue
        col = X.conj().T @ X
        col_target = np.diag(order / sizes)
        if np.abs(col - col_target).max() > TOL:
            last_err = "column orthogonality failed"
            continue
        dims = [int(round(X[n, e_idx].real)) for n in range(k)]
        assert sum(d * d for d in dims) == order
        order_keys = sorted(
            range(k),
            key=lambda n: (dims[n], tuple(np.round(X[n], 6).view(float))),
        )
        irreps = [
            IrrepRecord(
                label=f"oracle[{pos}]",
                dim=dims[n],
                chi=ClassFunction(classes, X[n]),
            )
            for pos, n in enumerate(order_keys)
        ]
        return CharacterTable(spec or getattr(G, "spec", None), classes, irreps)
    raise RuntimeError(f"oracle failed after retries: {last_err}")


def orbit_partition(space, gens, act):
    """Exact orbit partition of a finite set under a group action given
    by generators, by BFS.  Returns (orbits, index) with orbits sorted
    by their minimal element."""
    index = {}
    orbits = []
    for seed in sorted(space):
        if seed in index:
            continue
        orbit = {seed}
        frontier = [seed]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = act(g, x)
                    if y not in orbit:
                        orbit.add(y)
                        new.append(y)
            frontier = new
        orbits.append(sorted(orbit))
        for x in orbit:
            index[x] = len(orbits) - 1
    order = sorted(range(len(orbits)), key=lambda i: orbits[i][0])
    relabel = {old: new for new, old in enumerate(order)}
    orbits = [orbits[i] for i in order]
    index = {x: relabel[i] for x, i in index.items()}
    return orbits, index
