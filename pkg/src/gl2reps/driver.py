"""Recursive classification of the irreducible characters of
GL2(O/p^r), and the verification report.

Level 1 is the oracle's job.  Above that, the table is the union of
(a) twisted inflations, every character of the level-(r-1) group pulled
back and tensored with every one-dimensional character lam(det), and
(b) the induced constructions over the reduced orbit representatives,
with det twists applied to the scalar-plus-nilpotent outputs so that all
shifted orbits of that family are reached.  Duplicates are merged by
character-vector equality.

The result is certified: the number of rows must equal the number of
conjugacy classes, the dimension squares must sum to the group order
exactly, and the rows must be orthonormal within tolerance.  A failed
certificate raises CompletenessError carrying the offending table.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ring import TOL, ring_make
from .matgroup import mat_conj, all_matrices, group_enumerate, mat_reduce
from .context import build_context
from .charfun import (
    CharacterTable,
    ClassFunction,
    IrrepRecord,
    inner,
    mult_by_linear,
    psi_beta_matrix,
)
from .orbits import (
    CUSPIDAL,
    SCALAR,
    SCALAR_PLUS_NILPOTENT,
    orbit_reps,
)
from .clifford import even_case, odd_cuspidal, odd_split
from . import oracle as oracle_mod

__all__ = [
    "CharacterTable",
    "IrrepRecord",
    "CompletenessError",
    "VerifyReport",
    "classify",
    "classify_context",
    "inflate",
    "verify",
    "match_rows",
]


class CompletenessError(RuntimeError):
    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table


_TABLE_CACHE = {}


def classify(spec, psi_unit=1, cap=30000, cache_dir=None):
    """Certified character table of GL2(O/p^r)."""
    key = (spec, psi_unit, cap, cache_dir)
    if key not in _TABLE_CACHE:
        ctx = build_context(spec, psi_unit=psi_unit, cap=cap, cache_dir=cache_dir)
        _TABLE_CACHE[key] = classify_context(ctx)
    return _TABLE_CACHE[key]


def classify_context(ctx):
    """One full classification pass over an existing context (no table
    memoization; used directly by the determinism tests)."""
    spec = ctx.spec
    if spec.r == 1:
        return oracle_mod.oracle_table(ctx.G, classes=ctx.classes, spec=spec)

    records = []
    lam_chars = ctx.unit_char_table().characters

    sub_spec = spec.quotient(spec.r - 1)
    sub_unit = ctx.psi.unit % sub_spec.size
    sub_table = classify(
        sub_spec, psi_unit=sub_unit, cache_dir=ctx.cache_dir
    )
    for base in inflate(ctx, sub_table):
        for k, lam in enumerate(lam_chars):
            records.append(
                IrrepRecord(
                    f"det[{k}]*{base.label}",
                    base.dim,
                    mult_by_linear(base.chi, lam),
                    SCALAR,
                )
            )

    for orbit in orbit_reps(spec):
        if spec.r % 2 == 0:
            built = even_case(ctx, orbit)
        elif orbit.type_tag == CUSPIDAL:
            built = odd_cuspidal(ctx, orbit)
        else:
            built = odd_split(ctx, orbit)
        records.extend(built)
        if orbit.type_tag == SCALAR_PLUS_NILPOTENT:
            # det twists reach every shifted orbit of this family
            for k, lam in enumerate(lam_chars):
                if all(abs(v - 1) < TOL for v in lam.values()):
                    continue
                for rec in built:
                    records.append(
                        IrrepRecord(
                            f"det[{k}]*{rec.label}",
                            rec.dim,
                            mult_by_linear(rec.chi, lam),
                            SCALAR_PLUS_NILPOTENT,
                        )
                    )

    kept = dedup_records(records)
    table = CharacterTable(spec, ctx.classes, kept)
    report = verify(table, ctx=ctx)
    if not report.certified:
        raise CompletenessError(
            "completeness certificate failed: " + "; ".join(report.failures),
            table=table,
        )
    return table


def inflate(ctx, sub_table):
    """Pull a level-(r-1) table back along entrywise reduction."""
    if sub_table.spec.r != ctx.spec.r - 1:
        raise ValueError("inflation level mismatch")
    R = ctx.ring
    m = sub_table.spec.r
    sub_index = sub_table.classes.index
    out = []
    for rec in sub_table.irreps:
        vals = np.array(
            [
                rec.chi.values[sub_index[mat_reduce(R, rep, m)]]
                for rep in ctx.classes.reps
            ]
        )
        out.append(
            IrrepRecord(
                f"infl[{rec.label}]",
                rec.dim,
                ClassFunction(ctx.classes, vals),
                SCALAR,
            )
        )
    return out


def dedup_records(records):
    """Merge records whose character vectors agree everywhere within
    tolerance.  Merges may only happen between records of equal
    dimension and orbit bookkeeping; anything else is a bug."""
    kept = []
    for rec in records:
        ip = inner(rec.chi, rec.chi)
        if abs(ip - 1) > TOL:
            raise CompletenessError(
                f"constructed character is not irreducible: {rec.label}"
            )
        hit = None
        for prev in kept:
            if np.abs(prev.chi.values - rec.chi.values).max() < TOL:
                hit = prev
                break
        if hit is None:
            kept.append(rec)
        else:
            assert hit.dim == rec.dim
            if hit.orbit_type and rec.orbit_type:
                assert hit.orbit_type == rec.orbit_type
    return kept


# verification


@dataclass
class VerifyReport:
    group_order: int
    n_irreps: int
    n_classes: int
    sum_dim_sq: int
    dims_near_integer: bool
    row_orth_residual: float
    col_orth_residual: float
    orbit_restriction_ok: object = None
    oracle_match_residual: object = None
    failures: list = field(default_factory=list)

    @property
    def certified(self):
        return not self.failures


def verify(table, ctx=None, oracle_table=None, tol=TOL):
    """Certificate report: counting, orthogonality, orbit restriction
    (when a context is supplied and r >= 2), and a bijective match
    against an oracle table when one is supplied."""
    failures = []
    order = sum(table.classes.sizes)
    X = table.value_matrix()
    k = len(table.classes)
    e_idx = table.classes.identity_index

    dims_ok = True
    dims = []
    for rec in table.irreps:
        d = rec.chi.values[e_idx]
        if abs(d - round(d.real)) > tol or round(d.real) < 1:
            dims_ok = False
        dims.append(int(round(d.real)))
        if rec.dim != dims[-1]:
            dims_ok = False
    if not dims_ok:
        failures.append("dimensions are not near positive integers")
    sum_sq = int(sum(d * d for d in dims))
    if sum_sq != order:
        failures.append(f"sum of dim^2 = {sum_sq} != |G| = {order} "
                        f"(deficit {order - sum_sq})")
    if len(table.irreps) != k:
        failures.append(f"{len(table.irreps)} rows != {k} classes")

    sizes = np.array(table.classes.sizes, dtype=float)
    row_res = col_res = float("nan")
    if len(table.irreps):
        gram = (X * sizes) @ X.conj().T / order
        row_res = float(
            np.abs(gram - np.eye(len(table.irreps))).max()
        )
        if row_res > tol:
            failures.append(f"row orthonormality residual {row_res:.2e}")
        if len(table.irreps) == k:
            col = X.conj().T @ X
            col_res = float(np.abs(col - np.diag(order / sizes)).max())
            if col_res > tol:
                failures.append(f"column orthogonality residual {col_res:.2e}")

    orbit_ok = None
    if ctx is not None and ctx.spec.r >= 2 and len(table.irreps) == k:
        orbit_ok = _orbit_restriction_check(table, ctx, tol)
        if not orbit_ok:
            failures.append("orbit restriction check failed")

    oracle_res = None
    if oracle_table is not None:
        _, oracle_res = match_rows(X, oracle_table.value_matrix())
        if not oracle_res < tol:
            failures.append(f"oracle match residual {oracle_res}")

    return VerifyReport(
        group_order=order,
        n_irreps=len(table.irreps),
        n_classes=k,
        sum_dim_sq=sum_sq,
        dims_near_integer=dims_ok,
        row_orth_residual=row_res,
        col_orth_residual=col_res,
        orbit_restriction_ok=orbit_ok,
        oracle_match_residual=oracle_res,
        failures=failures,
    )


def _beta_orbit_index(ctx):
    """Conjugation-orbit index of M2(O/p^l') under the level-l' group."""
    if getattr(ctx, "_beta_orbits", None) is None:
        sub_spec = ctx.spec.quotient(ctx.lp)
        Gq = group_enumerate(sub_spec)
        Rq = ring_make(sub_spec)
        space = list(all_matrices(Rq))
        _, index = oracle_mod.orbit_partition(
            space, list(Gq.gens), lambda g, x: mat_conj(Rq, g, x)
        )
        ctx._beta_orbits = index
    return ctx._beta_orbits


def _orbit_restriction_check(table, ctx, tol=TOL):
    """Each irreducible restricted to K_l must decompose over exactly
    one orbit of kernel characters with one constant multiplicity."""
    betas, elems, pb_matrix = psi_beta_matrix(ctx.G, ctx.l, ctx.psi)
    index = _beta_orbit_index(ctx)
    cls_idx = [table.classes.index[g] for g in elems]
    X = table.value_matrix()[:, cls_idx]
    mults = X @ pb_matrix.conj().T / len(elems)
    for row in mults:
        support = [i for i, v in enumerate(row) if abs(v) > 0.5]
        if not support:
            return False
        vals = row[support]
        e = round(vals[0].real)
        if e < 1 or np.abs(vals - e).max() > tol:
            return False
        orbits = {index[betas[i]] for i in support}
        if len(orbits) != 1:
            return False
        orbit_id = orbits.pop()
        full = [i for i, b in enumerate(betas) if index[b] == orbit_id]
        if sorted(full) != sorted(support):
            return False
        # off-support coefficients must vanish
        off = [v for i, v in enumerate(row) if i not in set(support)]
        if off and np.abs(np.array(off)).max() > tol:
            return False
    return True


def match_rows(A, B):
    """Bijection between two row sets minimizing the matching residual;
    returns (row_perm, col_perm), max residual over matched pairs."""
    from scipy.optimize import linear_sum_assignment

    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        return None, float("inf")
    res = np.abs(A[:, None, :] - B[None, :, :]).max(axis=2)
    ri, ci = linear_sum_assignment(res)
    return (ri, ci), float(res[ri, ci].max())
