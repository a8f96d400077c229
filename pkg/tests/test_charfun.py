import numpy as np
import pytest

from gl2reps.ring import RingSpec, TOL, ring_make
from gl2reps.matgroup import (
    Subgroup,
    all_matrices,
    congruence_subgroup,
    coset_reps,
    mat_conj,
    mat_det,
    mat_identity,
    subgroup_closure,
)
from gl2reps.charfun import (
    ClassFunction,
    LinearChar,
    induce,
    inner,
    inner_on_subgroup,
    mult_by_linear,
    psi_beta,
    restriction_multiplicities,
)
from gl2reps.ring import abelian_chars


def trivial_char(sub):
    return LinearChar(sub, {x: 1.0 + 0j for x in sub})


def test_psi_beta_trivial_and_injective(ctx_for):
    ctx = ctx_for("padic", 2, 2)
    Rq = ring_make(ctx.spec.quotient(1))
    zero = (0, 0, 0, 0)
    pb = psi_beta(ctx.G, zero, 1, ctx.psi)
    assert all(abs(v - 1) < TOL for v in pb.values.values())
    seen = []
    for beta in all_matrices(Rq):
        pb = psi_beta(ctx.G, beta, 1, ctx.psi)
        vec = tuple(np.round([pb.values[g] for g in pb.domain], 9))
        assert vec not in seen
        seen.append(vec)
    assert len(seen) == 16  # all characters of K_1, one per beta


def test_psi_beta_requires_high_level():
    ctx_spec = RingSpec("padic", 2, 3)
    from gl2reps.context import build_context

    ctx = build_context(ctx_spec)
    with pytest.raises(ValueError):
        psi_beta(ctx.G, (0, 0, 0, 0), 1, ctx.psi)  # 2*1 < 3


def test_psi_beta_conjugation_equivariance(ctx_for):
    # the character attached to g beta g^-1 is x -> psi_beta(g^-1 x g)
    ctx = ctx_for("padic", 2, 2)
    R = ctx.ring
    Rq = ring_make(ctx.spec.quotient(1))
    K1 = ctx.K(1)
    from gl2reps.matgroup import mat_inv, mat_mul

    for beta in [(0, 1, 0, 0), (1, 1, 1, 0), (0, 0, 0, 1)]:
        pb = psi_beta(ctx.G, beta, 1, ctx.psi)
        for g in ctx.G:
            gq = tuple(e % 2 for e in g)
            moved = psi_beta(ctx.G, mat_conj(Rq, gq, beta), 1, ctx.psi)
            gi = mat_inv(R, g)
            for x in K1:
                expect = pb.values[mat_mul(R, mat_mul(R, gi, x), g)]
                assert abs(moved.values[x] - expect) < TOL


def test_induce_trivial_gives_permutation_character(ctx_for):
    ctx = ctx_for("padic", 2, 2)
    K1 = ctx.K(1)
    cf = induce(K1, trivial_char(K1), ctx.G, ctx.classes)
    assert abs(cf.degree - len(ctx.G) / len(K1)) < TOL
    # Frobenius reciprocity with the trivial character of G
    triv_g = ClassFunction(ctx.classes, np.ones(len(ctx.classes)))
    assert abs(inner(cf, triv_g) - 1) < TOL


def test_induced_degree_bookkeeping(ctx_for):
    ctx = ctx_for("padic", 2, 2)
    pb = psi_beta(ctx.G, (0, 1, 0, 0), 1, ctx.psi)
    cf = induce(pb.domain, pb, ctx.G, ctx.classes)
    assert abs(cf.degree - 6) < TOL  # index 96/16


def test_induction_transitivity(ctx_for):
    # K_{r-1} <= K_1 <= G at (2,2): induce in one or two steps
    ctx = ctx_for("padic", 2, 2)
    R = ctx.ring
    K1 = ctx.K(1)
    pb = psi_beta(ctx.G, (1, 0, 0, 1), 1, ctx.psi)
    one_step = induce(K1, pb, ctx.G, ctx.classes)

    # middle subgroup: K_1 extended by a diagonal unit
    mid = subgroup_closure(R, list(K1) + [(3, 0, 0, 1)])
    vals = {}
    X = coset_reps(mid, K1)
    from gl2reps.matgroup import mat_inv, mat_mul

    for u in mid:
        acc = 0j
        for x in X:
            y = mat_mul(R, mat_mul(R, mat_inv(R, x), u), x)
            if y in pb.values:
                acc += pb.values[y]
        vals[u] = acc
    two_step = induce(mid, vals, ctx.G, ctx.classes)
    assert np.abs(one_step.values - two_step.values).max() < TOL


def test_inner_products_on_oracle_rows(oracle_for):
    t = oracle_for("padic", 2, 2)
    for i, a in enumerate(t.irreps):
        for j, b in enumerate(t.irreps):
            expect = 1.0 if i == j else 0.0
            assert abs(inner(a.chi, b.chi) - expect) < TOL


def test_frobenius_reciprocity_random_spots(ctx_for, oracle_for):
    rng = np.random.default_rng(7)
    ctx = ctx_for("padic", 2, 2)
    table = oracle_for("padic", 2, 2)
    K1 = ctx.K(1)
    Rq = ring_make(ctx.spec.quotient(1))
    betas = list(all_matrices(Rq))
    for _ in range(10):
        beta = betas[rng.integers(len(betas))]
        pb = psi_beta(ctx.G, beta, 1, ctx.psi)
        f = table.irreps[rng.integers(len(table.irreps))].chi
        ind = induce(K1, pb, ctx.G, ctx.classes)
        lhs = inner(ind, f)
        res = {g: f.values[ctx.classes.index[g]] for g in K1}
        rhs = inner_on_subgroup(K1, res, pb.values)
        assert abs(lhs - rhs) < TOL


def test_mult_by_linear(ctx_for, oracle_for):
    ctx = ctx_for("padic", 2, 2)
    table = oracle_for("padic", 2, 2)
    lam_triv = {u: 1.0 + 0j for u in ctx.ring.units}
    lams = abelian_chars(list(ctx.ring.units), ctx.ring.mul).characters
    nontriv = [l for l in lams if any(abs(v - 1) > TOL for v in l.values())][0]
    for rec in table.irreps:
        same = mult_by_linear(rec.chi, lam_triv)
        assert np.abs(same.values - rec.chi.values).max() < TOL
        twisted = mult_by_linear(rec.chi, nontriv)
        assert abs(inner(twisted, twisted) - 1) < TOL  # twist preserves norm


def test_twisted_inflations_are_new(ctx_for, table_for):
    # the nontrivial character of (Z/4)^x does not factor through level 1
    ctx = ctx_for("padic", 2, 2)
    lams = abelian_chars(list(ctx.ring.units), ctx.ring.mul).characters
    nontriv = [l for l in lams if any(abs(v - 1) > TOL for v in l.values())][0]
    t1 = table_for("padic", 2, 1)
    from gl2reps.driver import inflate

    infl = inflate(ctx, t1)
    for rec in infl:
        twisted = mult_by_linear(rec.chi, nontriv)
        for other in infl:
            assert np.abs(twisted.values - other.chi.values).max() > TOL


def test_restriction_multiplicities_spot(ctx_for, table_for):
    ctx = ctx_for("padic", 2, 2)
    table = table_for("padic", 2, 2)
    rec = max(table.irreps, key=lambda r: r.dim)  # the 6-dimensional one
    mults = restriction_multiplicities(ctx.G, ctx.classes, rec.chi, 1, ctx.psi)
    support = {b for b, m in mults.items() if abs(m) > 0.5}
    # a single orbit of split type, all multiplicities 1
    assert len(support) == 6
    for b in support:
        assert abs(mults[b] - 1) < TOL
