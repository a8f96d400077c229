"""The three induced constructions over the regular orbits.

Even level r = 2l: every character of the stabilizer extending the
kernel character is one-dimensional, and inducing each of them to the
full group gives the irreducibles over the orbit.

Odd level r = 2l - 1 splits into two cases.  For the split orbit types
the kernel character is pushed through a maximal isotropic subgroup of
K_l'/K_l with respect to an alternating trace pairing; exactly q^2
extensions survive the stability filter, and each, times a character of
the unit part, induces to an irreducible of the full group.  For the
cuspidal type the pairing on the relevant quotient is non-degenerate,
so a Heisenberg-style lift produces the unique irreducible over each
extension of the kernel character, and a cyclic extension along the
stabilizer quotient (of order q^2 - 1) finishes the construction.

Hard failures of theory-backed counts (a stable-extension count other
than q^2, a degenerate pairing in the cuspidal case) raise TheoryError:
they signal a bug, never a fallback path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ring import TOL, character_extensions, ring_make, root_of_unity
from .matgroup import (
    Subgroup,
    coset_reps,
    find_generators,
    mat_commutator,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_pow,
    mat_reduce,
    mat_trace,
)
from .orbits import (
    CUSPIDAL,
    REDUCED_TAGS,
    SCALAR_PLUS_NILPOTENT,
    SPLIT_DIAG,
    adjoined_units,
    canonicalize,
)
from .charfun import IrrepRecord, LinearChar, induce, inner, psi_beta


class TheoryError(RuntimeError):
    """A count or structure guaranteed by the classification failed."""


# shared helpers


_MULT_INDEX_CACHE = {}


def _group_mult_index(R, elems_key):
    """Sorted element list and the full multiplication table (as indices)
    for a subgroup; cached because several characters per orbit are
    checked against the same table."""
    key = (id(R), elems_key)
    if key not in _MULT_INDEX_CACHE:
        elems = sorted(elems_key)
        idx = {e: i for i, e in enumerate(elems)}
        n = len(elems)
        table = np.empty((n, n), dtype=np.int32)
        for i, x in enumerate(elems):
            row = table[i]
            for j, y in enumerate(elems):
                row[j] = idx[mat_mul(R, x, y)]
        _MULT_INDEX_CACHE[key] = (elems, table)
    return _MULT_INDEX_CACHE[key]


def assert_char_multiplicative(R, values, tol=TOL):
    """Exhaustive multiplicativity check of a scalar value map."""
    elems, table = _group_mult_index(R, frozenset(values))
    v = np.array([values[e] for e in elems])
    lhs = np.outer(v, v)
    rhs = v[table]
    worst = np.abs(lhs - rhs).max()
    if worst > tol:
        raise TheoryError(f"value map is not multiplicative ({worst:.2e})")


def glue_product_char(R, a_elems, chi_a, b_elems, chi_b):
    """chi(xy) = chi_a(x) chi_b(y) on the set product, checking every
    overlapping factorization for consistency."""
    out = {}
    for x in a_elems:
        vx = chi_a[x]
        for y in b_elems:
            t = mat_mul(R, x, y)
            v = vx * chi_b[y]
            prev = out.get(t)
            if prev is None:
                out[t] = v
            elif abs(prev - v) > TOL:
                raise TheoryError("inconsistent factorization in glued character")
    return out


def _assert_abelian(R, sub):
    elems = list(sub)
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if mat_mul(R, x, y) != mat_mul(R, y, x):
                raise TheoryError("adjoined unit group is not abelian")


def _assert_psi_stable_under(R, C, pb):
    """psi_beta(c y c^-1) = psi_beta(y): the adjoined units stabilize
    the kernel character."""
    for c in C:
        ci = mat_inv(R, c)
        for y, v in pb.values.items():
            if abs(pb.values[mat_mul(R, mat_mul(R, c, y), ci)] - v) > TOL:
                raise TheoryError("adjoined units do not stabilize psi_beta")


def _is_stable_under(R, C, chi):
    dom = chi if isinstance(chi, dict) else chi.values
    for c in C:
        ci = mat_inv(R, c)
        for h, v in dom.items():
            y = mat_mul(R, mat_mul(R, c, h), ci)
            if y not in dom:
                raise TheoryError("conjugation leaves the extension domain")
            if abs(dom[y] - v) > TOL:
                return False
    return True


def _check_distinct_irreducible(records, where):
    for rec in records:
        ip = inner(rec.chi, rec.chi)
        if abs(ip - 1) > TOL:
            raise TheoryError(f"{where}: <chi,chi> = {ip} for {rec.label}")
    for i, a in enumerate(records):
        for b in records[i + 1:]:
            if np.abs(a.chi.values - b.chi.values).max() < TOL:
                raise TheoryError(f"{where}: duplicate outputs {a.label}, {b.label}")


def _mat_mul_op(R):
    return lambda x, y: mat_mul(R, x, y)


# even level


def even_case(ctx, orbit):
    """All irreducibles over a reduced orbit when r = 2l: induce each
    one-dimensional extension of the kernel character to the stabilizer.
    """
    if ctx.r % 2:
        raise ValueError("wrong parity")
    if orbit.type_tag not in REDUCED_TAGS:
        raise ValueError(f"not a reduced orbit type: {orbit.type_tag}")
    R = ctx.ring
    l = ctx.l
    Kl = ctx.K(l)
    C = adjoined_units(R, orbit.beta_hat)
    _assert_abelian(R, C)
    T = C.product(Kl)
    pb = psi_beta(ctx.G, orbit.beta, l, ctx.psi)
    _assert_psi_stable_under(R, C, pb)

    inter = C.intersection(Kl)
    base = {x: pb.values[x] for x in inter}
    thetas = character_extensions(list(C), _mat_mul_op(R), base, mat_identity(R))
    assert len(thetas) == len(C) // len(inter)

    records = []
    tag = orbit.type_tag
    for j, theta in enumerate(thetas):
        chi_t = glue_product_char(R, list(C), theta, list(Kl), pb.values)
        assert len(chi_t) == len(T)
        cf = induce(T, chi_t, ctx.G, ctx.classes, ctx.transversal(T.elems))
        dim = int(round(cf.degree.real))
        records.append(
            IrrepRecord(f"even[{tag}{orbit.params},theta={j}]", dim, cf, tag)
        )
    _check_distinct_irreducible(records, "even_case")
    return records


# odd level, split types


@dataclass
class BilinearFormTable:
    """An alternating bi-additive pairing on an elementary abelian
    quotient, tabulated on coset labels.  Values live in F_p (trace
    pairing) or on the unit circle (commutator pairing)."""

    space: tuple
    values: dict
    trivial: object

    def pair(self, v, w):
        return self.values[(v, w)]

    def is_trivial(self, v, w):
        x = self.values[(v, w)]
        if isinstance(self.trivial, complex):
            return abs(x - self.trivial) < TOL
        return x == self.trivial

    def is_alternating(self):
        return all(self.is_trivial(v, v) for v in self.space)

    def radical(self):
        return tuple(
            v for v in self.space if all(self.is_trivial(v, w) for w in self.space)
        )

    def is_nondegenerate(self):
        triv = self.space[0]
        return all(
            any(not self.is_trivial(v, w) for w in self.space)
            for v in self.space
            if v != triv
        )


def quotient_label(R, i, g):
    """The coefficient matrix of g = 1 + pi^i m, reduced mod p.  A group
    homomorphism K_i -> M2(F_p) with kernel K_{i+1} ... K_l as long as
    2i >= r - 1."""
    q = R.p ** i
    one = mat_identity(R)
    out = []
    for e, o in zip(g, one):
        d = R.sub(e, o)
        assert d % q == 0
        out.append((d // q) % R.p)
    return tuple(out)


def _section_to_level(spec_r, g):
    """Canonical section of a matrix over a quotient level into O/p^r
    (same codes)."""
    return tuple(g)


def split_isotropic_group(ctx, orbit):
    """H = K_l (B intersect K_l') for the listed representatives, and
    the conjugate of that group when the orbit carries a non-listed
    representative."""
    R = ctx.ring
    Kl, Klp = ctx.K(ctx.l), ctx.K(ctx.lp)
    BK = Subgroup(R, ctx.B().elems & Klp.elems)
    H = Kl.product(BK)
    canon = canonicalize(ctx.spec, orbit.beta)
    if canon.twist not in (None, 0):
        raise ValueError("representative needs a scalar twist first")
    g = canon.conjugator
    Rq = ring_make(ctx.spec.quotient(ctx.lp))
    if g == mat_identity(Rq):
        return H
    ghat = _section_to_level(ctx.spec, g)
    return H.conjugated(mat_inv(R, ghat))


def split_form(ctx, orbit):
    """The trace pairing <x, y> = Tr(beta_bar (m n - n m)) on
    K_l'/K_l = M2(F_p), together with H and its image subspace.

    The radical is computed directly by kernel search (the printed
    closed form in the literature is known to be wrong, so it is never
    transcribed); H's image must be maximal isotropic.
    """
    if ctx.r % 2 == 0:
        raise ValueError("wrong parity")
    if orbit.type_tag == CUSPIDAL:
        raise ValueError("use odd_cuspidal")
    if orbit.type_tag not in REDUCED_TAGS:
        raise ValueError(f"not a reduced orbit type: {orbit.type_tag}")
    R = ctx.ring
    k = ring_make(ctx.spec.quotient(1))
    Rq = ring_make(ctx.spec.quotient(ctx.lp))
    beta_bar = mat_reduce(Rq, orbit.beta, 1)
    space = []
    for a in k.elements:
        for b in k.elements:
            for c in k.elements:
                for d in k.elements:
                    space.append((a, b, c, d))
    values = {}
    for m in space:
        for n in space:
            mn = mat_mul(k, m, n)
            nm = mat_mul(k, n, m)
            comm = tuple(k.sub(u, v) for u, v in zip(mn, nm))
            values[(m, n)] = mat_trace(k, mat_mul(k, beta_bar, comm))
    form = BilinearFormTable(tuple(space), values, k.zero)
    assert form.is_alternating()
    radical = form.radical()

    H = split_isotropic_group(ctx, orbit)
    h_image = sorted({quotient_label(R, ctx.lp, x) for x in H})
    for v in h_image:
        for w in h_image:
            if not form.is_trivial(v, w):
                raise TheoryError("H image is not isotropic")
    # maximal isotropic: |W|^2 = |V| * |radical|
    if len(h_image) ** 2 != len(space) * len(radical):
        raise TheoryError("H image is not maximal isotropic")
    for v in radical:
        if v not in set(h_image):
            raise TheoryError("radical not contained in the H image")
    return SplitFormData(form, H, tuple(h_image), radical)


@dataclass
class SplitFormData:
    form: BilinearFormTable
    H: Subgroup
    h_image: tuple
    radical: tuple


@dataclass
class SplitExtensionData:
    """Extension bookkeeping for one split orbit at odd level."""

    extensions: list    # every extension of the kernel character to H
    stable: list        # the subset stable under the adjoined units
    H: Subgroup
    C: Subgroup
    pb: LinearChar


def stable_extensions(ctx, orbit):
    """All extensions of the kernel character to H, and the subset
    stable under conjugation by the adjoined units.

    At odd q the stable subset has exactly q^2 members and is in
    bijection with the irreducible constituents over K_l'.  At q = 2 the
    unit ratios driving the filter are all congruent to 1 mod p, so the
    filter can be strictly weaker (the diagonal family keeps all 2 q^2
    extensions) or blind to constituents reached by no stable extension
    at all (the nilpotent family); odd_split handles both through the
    constituent count, which is q^2 at every q."""
    R = ctx.ring
    pb = psi_beta(ctx.G, orbit.beta, ctx.l, ctx.psi)
    C = adjoined_units(R, orbit.beta_hat)
    H = split_isotropic_group(ctx, orbit)
    exts = character_extensions(
        list(H), _mat_mul_op(R), dict(pb.values), mat_identity(R)
    )
    stable = [chi for chi in exts if _is_stable_under(R, C, chi)]
    q = R.p
    if q != 2 and len(stable) != q * q:
        raise TheoryError(
            f"stable extension count {len(stable)} != q^2 = {q * q}"
        )
    return SplitExtensionData(exts, stable, H, C, pb)


def induced_char_values(R, chi, big, transversal):
    """Character of Ind(chi) as a value map on the bigger subgroup."""
    dom = frozenset(chi)
    pairs = [(x, mat_inv(R, x)) for x in transversal]
    out = {}
    for u in big:
        acc = 0j
        for x, xi in pairs:
            y = mat_mul(R, mat_mul(R, xi, u), x)
            if y in dom:
                acc += chi[y]
        out[u] = acc
    return out


def induced_matrix_rep(R, chi, big):
    """Explicit matrices of Ind(chi) on an enumerated subgroup, in the
    basis indexed by a left transversal of the inducing subgroup."""
    dom = frozenset(chi)
    transversal = coset_reps(big, sorted(dom))
    dim = len(transversal)
    t_inv = [mat_inv(R, x) for x in transversal]
    mats = {}
    for u in big:
        M = np.zeros((dim, dim), dtype=complex)
        for i, xi in enumerate(t_inv):
            left = mat_mul(R, xi, u)
            for j, xj in enumerate(transversal):
                y = mat_mul(R, left, xj)
                if y in dom:
                    M[i, j] = chi[y]
        mats[u] = M
    return MatrixRep(big, dim, mats)


def odd_split(ctx, orbit):
    """All irreducibles over a split orbit at odd level.

    The irreducible constituents of the kernel character induced to
    K_l' are exactly q^2 distinct characters, each obtained by inducing
    an extension from H.  Constituents reached by a stable extension are
    carried up to the stabilizer by the glued character route (one
    compatible extension on the unit side, product character checked
    multiplicative on every pair, then every twist by a character of the
    product group trivial on H).  At q = 2 the nilpotent family has
    constituents reached by no stable extension; those are still
    stabilizer-stable, and since the stabilizer quotient is cyclic there
    they are carried up by an explicit intertwiner extension instead.
    Either way each constituent contributes one output per character of
    T/K_l', and all q^2 * #omega outputs are distinct and irreducible.
    """
    if ctx.r % 2 == 0:
        raise ValueError("wrong parity")
    if orbit.type_tag == CUSPIDAL:
        raise ValueError("use odd_cuspidal")
    R = ctx.ring
    q = R.p
    data = stable_extensions(ctx, orbit)
    H, C, pb = data.H, data.C, data.pb
    _assert_abelian(R, C)
    _assert_psi_stable_under(R, C, pb)
    Kl = ctx.K(ctx.l)
    Klp = ctx.K(ctx.lp)
    CKl = C.product(Kl)
    CH = C.product(H)
    D = H.intersection(CKl)
    ident = mat_identity(R)
    mul = _mat_mul_op(R)

    # distinct irreducible constituents of Ind over K_l'
    klp_transversal = coset_reps(Klp, H)
    stable_ids = {id(chi) for chi in data.stable}
    rho_list = []  # (rho values on K_l', reached_by_stable, one source chi)
    for chi in data.extensions:
        rho = induced_char_values(R, chi, Klp, klp_transversal)
        norm = sum(abs(v) ** 2 for v in rho.values()) / len(Klp)
        if abs(norm - 1) > TOL:
            continue
        is_stable = id(chi) in stable_ids
        for entry in rho_list:
            if max(abs(entry[0][u] - rho[u]) for u in rho) < TOL:
                entry[1] = entry[1] or is_stable
                break
        else:
            rho_list.append([rho, is_stable, chi])
    if len(rho_list) != q * q:
        raise TheoryError(
            f"constituent count over K_l' is {len(rho_list)}, expected q^2"
        )

    omega_base = {h: 1.0 + 0j for h in H}
    omegas = character_extensions(list(CH), mul, omega_base, ident)
    assert len(omegas) == len(CH) // len(H)

    records = []
    tag = orbit.type_tag
    for i, psi1 in enumerate(data.stable):
        base_d = {x: psi1[x] for x in D}
        psi2 = character_extensions(list(CKl), mul, base_d, ident)[0]
        psi3 = glue_product_char(R, list(CKl), psi2, list(H), psi1)
        assert frozenset(psi3) == CH.elems
        assert_char_multiplicative(R, psi3)
        for j, om in enumerate(omegas):
            chi = {t: psi3[t] * om[t] for t in psi3}
            cf = induce(CH, chi, ctx.G, ctx.classes, ctx.transversal(CH.elems))
            _append_if_new(
                records,
                IrrepRecord(
                    f"oddsplit[{tag}{orbit.params},psi1={i},omega={j}]",
                    int(round(cf.degree.real)),
                    cf,
                    tag,
                ),
            )

    missing = [entry for entry in rho_list if not entry[1]]
    if missing:
        T = C.product(Klp)
        for i, (rho, _, chi) in enumerate(missing):
            rep = induced_matrix_rep(R, chi, Klp)
            verify_matrixrep(R, rep)
            for j, ext in enumerate(cyclic_extend(ctx, rep, T, seed=i)):
                cf = induce(
                    T,
                    ext.char_values(),
                    ctx.G,
                    ctx.classes,
                    ctx.transversal(T.elems),
                )
                _append_if_new(
                    records,
                    IrrepRecord(
                        f"oddsplit[{tag}{orbit.params},rho={i},omega={j}]",
                        int(round(cf.degree.real)),
                        cf,
                        tag,
                    ),
                )

    expected = q * q * len(omegas)
    if len(records) != expected:
        raise TheoryError(
            f"odd_split output count {len(records)} != q^2 * #omega = {expected}"
        )
    _check_distinct_irreducible(records, "odd_split")
    return records


def _append_if_new(records, rec):
    for prev in records:
        if np.abs(prev.chi.values - rec.chi.values).max() < TOL:
            return
    records.append(rec)


# odd level, cuspidal type


@dataclass
class MatrixRep:
    """An explicit unitary matrix representation on a subgroup."""

    domain: Subgroup
    dim: int
    mats: dict
    meta: dict = field(default_factory=dict)

    def char_values(self):
        return {x: complex(np.trace(m)) for x, m in self.mats.items()}

    def scaled(self, scalars):
        return MatrixRep(
            self.domain,
            self.dim,
            {x: m * scalars[x] for x, m in self.mats.items()},
            dict(self.meta),
        )


def verify_matrixrep(R, rep, tol=TOL):
    """Exhaustive multiplicativity and unitarity check."""
    elems, table = _group_mult_index(R, frozenset(rep.mats))
    M = np.stack([rep.mats[e] for e in elems])
    uni = np.einsum("iab,icb->iac", M, M.conj())
    if np.abs(uni - np.eye(rep.dim)).max() > tol:
        raise TheoryError("representation is not unitary")
    n = len(elems)
    step = max(1, (1 << 22) // (n * rep.dim * rep.dim))
    for start in range(0, n, step):
        blk = M[start:start + step]
        lhs = np.einsum("iab,jbc->ijac", blk, M)
        rhs = M[table[start:start + step]]
        if np.abs(lhs - rhs).max() > tol:
            raise TheoryError("representation is not multiplicative")


def psi_tilde_extensions(ctx, orbit):
    """All extensions of the kernel character to Z^1 K_l, where Z^1 is
    the 1-units of the adjoined ring.  Everything downstream runs once
    per extension."""
    R = ctx.ring
    C = adjoined_units(R, orbit.beta_hat)
    Z1 = C.intersection(ctx.K(1))
    ZKl = Z1.product(ctx.K(ctx.l))
    pb = psi_beta(ctx.G, orbit.beta, ctx.l, ctx.psi)
    exts = character_extensions(
        list(ZKl), _mat_mul_op(R), dict(pb.values), mat_identity(R)
    )
    assert len(exts) == len(ZKl) // len(ctx.K(ctx.l))
    return exts, C, Z1, ZKl, pb


def heisenberg(ctx, orbit, extension_index=0):
    """The unique irreducible of Z^1 K_l' over one extension of the
    kernel character, built as an induced representation from the
    preimage of a maximal isotropic subgroup."""
    if ctx.r % 2 == 0:
        raise ValueError("wrong parity")
    if orbit.type_tag != CUSPIDAL:
        raise ValueError("heisenberg needs a cuspidal orbit")
    exts, C, Z1, ZKl, pb = psi_tilde_extensions(ctx, orbit)
    return _heisenberg_lift(ctx, orbit, exts[extension_index], Z1, ZKl, pb)


def _heisenberg_lift(ctx, orbit, psi_t, Z1, ZKl, pb):
    R = ctx.ring
    q = R.p
    ident = mat_identity(R)
    Klp = ctx.K(ctx.lp)

    # stability criterion: psi_beta kills [z^-1, k] for z in Z^1, k in K_l'
    for z in Z1:
        zi = mat_inv(R, z)
        for kk in Klp:
            c = mat_commutator(R, zi, kk)
            if c not in pb.values:
                raise TheoryError("[Z^1, K_l'] escaped K_l")
            if abs(pb.values[c] - 1) > TOL:
                raise TheoryError("stability criterion failed")

    U = Z1.product(Klp)
    Nh = ZKl
    v_reps = coset_reps(U, Nh)
    coset_of = {}
    for rep in v_reps:
        for nel in Nh:
            coset_of[mat_mul(R, rep, nel)] = rep

    # elementary abelian quotient
    for v in v_reps:
        if coset_of[mat_pow(R, v, q)] != v_reps[0]:
            raise TheoryError("quotient is not elementary abelian")
        for w in v_reps:
            if coset_of[mat_mul(R, v, w)] != coset_of[mat_mul(R, w, v)]:
                raise TheoryError("quotient is not abelian")

    # commutator pairing via psi_tilde
    values = {}
    for v in v_reps:
        for w in v_reps:
            c = mat_commutator(R, v, w)
            if c not in psi_t:
                raise TheoryError("commutator escaped the extension domain")
            values[(v, w)] = psi_t[c]
    form = BilinearFormTable(tuple(v_reps), values, 1.0 + 0j)
    assert form.is_alternating()
    if not form.is_nondegenerate():
        raise TheoryError("degenerate commutator pairing")

    # greedy maximal isotropic subgroup W of the quotient
    w_reps = {v_reps[0]}
    for v in v_reps:
        if len(w_reps) ** 2 == len(v_reps):
            break
        if v in w_reps:
            continue
        if all(form.is_trivial(v, w) for w in w_reps):
            grown = set(w_reps)
            frontier = [v]
            while frontier:
                new = []
                for x in frontier:
                    for y in list(grown) + [v]:
                        z = coset_of[mat_mul(R, x, y)]
                        if z not in grown:
                            grown.add(z)
                            new.append(z)
                frontier = new
            if all(
                form.is_trivial(a, b) for a in grown for b in grown
            ):
                w_reps = grown
    if len(w_reps) ** 2 != len(v_reps):
        raise TheoryError("no maximal isotropic subgroup found")

    preimage = Subgroup(
        R, frozenset(mat_mul(R, w, nel) for w in w_reps for nel in Nh)
    )
    chi_p = character_extensions(
        list(preimage), _mat_mul_op(R), dict(psi_t), ident
    )[0]

    transversal = coset_reps(U, preimage)
    dim = len(transversal)
    assert dim * dim == len(v_reps)
    t_inv = [mat_inv(R, x) for x in transversal]
    dom = frozenset(chi_p)
    mats = {}
    for u in U:
        M = np.zeros((dim, dim), dtype=complex)
        for i, xi in enumerate(t_inv):
            left = mat_mul(R, xi, u)
            for j, xj in enumerate(transversal):
                y = mat_mul(R, left, xj)
                if y in dom:
                    M[i, j] = chi_p[y]
        mats[u] = M
    eta = MatrixRep(
        U,
        dim,
        mats,
        meta={"form": form, "psi_tilde": psi_t, "W": tuple(sorted(w_reps))},
    )
    verify_matrixrep(R, eta)

    # irreducible, and the unique constituent of the induced extension
    char = eta.char_values()
    ip = sum(abs(t) ** 2 for t in char.values()) / len(U)
    if abs(ip - 1) > TOL:
        raise TheoryError("Heisenberg lift is not irreducible")
    psi_dom = frozenset(psi_t)
    for u in U:
        acc = 0j
        for x in v_reps:
            y = mat_mul(R, mat_mul(R, mat_inv(R, x), u), x)
            if y in psi_dom:
                acc += psi_t[y]
        if abs(acc - q * char[u]) > TOL * q:
            raise TheoryError("induced extension is not q copies of the lift")
    return eta


def cyclic_extend(ctx, eta, T, seed=0, branch=0):
    """All extensions of eta to T when T/U is cyclic: one explicit
    extension via a Schur-averaged intertwiner, then the full list by
    tensoring with the characters of the quotient."""
    R = ctx.ring
    U = eta.domain
    ugens = find_generators(U)
    for t in T:
        ti = mat_inv(R, t)
        for g in ugens:
            if mat_mul(R, mat_mul(R, t, g), ti) not in U.elems:
                raise ValueError("U is not normal in T")
    cosets = coset_reps(T, U)
    m = len(cosets)
    if m == 1:
        return [MatrixRep(T, eta.dim, dict(eta.mats), dict(eta.meta))]
    gen = None
    for cand in cosets:
        if cand in U.elems:
            continue
        k, x = 1, cand
        while x not in U.elems:
            x = mat_mul(R, x, cand)
            k += 1
        if k == m:
            gen = cand
            break
    if gen is None:
        raise TheoryError("stabilizer quotient is not cyclic")

    gi = mat_inv(R, gen)
    d = eta.dim
    conj_elem = {u: mat_mul(R, mat_mul(R, gen, u), gi) for u in U}
    rng = np.random.default_rng(seed)
    A = None
    for _ in range(8):
        S = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        acc = np.zeros((d, d), dtype=complex)
        for u in U:
            acc += eta.mats[conj_elem[u]] @ S @ eta.mats[mat_inv(R, u)]
        acc /= len(U)
        if abs(np.linalg.det(acc)) > 1e-8:
            A = acc
            break
    if A is None:
        raise TheoryError("Schur averaging produced no intertwiner")
    a_inv = np.linalg.inv(A)
    for u in ugens:
        if np.abs(A @ eta.mats[u] @ a_inv - eta.mats[conj_elem[u]]).max() > TOL:
            raise TheoryError("intertwiner equation failed")

    # rescale so A^m equals eta at gen^m; the m-th root is the principal
    # branch (any branch differs by a quotient character, and the full
    # list below contains all of those twists anyway)
    t_m = mat_pow(R, gen, m)
    a_m = np.linalg.matrix_power(A, m)
    ratio = a_m @ np.linalg.inv(eta.mats[t_m])
    c = np.trace(ratio) / d
    if np.abs(ratio - c * np.eye(d)).max() > 1e-8 * max(1.0, abs(c)):
        raise TheoryError("A^m is not a scalar multiple of eta(t^m)")
    root = abs(c) ** (1.0 / m) * np.exp(1j * np.angle(c) / m)
    root *= root_of_unity(branch, m)
    A = A / root

    a_pow = [np.eye(d, dtype=complex)]
    for _ in range(1, m):
        a_pow.append(a_pow[-1] @ A)
    gi_pow = [mat_identity(R)]
    for _ in range(1, m):
        gi_pow.append(mat_mul(R, gi_pow[-1], gi))

    mats = {}
    coset_index = {}
    for x in T:
        for j in range(m):
            u = mat_mul(R, gi_pow[j], x)
            if u in U.elems:
                mats[x] = a_pow[j] @ eta.mats[u]
                coset_index[x] = j
                break
        else:
            raise TheoryError("element escaped the coset decomposition")
    base = MatrixRep(T, d, mats, meta=dict(eta.meta))
    verify_matrixrep(R, base)

    out = []
    for kk in range(m):
        scalars = {x: root_of_unity(kk * coset_index[x], m) for x in T}
        ext = base.scaled(scalars)
        for u in U:
            if np.abs(ext.mats[u] - eta.mats[u]).max() > TOL:
                raise TheoryError("extension does not restrict to eta")
        out.append(ext)
    chars = [ext.char_values() for ext in out]
    for i in range(m):
        for j in range(i + 1, m):
            if max(abs(chars[i][x] - chars[j][x]) for x in chars[i]) < TOL:
                raise TheoryError("extensions are not pairwise distinct")
    return out


def odd_cuspidal(ctx, orbit):
    """All irreducibles over a cuspidal orbit at odd level: for every
    extension of the kernel character, the Heisenberg lift and each of
    its q^2 - 1 cyclic extensions, induced to the full group."""
    if ctx.r % 2 == 0:
        raise ValueError("wrong parity")
    if orbit.type_tag != CUSPIDAL:
        raise ValueError("odd_cuspidal needs a cuspidal orbit")
    R = ctx.ring
    exts, C, Z1, ZKl, pb = psi_tilde_extensions(ctx, orbit)
    T = C.product(ctx.K(ctx.lp))
    records = []
    s, delta = orbit.params
    for i, psi_t in enumerate(exts):
        eta = _heisenberg_lift(ctx, orbit, psi_t, Z1, ZKl, pb)
        for j, ext in enumerate(cyclic_extend(ctx, eta, T, seed=i)):
            cf = induce(
                T, ext.char_values(), ctx.G, ctx.classes, ctx.transversal(T.elems)
            )
            dim = int(round(cf.degree.real))
            records.append(
                IrrepRecord(
                    f"cusp[(s={s},D={delta}),ext={i},eta={j}]",
                    dim,
                    cf,
                    CUSPIDAL,
                )
            )
    _check_distinct_irreducible(records, "odd_cuspidal")
    return records
