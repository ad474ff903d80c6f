"""Finite G-sets, spans of G-maps, and the passage to permutation matrices.

The span category of finite G-sets composes by fiber products; sending a
G-set X to the free module on X and a span to the sum-over-fibers matrix
is a linear functor whose hom-wise rank is counted by double cosets.  The
kernel comparison against the index relations [G/H <- G/L -> G/H] −
[H:L]·Id runs per hom over transitive G-sets, exactly over the rationals.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .groups import Group
from .groupoid import GroupoidError
from . import linalg


class GSet:
    """A finite left G-set: act[g][x] with exhaustive axiom checks."""

    def __init__(self, group: Group, size, act, name="X", validate=True):
        self.group = group
        self.size = size
        self.act = tuple(tuple(row) for row in act)
        self.name = name
        if validate:
            self.validate()

    def validate(self):
        g = self.group
        if len(self.act) != g.order or any(len(r) != self.size for r in self.act):
            raise GroupoidError("action table has wrong shape")
        for x in range(self.size):
            if self.act[g.identity][x] != x:
                raise GroupoidError("identity acts nontrivially")
        for a in range(g.order):
            for b in range(g.order):
                ab = g.mul(a, b)
                for x in range(self.size):
                    if self.act[ab][x] != self.act[a][self.act[b][x]]:
                        raise GroupoidError("action is not associative")

    def orbit_of(self, x):
        return sorted({self.act[a][x] for a in self.group.elements()})

    def orbits(self):
        seen, out = set(), []
        for x in range(self.size):
            if x not in seen:
                o = self.orbit_of(x)
                out.append(o)
                seen.update(o)
        return out

    def stabilizer(self, x):
        return tuple(a for a in self.group.elements() if self.act[a][x] == x)

    def __repr__(self):
        return "GSet(%s: %d points)" % (self.name, self.size)


def coset_gset(group: Group, subgroup, name=None) -> GSet:
    """The transitive G-set G/H; point i is the i-th left coset."""
    cosets = group.left_cosets(subgroup)
    index = {c: i for i, c in enumerate(cosets)}
    act = [[index[tuple(sorted(group.mul(a, x) for x in c))] for c in cosets]
           for a in group.elements()]
    g = GSet(group, len(cosets), act,
             name=name or "%s/%d" % (group.name, len(subgroup)))
    g.point_subgroup = tuple(sorted(subgroup))
    return g


def trivial_gset(group: Group) -> GSet:
    return coset_gset(group, tuple(group.elements()), name="%s/%s" %
                      (group.name, group.name))


def gmaps(x: GSet, y: GSet):
    """All equivariant maps x -> y, built orbitwise: a generator of an
    orbit may go to any point fixed by its stabilizer."""
    orbs = x.orbits()
    anchors = [o[0] for o in orbs]
    choices = []
    for a in anchors:
        stab = x.stabilizer(a)
        choices.append([p for p in range(y.size)
                        if all(y.act[s][p] == p for s in stab)])
    out = []
    for combo in itertools.product(*choices):
        f = [None] * x.size
        ok = True
        for a, p in zip(anchors, combo):
            for g in x.group.elements():
                xx, yy = x.act[g][a], y.act[g][p]
                if f[xx] is None:
                    f[xx] = yy
                elif f[xx] != yy:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(f))
    return out


def is_gmap(x: GSet, y: GSet, f) -> bool:
    return all(f[x.act[g][p]] == y.act[g][f[p]]
               for g in x.group.elements() for p in range(x.size))


class GSpan:
    """A span of G-maps x <-alpha- s -beta-> y."""

    def __init__(self, x: GSet, y: GSet, apex: GSet, alpha, beta, name="s"):
        self.x = x
        self.y = y
        self.apex = apex
        self.alpha = tuple(alpha)
        self.beta = tuple(beta)
        self.name = name
        if not is_gmap(apex, x, self.alpha) or not is_gmap(apex, y, self.beta):
            raise GroupoidError("span legs are not equivariant")

    def __repr__(self):
        return "GSpan(%s <- %s -> %s)" % (self.x.name, self.apex.name, self.y.name)


def identity_gspan(x: GSet) -> GSpan:
    ident = tuple(range(x.size))
    return GSpan(x, x, x, ident, ident, name="Id_%s" % x.name)


def gspan_compose(t: GSpan, s: GSpan) -> GSpan:
    """t∘s for s: X -> Y and t: Y -> Z, by the fiber product over Y with
    componentwise action."""
    if s.y is not t.x and s.y.act != t.x.act:
        raise GroupoidError("middle G-set mismatch")
    pts = [(i, j) for i in range(s.apex.size) for j in range(t.apex.size)
           if s.beta[i] == t.alpha[j]]
    idx = {p: k for k, p in enumerate(pts)}
    act = [[idx[(s.apex.act[g][i], t.apex.act[g][j])] for (i, j) in pts]
           for g in s.x.group.elements()]
    apex = GSet(s.x.group, len(pts), act, name="%sx_Y%s" % (s.apex.name, t.apex.name),
                validate=False)
    return GSpan(s.x, t.y, apex,
                 [s.alpha[i] for (i, j) in pts],
                 [t.beta[j] for (i, j) in pts],
                 name="%s.%s" % (t.name, s.name))


def sum_gspans(a: GSpan, b: GSpan) -> GSpan:
    pts = a.apex.size + b.apex.size
    act = [list(a.apex.act[g]) + [x + a.apex.size for x in b.apex.act[g]]
           for g in a.x.group.elements()]
    apex = GSet(a.x.group, pts, act, validate=False)
    return GSpan(a.x, a.y, apex, list(a.alpha) + list(b.alpha),
                 list(a.beta) + list(b.beta))


def gspans_isomorphic(a: GSpan, b: GSpan) -> bool:
    """Exhaustive search for an equivariant bijection of apexes commuting
    with both legs."""
    if a.apex.size != b.apex.size:
        return False
    for f in gmaps(a.apex, b.apex):
        if len(set(f)) != a.apex.size:
            continue
        if all(b.alpha[f[i]] == a.alpha[i] and b.beta[f[i]] == a.beta[i]
               for i in range(a.apex.size)):
            return True
    return False


def gspan_hom_basis(x: GSet, y: GSet):
    """All spans with transitive apex, up to isomorphism: for each subgroup
    class L, the pairs of maps (G/L -> X, G/L -> Y) modulo Aut(G/L)."""
    group = x.group
    out = []
    for cls in group.subgroup_conjugacy_classes():
        apex = coset_gset(group, cls[0])
        auts = [f for f in gmaps(apex, apex) if len(set(f)) == apex.size]
        seen = set()
        for alpha in gmaps(apex, x):
            for beta in gmaps(apex, y):
                key = min(tuple((tuple(alpha[f[i]] for i in range(apex.size)),
                                 tuple(beta[f[i]] for i in range(apex.size))))
                          for f in auts)
                if key in seen:
                    continue
                seen.add(key)
                out.append(GSpan(x, y, apex, alpha, beta,
                                 name="[%s;%d]" % (apex.name, len(out))))
    return out


def yoshida_matrix(span: GSpan):
    """The sum-over-fibers matrix k[X] -> k[Y]: entry (y, x) counts the
    apex points over x mapping to y.  Rows index Y, columns index X."""
    m = [[0] * span.x.size for _ in range(span.y.size)]
    for i in range(span.apex.size):
        m[span.beta[i]][span.alpha[i]] += 1
    return m


def matrix_equivariant(span: GSpan, m=None) -> bool:
    if m is None:
        m = yoshida_matrix(span)
    x, y = span.x, span.y
    for g in x.group.elements():
        ginv = x.group.inv(g)
        for c in range(x.size):
            for r in range(y.size):
                if m[r][x.act[g][c]] != m[y.act[ginv][r]][c]:
                    return False
    return True


def equivariant_hom_dimension(x: GSet, y: GSet) -> int:
    """Dimension of the space of equivariant matrices k[X] -> k[Y], by an
    exact nullspace computation on the commutation constraints (generators
    of G suffice)."""
    n = x.size * y.size
    rows = []
    for g in x.group.generating_set() or [x.group.identity]:
        for r in range(y.size):
            for c in range(x.size):
                # (P_g M)[r][c] = M[r][g^{-1}... M P_gX = P_gY M, i.e.
                # M[r][g.c] = M[g^{-1}.r][c] for all entries
                row = [Fraction(0)] * n
                row[r * x.size + x.act[g][c]] += 1
                ginv = x.group.inv(g)
                row[y.act[ginv][r] * x.size + c] -= 1
                if any(row):
                    rows.append(row)
    return n - linalg.rank(rows, n)


def double_coset_count(group: Group, h, k) -> int:
    return len(group.double_cosets(h, k))


def yoshida_rank_check(group: Group, h, k):
    """rank of the matrix span of the transitive-apex classes from G/H to
    G/K == |H\\G/K| == dim of the equivariant hom space.  The double cosets
    are enumerated directly as the oracle."""
    x = coset_gset(group, h)
    y = coset_gset(group, k)
    basis = gspan_hom_basis(x, y)
    vecs = []
    for s in basis:
        m = yoshida_matrix(s)
        if not matrix_equivariant(s, m):
            raise GroupoidError("non-equivariant image matrix")
        vecs.append([Fraction(v) for row in m for v in row])
    image_rank = linalg.rank(vecs, x.size * y.size)
    dc = double_coset_count(group, h, k)
    dim = equivariant_hom_dimension(x, y)
    return {
        "subgroups": (len(h), len(k)),
        "basis_size": len(basis),
        "image_rank": image_rank,
        "double_cosets": dc,
        "hom_dimension": dim,
        "ok": image_rank == dc == dim,
    }


def decompose_gspan(s: GSpan):
    """One span per apex orbit; their sum is the input span."""
    out = []
    for orb in s.apex.orbits():
        idx = {p: i for i, p in enumerate(orb)}
        act = [[idx[s.apex.act[g][p]] for p in orb]
               for g in s.x.group.elements()]
        sub = GSet(s.x.group, len(orb), act, validate=False)
        out.append(GSpan(s.x, s.y, sub, [s.alpha[p] for p in orb],
                         [s.beta[p] for p in orb]))
    return out


def express_gspan(s: GSpan, basis):
    """Multiplicities of a span's transitive parts in a hom basis."""
    vec = [0] * len(basis)
    for part in decompose_gspan(s):
        for i, e in enumerate(basis):
            if gspans_isomorphic(part, e):
                vec[i] += 1
                break
        else:
            raise GroupoidError("gspan basis is incomplete")
    return vec


def _subgroups_up_to_conj_inside(group: Group, h):
    """Subgroups of h (as a subgroup of group), up to conjugacy by h."""
    hs = set(h)
    subs = [s for s in group.subgroups() if set(s) <= hs]
    seen, out = set(), []
    for s in subs:
        if s in seen:
            continue
        orbit = {tuple(sorted(group.conj(g, x) for x in s)) for g in h}
        seen.update(orbit)
        out.append(s)
    return out


def index_relation_elements(group: Group, reps):
    """For each object G/H and each L ≤ H: the span [G/H <- G/L -> G/H]
    minus [H:L] times the identity, as a vector over the hom basis."""
    elements = []
    for hi, h in enumerate(reps):
        x = coset_gset(group, h)
        basis = gspan_hom_basis(x, x)
        ident_vec = express_gspan(identity_gspan(x), basis)
        for l_sub in _subgroups_up_to_conj_inside(group, h):
            if len(l_sub) == len(h):
                continue
            apex = coset_gset(group, l_sub)
            proj = _coset_projection(group, l_sub, h)
            span = GSpan(x, x, apex, proj, proj,
                         name="rel(%d,%d)" % (len(h), len(l_sub)))
            index = len(h) // len(l_sub)
            vec = express_gspan(span, basis)
            coeffs = [Fraction(a) - index * Fraction(b)
                      for a, b in zip(vec, ident_vec)]
            elements.append((hi, coeffs, index, span))
    return elements


def _coset_projection(group: Group, l_sub, h):
    """The quotient G-map G/L -> G/H for L ≤ H."""
    xl = group.left_cosets(l_sub)
    xh = group.left_cosets(h)
    hidx = {c: i for i, c in enumerate(xh)}
    out = []
    for c in xl:
        rep = c[0]
        out.append(hidx[tuple(sorted(group.mul(rep, x) for x in h))])
    return out


def cohomological_kernel_check(group: Group, scalars="rational"):
    """Per hom over transitive G-sets: kernel of the permutation-matrix
    functor vs. the ideal generated by the index relations (saturated by
    composition to a fixpoint).  Exact; also asserts every generator maps
    to the zero matrix."""
    reps = [cls[0] for cls in group.subgroup_conjugacy_classes()]
    xs = [coset_gset(group, h) for h in reps]
    bases = {}
    matrices = {}
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            basis = gspan_hom_basis(x, y)
            bases[(i, j)] = basis
            matrices[(i, j)] = [
                [Fraction(v) for row in yoshida_matrix(s) for v in row]
                for s in basis]
    gens = index_relation_elements(group, reps)
    gens_killed = True
    for hi, coeffs, index, span in gens:
        m = yoshida_matrix(span)
        ident = yoshida_matrix(identity_gspan(xs[hi]))
        diff = [[m[r][c] - index * ident[r][c] for c in range(len(m[0]))]
                for r in range(len(m))]
        if any(any(row) for row in diff):
            gens_killed = False

    spaces = {key: linalg.RationalSubspace(len(bases[key]))
              for key in bases}
    queue = []
    for hi, coeffs, _, _ in gens:
        if spaces[(hi, hi)].add(coeffs):
            queue.append(((hi, hi), coeffs))
    prod_cache = {}

    def product_vec(key_out, e_out, e_in, pre):
        ckey = (key_out, id(e_out), id(e_in), pre)
        if ckey not in prod_cache:
            comp = gspan_compose(e_out, e_in)
            prod_cache[ckey] = express_gspan(comp, bases[key_out])
        return prod_cache[ckey]

    while queue:
        (xi, yi), coeffs = queue.pop()
        basis_src = bases[(xi, yi)]
        for zi in range(len(xs)):
            # post-compose with each basis element of hom(yi, zi)
            for e in bases[(yi, zi)]:
                out = [Fraction(0)] * len(bases[(xi, zi)])
                for k, c in enumerate(coeffs):
                    if c == 0:
                        continue
                    vec = product_vec((xi, zi), e, basis_src[k], False)
                    for t, v in enumerate(vec):
                        out[t] += c * v
                if spaces[(xi, zi)].add(out):
                    queue.append(((xi, zi), out))
        for wi in range(len(xs)):
            for e in bases[(wi, xi)]:
                out = [Fraction(0)] * len(bases[(wi, yi)])
                for k, c in enumerate(coeffs):
                    if c == 0:
                        continue
                    vec = product_vec((wi, yi), basis_src[k], e, True)
                    for t, v in enumerate(vec):
                        out[t] += c * v
                if spaces[(wi, yi)].add(out):
                    queue.append(((wi, yi), out))

    homs = {}
    equal = True
    for key in sorted(bases):
        ncols = len(bases[key])
        dim = xs[key[0]].size * xs[key[1]].size
        cols = matrices[key]
        m = [[cols[j][i] for j in range(ncols)] for i in range(dim)]
        kernel = linalg.nullspace(m, ncols)
        in_ideal = all(spaces[key].contains(v) for v in kernel)
        in_kernel = all(all(x == 0 for x in _matvec(m, v))
                        for v in spaces[key].red)
        equal = equal and in_ideal and in_kernel
        entry = {
            "hom": "(%s,%s)" % (xs[key[0]].name, xs[key[1]].name),
            "basis_size": ncols,
            "kernel_rank": len(kernel),
            "ideal_rank": spaces[key].dim,
            "kernel_in_ideal": in_ideal,
            "ideal_in_kernel": in_kernel,
        }
        if scalars == "integer":
            entry["invariant_factors"] = linalg.smith_invariants(
                [[int(v) for v in row] for row in m], ncols)
        homs[key] = entry
    return {
        "group": group.name,
        "objects": [x.name for x in xs],
        "generators": len(gens),
        "generators_killed": gens_killed,
        "homs": homs,
        "equal": equal,
    }


def _matvec(m, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


def fixed_point_functor(group: Group):
    """The rank-one fixed-vector functor: values are the fixed subspaces of
    the permutation modules on the transitive G-sets, maps are the
    permutation matrices of the span generators restricted to them.

    Everything is computed from the matrices (nothing hardcoded): values
    by an exact nullspace, induction/restriction/conjugation scalars by
    solving M·v_L = c·v_H on the orbit-sum bases.  Returns a report dict.
    """
    reps = [cls[0] for cls in group.subgroup_conjugacy_classes()]
    xs = [coset_gset(group, h) for h in reps]
    values = {}
    for i, x in enumerate(xs):
        n = x.size
        rows = []
        for g in group.generating_set() or [group.identity]:
            for r in range(n):
                row = [Fraction(0)] * n
                row[r] += 1
                row[x.act[g][r]] -= 1
                if any(row):
                    rows.append(row)
        basis = linalg.nullspace(rows, n)
        dim2 = equivariant_hom_dimension(trivial_gset(group), x)
        values[i] = {
            "object": x.name,
            "rank": len(basis),
            "rank_by_hom_solve": dim2,
            "basis": basis,
        }
    maps = {}
    for i, h in enumerate(reps):
        for j, l_sub in enumerate(reps):
            # find a conjugate of l_sub inside h: then G/l -> G/h exists
            conj = None
            for g in group.elements():
                cand = group.conjugate_subgroup(g, l_sub)
                if set(cand) <= set(h):
                    conj = cand
                    break
            if conj is None:
                continue
            xl = coset_gset(group, conj)
            proj = _coset_projection(group, conj, h)
            ind_span = GSpan(xl, xs[i], xl, tuple(range(xl.size)), proj)
            res_span = GSpan(xs[i], xl, xl, proj, tuple(range(xl.size)))
            ind_c = _fp_scalar(yoshida_matrix(ind_span), xl.size, xs[i].size)
            res_c = _fp_scalar(yoshida_matrix(res_span), xs[i].size, xl.size)
            maps[(j, i)] = {
                "ind": ind_c,
                "res": res_c,
                "index": len(h) // len(conj),
            }
    return {"group": group.name, "values": values, "maps": maps,
            "objects": [x.name for x in xs]}


def _fp_scalar(m, in_size, out_size):
    """The scalar c with M · (all-ones) = c · (all-ones), or None."""
    sums = [sum(row) for row in m]
    if len(set(sums)) != 1:
        return None
    return Fraction(sums[0])
