"""Set-valued and rational-linear coends over finite groupoids.

A coend problem is a bifunctor H on C^op x C with finite value sets; its
coend is the quotient of the disjoint union of the diagonal sets by the
relation identifying H(α,id)(y) with H(id,α)(y).  Over a groupoid index
this relation is already an equivalence, so one union-find pass suffices;
set_coend still runs a verification pass asserting that.

Class representatives are the smallest element in input order, so results
are deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .groupoid import FiniteGroupoid, GroupoidError, product
from . import linalg


class UnionFind:
    """Plain disjoint-set forest with path compression."""

    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, i):
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # keep the smaller index as representative (determinism)
            if ri < rj:
                self.parent[rj] = ri
            else:
                self.parent[ri] = rj


class SetCoendProblem:
    """Bifunctor C^op x C -> Set with explicit finite value sets.

    ``sizes[(c, d)]`` is |H(c, d)|; for a morphism α: c -> d,
    ``lact[(α, x)]`` is the map H(d, x) -> H(c, x) (contravariant slot) and
    ``ract[(α, x)]`` is the map H(x, c) -> H(x, d) (covariant slot).
    """

    def __init__(self, index: FiniteGroupoid, sizes, lact, ract, validate=True):
        self.index = index
        self.sizes = dict(sizes)
        self.lact = {k: tuple(v) for k, v in lact.items()}
        self.ract = {k: tuple(v) for k, v in ract.items()}
        if validate:
            self.validate()

    def validate(self):
        c = self.index
        for x in c.objects():
            for y in c.objects():
                if (x, y) not in self.sizes:
                    raise GroupoidError("missing value set at (%d,%d)" % (x, y))
        for a in c.morphisms():
            s, t = c.src[a], c.tgt[a]
            for x in c.objects():
                la = self.lact[(a, x)]
                if len(la) != self.sizes[(t, x)] or \
                   any(not (0 <= v < self.sizes[(s, x)]) for v in la):
                    raise GroupoidError("bad contravariant action of %d at %d" % (a, x))
                ra = self.ract[(a, x)]
                if len(ra) != self.sizes[(x, s)] or \
                   any(not (0 <= v < self.sizes[(x, t)]) for v in ra):
                    raise GroupoidError("bad covariant action of %d at %d" % (a, x))
        for x in c.objects():
            for o in c.objects():
                e = c.identity[o]
                if self.lact[(e, x)] != tuple(range(self.sizes[(o, x)])):
                    raise GroupoidError("identity fails contravariantly")
                if self.ract[(e, x)] != tuple(range(self.sizes[(x, o)])):
                    raise GroupoidError("identity fails covariantly")
        # composites in each slot, and commutation of the two slots
        for a in c.morphisms():
            for b in c.out_of(c.tgt[a]):
                ba = c.compose(b, a)
                for x in c.objects():
                    la, lb = self.lact[(a, x)], self.lact[(b, x)]
                    if self.lact[(ba, x)] != tuple(la[v] for v in lb):
                        raise GroupoidError("contravariant functoriality fails")
                    ra, rb = self.ract[(a, x)], self.ract[(b, x)]
                    if self.ract[(ba, x)] != tuple(rb[ra[v]] for v in range(len(ra))):
                        raise GroupoidError("covariant functoriality fails")
        for a in c.morphisms():
            for b in c.morphisms():
                # H(a, b) both ways around: lact (first slot) vs ract (second)
                sa, ta = c.src[a], c.tgt[a]
                sb, tb = c.src[b], c.tgt[b]
                l_then_r = [self.ract[(b, sa)][v] for v in self.lact[(a, sb)]]
                r_then_l = [self.lact[(a, tb)][v] for v in self.ract[(b, ta)]]
                if l_then_r != r_then_l:
                    raise GroupoidError("slot actions do not commute")


class CoendResult:
    """Quotient of the diagonal disjoint union; class_of maps (c, x) to a
    class index, representative[k] is the smallest member of class k."""

    def __init__(self, classes, class_of, representative):
        self.classes = classes              # list of class indices 0..n-1
        self.class_of = class_of            # dict (c, x) -> class index
        self.representative = representative  # list of (c, x)

    @property
    def n_classes(self):
        return len(self.representative)


def set_coend(problem: SetCoendProblem) -> CoendResult:
    c = problem.index
    offsets = {}
    total = 0
    for o in c.objects():
        offsets[o] = total
        total += problem.sizes[(o, o)]
    uf = UnionFind(total)
    pairs = []
    for a in c.morphisms():
        s, t = c.src[a], c.tgt[a]
        # y ranges over H(t, s); identify H(a,id)(y) at (s,s) with
        # H(id,a)(y) at (t,t)
        la = problem.lact[(a, s)]
        ra = problem.ract[(a, t)]
        for y in range(problem.sizes[(t, s)]):
            u = offsets[s] + la[y]
            v = offsets[t] + ra[y]
            uf.union(u, v)
            pairs.append((u, v))
    _assert_already_equivalence(pairs, total)

    roots = {}
    class_of = {}
    representative = []
    for o in c.objects():
        for x in range(problem.sizes[(o, o)]):
            r = uf.find(offsets[o] + x)
            if r not in roots:
                roots[r] = len(representative)
                representative.append((o, x))
            class_of[(o, x)] = roots[r]
    return CoendResult(list(range(len(representative))), class_of, representative)


def _assert_already_equivalence(pairs, total):
    """Groupoid indexing means the elementary relation is already an
    equivalence (no closure needed); verify that instead of assuming it."""
    adj = {}
    for u, v in pairs:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(u, set()).add(u)
        adj.setdefault(v, set()).add(v)
    for u, vs in adj.items():
        for v in vs:
            if u not in adj.get(v, ()):
                raise GroupoidError("coend relation is not symmetric")
    for u, vs in adj.items():
        for v in vs:
            for w in adj[v]:
                if w not in vs:
                    raise GroupoidError("coend relation is not transitive")


class LinearCoendProblem:
    """Linear version: free rational modules and action matrices.

    ``ranks[(c, d)]`` is the rank of the value module; matrices are tuples
    of row tuples, shape (out_rank, in_rank), acting on column vectors.
    """

    def __init__(self, index, ranks, lact, ract, validate=True):
        self.index = index
        self.ranks = dict(ranks)
        self.lact = {k: tuple(tuple(Fraction(x) for x in row) for row in v)
                     for k, v in lact.items()}
        self.ract = {k: tuple(tuple(Fraction(x) for x in row) for row in v)
                     for k, v in ract.items()}
        if validate:
            self.validate()

    def _matcheck(self, mat, out_rank, in_rank, what):
        if len(mat) != out_rank or any(len(r) != in_rank for r in mat):
            raise GroupoidError("bad matrix shape for " + what)

    def validate(self):
        c = self.index
        for a in c.morphisms():
            s, t = c.src[a], c.tgt[a]
            for x in c.objects():
                self._matcheck(self.lact[(a, x)], self.ranks[(s, x)],
                               self.ranks[(t, x)], "lact")
                self._matcheck(self.ract[(a, x)], self.ranks[(x, t)],
                               self.ranks[(x, s)], "ract")
        ident = lambda n: tuple(tuple(Fraction(int(i == j)) for j in range(n))
                                for i in range(n))
        for o in c.objects():
            e = c.identity[o]
            for x in c.objects():
                if self.lact[(e, x)] != ident(self.ranks[(o, x)]):
                    raise GroupoidError("identity fails contravariantly")
                if self.ract[(e, x)] != ident(self.ranks[(x, o)]):
                    raise GroupoidError("identity fails covariantly")
        mm = lambda p, q: tuple(tuple(sum(p[i][k] * q[k][j] for k in range(len(q)))
                                      for j in range(len(q[0]) if q else 0))
                                for i in range(len(p)))
        for a in c.morphisms():
            for b in c.out_of(c.tgt[a]):
                ba = c.compose(b, a)
                for x in c.objects():
                    if self.lact[(ba, x)] != mm(self.lact[(a, x)], self.lact[(b, x)]):
                        raise GroupoidError("contravariant functoriality fails")
                    if self.ract[(ba, x)] != mm(self.ract[(b, x)], self.ract[(a, x)]):
                        raise GroupoidError("covariant functoriality fails")


class LinearCoendResult:
    def __init__(self, total_index, basis, projection, relation_rank):
        self.total_index = total_index    # [(c, i)] coordinates of the sum
        self.basis = basis                # indices into total_index
        self.projection = projection      # len(basis) x len(total_index)
        self.relation_rank = relation_rank

    @property
    def rank(self):
        return len(self.basis)


def linear_coend(problem: LinearCoendProblem) -> LinearCoendResult:
    c = problem.index
    total_index = []
    offsets = {}
    for o in c.objects():
        offsets[o] = len(total_index)
        total_index.extend((o, i) for i in range(problem.ranks[(o, o)]))
    n = len(total_index)
    relations = []
    for a in c.morphisms():
        s, t = c.src[a], c.tgt[a]
        la = problem.lact[(a, s)]   # ranks (s,s) x (t,s)
        ra = problem.ract[(a, t)]   # ranks (t,t) x (t,s)
        for j in range(problem.ranks[(t, s)]):
            vec = [Fraction(0)] * n
            for i in range(problem.ranks[(s, s)]):
                vec[offsets[s] + i] += la[i][j]
            for i in range(problem.ranks[(t, t)]):
                vec[offsets[t] + i] -= ra[i][j]
            if any(vec):
                relations.append(vec)
    red, pivots = linalg.rref(relations, n)
    pivset = set(pivots)
    basis = [i for i in range(n) if i not in pivset]
    projection = []
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        r = linalg.reduce_mod_rows(red, pivots, e)
        projection.append([r[b] for b in basis])
    # projection as len(basis) x n (transpose of the reductions)
    proj = [[projection[i][k] for i in range(n)] for k in range(len(basis))]
    return LinearCoendResult(total_index, basis, proj, len(pivots))


def linearize_problem(problem: SetCoendProblem) -> LinearCoendProblem:
    """Free linearization of a set problem: permutation matrices."""
    def perm_matrix(mapping, out_size):
        m = [[Fraction(0)] * len(mapping) for _ in range(out_size)]
        for j, i in enumerate(mapping):
            m[i][j] = Fraction(1)
        return m

    c = problem.index
    ranks = dict(problem.sizes)
    lact, ract = {}, {}
    for a in c.morphisms():
        s, t = c.src[a], c.tgt[a]
        for x in c.objects():
            lact[(a, x)] = perm_matrix(problem.lact[(a, x)], problem.sizes[(s, x)])
            ract[(a, x)] = perm_matrix(problem.ract[(a, x)], problem.sizes[(x, t)])
    return LinearCoendProblem(c, ranks, lact, ract, validate=False)


# -- functors into Set, and the calculus checks ---------------------------


class SetFunctor:
    """A covariant functor C -> Set with finite values (dense indices)."""

    def __init__(self, source: FiniteGroupoid, sizes, action, validate=True):
        self.source = source
        self.sizes = tuple(sizes)                 # per object
        self.action = {m: tuple(v) for m, v in action.items()}
        if validate:
            self.validate()

    def validate(self):
        c = self.source
        for m in c.morphisms():
            a = self.action[m]
            if len(a) != self.sizes[c.src[m]] or \
               any(not (0 <= v < self.sizes[c.tgt[m]]) for v in a):
                raise GroupoidError("bad action at morphism %d" % m)
        for x in c.objects():
            if self.action[c.identity[x]] != tuple(range(self.sizes[x])):
                raise GroupoidError("identity acts nontrivially")
        for f in c.morphisms():
            for g in c.out_of(c.tgt[f]):
                gf = c.compose(g, f)
                comp = tuple(self.action[g][v] for v in self.action[f])
                if self.action[gf] != comp:
                    raise GroupoidError("functoriality fails")


def coyoneda_problem(m_functor: SetFunctor, x: int) -> SetCoendProblem:
    """The coend problem for ∫^c C(c, x) × M(c); elements of the value set
    at (c, d) are pairs (ξ: c -> x, m ∈ M(d)) indexed ξ·|M(d)| + m."""
    c = m_functor.source
    sizes = {}
    for c1 in c.objects():
        for c2 in c.objects():
            sizes[(c1, c2)] = len(c.hom(c1, x)) * m_functor.sizes[c2]
    lact, ract = {}, {}
    for a in c.morphisms():
        s, t = c.src[a], c.tgt[a]
        for o in c.objects():
            # contravariant: (ξ: t -> x, m) ↦ (ξ∘a: s -> x, m)
            homt, homs = c.hom(t, x), c.hom(s, x)
            hidx = {mo: i for i, mo in enumerate(homs)}
            msz = m_functor.sizes[o]
            lact[(a, o)] = tuple(hidx[c.compose(homt[i // msz], a)] * msz + (i % msz)
                                 for i in range(len(homt) * msz))
            # covariant: (ξ, m) ↦ (ξ, M(a)(m))
            homo = c.hom(o, x)
            ms, mt = m_functor.sizes[s], m_functor.sizes[t]
            act = m_functor.action[a]
            ract[(a, o)] = tuple((i // ms) * mt + act[i % ms]
                                 for i in range(len(homo) * ms))
    return SetCoendProblem(c, sizes, lact, ract, validate=False)


def check_coyoneda(m_functor: SetFunctor, x: int) -> bool:
    """Evaluation [ξ, m]_c ↦ M(ξ)(m) is a bijection onto M(x), with inverse
    m ↦ [id_x, m]_x; checked on every element, not only representatives."""
    c = m_functor.source
    problem = coyoneda_problem(m_functor, x)
    res = set_coend(problem)
    # evaluate every diagonal element and require class-constancy
    ev = {}
    for o in c.objects():
        homo = c.hom(o, x)
        msz = m_functor.sizes[o]
        for i in range(problem.sizes[(o, o)]):
            xi, mm = homo[i // msz], i % msz
            val = m_functor.action[xi][mm]
            k = res.class_of[(o, i)]
            if k in ev and ev[k] != val:
                return False
            ev[k] = val
    if len(ev) != res.n_classes:
        return False
    if sorted(ev.values()) != list(range(m_functor.sizes[x])):
        return False
    # the stated inverse really is inverse
    id_idx = c.hom(x, x).index(c.identity[x])
    msz = m_functor.sizes[x]
    for m in range(msz):
        k = res.class_of[(x, id_idx * msz + m)]
        if ev[k] != m:
            return False
    return True


def _frozen_inner_problem(problem, c1, c2, outer_is_c1, outer_pair):
    """Fubini helper: freeze a pair of objects of the outer factor, leaving
    a coend problem over the inner factor."""
    n2, m2 = c2.n_objects, c2.n_morphisms
    obj = lambda a, b: a * n2 + b
    x0, y0 = outer_pair
    inner = c2 if outer_is_c1 else c1

    def big_pair(a, b):
        return (obj(x0, a), obj(y0, b)) if outer_is_c1 else (obj(a, x0), obj(b, y0))

    sizes = {(a, b): problem.sizes[big_pair(a, b)]
             for a in inner.objects() for b in inner.objects()}
    lact, ract = {}, {}
    for am in inner.morphisms():
        for o in inner.objects():
            if outer_is_c1:
                pm_l = c1.identity[x0] * m2 + am
                pm_r = c1.identity[y0] * m2 + am
                slot_l = obj(y0, o)
                slot_r = obj(x0, o)
            else:
                pm_l = am * m2 + c2.identity[x0]
                pm_r = am * m2 + c2.identity[y0]
                slot_l = obj(o, y0)
                slot_r = obj(o, x0)
            lact[(am, o)] = problem.lact[(pm_l, slot_l)]
            ract[(am, o)] = problem.ract[(pm_r, slot_r)]
    return SetCoendProblem(inner, sizes, lact, ract, validate=False)


def _induced_on_classes(problem, c1, c2, outer_is_c1, inner_res,
                        from_pair, to_pair, am, is_contra):
    """Action of an outer morphism on inner-coend classes; asserts
    representative-independence (checked on every member, not just reps)."""
    n2, m2 = c2.n_objects, c2.n_morphisms
    obj = lambda a, b: a * n2 + b
    sub_from, res_from = inner_res[from_pair]
    _, res_to = inner_res[to_pair]
    inner = c2 if outer_is_c1 else c1
    out = [None] * res_from.n_classes
    for o in inner.objects():
        pm = (am * m2 + c2.identity[o]) if outer_is_c1 else \
             (c1.identity[o] * m2 + am)
        if is_contra:
            slot = obj(from_pair[1], o) if outer_is_c1 else obj(o, from_pair[1])
            move = problem.lact[(pm, slot)]
        else:
            slot = obj(from_pair[0], o) if outer_is_c1 else obj(o, from_pair[0])
            move = problem.ract[(pm, slot)]
        for v in range(sub_from.sizes[(o, o)]):
            k = res_from.class_of[(o, v)]
            k2 = res_to.class_of[(o, move[v])]
            if out[k] is None:
                out[k] = k2
            elif out[k] != k2:
                raise GroupoidError("induced action not representative-independent")
    return tuple(out)


def check_fubini(c1: FiniteGroupoid, c2: FiniteGroupoid,
                 problem: SetCoendProblem) -> bool:
    """The coend over c1 x c2 agrees with both iterated coends, via the
    identity map on representatives (checked on every diagonal element)."""
    n2 = c2.n_objects
    direct = set_coend(problem)
    for outer_is_c1 in (True, False):
        outer = c1 if outer_is_c1 else c2
        inner_res = {}
        for x0 in outer.objects():
            for y0 in outer.objects():
                sub = _frozen_inner_problem(problem, c1, c2, outer_is_c1, (x0, y0))
                inner_res[(x0, y0)] = (sub, set_coend(sub))
        sizes = {pair: res.n_classes for pair, (_, res) in inner_res.items()}
        lact, ract = {}, {}
        for am in outer.morphisms():
            s0, t0 = outer.src[am], outer.tgt[am]
            for o in outer.objects():
                lact[(am, o)] = _induced_on_classes(
                    problem, c1, c2, outer_is_c1, inner_res,
                    (t0, o), (s0, o), am, True)
                ract[(am, o)] = _induced_on_classes(
                    problem, c1, c2, outer_is_c1, inner_res,
                    (o, s0), (o, t0), am, False)
        outer_problem = SetCoendProblem(outer, sizes, lact, ract, validate=False)
        iterated = set_coend(outer_problem)
        # identity on representatives must define a bijection of class sets
        assign = {}
        for o in problem.index.objects():
            a, b = divmod(o, n2)
            x0, io = (a, b) if outer_is_c1 else (b, a)
            _, ires = inner_res[(x0, x0)]
            for v in range(problem.sizes[(o, o)]):
                kd = direct.class_of[(o, v)]
                ki = iterated.class_of[(x0, ires.class_of[(io, v)])]
                if assign.setdefault(kd, ki) != ki:
                    return False
        if len(assign) != direct.n_classes:
            return False
        if len(set(assign.values())) != direct.n_classes:
            return False
        if direct.n_classes != iterated.n_classes:
            return False
    return True
