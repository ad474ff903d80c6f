"""The bicategory of bisets over finite groupoids.

A biset U: H -> G is a finite-set-valued functor on H^op x G, stored as a
value set per object pair together with single-sided action tables; the
two actions commute and are functorial (validated).  Horizontal
composition is the set coend over the middle groupoid, computed by
union-find; the canonical identifications between composites (unitors,
associators, whiskering) are realized as explicit class maps whose
representative-independence is asserted at construction.
"""

from __future__ import annotations

import itertools

from .groupoid import FiniteGroupoid, GroupoidError, product
from .coend import UnionFind, _assert_already_equivalence
from ._memo import register, memo1, memo2


def groupoid_generators(g: FiniteGroupoid):
    """Morphisms generating g under composition (cached on the groupoid)."""
    return g.generators()


class Biset:
    """Finite-set-valued functor H^op x G -> Set.

    ``sizes[(h, g)]`` is |U(h, g)|.  For α: g -> g' in G,
    ``left[(α, h)]`` maps U(h, g) -> U(h, g'); for β: h' -> h in H,
    ``right[(β, g)]`` maps U(h, g) -> U(h', g).
    """

    def __init__(self, source, target, sizes, left, right, name="U",
                 validate="gen"):
        self.source = source
        self.target = target
        self.sizes = dict(sizes)
        self.left = {k: tuple(v) for k, v in left.items()}
        self.right = {k: tuple(v) for k, v in right.items()}
        self.name = name
        if validate:
            self.validate(validate)

    def size(self, h, g):
        return self.sizes[(h, g)]

    def total_size(self):
        return sum(self.sizes.values())

    def elements(self):
        """All (h, g, x) in lexicographic order."""
        for h in self.source.objects():
            for g in self.target.objects():
                for x in range(self.sizes[(h, g)]):
                    yield (h, g, x)

    def act(self, beta, alpha, x):
        """U(β, α): U(tgt β, src α) -> U(src β, tgt α)."""
        y = self.left[(alpha, self.source.tgt[beta])][x]
        return self.right[(beta, self.target.tgt[alpha])][y]

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Biset) and self.source == other.source
                and self.target == other.target and self.sizes == other.sizes
                and self.left == other.left and self.right == other.right)

    def __hash__(self):
        return hash((tuple(sorted(self.sizes.items())),))

    def __repr__(self):
        return "Biset(%s: %s -> %s, %d elements)" % (
            self.name, self.source.name, self.target.name, self.total_size())

    def validate(self, level="gen"):
        """Functoriality of both actions and their commutation.

        level="gen" checks composite laws on (all, generator) pairs, which
        is equivalent to the all-pairs check by induction on word length;
        level="full" checks every composable pair.
        """
        hh, gg = self.source, self.target
        for alpha in gg.morphisms():
            for h in hh.objects():
                t = self.left[(alpha, h)]
                if len(t) != self.sizes[(h, gg.src[alpha])] or \
                   any(not (0 <= v < self.sizes[(h, gg.tgt[alpha])]) for v in t):
                    raise GroupoidError("bad left action shape")
        for beta in hh.morphisms():
            for g in gg.objects():
                t = self.right[(beta, g)]
                if len(t) != self.sizes[(hh.tgt[beta], g)] or \
                   any(not (0 <= v < self.sizes[(hh.src[beta], g)]) for v in t):
                    raise GroupoidError("bad right action shape")
        for g in gg.objects():
            for h in hh.objects():
                if self.left[(gg.identity[g], h)] != tuple(range(self.sizes[(h, g)])):
                    raise GroupoidError("left identity acts nontrivially")
                if self.right[(hh.identity[h], g)] != tuple(range(self.sizes[(h, g)])):
                    raise GroupoidError("right identity acts nontrivially")
        g_seconds = gg.morphisms() if level == "full" else groupoid_generators(gg)
        for a1 in g_seconds:
            for a2 in gg.out_of(gg.tgt[a1]):
                a21 = gg.compose(a2, a1)
                for h in hh.objects():
                    t1, t2 = self.left[(a1, h)], self.left[(a2, h)]
                    if self.left[(a21, h)] != tuple(t2[v] for v in t1):
                        raise GroupoidError("left action not functorial")
        h_seconds = hh.morphisms() if level == "full" else groupoid_generators(hh)
        for b1 in h_seconds:
            for b2 in hh.out_of(hh.tgt[b1]):
                b21 = hh.compose(b2, b1)
                for g in gg.objects():
                    # contravariant: right(b2∘b1) = right(b1)∘right(b2)
                    t1, t2 = self.right[(b1, g)], self.right[(b2, g)]
                    if self.right[(b21, g)] != tuple(t1[v] for v in t2):
                        raise GroupoidError("right action not functorial")
        for alpha in g_seconds:
            for beta in h_seconds:
                h1 = self.source.tgt[beta]
                lr = [self.right[(beta, gg.tgt[alpha])][v]
                      for v in self.left[(alpha, h1)]]
                rl = [self.left[(alpha, self.source.src[beta])][v]
                      for v in self.right[(beta, gg.src[alpha])]]
                if lr != rl:
                    raise GroupoidError("left and right actions do not commute")


def build_biset(source, target, size_fn, left_fn, right_fn, name="U",
                validate="gen"):
    """Assemble a biset from callables.

    size_fn(h, g) -> int; left_fn(alpha, h, x) and right_fn(beta, g, x)
    give the single-sided actions pointwise.
    """
    sizes = {(h, g): size_fn(h, g)
             for h in source.objects() for g in target.objects()}
    left = {(alpha, h): tuple(left_fn(alpha, h, x)
                              for x in range(sizes[(h, target.src[alpha])]))
            for alpha in target.morphisms() for h in source.objects()}
    right = {(beta, g): tuple(right_fn(beta, g, x)
                              for x in range(sizes[(source.tgt[beta], g)]))
             for beta in source.morphisms() for g in target.objects()}
    return Biset(source, target, sizes, left, right, name=name, validate=validate)


_identity_biset_cache = register({})
_compose_cache = register({})


def identity_biset(g: FiniteGroupoid) -> Biset:
    """The Hom functor G(-, -) as a biset G -> G (memoized per groupoid)."""
    return memo1(_identity_biset_cache, g, lambda: _identity_biset(g))


def _identity_biset(g: FiniteGroupoid) -> Biset:
    idx = {}
    for x in g.objects():
        for y in g.objects():
            idx[(x, y)] = {m: i for i, m in enumerate(g.hom(x, y))}

    def left_fn(alpha, h, i):
        m = g.hom(h, g.src[alpha])[i]
        return idx[(h, g.tgt[alpha])][g.compose(alpha, m)]

    def right_fn(beta, gobj, i):
        m = g.hom(g.tgt[beta], gobj)[i]
        return idx[(g.src[beta], gobj)][g.compose(m, beta)]

    return build_biset(g, g, lambda x, y: len(g.hom(x, y)), left_fn, right_fn,
                       name="Id_%s" % g.name, validate="gen")


def zero_biset(source, target) -> Biset:
    return Biset(source, target,
                 {(h, g): 0 for h in source.objects() for g in target.objects()},
                 {(a, h): () for a in target.morphisms() for h in source.objects()},
                 {(b, g): () for b in source.morphisms() for g in target.objects()},
                 name="0", validate=False)


def sum_bisets(u: Biset, v: Biset) -> Biset:
    """Objectwise disjoint union (the hom-monoid sum); u's elements first."""
    if u.source != v.source or u.target != v.target:
        raise GroupoidError("sum needs parallel bisets")
    sizes = {k: u.sizes[k] + v.sizes[k] for k in u.sizes}
    left, right = {}, {}
    for (alpha, h), t in u.left.items():
        key = (h, u.target.src[alpha])
        off_in, off_out = u.sizes[key], u.sizes[(h, u.target.tgt[alpha])]
        left[(alpha, h)] = tuple(t) + tuple(x + off_out for x in v.left[(alpha, h)])
    for (beta, g), t in u.right.items():
        off_out = u.sizes[(u.source.src[beta], g)]
        right[(beta, g)] = tuple(t) + tuple(x + off_out for x in v.right[(beta, g)])
    return Biset(u.source, u.target, sizes, left, right,
                 name="%s+%s" % (u.name, v.name), validate=False)


class CompositeBiset(Biset):
    """compose_bisets output: carries the coend class structure.

    ``reps[(k, g)]`` lists one (h, u, v) triple per class; ``members`` lists
    all triples per class; ``class_index(k, g, h, u, v)`` looks classes up.
    """

    def __init__(self, outer, inner, *args, **kwargs):
        self.outer = outer
        self.inner = inner
        self.reps = {}
        self.members = {}
        self._class_of = {}
        super().__init__(*args, **kwargs)

    def class_index(self, k, g, h, u, v):
        return self._class_of[(k, g)][(h, u, v)]


def compose_bisets(u: Biset, v: Biset) -> CompositeBiset:
    """u∘v for v: K -> H and u: H -> G, by the set coend over H.

    Composite actions are computed on representatives and then projected;
    a verification pass asserts representative-independence.  Memoized per
    input pair.
    """
    return memo2(_compose_cache, u, v, lambda: _compose_bisets(u, v))


def _compose_bisets(u: Biset, v: Biset) -> CompositeBiset:
    if v.target != u.source:
        raise GroupoidError("bisets not composable")
    hh = u.source
    kk, gg = v.source, u.target

    class_of = {}
    reps = {}
    members = {}
    sizes = {}
    for k in kk.objects():
        for g in gg.objects():
            elems = []
            offs = {}
            for h in hh.objects():
                offs[h] = len(elems)
                nu, nv = u.sizes[(h, g)], v.sizes[(k, h)]
                elems.extend((h, x // nv, x % nv) for x in range(nu * nv))
            uf = UnionFind(len(elems))
            for alpha in hh.morphisms():
                h1, h2 = hh.src[alpha], hh.tgt[alpha]
                ru = u.right[(alpha, g)]
                lv = v.left[(alpha, k)]
                nu2, nv1 = u.sizes[(h2, g)], v.sizes[(k, h1)]
                nv2 = v.sizes[(k, h2)]
                for x in range(nu2):
                    for y in range(nv1):
                        a = offs[h1] + ru[x] * nv1 + y
                        b = offs[h2] + x * nv2 + lv[y]
                        uf.union(a, b)
            cls = {}
            rep_list = []
            mem_list = []
            for i, e in enumerate(elems):
                r = uf.find(i)
                if r not in cls:
                    cls[r] = len(rep_list)
                    rep_list.append(e)
                    mem_list.append([])
                class_of.setdefault((k, g), {})[e] = cls[r]
                mem_list[cls[r]].append(e)
            class_of.setdefault((k, g), {})
            sizes[(k, g)] = len(rep_list)
            reps[(k, g)] = rep_list
            members[(k, g)] = mem_list

    left, right = {}, {}
    for alpha in gg.morphisms():
        g1, g2 = gg.src[alpha], gg.tgt[alpha]
        for k in kk.objects():
            co1, co2 = class_of[(k, g1)], class_of[(k, g2)]
            out = []
            for h, x, y in reps[(k, g1)]:
                out.append(co2[(h, u.left[(alpha, h)][x], y)])
            left[(alpha, k)] = tuple(out)
    for beta in kk.morphisms():
        k1, k2 = kk.src[beta], kk.tgt[beta]
        for g in gg.objects():
            co1, co2 = class_of[(k2, g)], class_of[(k1, g)]
            out = []
            for h, x, y in reps[(k2, g)]:
                out.append(co2[(h, x, v.right[(beta, h)][y])])
            right[(beta, g)] = tuple(out)

    w = CompositeBiset(u, v, kk, gg, sizes, left, right,
                       name="%s.%s" % (u.name, v.name), validate=False)
    w.reps = reps
    w.members = members
    w._class_of = class_of

    # representative-independence of the induced actions
    for alpha in gg.morphisms():
        g1, g2 = gg.src[alpha], gg.tgt[alpha]
        for k in kk.objects():
            t = left[(alpha, k)]
            co2 = class_of[(k, g2)]
            for ci, mem in enumerate(members[(k, g1)]):
                for h, x, y in mem:
                    if co2[(h, u.left[(alpha, h)][x], y)] != t[ci]:
                        raise GroupoidError("left action depends on representative")
    for beta in kk.morphisms():
        k2 = kk.tgt[beta]
        for g in gg.objects():
            t = right[(beta, g)]
            co2 = class_of[(kk.src[beta], g)]
            for ci, mem in enumerate(members[(k2, g)]):
                for h, x, y in mem:
                    if co2[(h, x, v.right[(beta, h)][y])] != t[ci]:
                        raise GroupoidError("right action depends on representative")
    w.validate("gen")
    return w


def tensor_bisets(u: Biset, up: Biset) -> Biset:
    """External product: a biset (H x H') -> (G x G') with value sets
    U(h,g) x U'(h',g') and componentwise actions."""
    hh = product(u.source, up.source)
    gg = product(u.target, up.target)
    n2h, m2h = up.source.n_objects, up.source.n_morphisms
    n2g, m2g = up.target.n_objects, up.target.n_morphisms

    def size_fn(h, g):
        return (u.sizes[(h // n2h, g // n2g)] * up.sizes[(h % n2h, g % n2g)])

    def left_fn(alpha, h, x):
        a1, a2 = divmod(alpha, m2g)
        h1, h2 = divmod(h, n2h)
        n = up.sizes[(h2, up.target.src[a2])]
        n_out = up.sizes[(h2, up.target.tgt[a2])]
        return (u.left[(a1, h1)][x // n] * n_out + up.left[(a2, h2)][x % n])

    def right_fn(beta, g, x):
        b1, b2 = divmod(beta, m2h)
        g1, g2 = divmod(g, n2g)
        n = up.sizes[(up.source.tgt[b2], g2)]
        n_out = up.sizes[(up.source.src[b2], g2)]
        return (u.right[(b1, g1)][x // n] * n_out + up.right[(b2, g2)][x % n])

    return build_biset(hh, gg, size_fn, left_fn, right_fn,
                       name="%s(x)%s" % (u.name, up.name), validate="gen")


def decompose_biset(u: Biset):
    """Orbit decomposition: one transitive summand per connected component
    of the element groupoid.  Each summand carries ``parent_elements``
    mapping its (h, g, x) triples to the parent's."""
    elems = list(u.elements())
    index = {e: i for i, e in enumerate(elems)}
    uf = UnionFind(len(elems))
    for alpha in u.target.morphisms():
        g1, g2 = u.target.src[alpha], u.target.tgt[alpha]
        for h in u.source.objects():
            t = u.left[(alpha, h)]
            for x in range(u.sizes[(h, g1)]):
                uf.union(index[(h, g1, x)], index[(h, g2, t[x])])
    for beta in u.source.morphisms():
        h1, h2 = u.source.src[beta], u.source.tgt[beta]
        for g in u.target.objects():
            t = u.right[(beta, g)]
            for x in range(u.sizes[(h2, g)]):
                uf.union(index[(h2, g, x)], index[(h1, g, t[x])])
    orbits = {}
    for i, e in enumerate(elems):
        orbits.setdefault(uf.find(i), []).append(e)
    out = []
    for root in sorted(orbits):
        members = orbits[root]
        newidx = {}
        sizes = {(h, g): 0 for h in u.source.objects() for g in u.target.objects()}
        parent = {}
        for (h, g, x) in members:
            newidx[(h, g, x)] = sizes[(h, g)]
            parent[(h, g, sizes[(h, g)])] = (h, g, x)
            sizes[(h, g)] += 1
        old_of = {v: k for k, v in parent.items()}
        left, right = {}, {}
        for alpha in u.target.morphisms():
            g1 = u.target.src[alpha]
            for h in u.source.objects():
                t = u.left[(alpha, h)]
                left[(alpha, h)] = tuple(
                    newidx[(h, u.target.tgt[alpha], t[parent[(h, g1, i)][2]])]
                    for i in range(sizes[(h, g1)]))
        for beta in u.source.morphisms():
            h2 = u.source.tgt[beta]
            for g in u.target.objects():
                t = u.right[(beta, g)]
                right[(beta, g)] = tuple(
                    newidx[(u.source.src[beta], g, t[parent[(h2, g, i)][2]])]
                    for i in range(sizes[(h2, g)]))
        s = Biset(u.source, u.target, sizes, left, right,
                  name="%s[%d]" % (u.name, len(out)), validate=False)
        s.parent_elements = parent
        out.append(s)
    return out


class BisetMorphism:
    """A natural transformation of bisets: one map per object pair."""

    def __init__(self, source: Biset, target: Biset, maps, validate="gen"):
        self.source = source
        self.target = target
        self.maps = {k: tuple(v) for k, v in maps.items()}
        if validate:
            self.validate(validate)

    def at(self, h, g, x):
        return self.maps[(h, g)][x]

    def validate(self, level="gen"):
        u, v = self.source, self.target
        if u.source != v.source or u.target != v.target:
            raise GroupoidError("morphism between non-parallel bisets")
        for key, t in self.maps.items():
            if len(t) != u.sizes[key] or any(not (0 <= y < v.sizes[key]) for y in t):
                raise GroupoidError("bad component shape at %s" % (key,))
        gg, hh = u.target, u.source
        alphas = gg.morphisms() if level == "full" else groupoid_generators(gg)
        betas = hh.morphisms() if level == "full" else groupoid_generators(hh)
        for alpha in alphas:
            g1, g2 = gg.src[alpha], gg.tgt[alpha]
            for h in hh.objects():
                lhs = [self.maps[(h, g2)][u.left[(alpha, h)][x]]
                       for x in range(u.sizes[(h, g1)])]
                rhs = [v.left[(alpha, h)][self.maps[(h, g1)][x]]
                       for x in range(u.sizes[(h, g1)])]
                if lhs != rhs:
                    raise GroupoidError("naturality fails (left action)")
        for beta in betas:
            h1, h2 = hh.src[beta], hh.tgt[beta]
            for g in gg.objects():
                lhs = [self.maps[(h1, g)][u.right[(beta, g)][x]]
                       for x in range(u.sizes[(h2, g)])]
                rhs = [v.right[(beta, g)][self.maps[(h2, g)][x]]
                       for x in range(u.sizes[(h2, g)])]
                if lhs != rhs:
                    raise GroupoidError("naturality fails (right action)")

    def is_bijective(self):
        return all(u_sz == self.target.sizes[k] and len(set(t)) == u_sz
                   for k, t in self.maps.items()
                   for u_sz in [self.source.sizes[k]])

    def inverse(self):
        if not self.is_bijective():
            raise GroupoidError("morphism is not invertible")
        maps = {}
        for k, t in self.maps.items():
            inv = [0] * len(t)
            for i, y in enumerate(t):
                inv[y] = i
            maps[k] = tuple(inv)
        return BisetMorphism(self.target, self.source, maps, validate=False)

    def __eq__(self, other):
        return (isinstance(other, BisetMorphism) and self.maps == other.maps
                and self.source == other.source and self.target == other.target)

    def __repr__(self):
        return "BisetMorphism(%s => %s)" % (self.source.name, self.target.name)


def identity_morphism(u: Biset) -> BisetMorphism:
    return BisetMorphism(u, u, {k: tuple(range(n)) for k, n in u.sizes.items()},
                         validate=False)


def compose_morphisms(m2: BisetMorphism, m1: BisetMorphism) -> BisetMorphism:
    if m1.target != m2.source:
        raise GroupoidError("morphisms not composable")
    maps = {k: tuple(m2.maps[k][y] for y in t) for k, t in m1.maps.items()}
    return BisetMorphism(m1.source, m2.target, maps, validate=False)


def morphism_on_composite(w: CompositeBiset, target: Biset, fn,
                          validate="gen") -> BisetMorphism:
    """Build a morphism out of a composite from a function on triples.

    fn(k, g, h, u, v) gives a value index of target at (k, g); it is
    evaluated on every member of every class, asserting class-constancy
    (representative-independence of the induced map).
    """
    maps = {}
    for key, mem_lists in w.members.items():
        out = []
        for mem in mem_lists:
            vals = {fn(key[0], key[1], h, x, y) for h, x, y in mem}
            if len(vals) != 1:
                raise GroupoidError("map out of a coend is not well-defined")
            out.append(vals.pop())
        maps[key] = tuple(out)
    return BisetMorphism(w, target, maps, validate=validate)


def left_unitor(w: CompositeBiset) -> BisetMorphism:
    """compose(Id_G, U) -> U, [ξ, x] ↦ ξ·x (composition with the left leg).

    The inverse is insertion of an identity map."""
    u = w.inner
    gg = u.target
    if w.outer != identity_biset(gg):
        raise GroupoidError("left_unitor needs compose(Id, U)")
    return morphism_on_composite(
        w, u,
        lambda k, g, gmid, a, y: u.left[(gg.hom(gmid, g)[a], k)][y])


def right_unitor(w: CompositeBiset) -> BisetMorphism:
    """compose(U, Id_H) -> U, [x, β] ↦ x·β."""
    u = w.outer
    hh = u.source
    if w.inner != identity_biset(hh):
        raise GroupoidError("right_unitor needs compose(U, Id)")
    return morphism_on_composite(
        w, u,
        lambda k, g, hmid, x, b: u.right[(hh.hom(k, hmid)[b], g)][x])


def associator(w_right: CompositeBiset, w_left: CompositeBiset) -> BisetMorphism:
    """compose(U, compose(V, W)) -> compose(compose(U, V), W),
    [x, [y, z]] ↦ [[x, y], z] on representatives (independence asserted)."""
    u, vw = w_right.outer, w_right.inner
    uv, wbis = w_left.outer, w_left.inner
    if not isinstance(vw, CompositeBiset) or not isinstance(uv, CompositeBiset):
        raise GroupoidError("associator needs nested composites")
    if uv.outer != u or uv.inner != vw.outer or wbis != vw.inner:
        raise GroupoidError("associator factor mismatch")

    def fn(l, g, h, x, c):
        vals = set()
        for (k, y, z) in vw.members[(l, h)][c]:
            vals.add(w_left.class_index(l, g, k, uv.class_index(k, g, h, x, y), z))
        if len(vals) != 1:
            raise GroupoidError("associator is not well-defined")
        return vals.pop()

    return morphism_on_composite(w_right, w_left, fn)


def hcomp(psi: BisetMorphism, phi: BisetMorphism,
          w: CompositeBiset, wprime: CompositeBiset) -> BisetMorphism:
    """Horizontal composite: compose(U, V) -> compose(U', V') from
    psi: U ⇒ U' and phi: V ⇒ V'."""
    if w.outer != psi.source or w.inner != phi.source:
        raise GroupoidError("hcomp: composite does not match the morphisms")
    if wprime.outer != psi.target or wprime.inner != phi.target:
        raise GroupoidError("hcomp: target composite mismatch")
    return morphism_on_composite(
        w, wprime,
        lambda k, g, h, x, y: wprime.class_index(
            k, g, h, psi.maps[(h, g)][x], phi.maps[(k, h)][y]))


# -- isomorphism search ----------------------------------------------------


def _single_sided_moves(u: Biset):
    """Generator moves on element triples, as (fn, is_invertible) pairs;
    enough to generate the element groupoid of u."""
    moves = []
    for alpha in groupoid_generators(u.target):
        g1, g2 = u.target.src[alpha], u.target.tgt[alpha]

        def mk(alpha=alpha, g1=g1, g2=g2):
            def move(e):
                h, g, x = e
                if g != g1:
                    return None
                return (h, g2, u.left[(alpha, h)][x])
            return move
        moves.append(mk())
    for beta in groupoid_generators(u.source):
        h1, h2 = u.source.src[beta], u.source.tgt[beta]

        def mk2(beta=beta, h1=h1, h2=h2):
            def move(e):
                h, g, x = e
                if h != h2:
                    return None
                return (h1, g, u.right[(beta, g)][x])
            return move
        moves.append(mk2())
    return moves


def _match_transitive(u: Biset, v: Biset):
    """A natural bijection between two transitive bisets, or None.

    Anchor an element of u, try each v-element at the same object pair,
    propagate along generator moves and check global consistency."""
    if u.sizes != v.sizes:
        return None
    u_elems = list(u.elements())
    if not u_elems:
        return {}
    anchor = u_elems[0]
    moves_u = _single_sided_moves(u)
    moves_v = _single_sided_moves(v)
    for cand in range(v.sizes[(anchor[0], anchor[1])]):
        mapping = {anchor: (anchor[0], anchor[1], cand)}
        frontier = [anchor]
        ok = True
        while frontier and ok:
            e = frontier.pop()
            for mu, mv in zip(moves_u, moves_v):
                eu = mu(e)
                if eu is None:
                    continue
                ev = mv(mapping[e])
                if eu in mapping:
                    if mapping[eu] != ev:
                        ok = False
                        break
                else:
                    mapping[eu] = ev
                    frontier.append(eu)
        if not ok or len(mapping) != len(u_elems):
            continue
        if len(set(mapping.values())) != len(u_elems):
            continue
        # full consistency on every element and every generator move
        good = True
        for e, ev in mapping.items():
            for mu, mv in zip(moves_u, moves_v):
                eu = mu(e)
                if (eu is None) != (mv(ev) is None):
                    good = False
                    break
                if eu is not None and mapping[eu] != mv(ev):
                    good = False
                    break
            if not good:
                break
        if good:
            return mapping
    return None


def bisets_isomorphic(u: Biset, v: Biset):
    """An invertible BisetMorphism u -> v if one exists, else None.

    Orbit decomposition first, then exhaustive anchored propagation on
    each candidate orbit pairing (with backtracking over pairings).
    """
    if u.source != v.source or u.target != v.target:
        raise GroupoidError("bisets have different endpoints")
    if u.sizes != v.sizes:
        return None
    us = decompose_biset(u)
    vs = decompose_biset(v)
    if len(us) != len(vs):
        return None
    used = [False] * len(vs)
    chosen = [None] * len(us)

    def rec(i):
        if i == len(us):
            return True
        for j in range(len(vs)):
            if used[j] or us[i].sizes != vs[j].sizes:
                continue
            m = _match_transitive(us[i], vs[j])
            if m is not None:
                used[j] = True
                chosen[i] = (j, m)
                if rec(i + 1):
                    return True
                used[j] = False
                chosen[i] = None
        return False

    if not rec(0):
        return None
    maps = {k: [None] * n for k, n in u.sizes.items()}
    for i, summand in enumerate(us):
        j, m = chosen[i]
        for e_new, e_old in summand.parent_elements.items():
            ev_new = m[e_new]
            ev_old = vs[j].parent_elements[ev_new]
            maps[(e_old[0], e_old[1])][e_old[2]] = ev_old[2]
    morphism = BisetMorphism(u, v, {k: tuple(t) for k, t in maps.items()})
    if not morphism.is_bijective():
        return None
    return morphism
