"""Finite groupoids, functors, natural isomorphisms, iso-comma squares.

Everything is stored explicitly: objects and morphisms are dense integer
ids, composition is a table on composable pairs, and every constructor
validates the full axioms exhaustively.  Constructions are deterministic
given input ordering, so serialized outputs are reproducible.

Skeletonization convention: the basepoint of a connected component is its
lowest object id, and tree paths to the basepoint are chosen by BFS in
morphism-id order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .groups import Group, isomorphisms
from ._memo import register


class GroupoidError(ValueError):
    """Raised when data fails the groupoid / functor / naturality axioms."""


class FiniteGroupoid:
    """A finite groupoid: total composition on composable pairs, identities
    per object, inverses per morphism."""

    def __init__(self, n_objects, src, tgt, identity, inverse, table,
                 name="G", validate=True):
        self.n_objects = n_objects
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.identity = tuple(identity)
        self.inverse = tuple(inverse)
        self.table = dict(table)
        self.name = name
        self._hom = None
        self._out = None
        self._components = None
        self._skeleton = None
        self._tree_paths = None
        self._generators = None
        self._vertex_groups = {}
        if validate:
            self.validate()

    # -- basics ---------------------------------------------------------

    @property
    def n_morphisms(self):
        return len(self.src)

    def morphisms(self):
        return range(self.n_morphisms)

    def objects(self):
        return range(self.n_objects)

    def compose(self, g, f):
        """g∘f, with f applied first (tgt[f] == src[g])."""
        return self.table[(g, f)]

    def inv(self, m):
        return self.inverse[m]

    def id_of(self, x):
        return self.identity[x]

    def hom(self, x, y):
        """Sorted list of morphisms x -> y (cached)."""
        if self._hom is None:
            h = {}
            for m in range(self.n_morphisms):
                h.setdefault((self.src[m], self.tgt[m]), []).append(m)
            self._hom = h
        return self._hom.get((x, y), [])

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, FiniteGroupoid)
                and self.n_objects == other.n_objects
                and self.src == other.src and self.tgt == other.tgt
                and self.identity == other.identity
                and self.inverse == other.inverse
                and self.table == other.table)

    def __hash__(self):
        return hash((self.n_objects, self.src, self.tgt))

    def __repr__(self):
        return "FiniteGroupoid(%s: %d obj, %d mor)" % (
            self.name, self.n_objects, self.n_morphisms)

    # -- validation -------------------------------------------------------

    def validate(self):
        n, m = self.n_objects, self.n_morphisms
        if len(self.tgt) != m or len(self.inverse) != m or len(self.identity) != n:
            raise GroupoidError("inconsistent array lengths")
        for x in range(n):
            e = self.identity[x]
            if not (0 <= e < m) or self.src[e] != x or self.tgt[e] != x:
                raise GroupoidError("bad identity at object %d" % x)
        for (g, f), gf in self.table.items():
            if self.tgt[f] != self.src[g]:
                raise GroupoidError("composition defined on non-composable pair")
            if self.src[gf] != self.src[f] or self.tgt[gf] != self.tgt[g]:
                raise GroupoidError("composite has wrong endpoints")
        for f in range(m):
            for g in self.out_of(self.tgt[f]):
                if (g, f) not in self.table:
                    raise GroupoidError("composition missing on composable pair")
        # identity laws
        for f in range(m):
            if self.compose(f, self.identity[self.src[f]]) != f:
                raise GroupoidError("right identity law fails at %d" % f)
            if self.compose(self.identity[self.tgt[f]], f) != f:
                raise GroupoidError("left identity law fails at %d" % f)
        # inverses, both sides
        for f in range(m):
            i = self.inverse[f]
            if self.src[i] != self.tgt[f] or self.tgt[i] != self.src[f]:
                raise GroupoidError("inverse has wrong endpoints at %d" % f)
            if self.compose(i, f) != self.identity[self.src[f]]:
                raise GroupoidError("inverse law fails at %d" % f)
            if self.compose(f, i) != self.identity[self.tgt[f]]:
                raise GroupoidError("inverse law fails at %d" % f)
        # associativity: checking triples whose right factor is a generator
        # is equivalent to all composable triples (induction on word length)
        for f in self.generators():
            for g in self.out_of(self.tgt[f]):
                gf = self.compose(g, f)
                for h in self.out_of(self.tgt[g]):
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise GroupoidError("associativity fails")

    def validate_full(self):
        """The literal all-tuples law check (tests; small groupoids)."""
        self.validate()
        for f in range(self.n_morphisms):
            for g in self.out_of(self.tgt[f]):
                gf = self.compose(g, f)
                for h in self.out_of(self.tgt[g]):
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise GroupoidError("associativity fails")

    def out_of(self, x):
        """Morphisms with source x (cached)."""
        if self._out is None:
            out = [[] for _ in range(self.n_objects)]
            for m in range(self.n_morphisms):
                out[self.src[m]].append(m)
            self._out = out
        return self._out[x]

    # -- components and skeleton ------------------------------------------

    def components(self):
        """Connected components as sorted object lists, ordered by basepoint."""
        if self._components is None:
            parent = list(range(self.n_objects))

            def find(i):
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            for f in range(self.n_morphisms):
                a, b = find(self.src[f]), find(self.tgt[f])
                if a != b:
                    parent[max(a, b)] = min(a, b)
            comp = {}
            for x in range(self.n_objects):
                comp.setdefault(find(x), []).append(x)
            self._components = [sorted(comp[k]) for k in sorted(comp)]
        return self._components

    def component_of(self, x):
        for i, c in enumerate(self.components()):
            if x in c:
                return i
        raise GroupoidError("no such object")

    def is_connected(self):
        return len(self.components()) == 1

    def tree_paths(self):
        """For each object, a morphism basepoint -> object (identity at the
        basepoint), basepoint = lowest object id of the component. Cached."""
        if self._tree_paths is not None:
            return self._tree_paths
        paths = [None] * self.n_objects
        for comp in self.components():
            b = comp[0]
            paths[b] = self.identity[b]
            frontier = [b]
            while frontier:
                x = frontier.pop(0)
                for f in self.out_of(x):
                    y = self.tgt[f]
                    if paths[y] is None:
                        paths[y] = self.compose(f, paths[x])
                        frontier.append(y)
        self._tree_paths = paths
        return paths

    def generators(self):
        """Morphisms generating the groupoid under composition: spanning
        tree edges and their inverses, plus vertex-group generators at the
        basepoints.  Cached."""
        if self._generators is not None:
            return self._generators
        gens = []
        paths = self.tree_paths()
        for comp in self.components():
            for x in comp[1:]:
                gens.append(paths[x])
                gens.append(self.inv(paths[x]))
            b = comp[0]
            grp, loops = self.vertex_group(b)
            for e in grp.generating_set():
                gens.append(loops[e])
                gens.append(self.inv(loops[e]))
            gens.append(self.identity[b])
        self._generators = gens
        return gens

    def vertex_group(self, x):
        """(Group, loops) at object x; loops[i] is the morphism for element i.

        The group multiplication is composition: mul(a, b) = loop_a ∘ loop_b.
        Cached per object.
        """
        if x in self._vertex_groups:
            return self._vertex_groups[x]
        loops = self.hom(x, x)
        idx = {m: i for i, m in enumerate(loops)}
        e = idx[self.identity[x]]
        # reindex so identity is element 0
        order = [loops[e]] + [m for m in loops if m != loops[e]]
        idx = {m: i for i, m in enumerate(order)}
        tbl = [[idx[self.compose(a, b)] for b in order] for a in order]
        out = (Group(tbl, name="%s@%d" % (self.name, x)), order)
        self._vertex_groups[x] = out
        return out

    def skeleton(self):
        """(skel, incl, retr, eta) with eta : incl∘retr ⇒ id (a NaturalIso).

        skel is a disjoint union of one-object groupoids, one per component,
        each the vertex group at the component basepoint.
        """
        if self._skeleton is not None:
            return self._skeleton
        comps = self.components()
        paths = self.tree_paths()
        parts = []
        for comp in comps:
            g, loops = self.vertex_group(comp[0])
            parts.append((comp[0], g, loops))
        skel = disjoint_union_list([from_group(g, name=g.name) for _, g, _ in parts],
                                   name="skel(%s)" % self.name)
        # skeleton morphism id of a loop at basepoint of component ci
        mor_offset = []
        off = 0
        for _, g, _ in parts:
            mor_offset.append(off)
            off += g.order
        loop_index = [{m: i for i, m in enumerate(loops)} for _, _, loops in parts]

        incl_obj = [parts[ci][0] for ci in range(len(parts))]
        incl_mor = []
        for ci, (_, g, loops) in enumerate(parts):
            incl_mor.extend(loops)
        incl = GroupoidFunctor(skel, self, incl_obj, incl_mor)

        retr_obj = [None] * self.n_objects
        for ci, comp in enumerate(comps):
            for x in comp:
                retr_obj[x] = ci
        retr_mor = []
        for m in range(self.n_morphisms):
            ci = self.component_of(self.src[m])
            loop = self.compose(self.inv(paths[self.tgt[m]]),
                                self.compose(m, paths[self.src[m]]))
            retr_mor.append(mor_offset[ci] + loop_index[ci][loop])
        retr = GroupoidFunctor(self, skel, retr_obj, retr_mor)

        eta = NaturalIso(compose_functors(incl, retr), identity_functor(self),
                         tuple(paths))
        self._skeleton = (skel, incl, retr, eta)
        return self._skeleton


class GroupoidFunctor:
    """A functor between finite groupoids, as explicit object/morphism maps."""

    def __init__(self, source, target, obj_map, mor_map, validate=True):
        self.source = source
        self.target = target
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)
        if validate:
            self.validate()

    def on_obj(self, x):
        return self.obj_map[x]

    def on_mor(self, m):
        return self.mor_map[m]

    def validate(self):
        s, t = self.source, self.target
        if len(self.obj_map) != s.n_objects or len(self.mor_map) != s.n_morphisms:
            raise GroupoidError("functor maps have wrong lengths")
        for m in s.morphisms():
            fm = self.mor_map[m]
            if t.src[fm] != self.obj_map[s.src[m]] or t.tgt[fm] != self.obj_map[s.tgt[m]]:
                raise GroupoidError("functor breaks source/target")
        for x in s.objects():
            if self.mor_map[s.identity[x]] != t.identity[self.obj_map[x]]:
                raise GroupoidError("functor breaks identities")
        # composition preserved on (all, generator) pairs implies all pairs
        for f in s.generators():
            for g in s.out_of(s.tgt[f]):
                if self.mor_map[s.compose(g, f)] != t.compose(self.mor_map[g], self.mor_map[f]):
                    raise GroupoidError("functor breaks composition")

    def validate_full(self):
        self.validate()
        s, t = self.source, self.target
        for f in s.morphisms():
            for g in s.out_of(s.tgt[f]):
                if self.mor_map[s.compose(g, f)] != t.compose(self.mor_map[g], self.mor_map[f]):
                    raise GroupoidError("functor breaks composition")

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, GroupoidFunctor)
                and self.source == other.source and self.target == other.target
                and self.obj_map == other.obj_map and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash((self.obj_map, self.mor_map))

    def __repr__(self):
        return "GroupoidFunctor(%s -> %s)" % (self.source.name, self.target.name)

    def is_equivalence(self):
        """Essentially surjective + fully faithful (checked directly)."""
        s, t = self.source, self.target
        hit = {t.component_of(self.obj_map[x]) for x in s.objects()}
        if hit != set(range(len(t.components()))):
            return False
        for x in s.objects():
            for y in s.objects():
                dom = s.hom(x, y)
                cod = t.hom(self.obj_map[x], self.obj_map[y])
                img = {self.mor_map[m] for m in dom}
                if len(img) != len(dom) or img != set(cod):
                    return False
        return True


class NaturalIso:
    """A natural isomorphism between parallel functors, one component per
    source object.  Components are automatically invertible (groupoid)."""

    def __init__(self, source_functor, target_functor, components, validate=True):
        self.source_functor = source_functor
        self.target_functor = target_functor
        self.components = tuple(components)
        if validate:
            self.validate()

    def at(self, x):
        return self.components[x]

    def validate(self):
        f1, f2 = self.source_functor, self.target_functor
        if f1.source != f2.source or f1.target != f2.target:
            raise GroupoidError("natural iso between non-parallel functors")
        s, t = f1.source, f1.target
        if len(self.components) != s.n_objects:
            raise GroupoidError("wrong number of components")
        for x in s.objects():
            c = self.components[x]
            if t.src[c] != f1.obj_map[x] or t.tgt[c] != f2.obj_map[x]:
                raise GroupoidError("component %d has wrong endpoints" % x)
            # invertibility is automatic in a groupoid; assert anyway
            t.inv(c)
        for m in s.morphisms():
            x, y = s.src[m], s.tgt[m]
            lhs = t.compose(self.components[y], f1.mor_map[m])
            rhs = t.compose(f2.mor_map[m], self.components[x])
            if lhs != rhs:
                raise GroupoidError("naturality square fails at morphism %d" % m)

    def inverse(self):
        t = self.source_functor.target
        return NaturalIso(self.target_functor, self.source_functor,
                          tuple(t.inv(c) for c in self.components))

    def __repr__(self):
        return "NaturalIso(%d components)" % len(self.components)


@dataclass
class IsoCommaSquare:
    """The universal square over a cospan a: S -> G <- T : b.

    Apex objects are exactly the triples (s, t, γ) with γ in G(a s, b t);
    morphisms are exactly the pairs (φ, ψ) with γ'·a(φ) = b(ψ)·γ.
    ``obj_data`` and ``mor_data`` record the triples and pairs.
    """

    apex: FiniteGroupoid
    p: GroupoidFunctor        # apex -> S
    q: GroupoidFunctor        # apex -> T
    gamma: NaturalIso         # a∘p ⇒ b∘q
    obj_data: list            # [(s, t, gamma_mor)]
    mor_data: list            # [(phi, psi)]
    obj_index: dict           # (s, t, gamma_mor) -> apex object id
    mor_index: dict           # (phi, psi, src_obj) -> apex morphism id


# -- constructions ------------------------------------------------------


def from_group(group, name=None):
    """One-object groupoid realizing a finite group.

    Accepts a Group or a raw multiplication table; raw tables are validated
    by the Group constructor (closure, associativity, identity, inverses).
    """
    if not isinstance(group, Group):
        group = Group(tuple(tuple(r) for r in group))
    n = group.order
    table = {(a, b): group.mul(a, b) for a in range(n) for b in range(n)}
    g = FiniteGroupoid(1, [0] * n, [0] * n, [group.identity],
                       [group.inv(a) for a in range(n)], table,
                       name=name or ("B" + group.name))
    return g


def trivial_groupoid():
    return from_group(Group(((0,),), name="1"), name="1")


def empty_groupoid():
    return FiniteGroupoid(0, [], [], [], [], {}, name="0")


def disjoint_union(g1, g2, name=None):
    """Tagged disjoint union; no cross morphisms."""
    n1, m1 = g1.n_objects, g1.n_morphisms
    src = list(g1.src) + [x + n1 for x in g2.src]
    tgt = list(g1.tgt) + [x + n1 for x in g2.tgt]
    identity = list(g1.identity) + [m + m1 for m in g2.identity]
    inverse = list(g1.inverse) + [m + m1 for m in g2.inverse]
    table = dict(g1.table)
    for (a, b), c in g2.table.items():
        table[(a + m1, b + m1)] = c + m1
    return FiniteGroupoid(g1.n_objects + g2.n_objects, src, tgt, identity,
                          inverse, table,
                          name=name or "%s+%s" % (g1.name, g2.name))


def disjoint_union_list(gs, name=None):
    if not gs:
        return empty_groupoid()
    out = gs[0]
    for g in gs[1:]:
        out = disjoint_union(out, g)
    if name:
        out.name = name
    return out


def union_inclusions(g1, g2):
    """The two inclusion functors into disjoint_union(g1, g2)."""
    u = disjoint_union(g1, g2)
    i1 = GroupoidFunctor(g1, u, range(g1.n_objects), range(g1.n_morphisms))
    i2 = GroupoidFunctor(g2, u, [x + g1.n_objects for x in g2.objects()],
                         [m + g1.n_morphisms for m in g2.morphisms()])
    return u, i1, i2


def product(g1, g2, name=None):
    """Cartesian product: objects and morphisms are pairs, componentwise
    composition.  Pair (i, j) gets id i*n2 + j."""
    n2, m2 = g2.n_objects, g2.n_morphisms
    src, tgt, inverse = [], [], []
    for a in g1.morphisms():
        for b in g2.morphisms():
            src.append(g1.src[a] * n2 + g2.src[b])
            tgt.append(g1.tgt[a] * n2 + g2.tgt[b])
            inverse.append(g1.inverse[a] * m2 + g2.inverse[b])
    identity = [g1.identity[x] * m2 + g2.identity[y]
                for x in g1.objects() for y in g2.objects()]
    table = {}
    for (a1, b1), c1 in g1.table.items():
        for (a2, b2), c2 in g2.table.items():
            table[(a1 * m2 + a2, b1 * m2 + b2)] = c1 * m2 + c2
    return FiniteGroupoid(g1.n_objects * n2, src, tgt, identity, inverse, table,
                          name=name or "%sx%s" % (g1.name, g2.name))


def product_projections(g1, g2):
    p = product(g1, g2)
    n2, m2 = g2.n_objects, g2.n_morphisms
    pr1 = GroupoidFunctor(p, g1, [x // n2 for x in p.objects()],
                          [m // m2 for m in p.morphisms()])
    pr2 = GroupoidFunctor(p, g2, [x % n2 for x in p.objects()],
                          [m % m2 for m in p.morphisms()])
    return p, pr1, pr2


def pair_functor(f1, f2, prod=None):
    """The functor (f1, f2): S -> G1 x G2 for parallel-source f1, f2."""
    if f1.source != f2.source:
        raise GroupoidError("pair_functor needs a common source")
    g1, g2 = f1.target, f2.target
    if prod is None:
        prod = product(g1, g2)
    n2, m2 = g2.n_objects, g2.n_morphisms
    return GroupoidFunctor(
        f1.source, prod,
        [f1.obj_map[x] * n2 + f2.obj_map[x] for x in f1.source.objects()],
        [f1.mor_map[m] * m2 + f2.mor_map[m] for m in f1.source.morphisms()])


def op(g):
    """The opposite groupoid (same ids, sources and targets swapped)."""
    table = {(a, b): c for (b, a), c in g.table.items()}
    return FiniteGroupoid(g.n_objects, g.tgt, g.src, g.identity, g.inverse,
                          table, name="%s^op" % g.name)


def identity_functor(g):
    return GroupoidFunctor(g, g, range(g.n_objects), range(g.n_morphisms),
                           validate=False)


def compose_functors(g, f):
    """g∘f (f applied first)."""
    if f.target != g.source:
        raise GroupoidError("functors not composable")
    return GroupoidFunctor(f.source, g.target,
                           [g.obj_map[x] for x in f.obj_map],
                           [g.mor_map[m] for m in f.mor_map], validate=False)


def constant_functor(source, target, obj):
    return GroupoidFunctor(source, target, [obj] * source.n_objects,
                           [target.identity[obj]] * source.n_morphisms)


_iso_comma_cache = register({})


def iso_comma(a, b):
    """The iso-comma square (a/b) of a cospan a: S -> G <- T : b.

    Objects are triples (s, t, γ: a(s) -> b(t)), enumerated by s, then t,
    then γ in hom-list order; a morphism (φ, ψ): (s,t,γ) -> (s',t',γ') exists
    iff γ'·a(φ) = b(ψ)·γ, and then γ' is determined by (φ, ψ, γ).

    Results are memoized per input-functor pair (the construction is
    deterministic, and the verification suites revisit the same squares).
    """
    key = (id(a), id(b))
    hit = _iso_comma_cache.get(key)
    if hit is not None and hit[0] is a and hit[1] is b:
        return hit[2]
    if a.target != b.target:
        raise GroupoidError("iso_comma needs a common target")
    s_gpd, t_gpd, g_gpd = a.source, b.source, a.target

    obj_data = []
    obj_index = {}
    for s in s_gpd.objects():
        for t in t_gpd.objects():
            for gam in g_gpd.hom(a.obj_map[s], b.obj_map[t]):
                obj_index[(s, t, gam)] = len(obj_data)
                obj_data.append((s, t, gam))

    mor_data, src, tgt = [], [], []
    mor_index = {}
    for phi in s_gpd.morphisms():
        for psi in t_gpd.morphisms():
            aphi, bpsi = a.mor_map[phi], b.mor_map[psi]
            s0, s1 = s_gpd.src[phi], s_gpd.tgt[phi]
            t0, t1 = t_gpd.src[psi], t_gpd.tgt[psi]
            for gam in g_gpd.hom(a.obj_map[s0], b.obj_map[t0]):
                gam2 = g_gpd.compose(g_gpd.compose(bpsi, gam), g_gpd.inv(aphi))
                o0 = obj_index[(s0, t0, gam)]
                o1 = obj_index[(s1, t1, gam2)]
                mor_index[(phi, psi, o0)] = len(mor_data)
                mor_data.append((phi, psi))
                src.append(o0)
                tgt.append(o1)

    identity = [mor_index[(s_gpd.identity[s], t_gpd.identity[t], i)]
                for i, (s, t, gam) in enumerate(obj_data)]
    inverse = [mor_index[(s_gpd.inverse[phi], t_gpd.inverse[psi], tgt[m])]
               for m, (phi, psi) in enumerate(mor_data)]
    by_src = [[] for _ in range(len(obj_data))]
    for m, s0 in enumerate(src):
        by_src[s0].append(m)
    table = {}
    for m1, (phi1, psi1) in enumerate(mor_data):
        for m2 in by_src[tgt[m1]]:
            phi2, psi2 = mor_data[m2]
            table[(m2, m1)] = mor_index[(s_gpd.compose(phi2, phi1),
                                         t_gpd.compose(psi2, psi1), src[m1])]
    apex = FiniteGroupoid(len(obj_data), src, tgt, identity, inverse, table,
                          name="(%s/%s)" % (a.source.name, b.source.name))
    p = GroupoidFunctor(apex, s_gpd, [o[0] for o in obj_data],
                        [m[0] for m in mor_data])
    q = GroupoidFunctor(apex, t_gpd, [o[1] for o in obj_data],
                        [m[1] for m in mor_data])
    gamma = NaturalIso(compose_functors(a, p), compose_functors(b, q),
                       tuple(o[2] for o in obj_data))
    square = IsoCommaSquare(apex, p, q, gamma, obj_data, mor_data, obj_index,
                            mor_index)
    _iso_comma_cache[key] = (a, b, square)
    return square


def full_subgroupoid(g, objects):
    """Restriction to a subset of objects, with the inclusion functor."""
    objects = sorted(objects)
    oidx = {x: i for i, x in enumerate(objects)}
    keep = [m for m in g.morphisms() if g.src[m] in oidx and g.tgt[m] in oidx]
    midx = {m: i for i, m in enumerate(keep)}
    sub = FiniteGroupoid(
        len(objects),
        [oidx[g.src[m]] for m in keep],
        [oidx[g.tgt[m]] for m in keep],
        [midx[g.identity[x]] for x in objects],
        [midx[g.inverse[m]] for m in keep],
        {(midx[a], midx[b]): midx[c] for (a, b), c in g.table.items()
         if a in midx and b in midx},
        name="%s|%d" % (g.name, len(objects)))
    incl = GroupoidFunctor(sub, g, objects, keep)
    return sub, incl


# -- search operations ----------------------------------------------------


def find_natural_iso(f1, f2):
    """A NaturalIso f1 ⇒ f2, or None.  Exhaustive per-component search:
    a component at the basepoint determines the rest via tree paths."""
    if f1.source != f2.source or f1.target != f2.target:
        raise GroupoidError("functors are not parallel")
    s, t = f1.source, f1.target
    paths = s.tree_paths()
    components = [None] * s.n_objects
    for comp in s.components():
        b = comp[0]
        loops = s.hom(b, b)
        found = None
        for cand in t.hom(f1.obj_map[b], f2.obj_map[b]):
            if all(t.compose(cand, f1.mor_map[l]) == t.compose(f2.mor_map[l], cand)
                   for l in loops):
                found = cand
                break
        if found is None:
            return None
        for x in comp:
            components[x] = t.compose(f2.mor_map[paths[x]],
                                      t.compose(found, t.inv(f1.mor_map[paths[x]])))
    return NaturalIso(f1, f2, components)


def _match_components(invs1, invs2, try_pair):
    """Backtracking perfect matching of component indices; try_pair(i, j)
    returns a witness or None."""
    n = len(invs1)
    if n != len(invs2):
        return None
    used = [False] * n
    assign = [None] * n

    def rec(i):
        if i == n:
            return True
        for j in range(n):
            if used[j] or invs1[i] != invs2[j]:
                continue
            w = try_pair(i, j)
            if w is not None:
                used[j] = True
                assign[i] = (j, w)
                if rec(i + 1):
                    return True
                used[j] = False
                assign[i] = None
        return False

    if rec(0):
        return assign
    return None


def find_equivalence(g1, g2):
    """Mutually quasi-inverse functors (f, g, eta: g∘f ⇒ id_G1,
    eps: f∘g ⇒ id_G2), or None.

    Exact decision: components are matched on (vertex-group order) and then
    on vertex-group isomorphism found by exhaustive table search.
    """
    if g1 == g2:
        f = identity_functor(g1)
        eta = NaturalIso(f, f, g1.identity)
        return f, f, eta, eta
    comps1, comps2 = g1.components(), g2.components()
    if len(comps1) != len(comps2):
        return None
    sk1, i1, r1, eta1 = g1.skeleton()
    sk2, i2, r2, eta2 = g2.skeleton()
    vg1 = [g1.vertex_group(c[0]) for c in comps1]
    vg2 = [g2.vertex_group(c[0]) for c in comps2]

    def try_pair(i, j):
        iso = isomorphisms(vg1[i][0], vg2[j][0])
        return iso[0] if iso else None

    assign = _match_components([g.order for g, _ in vg1],
                               [g.order for g, _ in vg2], try_pair)
    if assign is None:
        return None

    f_obj = [None] * g1.n_objects
    f_mor = [None] * g1.n_morphisms
    g_obj = [None] * g2.n_objects
    g_mor = [None] * g2.n_morphisms
    paths1, paths2 = g1.tree_paths(), g2.tree_paths()
    for ci, comp in enumerate(comps1):
        cj, theta = assign[ci]
        grp1, loops1 = vg1[ci]
        grp2, loops2 = vg2[cj]
        b1, b2 = comp[0], comps2[cj][0]
        loop_idx1 = {m: k for k, m in enumerate(loops1)}
        loop_idx2 = {m: k for k, m in enumerate(loops2)}
        theta_inv = [None] * grp1.order
        for k in range(grp1.order):
            theta_inv[theta[k]] = k
        for x in comp:
            f_obj[x] = b2
        for x in comps2[cj]:
            g_obj[x] = b1
        for m in g1.morphisms():
            if g1.src[m] in comp:
                loop = g1.compose(g1.inv(paths1[g1.tgt[m]]),
                                  g1.compose(m, paths1[g1.src[m]]))
                f_mor[m] = loops2[theta[loop_idx1[loop]]]
        for m in g2.morphisms():
            if g2.src[m] in comps2[cj]:
                loop = g2.compose(g2.inv(paths2[g2.tgt[m]]),
                                  g2.compose(m, paths2[g2.src[m]]))
                g_mor[m] = loops1[theta_inv[loop_idx2[loop]]]
    f = GroupoidFunctor(g1, g2, f_obj, f_mor)
    g = GroupoidFunctor(g2, g1, g_obj, g_mor)
    eta = NaturalIso(compose_functors(g, f), identity_functor(g1), tuple(paths1))
    eps = NaturalIso(compose_functors(f, g), identity_functor(g2), tuple(paths2))
    return f, g, eta, eps


def functors_between(g, h):
    """All functors g -> h, for sources whose components are one-object
    groupoids (the verification pools).  Deterministic order."""
    from .groups import homomorphisms
    comps = g.components()
    for c in comps:
        if len(c) != 1:
            raise GroupoidError("functors_between needs one-object components")
    per_comp = []
    for c in comps:
        x = c[0]
        grp, loops = g.vertex_group(x)
        choices = []
        for y in h.objects():
            hgrp, hloops = h.vertex_group(y)
            for hom in homomorphisms(grp, hgrp):
                choices.append((x, y, loops, [hloops[v] for v in hom]))
        per_comp.append(choices)
    out = []
    for combo in itertools.product(*per_comp):
        obj_map = [None] * g.n_objects
        mor_map = [None] * g.n_morphisms
        for (x, y, loops, images) in combo:
            obj_map[x] = y
            for m, im in zip(loops, images):
                mor_map[m] = im
        out.append(GroupoidFunctor(g, h, obj_map, mor_map, validate=False))
    return out
