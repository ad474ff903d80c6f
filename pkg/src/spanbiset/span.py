"""The bicategory of spans of finite groupoids.

A span H <- S -> G is a 1-cell H -> G; horizontal composition builds an
iso-comma square in the middle.  2-cells are triples (f, β, α) with
β: b ⇒ b'∘f and α: a'∘f ⇒ a (the orientation is a fixed convention).
Isomorphism of spans is decided exactly: skeletonize the apexes, match
connected components, and search group isomorphisms together with
conjugating morphisms on both legs.
"""

from __future__ import annotations

from .groupoid import (FiniteGroupoid, GroupoidFunctor, GroupoidError,
                       NaturalIso, compose_functors, identity_functor,
                       iso_comma, full_subgroupoid, product, empty_groupoid,
                       disjoint_union)
from .groups import isomorphisms
from ._memo import register, memo2


class Span:
    """A span of groupoid functors: left: apex -> H, right: apex -> G,
    read as a 1-cell H -> G."""

    def __init__(self, apex, left, right, name="s"):
        if left.source != apex or right.source != apex:
            raise GroupoidError("span legs must share the apex as source")
        self.apex = apex
        self.left = left
        self.right = right
        self.name = name
        self.composition = None   # (square, outer, inner) when composed

    @property
    def source(self):
        return self.left.target

    @property
    def target(self):
        return self.right.target

    def __eq__(self, other):
        return (isinstance(other, Span) and self.apex == other.apex
                and self.left == other.left and self.right == other.right)

    def __repr__(self):
        return "Span(%s: %s <- %s -> %s)" % (
            self.name, self.source.name, self.apex.name, self.target.name)


class SpanTwoCell:
    """A 2-cell between parallel spans: (f, β: b ⇒ b'∘f, α: a'∘f ⇒ a)."""

    def __init__(self, source_span, target_span, f, beta, alpha, validate=True):
        self.source_span = source_span
        self.target_span = target_span
        self.f = f
        self.beta = beta
        self.alpha = alpha
        if validate:
            self.validate()

    def validate(self):
        s, sp = self.source_span, self.target_span
        if s.source != sp.source or s.target != sp.target:
            raise GroupoidError("2-cell between non-parallel spans")
        if self.f.source != s.apex or self.f.target != sp.apex:
            raise GroupoidError("2-cell functor has wrong endpoints")
        if self.beta.source_functor != s.left or \
           self.beta.target_functor != compose_functors(sp.left, self.f):
            raise GroupoidError("β has the wrong shape")
        if self.alpha.source_functor != compose_functors(sp.right, self.f) or \
           self.alpha.target_functor != s.right:
            raise GroupoidError("α has the wrong shape")

    def __repr__(self):
        return "SpanTwoCell(%s => %s)" % (self.source_span.name,
                                          self.target_span.name)


def identity_span(g: FiniteGroupoid) -> Span:
    i = identity_functor(g)
    return Span(g, i, i, name="Id_%s" % g.name)


def identity_two_cell(s: Span) -> SpanTwoCell:
    f = identity_functor(s.apex)
    beta = NaturalIso(s.left, s.left, [s.source.identity[x] for x in s.left.obj_map])
    alpha = NaturalIso(s.right, s.right, [s.target.identity[x] for x in s.right.obj_map])
    return SpanTwoCell(s, s, f, beta, alpha)


def two_cells_equal(c1: SpanTwoCell, c2: SpanTwoCell) -> bool:
    """2-cells are equal if a natural iso ρ: f ⇒ f' identifies the β and α
    components: (b'ρ)∘β = β' and α'∘(a'ρ) = α.  Exhaustive search over
    candidate components, one connected component of the apex at a time."""
    if c1.source_span != c2.source_span or c1.target_span != c2.target_span:
        return False
    s, sp = c1.source_span, c1.target_span
    apex, apex2 = s.apex, sp.apex
    hgpd, ggpd = s.source, s.target
    paths = apex.tree_paths()

    def component_ok(comp):
        b = comp[0]
        loops = apex.hom(b, b)
        for cand in apex2.hom(c1.f.obj_map[b], c2.f.obj_map[b]):
            if any(apex2.compose(cand, c1.f.mor_map[l]) !=
                   apex2.compose(c2.f.mor_map[l], cand) for l in loops):
                continue
            rho = {}
            for x in comp:
                rho[x] = apex2.compose(
                    c2.f.mor_map[paths[x]],
                    apex2.compose(cand, apex2.inv(c1.f.mor_map[paths[x]])))
            if all(hgpd.compose(sp.left.mor_map[rho[x]], c1.beta.at(x)) ==
                   c2.beta.at(x) for x in comp) and \
               all(ggpd.compose(c2.alpha.at(x), sp.right.mor_map[rho[x]]) ==
                   c1.alpha.at(x) for x in comp):
                return True
        return False

    return all(component_ok(comp) for comp in apex.components())


_compose_spans_cache = register({})


def compose_spans(s: Span, t: Span) -> Span:
    """s∘t for t: K -> H and s: H -> G, via the iso-comma square over the
    middle groupoid H.  Memoized per input pair."""
    return memo2(_compose_spans_cache, s, t, lambda: _compose_spans(s, t))


def _compose_spans(s: Span, t: Span) -> Span:
    if t.target != s.source:
        raise GroupoidError("spans not composable (middle mismatch)")
    square = iso_comma(t.right, s.left)
    out = Span(square.apex,
               compose_functors(t.left, square.p),
               compose_functors(s.right, square.q),
               name="%s.%s" % (s.name, t.name))
    out.composition = (square, s, t)
    return out


def embed(u: GroupoidFunctor, variance: str) -> Span:
    """The canonical embeddings: covariant u_! = (S = S -> G),
    contravariant u^* = (H <- S = S)."""
    i = identity_functor(u.source)
    if variance == "covariant":
        return Span(u.source, i, u, name="%s_!" % u.source.name)
    if variance == "contravariant":
        return Span(u.source, u, i, name="%s^*" % u.source.name)
    raise GroupoidError("variance must be covariant or contravariant")


def sum_spans(s1: Span, s2: Span) -> Span:
    """Hom-monoid sum: disjoint union of apexes with the combined legs."""
    if s1.source != s2.source or s1.target != s2.target:
        raise GroupoidError("sum needs parallel spans")
    apex = disjoint_union(s1.apex, s2.apex)
    n1, m1 = s1.apex.n_objects, s1.apex.n_morphisms
    left = GroupoidFunctor(apex, s1.source,
                           list(s1.left.obj_map) + list(s2.left.obj_map),
                           list(s1.left.mor_map) + list(s2.left.mor_map))
    right = GroupoidFunctor(apex, s1.target,
                            list(s1.right.obj_map) + list(s2.right.obj_map),
                            list(s1.right.mor_map) + list(s2.right.mor_map))
    return Span(apex, left, right, name="%s+%s" % (s1.name, s2.name))


def zero_span(h: FiniteGroupoid, g: FiniteGroupoid) -> Span:
    e = empty_groupoid()
    return Span(e, GroupoidFunctor(e, h, [], [], validate=False),
                GroupoidFunctor(e, g, [], [], validate=False), name="0")


def product_functor(f1: GroupoidFunctor, f2: GroupoidFunctor) -> GroupoidFunctor:
    """f1 x f2 : S1 x S2 -> T1 x T2 (product index conventions)."""
    s = product(f1.source, f2.source)
    t = product(f1.target, f2.target)
    n2, m2 = f2.source.n_objects, f2.source.n_morphisms
    tn2, tm2 = f2.target.n_objects, f2.target.n_morphisms
    return GroupoidFunctor(
        s, t,
        [f1.obj_map[x // n2] * tn2 + f2.obj_map[x % n2] for x in s.objects()],
        [f1.mor_map[m // m2] * tm2 + f2.mor_map[m % m2] for m in s.morphisms()])


def tensor_spans(s1: Span, s2: Span) -> Span:
    """Cartesian-product tensor of spans (componentwise on apex and legs)."""
    return Span(product(s1.apex, s2.apex),
                product_functor(s1.left, s2.left),
                product_functor(s1.right, s2.right),
                name="%s(x)%s" % (s1.name, s2.name))


def decompose_span(s: Span):
    """One span per connected component of the apex; the disjoint union of
    the parts is the input span."""
    out = []
    for comp in s.apex.components():
        sub, incl = full_subgroupoid(s.apex, comp)
        out.append(Span(sub, compose_functors(s.left, incl),
                        compose_functors(s.right, incl),
                        name="%s[%d]" % (s.name, len(out))))
    return out


def skeletal_span_data(s: Span):
    """Connected span -> (vertex group A, (h0, left loop images),
    (g0, right loop images)); the span is isomorphic to this one-object
    form by restriction along the skeleton inclusion."""
    if not s.apex.is_connected():
        raise GroupoidError("skeletal data needs a connected apex")
    b = s.apex.components()[0][0]
    grp, loops = s.apex.vertex_group(b)
    h0 = s.left.obj_map[b]
    g0 = s.right.obj_map[b]
    phi = tuple(s.left.mor_map[l] for l in loops)
    psi = tuple(s.right.mor_map[l] for l in loops)
    return grp, (h0, phi), (g0, psi)


def _connected_spans_isomorphic(s1: Span, s2: Span) -> bool:
    """Invertible-2-cell test for connected spans: search a group iso θ of
    the skeletal apexes and conjugating morphisms m, n on the two legs."""
    a1, (h1, phi1), (g1, psi1) = skeletal_span_data(s1)
    a2, (h2, phi2), (g2, psi2) = skeletal_span_data(s2)
    if a1.order != a2.order:
        return False
    hgpd, ggpd = s1.source, s1.target
    homs_h = hgpd.hom(h1, h2)
    homs_g = ggpd.hom(g2, g1)
    if not homs_h or not homs_g:
        return False
    for theta in isomorphisms(a1, a2):
        ok_m = any(
            all(hgpd.compose(m, phi1[x]) == hgpd.compose(phi2[theta[x]], m)
                for x in range(a1.order))
            for m in homs_h)
        if not ok_m:
            continue
        ok_n = any(
            all(ggpd.compose(psi1[x], n) == ggpd.compose(n, psi2[theta[x]])
                for x in range(a1.order))
            for n in homs_g)
        if ok_n:
            return True
    return False


def spans_isomorphic(s1: Span, s2: Span) -> bool:
    """Existence of an invertible 2-cell between parallel spans."""
    if s1.source != s2.source or s1.target != s2.target:
        raise GroupoidError("spans have different endpoints")
    parts1 = decompose_span(s1)
    parts2 = decompose_span(s2)
    if len(parts1) != len(parts2):
        return False
    used = [False] * len(parts2)

    def rec(i):
        if i == len(parts1):
            return True
        for j in range(len(parts2)):
            if used[j]:
                continue
            if _connected_spans_isomorphic(parts1[i], parts2[j]):
                used[j] = True
                if rec(i + 1):
                    return True
                used[j] = False
        return False

    return rec(0)


# -- canonical structural 2-cells ------------------------------------------


def left_unitor_cell(s: Span) -> SpanTwoCell:
    """The invertible 2-cell compose(Id_G, s) ⇒ s."""
    cs = compose_spans(identity_span(s.target), s)
    square = cs.composition[0]
    f = square.p     # projection to the apex of s
    beta = NaturalIso(cs.left, compose_functors(s.left, f),
                      [s.source.identity[cs.left.obj_map[o]]
                       for o in cs.apex.objects()])
    alpha = NaturalIso(compose_functors(s.right, f), cs.right,
                       [square.obj_data[o][2] for o in cs.apex.objects()])
    return SpanTwoCell(cs, s, f, beta, alpha)


def right_unitor_cell(s: Span) -> SpanTwoCell:
    """The invertible 2-cell compose(s, Id_H) ⇒ s."""
    cs = compose_spans(s, identity_span(s.source))
    square = cs.composition[0]
    f = square.q
    beta = NaturalIso(cs.left, compose_functors(s.left, f),
                      [square.obj_data[o][2] for o in cs.apex.objects()])
    alpha = NaturalIso(compose_functors(s.right, f), cs.right,
                       [s.target.identity[cs.right.obj_map[o]]
                        for o in cs.apex.objects()])
    return SpanTwoCell(cs, s, f, beta, alpha)


def associator_cell(r: Span, s: Span, t: Span) -> SpanTwoCell:
    """The invertible 2-cell compose(compose(r, s), t) ⇒
    compose(r, compose(s, t)) (an isomorphism of apexes with identity leg
    components)."""
    rs = compose_spans(r, s)
    left_span = compose_spans(rs, t)
    st = compose_spans(s, t)
    right_span = compose_spans(r, st)
    sq1 = rs.composition[0]        # iso_comma(s.right, r.left)
    sq_l = left_span.composition[0]  # iso_comma(t.right, rs.left)
    sq2 = st.composition[0]        # iso_comma(t.right, s.left)
    sq_r = right_span.composition[0]  # iso_comma(st.right, r.left)

    obj_map = []
    for (x, w, gam) in sq_l.obj_data:
        y, z, delta = sq1.obj_data[w]
        w2 = sq2.obj_index[(x, y, gam)]
        obj_map.append(sq_r.obj_index[(w2, z, delta)])
    mor_map = []
    for m, (phi_t, psi) in enumerate(sq_l.mor_data):
        phi_s, phi_r = sq1.mor_data[psi]
        src_l = sq_l.apex.src[m]
        x, w, gam = sq_l.obj_data[src_l]
        y, z, delta = sq1.obj_data[w]
        m2 = sq2.mor_index[(phi_t, phi_s, sq2.obj_index[(x, y, gam)])]
        mor_map.append(sq_r.mor_index[(m2, phi_r, obj_map[src_l])])
    f = GroupoidFunctor(sq_l.apex, sq_r.apex, obj_map, mor_map)
    kk, ff = left_span.source, left_span.target
    beta = NaturalIso(left_span.left, compose_functors(right_span.left, f),
                      [kk.identity[left_span.left.obj_map[o]]
                       for o in sq_l.apex.objects()])
    alpha = NaturalIso(compose_functors(right_span.right, f), left_span.right,
                       [ff.identity[left_span.right.obj_map[o]]
                        for o in sq_l.apex.objects()])
    return SpanTwoCell(left_span, right_span, f, beta, alpha)
