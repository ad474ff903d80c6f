"""Finite groups as explicit multiplication tables.

Elements are dense integers 0..n-1 with 0 the identity (constructors
guarantee this; `Group` itself only requires *some* identity).  All
enumeration here (subgroups, homomorphisms, isomorphisms) is exhaustive
with cheap invariant pruning, which is the right trade at desk scale
(|G| <= ~50).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class GroupError(ValueError):
    """Raised for data that is not a group (or not a subgroup, etc.)."""


@dataclass(frozen=True)
class Group:
    """A finite group given by its full multiplication table.

    ``table[a][b]`` is the product a*b.  The table is validated once at
    construction: closure, associativity, identity and inverses.
    """

    table: tuple
    name: str = "G"
    _inv: tuple = field(default=None, repr=False, compare=False)
    _identity: int = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.table)
        tbl = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", tbl)
        for row in tbl:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise GroupError("multiplication table is not square over 0..n-1")
        ident = None
        for e in range(n):
            if all(tbl[e][x] == x == tbl[x][e] for x in range(n)):
                ident = e
                break
        if ident is None:
            raise GroupError("no identity element")
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if tbl[a][b] == ident and tbl[b][a] == ident:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise GroupError("element %d has no inverse" % a)
        object.__setattr__(self, "_inv", tuple(inv))
        object.__setattr__(self, "_identity", ident)
        # associativity on (a, b, generator) triples is equivalent to the
        # full check by induction on word length; generators found greedily
        gens = self.generating_set()
        if self.closure(gens) != frozenset(range(n)):
            raise GroupError("generating set does not generate")
        for c in gens:
            for a in range(n):
                ta = tbl[a]
                for b in range(n):
                    if tbl[ta[b]][c] != ta[tbl[b][c]]:
                        raise GroupError("associativity fails at (%d,%d,%d)" % (a, b, c))

    def validate_full(self):
        """Literal all-triples associativity check (tests)."""
        n = self.order
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise GroupError("associativity fails")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return self._identity

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def elements(self):
        return range(self.order)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    # -- generation ---------------------------------------------------

    def closure(self, gens) -> frozenset:
        """Subgroup generated by ``gens`` (as a frozenset of elements)."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = [g for g in gens] + [self.inv(g) for g in gens]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def generating_set(self):
        """A small (greedy) generating set; empty for the trivial group."""
        gens = []
        cur = frozenset({self.identity})
        while len(cur) < self.order:
            # grab the element producing the biggest jump
            best, best_clo = None, cur
            for x in range(self.order):
                if x in cur:
                    continue
                clo = self.closure(gens + [x])
                if len(clo) > len(best_clo):
                    best, best_clo = x, clo
                if len(best_clo) == self.order:
                    break
            gens.append(best)
            cur = best_clo
        return gens

    # -- subgroups ----------------------------------------------------

    def subgroups(self):
        """All subgroups, as sorted tuples of elements, in deterministic order."""
        found = {frozenset({self.identity})}
        frontier = [frozenset({self.identity})]
        while frontier:
            h = frontier.pop()
            for x in range(self.order):
                if x in h:
                    continue
                h2 = self.closure(list(h) + [x])
                if h2 not in found:
                    found.add(h2)
                    frontier.append(h2)
        return sorted(tuple(sorted(h)) for h in found)

    def conjugate_subgroup(self, g: int, h) -> tuple:
        return tuple(sorted(self.conj(g, x) for x in h))

    def subgroup_conjugacy_classes(self):
        """Conjugacy classes of subgroups; each class is a sorted tuple of
        subgroups and the first entry is the class representative."""
        subs = self.subgroups()
        seen = set()
        classes = []
        for h in subs:
            if h in seen:
                continue
            orbit = sorted({self.conjugate_subgroup(g, h) for g in range(self.order)})
            seen.update(orbit)
            classes.append(tuple(orbit))
        return classes

    def is_subgroup(self, h) -> bool:
        hs = set(h)
        if self.identity not in hs:
            return False
        return all(self.mul(a, self.inv(b)) in hs for a in hs for b in hs)

    def is_normal(self, h) -> bool:
        hs = set(h)
        return all(self.conj(g, x) in hs for g in range(self.order) for x in hs)

    def normal_subgroups(self):
        return [h for h in self.subgroups() if self.is_normal(h)]

    def subgroup_group(self, h) -> "Group":
        """The subgroup ``h`` as a Group of its own (elements reindexed)."""
        h = tuple(sorted(h))
        idx = {x: i for i, x in enumerate(h)}
        tbl = [[idx[self.mul(a, b)] for b in h] for a in h]
        return Group(tbl, name="%s|%s" % (self.name, len(h)))

    def quotient(self, n):
        """Quotient by a normal subgroup.

        Returns (Group, projection list) where projection[g] is the index of
        the coset of g.  Cosets are ordered by their smallest element.
        """
        if not self.is_subgroup(n) or not self.is_normal(n):
            raise GroupError("not a normal subgroup")
        ns = tuple(sorted(n))
        cosets = []
        proj = [None] * self.order
        for g in range(self.order):
            if proj[g] is not None:
                continue
            coset = tuple(sorted(self.mul(g, x) for x in ns))
            cosets.append(coset)
            for y in coset:
                proj[y] = len(cosets) - 1
        tbl = [[proj[self.mul(c1[0], c2[0])] for c2 in cosets] for c1 in cosets]
        return Group(tbl, name="%s/%d" % (self.name, len(ns))), proj

    def coset_index(self, h) -> int:
        return self.order // len(h)

    def left_cosets(self, h):
        """Left cosets gH, each a sorted tuple, ordered by smallest element."""
        hs = tuple(sorted(h))
        out, seen = [], set()
        for g in range(self.order):
            if g in seen:
                continue
            c = tuple(sorted(self.mul(g, x) for x in hs))
            out.append(c)
            seen.update(c)
        return out

    def double_cosets(self, h, k):
        """Double cosets H\\G/K by direct orbit enumeration."""
        out, seen = [], set()
        for g in range(self.order):
            if g in seen:
                continue
            c = tuple(sorted(self.mul(self.mul(a, g), b) for a in h for b in k))
            out.append(c)
            seen.update(c)
        return out


# -- homomorphism search ------------------------------------------------


def homomorphisms(a: Group, b: Group):
    """All group homomorphisms a -> b, each as a tuple of images.

    Backtracking over images of a small generating set, with order
    divisibility as the pruning invariant, then closure to the full map.
    """
    gens = a.generating_set()
    if not gens:
        return [tuple([b.identity])] if a.order == 1 else []
    orders = [a.element_order(g) for g in gens]
    cands = [[y for y in b.elements() if orders[i] % b.element_order(y) == 0]
             for i in range(len(gens))]
    out = []
    for images in itertools.product(*cands):
        f = _extend_hom(a, b, gens, images)
        if f is not None:
            out.append(f)
    return out


def _extend_hom(a: Group, b: Group, gens, images):
    """Extend generator images to a full hom by BFS, or None if inconsistent."""
    f = [None] * a.order
    f[a.identity] = b.identity
    frontier = [a.identity]
    gpairs = list(zip(gens, images)) + [(a.inv(g), b.inv(i)) for g, i in zip(gens, images)]
    while frontier:
        x = frontier.pop()
        for g, i in gpairs:
            y = a.mul(x, g)
            fy = b.mul(f[x], i)
            if f[y] is None:
                f[y] = fy
                frontier.append(y)
            elif f[y] != fy:
                return None
    # consistency on the full table (guards against non-homomorphic closures)
    for x in range(a.order):
        for y in range(a.order):
            if f[a.mul(x, y)] != b.mul(f[x], f[y]):
                return None
    return tuple(f)


def first_isomorphism(a: Group, b: Group):
    """One isomorphism a -> b, or None (early-exit search)."""
    if a.order != b.order:
        return None
    if sorted(a.element_order(x) for x in a.elements()) != \
       sorted(b.element_order(x) for x in b.elements()):
        return None
    gens = a.generating_set()
    if not gens:
        return tuple([b.identity]) if a.order == 1 else None
    orders = [a.element_order(g) for g in gens]
    cands = [[y for y in b.elements() if b.element_order(y) == orders[i]]
             for i in range(len(gens))]
    import itertools as _it
    for images in _it.product(*cands):
        f = _extend_hom(a, b, gens, images)
        if f is not None and len(set(f)) == a.order:
            return f
    return None


def isomorphisms(a: Group, b: Group):
    """All isomorphisms a -> b (empty if none)."""
    if a.order != b.order:
        return []
    if sorted(a.element_order(x) for x in a.elements()) != \
       sorted(b.element_order(x) for x in b.elements()):
        return []
    return [f for f in homomorphisms(a, b) if len(set(f)) == a.order]


def are_isomorphic(a: Group, b: Group) -> bool:
    if a.order != b.order:
        return False
    for f in homomorphisms(a, b):
        if len(set(f)) == a.order:
            return True
    return False


def automorphisms(g: Group):
    return isomorphisms(g, g)


def surjections(a: Group, b: Group):
    return [f for f in homomorphisms(a, b) if len(set(f)) == b.order]


# -- constructors -------------------------------------------------------


def trivial_group() -> Group:
    return Group(((0,),), name="1")


def cyclic(n: int) -> Group:
    tbl = [[(i + j) % n for j in range(n)] for i in range(n)]
    return Group(tbl, name="C%d" % n)


def direct_product(a: Group, b: Group) -> Group:
    """Elements are pairs ordered as i*|b|+j."""
    na, nb = a.order, b.order
    tbl = [[a.mul(i1, i2) * nb + b.mul(j1, j2)
            for i2 in range(na) for j2 in range(nb)]
           for i1 in range(na) for j1 in range(nb)]
    return Group(tbl, name="%sx%s" % (a.name, b.name))


def from_permutations(perms, name="perm") -> Group:
    """Group generated by permutations (lists of images on 0..k-1)."""
    if not perms:
        raise GroupError("need at least one permutation")
    k = len(perms[0])
    ident = tuple(range(k))
    elems = [ident]
    index = {ident: 0}
    gens = [tuple(p) for p in perms]
    if any(sorted(p) != list(range(k)) for p in gens):
        raise GroupError("not permutations of 0..k-1")
    frontier = [ident]
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = tuple(g[p[i]] for i in range(k))
            if q not in index:
                index[q] = len(elems)
                elems.append(q)
                frontier.append(q)
    n = len(elems)
    tbl = [[index[tuple(q[p[i]] for i in range(k))] for p in elems] for q in elems]
    # reindex so the identity is element 0
    order = sorted(range(n), key=lambda i: (elems[i] != ident, i))
    pos = {e: i for i, e in enumerate(order)}
    tbl2 = [[pos[tbl[order[i]][order[j]]] for j in range(n)] for i in range(n)]
    return Group(tbl2, name=name)


def symmetric(n: int) -> Group:
    if n <= 1:
        return trivial_group()
    swap = list(range(n))
    swap[0], swap[1] = 1, 0
    cyc = [(i + 1) % n for i in range(n)]
    return from_permutations([swap, cyc], name="S%d" % n)


def alternating4() -> Group:
    return from_permutations([[1, 0, 3, 2], [0, 2, 3, 1]], name="A4")


def dihedral(n: int) -> Group:
    """Dihedral group of order 2n (n >= 2)."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(n - i) % n for i in range(n)]
    return from_permutations([rot, ref], name="D%d" % n)


def quaternion8() -> Group:
    # 1, -1, i, -i, j, -j, k, -k acting on themselves by left translation
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    sign = {x: (1 if not x.startswith("-") else -1) for x in names}
    base = {x: x.lstrip("-") for x in names}
    mul1 = {("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1), ("1", "k"): ("k", 1),
            ("i", "1"): ("i", 1), ("j", "1"): ("j", 1), ("k", "1"): ("k", 1),
            ("i", "i"): ("1", -1), ("j", "j"): ("1", -1), ("k", "k"): ("1", -1),
            ("i", "j"): ("k", 1), ("j", "k"): ("i", 1), ("k", "i"): ("j", 1),
            ("j", "i"): ("k", -1), ("k", "j"): ("i", -1), ("i", "k"): ("j", -1)}
    idx = {x: i for i, x in enumerate(names)}
    tbl = []
    for x in names:
        row = []
        for y in names:
            b, s = mul1[(base[x], base[y])]
            s *= sign[x] * sign[y]
            row.append(idx[b if s == 1 else "-" + b])
        tbl.append(row)
    return Group(tbl, name="Q8")


def dicyclic3() -> Group:
    """Dicyclic group of order 12 (a^6=1, b^2=a^3, b a b^-1 = a^-1)."""
    # representation inside S12 via left translation on the 12 elements a^i b^j
    def mul(x, y):
        i1, j1 = x
        i2, j2 = y
        if j1 == 0:
            return ((i1 + i2) % 6, j2)
        # b a^k = a^-k b ; b^2 = a^3
        if j2 == 0:
            return ((i1 - i2) % 6, 1)
        return ((i1 - i2 + 3) % 6, 0)

    elems = [(i, j) for j in range(2) for i in range(6)]
    idx = {e: i for i, e in enumerate(elems)}
    tbl = [[idx[mul(x, y)] for y in elems] for x in elems]
    return Group(tbl, name="Dic3")


def klein_four() -> Group:
    g = direct_product(cyclic(2), cyclic(2))
    return Group(g.table, name="V4")


_CATALOG_BUILDERS = {
    1: [("1", trivial_group)],
    2: [("C2", lambda: cyclic(2))],
    3: [("C3", lambda: cyclic(3))],
    4: [("C4", lambda: cyclic(4)), ("V4", klein_four)],
    5: [("C5", lambda: cyclic(5))],
    6: [("C6", lambda: cyclic(6)), ("S3", lambda: symmetric(3))],
    7: [("C7", lambda: cyclic(7))],
    8: [("C8", lambda: cyclic(8)),
        ("C4xC2", lambda: direct_product(cyclic(4), cyclic(2))),
        ("C2xC2xC2", lambda: direct_product(klein_four(), cyclic(2))),
        ("D4", lambda: dihedral(4)),
        ("Q8", quaternion8)],
    9: [("C9", lambda: cyclic(9)),
        ("C3xC3", lambda: direct_product(cyclic(3), cyclic(3)))],
    10: [("C10", lambda: cyclic(10)), ("D5", lambda: dihedral(5))],
    11: [("C11", lambda: cyclic(11))],
    12: [("C12", lambda: cyclic(12)),
         ("C6xC2", lambda: direct_product(cyclic(6), cyclic(2))),
         ("D6", lambda: dihedral(6)),
         ("A4", alternating4),
         ("Dic3", dicyclic3)],
    13: [("C13", lambda: cyclic(13))],
    14: [("C14", lambda: cyclic(14)), ("D7", lambda: dihedral(7))],
    15: [("C15", lambda: cyclic(15))],
}

_catalog_cache = {}


def groups_of_order(n: int):
    """All iso classes of groups of order n (supported for n <= 15)."""
    if n not in _CATALOG_BUILDERS:
        raise NotImplementedError("no group catalog for order %d (max 15)" % n)
    if n not in _catalog_cache:
        out = []
        for name, build in _CATALOG_BUILDERS[n]:
            g = build()
            out.append(Group(g.table, name=name))
        _catalog_cache[n] = out
    return _catalog_cache[n]


def groups_up_to_order(n: int):
    out = []
    for k in range(1, n + 1):
        out.extend(groups_of_order(k))
    return out


def group_by_name(name: str) -> Group:
    for k in _CATALOG_BUILDERS:
        for nm, build in _CATALOG_BUILDERS[k]:
            if nm == name:
                return groups_of_order(k)[[x for x, _ in _CATALOG_BUILDERS[k]].index(nm)]
    raise KeyError("unknown group name %r" % name)
