"""Finite groupoids with explicit composition tables.

Everything here is small enough to check by exhaustion: groupoid axioms
are verified on construction, functors are verified on construction, and
the five classification flags at the two bottom truncation levels are
computed straight from their definitions.  Level 0 collapses each fiber
to its set of components; level -1 collapses it to inhabitedness.

Composition is written in diagram order throughout: comp[(g, h)] is "g
then h", matching the word convention used for graphs.
"""

import random as _random

from dataclasses import dataclass
from itertools import product as iproduct

from .graphs import _sort_key
from .verdicts import Flag, LevelVerdicts

__all__ = [
    "FinGroupoidError", "FinGroupoid", "FinFunctor", "HomotopyFiberG",
    "empty_groupoid", "discrete_groupoid", "codiscrete_groupoid",
    "connected_groupoid", "group_groupoid", "group_hom_functor",
    "disjoint_union_groupoid",
    "identity_fin_functor", "object_inclusion", "full_subgroupoid",
    "trunc0", "trunc_prop", "hfiber", "classify_trunc",
    "factor_connected_modal", "factor_equiv_etale", "connecting_functor",
    "functor_is_equivalence", "essentially_surjective",
    "automorphism_surjective",
    "homotopy_pullback", "product_groupoid",
    "compare_modalities", "nine_way", "instability_witness",
    "random_groupoid", "random_functor", "random_functor_into",
    "GROUP_NAMES",
]


class FinGroupoidError(ValueError):
    pass


# ---------------------------------------------------------------------------
# small groups, used as vertex groups by the builders and generators

@dataclass(frozen=True)
class _Group:
    name: str
    elements: tuple
    mul: dict
    unit: object
    gens: tuple
    words: dict     # element -> tuple of generator indices reaching it


def _make_group(name, elements, mul, unit, gens):
    words = {unit: ()}
    frontier = [unit]
    while frontier:
        nxt = []
        for a in frontier:
            for i, g in enumerate(gens):
                b = mul[(a, g)]
                if b not in words:
                    words[b] = words[a] + (i,)
                    nxt.append(b)
        frontier = nxt
    if len(words) != len(elements):
        raise FinGroupoidError("generators do not generate %s" % name)
    return _Group(name, tuple(elements), mul, unit, tuple(gens), words)


def _cyclic(n):
    mul = {(a, b): (a + b) % n for a in range(n) for b in range(n)}
    gens = (1,) if n > 1 else ()
    return _make_group("c%d" % n, tuple(range(n)), mul, 0, gens)


def _klein():
    els = [(0, 0), (0, 1), (1, 0), (1, 1)]
    mul = {(a, b): ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)
           for a in els for b in els}
    return _make_group("v4", tuple(els), mul, (0, 0), ((1, 0), (0, 1)))


def _sym3():
    els = [p for p in iproduct(range(3), repeat=3) if len(set(p)) == 3]
    mul = {(a, b): tuple(b[a[i]] for i in range(3)) for a in els for b in els}
    return _make_group("s3", tuple(els), mul, (0, 1, 2),
                       ((1, 2, 0), (1, 0, 2)))


_GROUPS = {g.name: g for g in
           (_cyclic(1), _cyclic(2), _cyclic(3), _cyclic(4), _klein(), _sym3())}
GROUP_NAMES = tuple(sorted(_GROUPS))


def _homs_into(group, elements, mul, unit):
    """All homomorphisms from a catalog group into the abstract group
    (elements, mul, unit), found by generator images and verified on
    every product."""
    out = []
    for images in iproduct(elements, repeat=len(group.gens)):
        phi = {}
        ok = True
        for el in group.elements:
            v = unit
            for i in group.words[el]:
                v = mul[(v, images[i])]
            phi[el] = v
        for a in group.elements:
            for b in group.elements:
                if mul[(phi[a], phi[b])] != phi[group.mul[(a, b)]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(phi)
    return out


# ---------------------------------------------------------------------------
# the two core types

@dataclass(frozen=True)
class FinGroupoid:
    """Groupoid as raw tables.

    src/dst assign endpoints to morphism ids, ident picks the identity at
    each object, comp is defined on exactly the composable pairs (in
    diagram order).  Construction checks every law and caches inverses
    and a hom-set index.
    """

    objects: tuple
    morphisms: tuple
    src: dict
    dst: dict
    comp: dict
    ident: dict

    def __post_init__(self):
        objs = tuple(sorted(set(self.objects), key=_sort_key))
        mors = tuple(sorted(set(self.morphisms), key=_sort_key))
        object.__setattr__(self, "objects", objs)
        object.__setattr__(self, "morphisms", mors)
        oset, mset = set(objs), set(mors)
        for m in mors:
            if self.src.get(m) not in oset or self.dst.get(m) not in oset:
                raise FinGroupoidError("morphism %r has bad endpoints" % (m,))
        for o in objs:
            i = self.ident.get(o)
            if i not in mset or self.src[i] != o or self.dst[i] != o:
                raise FinGroupoidError("object %r has no identity" % (o,))
        into, outof = {}, {}
        for m in mors:
            outof[self.src[m]] = outof.get(self.src[m], 0) + 1
            into[self.dst[m]] = into.get(self.dst[m], 0) + 1
        expected = sum(into.get(o, 0) * outof.get(o, 0) for o in objs)
        if len(self.comp) != expected:
            raise FinGroupoidError(
                "composition table has %d entries, expected %d"
                % (len(self.comp), expected))
        for (g, h), k in self.comp.items():
            if g not in mset or h not in mset \
                    or self.dst[g] != self.src[h]:
                raise FinGroupoidError("(%r, %r) is not composable" % (g, h))
            if k not in mset or self.src[k] != self.src[g] \
                    or self.dst[k] != self.dst[h]:
                raise FinGroupoidError("composite of (%r, %r) ill-typed"
                                       % (g, h))
        for m in mors:
            if self.comp[(self.ident[self.src[m]], m)] != m \
                    or self.comp[(m, self.ident[self.dst[m]])] != m:
                raise FinGroupoidError("unit law fails at %r" % (m,))
        if len(mors) <= 2048:
            # integer-indexed rows keep the triple scan out of dict lookups;
            # the quadratic table stays small at this size
            midx = {m: i for i, m in enumerate(mors)}
            table = [[-1] * len(mors) for _ in mors]
            for (g, h), k in self.comp.items():
                table[midx[g]][midx[h]] = midx[k]
            by_src = {}
            for i, m in enumerate(mors):
                by_src.setdefault(self.src[m], []).append(i)
            for (g, h), gh in self.comp.items():
                row_gh = table[midx[gh]]
                row_g = table[midx[g]]
                row_h = table[midx[h]]
                for ki in by_src.get(self.dst[h], ()):
                    if row_gh[ki] != row_g[row_h[ki]]:
                        raise FinGroupoidError(
                            "associativity fails at (%r, %r, %r)"
                            % (g, h, mors[ki]))
        else:
            for (g, h), gh in self.comp.items():
                for k in mors:
                    if self.src[k] == self.dst[h]:
                        if self.comp[(gh, k)] != self.comp[(g, self.comp[(h, k)])]:
                            raise FinGroupoidError(
                                "associativity fails at (%r, %r, %r)"
                                % (g, h, k))
        inv = {}
        hom = {}
        for m in mors:
            hom.setdefault((self.src[m], self.dst[m]), []).append(m)
        for m in mors:
            for w in hom.get((self.dst[m], self.src[m]), ()):
                if self.comp[(m, w)] == self.ident[self.src[m]] \
                        and self.comp[(w, m)] == self.ident[self.dst[m]]:
                    inv[m] = w
                    break
            if m not in inv:
                raise FinGroupoidError("morphism %r has no inverse" % (m,))
        object.__setattr__(self, "inv", inv)
        object.__setattr__(self, "_hom", hom)

    def hom(self, a, b):
        return tuple(self._hom.get((a, b), ()))

    def aut(self, x):
        return self.hom(x, x)

    def component_map(self):
        """dict object -> least object in its isomorphism class."""
        rep = {o: o for o in self.objects}

        def find(o):
            while rep[o] != o:
                rep[o] = rep[rep[o]]
                o = rep[o]
            return o

        for m in self.morphisms:
            a, b = find(self.src[m]), find(self.dst[m])
            if a != b:
                lo, hi = sorted((a, b), key=_sort_key)
                rep[hi] = lo
        return {o: find(o) for o in self.objects}

    def __repr__(self):
        return "FinGroupoid(%d objects, %d morphisms)" % (
            len(self.objects), len(self.morphisms))


@dataclass(frozen=True)
class FinFunctor:
    source: FinGroupoid
    target: FinGroupoid
    obj_map: dict
    mor_map: dict

    def __post_init__(self):
        S, T = self.source, self.target
        for x in S.objects:
            if self.obj_map.get(x) not in set(T.objects):
                raise FinGroupoidError("object %r has no image" % (x,))
        for m in S.morphisms:
            w = self.mor_map.get(m)
            if w not in set(T.morphisms):
                raise FinGroupoidError("morphism %r has no image" % (m,))
            if T.src[w] != self.obj_map[S.src[m]] \
                    or T.dst[w] != self.obj_map[S.dst[m]]:
                raise FinGroupoidError("image of %r ill-typed" % (m,))
        for o in S.objects:
            if self.mor_map[S.ident[o]] != T.ident[self.obj_map[o]]:
                raise FinGroupoidError("identity at %r not preserved" % (o,))
        for (g, h), k in S.comp.items():
            if T.comp[(self.mor_map[g], self.mor_map[h])] != self.mor_map[k]:
                raise FinGroupoidError(
                    "composition not preserved at (%r, %r)" % (g, h))

    def compose(self, other):
        """self then other."""
        assert other.source == self.target
        return FinFunctor(
            self.source, other.target,
            {x: other.obj_map[self.obj_map[x]] for x in self.source.objects},
            {m: other.mor_map[self.mor_map[m]]
             for m in self.source.morphisms})

    def __repr__(self):
        return "FinFunctor(%r -> %r)" % (self.source, self.target)


# ---------------------------------------------------------------------------
# builders

def empty_groupoid():
    return FinGroupoid((), (), {}, {}, {}, {})


def discrete_groupoid(labels):
    labels = tuple(labels)
    ident = {o: ("id", o) for o in labels}
    mors = tuple(ident.values())
    return FinGroupoid(
        labels, mors,
        {m: m[1] for m in mors}, {m: m[1] for m in mors},
        {(m, m): m for m in mors}, ident)


def connected_groupoid(labels, group_name):
    """Connected groupoid on the given objects with the named vertex
    group: morphisms are (a, g, b) triples composing through the group."""
    G = _GROUPS[group_name]
    labels = tuple(labels)
    mors = tuple((a, g, b) for a in labels for g in G.elements
                 for b in labels)
    comp = {}
    for a, g, b in mors:
        for c in labels:
            for h in G.elements:
                comp[((a, g, b), (b, h, c))] = (a, G.mul[(g, h)], c)
    return FinGroupoid(
        labels, mors,
        {m: m[0] for m in mors}, {m: m[2] for m in mors},
        comp, {o: (o, G.unit, o) for o in labels})


def codiscrete_groupoid(labels):
    """Exactly one morphism between any two objects (contractible)."""
    return connected_groupoid(labels, "c1")


def group_groupoid(group_name, label="o"):
    """One object whose automorphisms are the named group."""
    return connected_groupoid((label,), group_name)


def group_hom_functor(src_name, dst_name, images, label="o"):
    """Functor of one-object groupoids induced by the homomorphism that
    sends the generators of the source group to the given images."""
    A, B = group_groupoid(src_name, label), group_groupoid(dst_name, label)
    G, H = _GROUPS[src_name], _GROUPS[dst_name]
    phi = {}
    for el in G.elements:
        v = H.unit
        for i in G.words[el]:
            v = H.mul[(v, images[i])]
        phi[el] = v
    return FinFunctor(A, B, {label: label},
                      {(label, g, label): (label, phi[g], label)
                       for g in G.elements})


def identity_fin_functor(g):
    return FinFunctor(g, g, {o: o for o in g.objects},
                      {m: m for m in g.morphisms})


def object_inclusion(g, y):
    """The point groupoid landing on the object y."""
    pt = discrete_groupoid(("pt",))
    return FinFunctor(pt, g, {"pt": y}, {("id", "pt"): g.ident[y]})


def disjoint_union_groupoid(a, b):
    """Sum of two groupoids, objects and morphisms tagged 0/1."""
    objs = tuple((0, o) for o in a.objects) + tuple((1, o) for o in b.objects)
    mors = tuple((0, m) for m in a.morphisms) \
        + tuple((1, m) for m in b.morphisms)
    halves = (a, b)
    src = {(i, m): (i, halves[i].src[m]) for (i, m) in mors}
    dst = {(i, m): (i, halves[i].dst[m]) for (i, m) in mors}
    comp = {}
    for i, g in enumerate(halves):
        for (p, q), k in g.comp.items():
            comp[((i, p), (i, q))] = (i, k)
    ident = {(i, o): (i, halves[i].ident[o]) for (i, o) in objs}
    return FinGroupoid(objs, mors, src, dst, comp, ident)


def full_subgroupoid(g, objs):
    objs = tuple(o for o in g.objects if o in set(objs))
    oset = set(objs)
    mors = tuple(m for m in g.morphisms
                 if g.src[m] in oset and g.dst[m] in oset)
    mset = set(mors)
    comp = {p: k for p, k in g.comp.items() if p[0] in mset and p[1] in mset}
    return FinGroupoid(objs, mors,
                       {m: g.src[m] for m in mors},
                       {m: g.dst[m] for m in mors},
                       comp, {o: g.ident[o] for o in objs})


# ---------------------------------------------------------------------------
# truncations

def trunc0(g):
    """Discrete groupoid on isomorphism classes, with its unit functor."""
    cm = g.component_map()
    classes = tuple(sorted(set(cm.values()), key=_sort_key))
    t = discrete_groupoid(classes)
    unit = FinFunctor(g, t, {o: cm[o] for o in g.objects},
                      {m: t.ident[cm[g.src[m]]] for m in g.morphisms})
    return t, unit


def trunc_prop(g):
    """Point if inhabited, empty otherwise, with its unit functor."""
    if not g.objects:
        t = empty_groupoid()
        return t, FinFunctor(g, t, {}, {})
    t = discrete_groupoid(("pt",))
    unit = FinFunctor(g, t, {o: "pt" for o in g.objects},
                      {m: t.ident["pt"] for m in g.morphisms})
    return t, unit


# ---------------------------------------------------------------------------
# fibers

@dataclass(frozen=True)
class HomotopyFiberG:
    """Fiber of a functor over a target object, as a genuine groupoid.

    Objects are pairs (x, m) of a source object and a morphism F(x) -> y;
    a morphism (x, m) -> (x', m') is a source morphism g with
    F(g);m' = m.
    """

    functor: FinFunctor
    base: object
    groupoid: FinGroupoid


def hfiber(F, y):
    S, T = F.source, F.target
    if y not in set(T.objects):
        raise FinGroupoidError("fiber base %r is not a target object" % (y,))
    objs = tuple((x, m) for x in S.objects for m in T.hom(F.obj_map[x], y))
    mors = []
    for g in S.morphisms:
        x, x2 = S.src[g], S.dst[g]
        for m2 in T.hom(F.obj_map[x2], y):
            m = T.comp[(F.mor_map[g], m2)]
            mors.append(((x, m), (x2, m2), g))
    comp = {}
    by_src = {}
    for t in mors:
        by_src.setdefault(t[0], []).append(t)
    for a, b, g in mors:
        for b2, c, h in by_src.get(b, ()):
            comp[((a, b, g), (b2, c, h))] = (a, c, S.comp[(g, h)])
    gpd = FinGroupoid(
        objs, tuple(mors),
        {t: t[0] for t in mors}, {t: t[1] for t in mors},
        comp, {(x, m): ((x, m), (x, m), S.ident[x]) for (x, m) in objs})
    return HomotopyFiberG(F, y, gpd)


# ---------------------------------------------------------------------------
# lightweight fiber analysis (shared by the flag routes; no tables built)

class _UF:
    def __init__(self, items):
        self.p = {x: x for x in items}

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=_sort_key)
            self.p[hi] = lo


def _fiber_objects(F, y):
    return [(x, m) for x in F.source.objects
            for m in F.target.hom(F.obj_map[x], y)]


def _fiber_component_map(F, y):
    """dict fiber object -> canonical representative."""
    S, T = F.source, F.target
    objs = _fiber_objects(F, y)
    uf = _UF(objs)
    for g in S.morphisms:
        x, x2 = S.src[g], S.dst[g]
        for m2 in T.hom(F.obj_map[x2], y):
            uf.union((x, T.comp[(F.mor_map[g], m2)]), (x2, m2))
    return {o: uf.find(o) for o in objs}


def _fiber_classes(F, y):
    return sorted(set(_fiber_component_map(F, y).values()), key=_sort_key)


def _transport(F, h, rep, target_map):
    """Move a fiber class over src(h) to one over dst(h) by composing
    with h; target_map is the component map of the target fiber."""
    x, m = rep
    return target_map[(x, F.target.comp[(m, h)])]


def _fiber_aut_trivial(F, y):
    """Whether every fiber object over y has only the identity
    automorphism."""
    S, T = F.source, F.target
    for x in S.objects:
        homs = T.hom(F.obj_map[x], y)
        if not homs:
            continue
        for g in S.aut(x):
            if g != S.ident[x] and F.mor_map[g] == T.ident[F.obj_map[x]]:
                return False
    return True


def _classes_over(F):
    """dict target component rep -> sorted source component reps over it."""
    xcm = F.source.component_map()
    ycm = F.target.component_map()
    over = {r: [] for r in set(ycm.values())}
    for r in sorted(set(xcm.values()), key=_sort_key):
        over[ycm[F.obj_map[r]]].append(r)
    return xcm, ycm, over


# ---------------------------------------------------------------------------
# the five flags at the two levels

def _flags_level0(F):
    T = F.target
    xcm, ycm, over = _classes_over(F)

    modal = all(_fiber_aut_trivial(F, y) for y in T.objects)

    connected = True
    equivalence = all(len(v) == 1 for v in over.values())
    fibration = True
    etale = True
    for y in T.objects:
        fcm = _fiber_component_map(F, y)
        classes = sorted(set(fcm.values()), key=_sort_key)
        if len(classes) != 1:
            connected = False
        want = over[ycm[y]]
        image = sorted({xcm[x] for (x, _) in classes}, key=_sort_key)
        if len({xcm[x] for (x, _) in classes}) != len(classes) \
                or image != want:
            fibration = False
        # etale, by the unit-square route: the fiber must be equivalent,
        # through its own data, to the discrete set of classes downstairs
        if not _fiber_aut_trivial(F, y):
            etale = False
        else:
            delta = sorted({xcm[x] for (x, _) in classes}, key=_sort_key)
            if len(classes) != len(want) or delta != want:
                etale = False
    return LevelVerdicts(
        modal=Flag.of(modal), connected=Flag.of(connected),
        etale=Flag.of(etale), equivalence=Flag.of(equivalence),
        fibration=Flag.of(fibration))


def _flags_level_prop(F):
    T = F.target
    x_inhabited = bool(F.source.objects)

    def fiber_stats(y):
        objs = _fiber_objects(F, y)
        if not objs:
            return 0, True
        fcm = _fiber_component_map(F, y)
        return len(set(fcm.values())), _fiber_aut_trivial(F, y)

    modal = True
    connected = True
    fibration = True
    etale = True
    for y in T.objects:
        ncomp, trivial = fiber_stats(y)
        inhabited = ncomp > 0
        contractible = ncomp == 1 and trivial
        if inhabited and not contractible:
            modal = False
        if not inhabited:
            connected = False
        if inhabited != x_inhabited:
            fibration = False
        # delta route: the fiber must match the source's inhabitedness
        # as a proposition, so it is empty with it or contractible
        if (inhabited != x_inhabited) or (inhabited and not contractible):
            etale = False
    equivalence = x_inhabited == bool(T.objects)
    return LevelVerdicts(
        modal=Flag.of(modal), connected=Flag.of(connected),
        etale=Flag.of(etale), equivalence=Flag.of(equivalence),
        fibration=Flag.of(fibration))


def classify_trunc(F, level):
    """Five flags for one truncation level (0 = components, -1 =
    inhabitedness), each computed from its defining condition."""
    if level == 0:
        return _flags_level0(F)
    if level == -1:
        return _flags_level_prop(F)
    raise FinGroupoidError("level must be -1 or 0, got %r" % (level,))


def essentially_surjective(F):
    return all(_fiber_objects(F, y) for y in F.target.objects)


def automorphism_surjective(F):
    """Whether each automorphism group surjects onto its image object's."""
    S, T = F.source, F.target
    for x in S.objects:
        image = {F.mor_map[g] for g in S.aut(x)}
        if image != set(T.aut(F.obj_map[x])):
            return False
    return True


def functor_is_equivalence(F):
    """Essentially surjective and bijective on every hom-set."""
    S, T = F.source, F.target
    if not essentially_surjective(F):
        return False
    for a in S.objects:
        for b in S.objects:
            dom = S.hom(a, b)
            images = {F.mor_map[m] for m in dom}
            if len(images) != len(dom) \
                    or images != set(T.hom(F.obj_map[a], F.obj_map[b])):
                return False
    return True


# ---------------------------------------------------------------------------
# the two factorizations

def _class_transports(F):
    """Per target object: fiber component map; plus helpers bound once."""
    return {y: _fiber_component_map(F, y) for y in F.target.objects}


def factor_connected_modal(F, level):
    """Factor F through the collapsed fibers: left crushes each fiber to
    its truncation, right projects.  Composite is strictly F."""
    if level == -1:
        return _factor_cm_prop(F)
    if level != 0:
        raise FinGroupoidError("level must be -1 or 0, got %r" % (level,))
    S, T = F.source, F.target
    fcms = _class_transports(F)
    classes = {y: sorted(set(fcms[y].values()), key=_sort_key)
               for y in T.objects}
    objs = tuple((y, c) for y in T.objects for c in classes[y])
    mors = []
    for h in T.morphisms:
        y, y2 = T.src[h], T.dst[h]
        for c in classes[y]:
            mors.append(((y, c), (y2, _transport(F, h, c, fcms[y2])), h))
    comp = {}
    by_src = {}
    for t in mors:
        by_src.setdefault(t[0], []).append(t)
    for a, b, h in mors:
        for b2, c, h2 in by_src.get(b, ()):
            comp[((a, b, h), (b2, c, h2))] = (a, c, T.comp[(h, h2)])
    mid = FinGroupoid(
        objs, tuple(mors),
        {t: t[0] for t in mors}, {t: t[1] for t in mors}, comp,
        {(y, c): ((y, c), (y, c), T.ident[y]) for (y, c) in objs})

    def left_obj(x):
        y = F.obj_map[x]
        return (y, fcms[y][(x, T.ident[y])])

    left = FinFunctor(
        S, mid, {x: left_obj(x) for x in S.objects},
        {g: (left_obj(S.src[g]), left_obj(S.dst[g]), F.mor_map[g])
         for g in S.morphisms})
    right = FinFunctor(
        mid, T, {(y, c): y for (y, c) in objs},
        {t: t[2] for t in mors})
    _check_factorization(F, left, right,
                         ("connected", "modal"), level)
    return mid, left, right


def _factor_cm_prop(F):
    S, T = F.source, F.target
    hit = [y for y in T.objects if _fiber_objects(F, y)]
    mid = full_subgroupoid(T, hit)
    left = FinFunctor(S, mid, dict(F.obj_map), dict(F.mor_map))
    right = FinFunctor(mid, T, {o: o for o in mid.objects},
                       {m: m for m in mid.morphisms})
    _check_factorization(F, left, right, ("connected", "modal"), -1)
    return mid, left, right


def factor_equiv_etale(F, level):
    """Factor F through the classes of its source: left is the unit-like
    comparison, right the projection.  Composite is strictly F."""
    if level == -1:
        return _factor_ee_prop(F)
    if level != 0:
        raise FinGroupoidError("level must be -1 or 0, got %r" % (level,))
    S, T = F.source, F.target
    xcm, ycm, over = _classes_over(F)
    objs = tuple((y, d) for y in T.objects for d in over[ycm[y]])
    mors = tuple(((T.src[h], d), (T.dst[h], d), h)
                 for h in T.morphisms for d in over[ycm[T.src[h]]])
    comp = {}
    by_src = {}
    for t in mors:
        by_src.setdefault(t[0], []).append(t)
    for a, b, h in mors:
        for b2, c, h2 in by_src.get(b, ()):
            comp[((a, b, h), (b2, c, h2))] = (a, c, T.comp[(h, h2)])
    mid = FinGroupoid(
        objs, mors,
        {t: t[0] for t in mors}, {t: t[1] for t in mors}, comp,
        {(y, d): ((y, d), (y, d), T.ident[y]) for (y, d) in objs})
    left = FinFunctor(
        S, mid, {x: (F.obj_map[x], xcm[x]) for x in S.objects},
        {g: ((F.obj_map[S.src[g]], xcm[S.src[g]]),
             (F.obj_map[S.dst[g]], xcm[S.dst[g]]), F.mor_map[g])
         for g in S.morphisms})
    right = FinFunctor(mid, T, {(y, d): y for (y, d) in objs},
                       {t: t[2] for t in mors})
    _check_factorization(F, left, right, ("equivalence", "etale"), level)
    return mid, left, right


def _factor_ee_prop(F):
    S, T = F.source, F.target
    if S.objects:
        mid = T
        left = FinFunctor(S, mid, dict(F.obj_map), dict(F.mor_map))
        right = identity_fin_functor(T)
    else:
        mid = empty_groupoid()
        left = FinFunctor(S, mid, {}, {})
        right = FinFunctor(mid, T, {}, {})
    _check_factorization(F, left, right, ("equivalence", "etale"), -1)
    return mid, left, right


def _check_factorization(F, left, right, kinds, level):
    both = left.compose(right)
    if both.obj_map != F.obj_map or both.mor_map != F.mor_map:
        raise FinGroupoidError("factorization does not recompose")
    lv = classify_trunc(left, level)
    rv = classify_trunc(right, level)
    if not getattr(lv, kinds[0]).is_true:
        raise FinGroupoidError("left factor is not %s" % kinds[0])
    if not getattr(rv, kinds[1]).is_true:
        raise FinGroupoidError("right factor is not %s" % kinds[1])


def connecting_functor(F, level=0):
    """The comparison from the collapsed-fiber middle to the class
    middle; an equivalence exactly on fibrations."""
    mid_cm, _, _ = factor_connected_modal(F, level)
    mid_ee, _, _ = factor_equiv_etale(F, level)
    if level == -1:
        return FinFunctor(mid_cm, mid_ee,
                          {o: o for o in mid_cm.objects},
                          {m: m for m in mid_cm.morphisms})
    xcm = F.source.component_map()
    omap = {(y, c): (y, xcm[c[0]]) for (y, c) in mid_cm.objects}
    mmap = {(a, b, h): (omap[a], omap[b], h) for (a, b, h) in mid_cm.morphisms}
    return FinFunctor(mid_cm, mid_ee, omap, mmap)


# ---------------------------------------------------------------------------
# pullbacks and products

def homotopy_pullback(F, G):
    """Iso-comma groupoid of F : X -> Z and G : Y -> Z.

    Objects are (x, y, m : F x -> G y); morphisms are pairs of source
    morphisms whose images commute with the connecting morphisms.
    Returns (P, proj1, proj2).
    """
    assert F.target == G.target
    X, Y, Z = F.source, G.source, F.target
    objs = tuple((x, y, m) for x in X.objects for y in Y.objects
                 for m in Z.hom(F.obj_map[x], G.obj_map[y]))
    mors = []
    for g in X.morphisms:
        for h in Y.morphisms:
            x, x2 = X.src[g], X.dst[g]
            y, y2 = Y.src[h], Y.dst[h]
            for m2 in Z.hom(F.obj_map[x2], G.obj_map[y2]):
                m = Z.comp[(Z.comp[(F.mor_map[g], m2)], Z.inv[G.mor_map[h]])]
                mors.append(((x, y, m), (x2, y2, m2), (g, h)))
    comp = {}
    by_src = {}
    for t in mors:
        by_src.setdefault(t[0], []).append(t)
    for a, b, gh in mors:
        for b2, c, gh2 in by_src.get(b, ()):
            comp[((a, b, gh), (b2, c, gh2))] = (
                a, c, (X.comp[(gh[0], gh2[0])], Y.comp[(gh[1], gh2[1])]))
    P = FinGroupoid(
        objs, tuple(mors),
        {t: t[0] for t in mors}, {t: t[1] for t in mors}, comp,
        {(x, y, m): ((x, y, m), (x, y, m), (X.ident[x], Y.ident[y]))
         for (x, y, m) in objs})
    proj1 = FinFunctor(P, X, {o: o[0] for o in P.objects},
                       {t: t[2][0] for t in P.morphisms})
    proj2 = FinFunctor(P, Y, {o: o[1] for o in P.objects},
                       {t: t[2][1] for t in P.morphisms})
    return P, proj1, proj2


def product_groupoid(A, B):
    """Product with componentwise composition; returns (P, fst, snd)."""
    objs = tuple((a, b) for a in A.objects for b in B.objects)
    mors = tuple(((A.src[g], B.src[h]), (A.dst[g], B.dst[h]), (g, h))
                 for g in A.morphisms for h in B.morphisms)
    comp = {}
    by_src = {}
    for t in mors:
        by_src.setdefault(t[0], []).append(t)
    for a, b, gh in mors:
        for b2, c, gh2 in by_src.get(b, ()):
            comp[((a, b, gh), (b2, c, gh2))] = (
                a, c, (A.comp[(gh[0], gh2[0])], B.comp[(gh[1], gh2[1])]))
    P = FinGroupoid(
        objs, mors,
        {t: t[0] for t in mors}, {t: t[1] for t in mors}, comp,
        {(a, b): ((a, b), (a, b), (A.ident[a], B.ident[b]))
         for (a, b) in objs})
    fst = FinFunctor(P, A, {o: o[0] for o in objs},
                     {t: t[2][0] for t in mors})
    snd = FinFunctor(P, B, {o: o[1] for o in objs},
                     {t: t[2][1] for t in mors})
    return P, fst, snd


# ---------------------------------------------------------------------------
# comparing the two levels

def compare_modalities(F):
    """The five transfer implications between the inhabitedness level and
    the component level, each judged on this one functor."""
    lo = classify_trunc(F, -1)
    hi = classify_trunc(F, 0)
    t0, _ = trunc0(F.source)
    t0y, _ = trunc0(F.target)
    cm = F.source.component_map()
    shadow = FinFunctor(
        t0, t0y, {c: F.target.component_map()[F.obj_map[c]]
                  for c in t0.objects},
        {m: t0y.ident[F.target.component_map()[F.obj_map[m[1]]]]
         for m in t0.morphisms})
    shadow_lo = classify_trunc(shadow, -1)

    def imp(premise, conclusion):
        return {"premise": premise, "conclusion": conclusion,
                "holds": (not premise) or conclusion}

    report = {
        "modal_ascends": imp(lo.modal.is_true, hi.modal.is_true),
        "etale_ascends": imp(lo.etale.is_true, hi.etale.is_true),
        "equivalence_descends": imp(hi.equivalence.is_true,
                                    lo.equivalence.is_true),
        "connected_descends": imp(hi.connected.is_true, lo.connected.is_true),
        "fibration_transfers": imp(
            hi.fibration.is_true and shadow_lo.fibration.is_true,
            lo.fibration.is_true),
    }
    report["all_hold"] = all(v["holds"] for v in report.values())
    return report


# ---------------------------------------------------------------------------
# the agreement suite at level 0

def nine_way(F, rng=None, sampled_bases=3):
    """All the equivalent readings of the level-0 fibration condition,
    each computed by its own route, plus the surjective-case criterion
    and the one-way connecting-map check.

    Returns a dict of booleans; "agree" ands together the routes that
    must coincide, "connecting_ok" is the one-way implication.
    """
    T = F.target
    xcm, ycm, over = _classes_over(F)
    fcms = {y: _fiber_component_map(F, y) for y in T.objects}
    classes = {y: sorted(set(fcms[y].values()), key=_sort_key)
               for y in T.objects}
    gamma = {y: {c: xcm[c[0]] for c in classes[y]} for y in T.objects}

    # (a) the comparison from collapsed fibers to classes is bijective
    a = all(
        len(set(gamma[y].values())) == len(classes[y])
        and set(gamma[y].values()) == set(over[ycm[y]])
        for y in T.objects)

    # (b) collapsing the fiber gives exactly the classes downstairs
    b = all(len(classes[y]) == len(over[ycm[y]]) for y in T.objects)

    # (c) pullback preservation: every point base, then sampled bases
    c = all(_pullback_preserved(F, object_inclusion(T, y))
            for y in T.objects)
    if c and sampled_bases:
        rng = rng or _random.Random(0)
        for _ in range(sampled_bases):
            G = random_functor_into(rng, T, max_objects=2)
            if not _pullback_preserved(F, G):
                c = False
                break

    # (d) the two factorizations agree, i.e. the connecting functor is an
    #     equivalence: surjective on classes, and any two fiber classes
    #     with the same shadow are carried onto each other by every h
    d = all(set(gamma[y].values()) == set(over[ycm[y]]) for y in T.objects)
    if d:
        for h in T.morphisms:
            y, y2 = T.src[h], T.dst[h]
            for c1 in classes[y]:
                for c2 in classes[y2]:
                    if gamma[y][c1] == gamma[y2][c2] \
                            and _transport(F, h, c1, fcms[y2]) != c2:
                        d = False

    # (e) the modal factor is etale: the collapsed-fiber family descends
    #     object by object, checked through the middle groupoid's fibers
    e = _modal_factor_etale(F, fcms, classes, ycm)

    # (f) the equivalence factor is connected: each class downstairs is
    #     hit by exactly one collapsed fiber class
    f = all(
        sum(1 for c in classes[y] if gamma[y][c] == dd) == 1
        for y in T.objects for dd in over[ycm[y]])

    # (g) fibers are locally constant: loops act trivially on them
    g = all(
        _transport(F, h, c, fcms[y]) == c
        for y in T.objects for h in T.aut(y) for c in classes[y])

    # (h) the connecting map between the middles is itself a fibration
    h_flag = _connecting_map_fibration(F, fcms, classes, gamma)

    surjective = all(classes[y] for y in T.objects)
    i = automorphism_surjective(F) if surjective else None

    core = [a, b, c, d, e, f, g]
    if surjective:
        core.append(i)
    return {
        "gamma_equivalence": a,
        "fibers_preserved": b,
        "pullbacks_preserved": c,
        "factorizations_agree": d,
        "modal_factor_etale": e,
        "equivalence_factor_connected": f,
        "locally_constant_fibers": g,
        "connecting_map_fibration": h_flag,
        "surjective": surjective,
        "loop_surjectivity": i,
        "agree": all(x == core[0] for x in core),
        "connecting_ok": (not d) or h_flag,
    }


def _pullback_preserved(F, G):
    """Components of the iso-comma square against the set pullback."""
    X, Y, Z = F.source, G.source, F.target
    xcm, zcm, _ = _classes_over(F)
    ycm = Y.component_map()
    objs = [(x, y, m) for x in X.objects for y in Y.objects
            for m in Z.hom(F.obj_map[x], G.obj_map[y])]
    uf = _UF(objs)
    for g in X.morphisms:
        for h in Y.morphisms:
            x, x2 = X.src[g], X.dst[g]
            y, y2 = Y.src[h], Y.dst[h]
            for m2 in Z.hom(F.obj_map[x2], G.obj_map[y2]):
                m = Z.comp[(Z.comp[(F.mor_map[g], m2)],
                            Z.inv[G.mor_map[h]])]
                uf.union((x, y, m), (x2, y2, m2))
    reps = {uf.find(o) for o in objs}
    image = {(xcm[x], ycm[y]) for (x, y, m) in reps}
    want = {(cx, cy)
            for cx in set(xcm.values()) for cy in set(ycm.values())
            if zcm[F.obj_map[cx]] == zcm[G.obj_map[cy]]}
    return len(image) == len(reps) and image == want


def _modal_factor_etale(F, fcms, classes, ycm):
    T = F.target
    # component map of the middle groupoid (y, c), without building it
    objs = [(y, c) for y in T.objects for c in classes[y]]
    uf = _UF(objs)
    for h in T.morphisms:
        y, y2 = T.src[h], T.dst[h]
        for c in classes[y]:
            uf.union((y, c), (y2, _transport(F, h, c, fcms[y2])))
    mid_cm_of = {o: uf.find(o) for o in objs}
    mids_over = {}
    for o in objs:
        mids_over.setdefault(ycm[o[0]], set()).add(mid_cm_of[o])
    for y in T.objects:
        # fiber components of the projection over y are exactly the
        # transports of classes to y; delta sends each to its middle
        # component, and must land bijectively on those over [y]
        delta = {mid_cm_of[(y, c)] for c in classes[y]}
        want = mids_over.get(ycm[y], set())
        if len(delta) != len(classes[y]) or delta != want:
            return False
    return True


def _connecting_map_fibration(F, fcms, classes, gamma):
    T = F.target
    cm_objs = [(y, c) for y in T.objects for c in classes[y]]
    uf = _UF(cm_objs)
    for h in T.morphisms:
        y, y2 = T.src[h], T.dst[h]
        for c in classes[y]:
            uf.union((y, c), (y2, _transport(F, h, c, fcms[y2])))
    cm_of = {o: uf.find(o) for o in cm_objs}

    ee_objs = [(y, d) for y in T.objects for d in set(gamma[y].values())]
    uf2 = _UF(ee_objs)
    for h in T.morphisms:
        y, y2 = T.src[h], T.dst[h]
        for d in set(gamma[y].values()):
            if (y2, d) in uf2.p:
                uf2.union((y, d), (y2, d))
    ee_of = {o: uf2.find(o) for o in ee_objs}

    cm_over_ee = {}
    for (y, c) in cm_objs:
        cm_over_ee.setdefault(ee_of[(y, gamma[y][c])], set()).add(
            cm_of[(y, c)])

    for (y, d) in ee_objs:
        # fiber of the connecting map over (y, d): pairs ((y2, c2), h)
        # with h : y2 -> y and the class of c2 equal to d
        fiber = [(y2, c2, h) for y2 in T.objects for c2 in classes[y2]
                 if gamma[y2][c2] == d for h in T.hom(y2, y)]
        if not fiber and cm_over_ee.get(ee_of[(y, d)]):
            return False
        uf3 = _UF(fiber)
        for (y2, c2, h) in fiber:
            for k in T.morphisms:
                if T.src[k] != y2:
                    continue
                y3 = T.dst[k]
                c3 = _transport(F, k, c2, fcms[y3])
                h3 = T.comp[(T.inv[k], h)]
                uf3.union((y2, c2, h), (y3, c3, h3))
        reps = {uf3.find(o) for o in fiber}
        image = {cm_of[(y2, c2)] for (y2, c2, h) in reps}
        want = cm_over_ee.get(ee_of[(y, d)], set())
        if len(image) != len(reps) or image != want:
            return False
    return True


# ---------------------------------------------------------------------------
# the instability witness

def instability_witness():
    """A pullback square whose bottom leg is a level-0 equivalence while
    the induced top leg is not: both legs pick the object of the
    one-object two-morphism groupoid, and the comma square is the
    two-point discrete groupoid over the point."""
    B = group_groupoid("c2")
    leg = object_inclusion(B, "o")
    P, p1, p2 = homotopy_pullback(leg, leg)
    return {
        "corner": B, "bottom": leg, "right": leg,
        "pullback": P, "top": p1,
        "bottom_is_equivalence": classify_trunc(leg, 0).equivalence.is_true,
        "top_is_equivalence": classify_trunc(p1, 0).equivalence.is_true,
    }


# ---------------------------------------------------------------------------
# randomized corpus

def _random_blocks(rng, max_objects, max_morphisms):
    names = list(GROUP_NAMES)
    while True:
        blocks = []
        total_o = 0
        total_m = 0
        for _ in range(rng.randint(1, 3)):
            k = rng.randint(1, 3)
            gname = rng.choice(names)
            size = k * k * len(_GROUPS[gname].elements)
            if total_o + k > max_objects or total_m + size > max_morphisms:
                continue
            blocks.append((k, gname))
            total_o += k
            total_m += size
        if blocks:
            return blocks


def _assemble_blocks(blocks):
    objects = []
    morphisms = []
    src, dst, comp, ident = {}, {}, {}, {}
    base = 0
    for k, gname in blocks:
        G = _GROUPS[gname]
        labels = tuple(range(base, base + k))
        base += k
        objects.extend(labels)
        block_mors = [(a, g, b) for a in labels for g in G.elements
                      for b in labels]
        morphisms.extend(block_mors)
        for a, g, b in block_mors:
            src[(a, g, b)] = a
            dst[(a, g, b)] = b
            for c in labels:
                for h in G.elements:
                    comp[((a, g, b), (b, h, c))] = (a, G.mul[(g, h)], c)
        for o in labels:
            ident[o] = (o, G.unit, o)
    return FinGroupoid(tuple(objects), tuple(morphisms),
                       src, dst, comp, ident), blocks


def random_groupoid(rng, max_objects=6, max_morphisms=24):
    """Seeded random groupoid: a disjoint union of connected blocks."""
    g, _ = _assemble_blocks(_random_blocks(rng, max_objects, max_morphisms))
    return g


def _aut_group_of(T, y):
    els = T.aut(y)
    return els, {(a, b): T.comp[(a, b)] for a in els for b in els}, T.ident[y]


def random_functor_into(rng, target, max_objects=6, max_morphisms=24):
    """Random functor from a fresh random groupoid into the target.

    Per source block: pick a base image object, a homomorphism of the
    block group into its automorphisms, and a random transport to spread
    the block over the image's isomorphism class.
    """
    if not target.objects:
        return FinFunctor(empty_groupoid(), target, {}, {})
    source, blocks = _assemble_blocks(
        _random_blocks(rng, max_objects, max_morphisms))
    omap, mmap = {}, {}
    base = 0
    for k, gname in blocks:
        G = _GROUPS[gname]
        labels = tuple(range(base, base + k))
        base += k
        y = rng.choice(target.objects)
        els, mul, unit = _aut_group_of(target, y)
        phi = rng.choice(_homs_into(G, els, mul, unit))
        outgoing = [m for m in target.morphisms if target.src[m] == y]
        t = {o: rng.choice(outgoing) for o in labels}
        for o in labels:
            omap[o] = target.dst[t[o]]
        for a in labels:
            for g in G.elements:
                for b in labels:
                    w = target.comp[(target.inv[t[a]], phi[g])]
                    mmap[(a, g, b)] = target.comp[(w, t[b])]
    return FinFunctor(source, target, omap, mmap)


def random_functor(rng, max_objects=6, max_morphisms=24):
    """Random functor between two fresh random groupoids."""
    target = random_groupoid(rng, max_objects, max_morphisms)
    return random_functor_into(rng, target, max_objects, max_morphisms)
