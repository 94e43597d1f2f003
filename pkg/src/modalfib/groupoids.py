"""Fundamental groupoids of graphs, presented by spanning forests.

The shape of a graph is its fundamental groupoid: one component per
graph component, with vertex groups free on the edges left out of a
spanning forest.  A deterministic lowest-id-first BFS fixes the forest,
so every construction here is reproducible.

Morphisms u -> v are encoded as triples (u, v, word): the word lists the
cotree letters a representing path crosses, tree darts contributing
nothing.  That encoding is a bijection onto homotopy classes, words
compose by concatenation, and a loop's word is literally its image in
the vertex group of the component's base.

A functor induced by a graph map is stored as generator images (words in
the target's letters) together with one conjugator word per source
vertex, recording where the source spanning forest lands.  Natural
isomorphism of two functors then reduces, per source component, to a
simultaneous conjugacy problem over the target letters, which
words.solve_simultaneous_conjugacy decides exactly.
"""

from dataclasses import dataclass

from .graphs import _sort_key, FinGraph, GraphMap
from .words import (
    reduce_word, mul, inv, solve_simultaneous_conjugacy, Unknown,
)
from .automata import SubgroupAutomaton

__all__ = [
    "Component", "PresGroupoid", "shape1", "shape_summary",
    "GroupoidFunctor", "induce_functor", "identity_functor", "natural_iso",
]


@dataclass(frozen=True)
class Component:
    base: object
    vertices: frozenset
    letters: tuple                  # cotree edge ids, sorted
    tree_paths: dict                # vertex -> tuple of darts from base


class PresGroupoid:
    def __init__(self, graph):
        self.graph = graph
        self.components = {}
        self.comp_of = {}
        visited = set()
        for start in graph.vertices:
            if start in visited:
                continue
            tree_paths = {start: ()}
            tree_edges = set()
            order = [start]
            visited.add(start)
            queue = [start]
            while queue:
                v = queue.pop(0)
                ds = sorted(graph.darts(v),
                            key=lambda d: (_sort_key(d[0]), -d[1]))
                for eid, sign, other in ds:
                    if other not in visited:
                        visited.add(other)
                        tree_edges.add(eid)
                        tree_paths[other] = tree_paths[v] + ((eid, sign),)
                        order.append(other)
                        queue.append(other)
            letters = tuple(sorted(
                (eid for eid, u, w in graph.edges
                 if u in tree_paths and eid not in tree_edges),
                key=_sort_key))
            comp = Component(start, frozenset(order), letters, tree_paths)
            self.components[start] = comp
            for v in order:
                self.comp_of[v] = start

    # -- words of paths ----------------------------------------------------

    def dart_word(self, eid, sign):
        comp = self.components[self.comp_of[self.graph.ends[eid][0]]]
        if eid in comp.letters:
            return ((eid, sign),)
        return ()

    def path_word(self, darts):
        return reduce_word(tuple(
            letter for eid, sign in darts for letter in self.dart_word(eid, sign)))

    def base_of(self, v):
        return self.comp_of[v]

    def letters_at(self, v):
        return self.components[self.comp_of[v]].letters

    def rank_at(self, v):
        return len(self.letters_at(v))

    # -- morphisms as (u, v, word) ----------------------------------------

    def identity(self, v):
        return (v, v, ())

    def compose(self, m1, m2):
        u1, v1, w1 = m1
        u2, v2, w2 = m2
        assert v1 == u2
        return (u1, v2, mul(w1, w2))

    def inverse(self, m):
        u, v, w = m
        return (v, u, inv(w))

    def morphism_from_path(self, u, darts):
        v = u
        for eid, sign in darts:
            a, b = self.graph.dart_ends(eid, sign)
            assert a == v
            v = b
        return (u, v, self.path_word(darts))

    def summary(self):
        out = []
        for base in sorted(self.components, key=_sort_key):
            c = self.components[base]
            out.append((base, len(c.vertices), len(c.letters)))
        return out


def shape1(graph):
    return PresGroupoid(graph)


def shape_summary(graph):
    """Sorted (base, size, rank) rows, one per component."""
    return shape1(graph).summary()


class GroupoidFunctor:
    """Functor between presented groupoids.

    obj: vertex map.  gen_images: letter -> target word, the image of
    the letter's based loop.  conj: vertex -> target word, where the
    source tree path to that vertex lands.
    """

    def __init__(self, src, dst, obj, gen_images, conj):
        self.src = src
        self.dst = dst
        self.obj = dict(obj)
        self.gen_images = {k: reduce_word(v) for k, v in gen_images.items()}
        self.conj = {k: reduce_word(v) for k, v in conj.items()}

    def map_word(self, w):
        out = ()
        for g, s in w:
            img = self.gen_images[g]
            out = mul(out, img if s > 0 else inv(img))
        return out

    def map_morphism(self, m):
        u, v, w = m
        return (self.obj[u], self.obj[v],
                mul(inv(self.conj[u]), self.map_word(w), self.conj[v]))

    def compose(self, other):
        """self then other."""
        obj = {v: other.obj[self.obj[v]] for v in self.obj}
        gen_images = {}
        conj = {}
        for base, comp in self.src.components.items():
            fb = self.obj[base]
            cb = other.conj[fb]
            for l in comp.letters:
                gen_images[l] = mul(inv(cb), other.map_word(self.gen_images[l]), cb)
            for v in comp.vertices:
                conj[v] = mul(inv(cb), other.map_word(self.conj[v]),
                              other.conj[self.obj[v]])
        return GroupoidFunctor(self.src, other.dst, obj, gen_images, conj)

    def image_subgroup(self, base):
        """Folded automaton of the image of the base's vertex group."""
        comp = self.src.components[self.src.comp_of[base]]
        target_letters = self.dst.letters_at(self.obj[comp.base])
        return SubgroupAutomaton.from_words(
            target_letters, [self.gen_images[l] for l in comp.letters])

    def injective_on_vertex_group(self, base):
        """Free-group homs are injective iff the image keeps full rank."""
        comp = self.src.components[self.src.comp_of[base]]
        return self.image_subgroup(base).rank() == len(comp.letters)

    def data_key(self):
        return (tuple(sorted(self.obj.items(), key=lambda kv: _sort_key(kv[0]))),
                tuple(sorted(self.gen_images.items(), key=lambda kv: _sort_key(kv[0]))),
                tuple(sorted(self.conj.items(), key=lambda kv: _sort_key(kv[0]))))

    def __repr__(self):
        return "GroupoidFunctor(%d objects)" % (len(self.obj),)


def induce_functor(f, src_shape=None, dst_shape=None):
    """The functor a graph map induces between the shapes."""
    S = src_shape if src_shape is not None else shape1(f.source)
    T = dst_shape if dst_shape is not None else shape1(f.target)

    def image_word(eid, sign):
        img = f.dart_image(eid, sign)
        if img[0] == "r":
            return ()
        return T.dart_word(img[1], img[2])

    conj = {}
    gen_images = {}
    for base, comp in S.components.items():
        for v in comp.vertices:
            w = ()
            for eid, sign in comp.tree_paths[v]:
                w = mul(w, image_word(eid, sign))
            conj[v] = w
        for l in comp.letters:
            u, v = f.source.ends[l]
            gen_images[l] = mul(conj[u], image_word(l, +1), inv(conj[v]))
    return GroupoidFunctor(S, T, dict(f.vertex_map), gen_images, conj)


def identity_functor(shape):
    obj = {v: v for v in shape.comp_of}
    gens = {}
    conj = {v: () for v in shape.comp_of}
    for comp in shape.components.values():
        for l in comp.letters:
            gens[l] = ((l, +1),)
    return GroupoidFunctor(shape, shape, obj, gens, conj)


def natural_iso(F, G, max_power=None):
    """Decide whether two parallel functors are naturally isomorphic.

    Returns True, False, or a words.Unknown when an explicit max_power
    cut the conjugacy search short.  Per source component the functors
    must land in one target component and their generator images must be
    simultaneously conjugate.
    """
    assert F.src is G.src or F.src.graph == G.src.graph
    undecided = None
    for base, comp in F.src.components.items():
        fb = F.dst.comp_of[F.obj[base]]
        gb = G.dst.comp_of[G.obj[base]]
        if fb != gb:
            return False
        pairs = [(F.gen_images[l], G.gen_images[l]) for l in comp.letters]
        h = solve_simultaneous_conjugacy(pairs, max_power=max_power)
        if h is None:
            return False
        if isinstance(h, Unknown):
            undecided = h
    return True if undecided is None else undecided
