"""Finite reflexive graphs as combinatorial spaces.

A FinGraph is a finite undirected multigraph with stable edge ids.  Loops
and parallel edges are allowed.  Every vertex implicitly carries a
degenerate (reflexive) loop, which never appears in the edge list but is
available as the image of an edge under a GraphMap.  This makes the maps
exactly the reflexive-graph maps: an edge may land on an edge or collapse
to a vertex.

Orientation convention.  Edges are undirected, but each edge stores its
endpoints as an ordered pair (tail, head); that order is the canonical
orientation, used whenever an edge must be read as a path segment.  A dart
is a pair (edge_id, sign) with sign +1 for tail->head and -1 for the
reverse.

Product convention (documented bit-exactly).  product(a, b) is the
categorical product in reflexive graphs, computed dart-wise:

  * vertices are the pairs (u, v);
  * for every edge e of `a` and vertex v of `b` there is an edge
    ((e, +1), ('r', v)) joining (tail e, v) -- (head e, v);
  * symmetrically (('r', u), (e', +1)) for u in `a`, e' an edge of `b`;
  * for every pair of edges e, e' there are TWO edges, the aligned pair
    ((e, +1), (e', +1)) and the anti-aligned pair ((e, +1), (e', -1)),
    i.e. a box with both diagonals.

So interval x interval has 4 vertices and 6 edges: the 4-cycle plus both
diagonals.  Edge ids of products and pullbacks are the canonical dart
pairs themselves.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct

__all__ = [
    "FinGraph", "GraphMap", "VertexFiber", "DEG",
    "fiber", "pullback", "product", "terminal_map",
    "pi0", "component_map", "pi0_by_definition",
    "flat", "is_discrete",
    "enumerate_graph_maps", "graph_isomorphic",
    "point", "interval", "cycle", "path_graph", "star", "bouquet",
    "disjoint_union",
]

# Marker for a degenerate edge image in GraphMap.build inputs.
DEG = "deg"


class GraphError(ValueError):
    pass


def _sort_key(x):
    # Vertex and edge ids may be ints, strings, or nested tuples of those;
    # a single graph may mix them (disjoint unions tag with ints).
    if isinstance(x, tuple):
        return (2, tuple(_sort_key(y) for y in x))
    if isinstance(x, str):
        return (1, x)
    return (0, x)


@dataclass(frozen=True)
class FinGraph:
    """Finite undirected multigraph with stable edge ids.

    vertices: tuple of vertex ids (deduped, sorted).
    edges: tuple of (edge_id, tail, head) triples, sorted by edge id.
    basepoint: optional distinguished vertex.
    """

    vertices: tuple
    edges: tuple
    basepoint: object = None

    def __post_init__(self):
        vs = tuple(sorted(set(self.vertices), key=_sort_key))
        object.__setattr__(self, "vertices", vs)
        vset = set(vs)
        seen = set()
        es = []
        for eid, u, v in self.edges:
            if eid in seen:
                raise GraphError("duplicate edge id %r" % (eid,))
            seen.add(eid)
            if u not in vset or v not in vset:
                raise GraphError("edge %r has endpoint outside vertex set" % (eid,))
            es.append((eid, u, v))
        es.sort(key=lambda t: _sort_key(t[0]))
        object.__setattr__(self, "edges", tuple(es))
        if self.basepoint is not None and self.basepoint not in vset:
            raise GraphError("basepoint %r is not a vertex" % (self.basepoint,))

    @property
    def ends(self):
        try:
            return self._ends_cache
        except AttributeError:
            d = {eid: (u, v) for eid, u, v in self.edges}
            object.__setattr__(self, "_ends_cache", d)
            return d

    def edge_ids(self):
        return tuple(eid for eid, _, _ in self.edges)

    def darts(self, v):
        """All darts leaving v, as (edge_id, sign, other_end) triples.

        A loop at v contributes both its darts.
        """
        out = []
        for eid, a, b in self.edges:
            if a == v:
                out.append((eid, +1, b))
            if b == v:
                out.append((eid, -1, a))
        return out

    def dart_ends(self, eid, sign):
        u, v = self.ends[eid]
        return (u, v) if sign == +1 else (v, u)

    def with_basepoint(self, v):
        return FinGraph(self.vertices, self.edges, v)

    def __repr__(self):
        return "FinGraph(%d vertices, %d edges)" % (len(self.vertices), len(self.edges))


@dataclass(frozen=True)
class GraphMap:
    """Reflexive-graph map.

    vertex_map: dict vertex -> vertex.
    edge_map: dict edge_id -> (edge_id', sign) or None for a degenerate
    image.  The pair means: the canonical dart of the source edge lands on
    the dart (edge_id', sign) of the target.
    """

    source: FinGraph
    target: FinGraph
    vertex_map: dict
    edge_map: dict

    def __post_init__(self):
        vm, em = self.vertex_map, self.edge_map
        for x in self.source.vertices:
            if x not in vm:
                raise GraphError("vertex %r has no image" % (x,))
            if vm[x] not in self.target.ends and vm[x] not in set(self.target.vertices):
                raise GraphError("vertex image %r is not in target" % (vm[x],))
        for eid, u, v in self.source.edges:
            if eid not in em:
                raise GraphError("edge %r has no image" % (eid,))
            img = em[eid]
            if img is None:
                if vm[u] != vm[v]:
                    raise GraphError(
                        "edge %r collapses but endpoints map to %r != %r"
                        % (eid, vm[u], vm[v]))
            else:
                e2, s = img
                if e2 not in self.target.ends:
                    raise GraphError("edge image %r not in target" % (e2,))
                a, b = self.target.dart_ends(e2, s)
                if (vm[u], vm[v]) != (a, b):
                    raise GraphError(
                        "edge %r endpoints map to (%r,%r), image dart has (%r,%r)"
                        % (eid, vm[u], vm[v], a, b))

    @staticmethod
    def build(source, target, vertex_map, edge_map):
        """Normalizing constructor.

        edge_map values may be a bare edge id (sign inferred, +1 preferred
        when ambiguous), an (edge_id, sign) pair, None, or the string
        "deg" for a degenerate image.
        """
        vm = dict(vertex_map)
        em = {}
        for eid, u, v in source.edges:
            img = edge_map[eid]
            if img is None or img == DEG:
                em[eid] = None
            elif isinstance(img, tuple) and len(img) == 2 and img[1] in (+1, -1):
                em[eid] = img
            else:
                e2 = img
                fit = None
                for s in (+1, -1):
                    a, b = target.dart_ends(e2, s)
                    if (vm[u], vm[v]) == (a, b):
                        fit = (e2, s)
                        break
                if fit is None:
                    raise GraphError("edge %r cannot map onto %r" % (eid, e2))
                em[eid] = fit
        return GraphMap(source, target, vm, em)

    @staticmethod
    def identity(g):
        return GraphMap(g, g, {v: v for v in g.vertices},
                        {e: (e, +1) for e in g.edge_ids()})

    def dart_image(self, eid, sign):
        """Image of a dart: ('e', edge, sign) or ('r', vertex)."""
        img = self.edge_map[eid]
        if img is None:
            u, _ = self.source.ends[eid]
            return ("r", self.vertex_map[u])
        e2, s = img
        return ("e", e2, s * sign)

    def compose(self, other):
        """self then other (source of other = target of self)."""
        assert other.source is self.target or other.source == self.target
        vm = {x: other.vertex_map[self.vertex_map[x]] for x in self.source.vertices}
        em = {}
        for eid in self.source.edge_ids():
            img = self.edge_map[eid]
            if img is None:
                em[eid] = None
            else:
                e2, s = img
                img2 = other.edge_map[e2]
                em[eid] = None if img2 is None else (img2[0], img2[1] * s)
        return GraphMap(self.source, other.target, vm, em)

    def __repr__(self):
        return "GraphMap(%r -> %r)" % (self.source, self.target)


@dataclass(frozen=True)
class VertexFiber:
    """The fiber of a map over a vertex: a subgraph plus its inclusion."""

    base_vertex: object
    subgraph: FinGraph
    inclusion: GraphMap


def fiber(f, y):
    """Fiber of f over the target vertex y.

    Contains exactly the vertices with image y and the edges whose image
    is degenerate at y.  Edges mapping onto actual edges (loops at y
    included) cover more than the single point y, so they are excluded.
    """
    if y not in set(f.target.vertices):
        raise GraphError("fiber base %r is not a target vertex" % (y,))
    vm = f.vertex_map
    verts = [x for x in f.source.vertices if vm[x] == y]
    edges = []
    for eid, u, v in f.source.edges:
        if f.edge_map[eid] is None and vm[u] == y:
            edges.append((eid, u, v))
    sub = FinGraph(tuple(verts), tuple(edges))
    incl = GraphMap(sub, f.source, {v: v for v in verts},
                    {e: (e, +1) for e, _, _ in edges})
    return VertexFiber(y, sub, incl)


def _gdarts(g):
    """Generalized darts: ('e', eid, sign) and ('r', v)."""
    out = [("r", v) for v in g.vertices]
    for eid in g.edge_ids():
        out.append(("e", eid, +1))
        out.append(("e", eid, -1))
    return out


def _gdart_tail(g, d):
    return d[1] if d[0] == "r" else g.dart_ends(d[1], d[2])[0]


def _gdart_head(g, d):
    return d[1] if d[0] == "r" else g.dart_ends(d[1], d[2])[1]


def _gdart_rev(d):
    return d if d[0] == "r" else ("e", d[1], -d[2])


def _gdart_image(f, d):
    if d[0] == "r":
        return ("r", f.vertex_map[d[1]])
    return f.dart_image(d[1], d[2])


def pullback(f, g):
    """Pullback of f : X -> Z and g : Y -> Z in reflexive graphs.

    Computed dart-wise: vertices are compatible vertex pairs, edges are
    orbits (under simultaneous reversal) of compatible generalized-dart
    pairs with at least one actual coordinate.  A coordinate may be
    degenerate where the other coordinate's image collapses.

    Returns (P, proj1, proj2).
    """
    assert f.target == g.target
    X, Y = f.source, g.source
    verts = tuple((x, y) for x in X.vertices for y in Y.vertices
                  if f.vertex_map[x] == g.vertex_map[y])
    vset = set(verts)
    seen = set()
    edges = []
    for a in _gdarts(X):
        ia = _gdart_image(f, a)
        for b in _gdarts(Y):
            if a[0] == "r" and b[0] == "r":
                continue
            if ia != _gdart_image(g, b):
                continue
            tail = (_gdart_tail(X, a), _gdart_tail(Y, b))
            if tail not in vset:
                continue
            pair = (a, b)
            rev = (_gdart_rev(a), _gdart_rev(b))
            canon = min(pair, rev, key=_sort_key)
            if canon in seen:
                continue
            seen.add(canon)
            ca, cb = canon
            edges.append((canon,
                          (_gdart_tail(X, ca), _gdart_tail(Y, cb)),
                          (_gdart_head(X, ca), _gdart_head(Y, cb))))
    P = FinGraph(verts, tuple(edges))

    def proj(which, G):
        vm = {p: p[which] for p in verts}
        em = {}
        for canon, _, _ in edges:
            d = canon[which]
            em[canon] = None if d[0] == "r" else (d[1], d[2])
        return GraphMap(P, G, vm, em)

    return P, proj(0, X), proj(1, Y)


def terminal_map(g, pt_graph=None):
    if pt_graph is None:
        pt_graph = point()
    t = pt_graph.vertices[0]
    return GraphMap(g, pt_graph, {v: t for v in g.vertices},
                    {e: None for e in g.edge_ids()})


def product(a, b):
    """Categorical product (box with both diagonals); see module docstring.

    Returns (P, fst, snd).
    """
    pt = point()
    P, p1, p2 = pullback(terminal_map(a, pt), terminal_map(b, pt))
    return P, p1, p2


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def component_map(g):
    """dict vertex -> canonical component representative (least id)."""
    uf = _UnionFind(g.vertices)
    for _, u, v in g.edges:
        uf.union(u, v)
    reps = {}
    for v in g.vertices:
        r = uf.find(v)
        if r not in reps or _sort_key(v) < _sort_key(reps[r]):
            reps[r] = v
    return {v: reps[uf.find(v)] for v in g.vertices}


def pi0(g):
    """Components as a sorted tuple of frozensets (union-find)."""
    cm = component_map(g)
    comps = {}
    for v, r in cm.items():
        comps.setdefault(r, set()).add(v)
    return tuple(frozenset(comps[r]) for r in sorted(comps, key=_sort_key))


def pi0_by_definition(g, bound=12):
    """Components straight from the defining properties.

    A subset of vertices is detachable when no edge crosses between it
    and its complement; detachable subsets play the role of propositions
    on the space (a proposition is constant on any edge).  A component is
    then a subset that is inhabited, detachable, and connected: it meets
    every detachable subset in nothing or in all of itself.

    Enumerates subsets as bitmasks, so it refuses graphs with more than
    `bound` vertices (default 12).
    """
    n = len(g.vertices)
    if n > bound:
        raise GraphError("pi0_by_definition limited to %d vertices, got %d"
                         % (bound, n))
    idx = {v: i for i, v in enumerate(g.vertices)}
    full = (1 << n) - 1
    edge_masks = [(1 << idx[u]) | (1 << idx[v]) for _, u, v in g.edges]

    def detachable(mask):
        comp = full & ~mask
        for em in edge_masks:
            if (em & mask) and (em & comp):
                return False
        return True

    detachables = [m for m in range(full + 1) if detachable(m)]
    out = []
    for c in detachables:
        if c == 0:
            continue
        if all((c & p) == c or (c & p) == 0 for p in detachables):
            out.append(frozenset(v for v in g.vertices if c & (1 << idx[v])))
    return tuple(sorted(out, key=lambda s: _sort_key(sorted(s, key=_sort_key)[0])))


def flat(g):
    """Underlying point-set: same vertices, no edges.  Returns (flat, counit)."""
    fg = FinGraph(g.vertices, (), g.basepoint)
    counit = GraphMap(fg, g, {v: v for v in fg.vertices}, {})
    return fg, counit


def is_discrete(g):
    """A graph is discrete iff it has no edges.

    Cross-checkable against the path criterion: the number of maps from
    the interval equals the number of vertices exactly when no edge gives
    the interval anywhere non-trivial to go (see tests).
    """
    return len(g.edges) == 0


def enumerate_graph_maps(a, b):
    """All GraphMaps a -> b, by brute force.

    Vertex images are chosen freely; each edge then takes every
    compatible image: any dart of b with matching endpoints, plus the
    degenerate image when the endpoints coincide.
    """
    avs = list(a.vertices)
    out = []
    bdarts = {}
    for v in b.vertices:
        bdarts[v] = {}
    for eid in b.edge_ids():
        for s in (+1, -1):
            t, h = b.dart_ends(eid, s)
            bdarts[t].setdefault(h, []).append((eid, s))
    for images in iproduct(b.vertices, repeat=len(avs)):
        vm = dict(zip(avs, images))
        options = []
        for eid, u, v in a.edges:
            opts = list(bdarts[vm[u]].get(vm[v], []))
            if vm[u] == vm[v]:
                opts.append(None)
            options.append(opts)
        for combo in iproduct(*options):
            em = dict(zip(a.edge_ids(), combo))
            out.append(GraphMap(a, b, vm, em))
    return out


def graph_isomorphic(a, b):
    """Brute-force isomorphism test for small graphs (ignores basepoints)."""
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return False

    def profile(g):
        deg = {v: 0 for v in g.vertices}
        loops = {v: 0 for v in g.vertices}
        for _, u, v in g.edges:
            if u == v:
                loops[u] += 1
            else:
                deg[u] += 1
                deg[v] += 1
        return deg, loops

    dega, loopa = profile(a)
    degb, loopb = profile(b)
    if sorted(dega.values()) != sorted(degb.values()):
        return False
    if sorted(loopa.values()) != sorted(loopb.values()):
        return False

    def multiset(g, vm=None):
        out = {}
        for _, u, v in g.edges:
            if vm is not None:
                u, v = vm[u], vm[v]
            key = tuple(sorted((u, v), key=_sort_key))
            out[key] = out.get(key, 0) + 1
        return out

    target = multiset(b)
    from itertools import permutations
    bvs = list(b.vertices)
    avs = list(a.vertices)
    for perm in permutations(bvs):
        vm = dict(zip(avs, perm))
        if any(dega[x] != degb[vm[x]] or loopa[x] != loopb[vm[x]] for x in avs):
            continue
        if multiset(a, vm) == target:
            return True
    return False


# ---------------------------------------------------------------------------
# Stock graphs.

def point(name="pt"):
    return FinGraph((name,), (), name)


def interval():
    """The generator of paths: two vertices, one edge."""
    return FinGraph((0, 1), (("e", 0, 1),), 0)


def cycle(k):
    assert k >= 1
    verts = tuple(range(k))
    edges = tuple(("e%d" % i, i, (i + 1) % k) for i in range(k))
    return FinGraph(verts, edges, 0)


def path_graph(k):
    """Path with k vertices 0..k-1."""
    verts = tuple(range(k))
    edges = tuple(("e%d" % i, i, i + 1) for i in range(k - 1))
    return FinGraph(verts, edges, 0)


def star(arms):
    """Star with a center 'c' and numbered arm tips."""
    verts = ("c",) + tuple(range(arms))
    edges = tuple(("a%d" % i, "c", i) for i in range(arms))
    return FinGraph(verts, edges, "c")


def bouquet(k):
    """k loops on one vertex; bouquet(2) is the figure eight."""
    return FinGraph(("w",), tuple(("l%d" % i, "w", "w") for i in range(k)), "w")


def disjoint_union(a, b):
    """Disjoint union, tagging ids with 0 and 1."""
    verts = tuple((0, v) for v in a.vertices) + tuple((1, v) for v in b.vertices)
    edges = tuple(((0, e), (0, u), (0, v)) for e, u, v in a.edges) + \
        tuple(((1, e), (1, u), (1, v)) for e, u, v in b.edges)
    bp = (0, a.basepoint) if a.basepoint is not None else None
    return FinGraph(verts, edges, bp)
