"""Five-way classification of graph maps at two levels.

Each map gets five flags twice over: once at the component level (pi0),
where fibers are judged by their components, and once at the shape level
(pi1), where fibers are judged by their fundamental groupoids.

  modal        fibers are discrete sets (no edge collapses)
  connected    fibers are nonempty and as trivial as the level sees:
               connected components at pi0, contractible trees at pi1
  equivalence  the induced map at that level is invertible
  fibration    the comparison from each actual fiber to the symbolic
               fiber at that level is an equivalence, at vertices and
               across edge interiors
  etale        the map is, over each target component, exactly the
               covering its level data prescribes; computed by its own
               route, never as modal-and-fibration

The two flag identities (etale = modal and fibration; connected =
equivalence and fibration) are theorems of this model precisely because
the connected and component-level flags include the edge-interior
clauses; the test suite checks them on every classified map.

Also here: the component-level factorization of any map into a
component-collapsing left part and a discrete-fiber right part, the
constant-fiber criterion, and the discrete-family check.
"""

from .graphs import (
    FinGraph, GraphMap, fiber, pi0, component_map, _sort_key,
)
from .groupoids import induce_functor
from .hfiber import GammaAnalyzer
from .covers import is_cover
from .verdicts import Flag, LevelVerdicts, MapClassification

__all__ = [
    "classify", "factor0", "constant_fiber_criterion", "etale_family_check",
    "FactorError",
]


class FactorError(ValueError):
    pass


def _edge_free(f):
    return all(img is not None for img in f.edge_map.values())


def _edges_over(f):
    """Map each target edge to the (source edge, sign) pairs over it."""
    out = {d: [] for d in f.target.edge_ids()}
    for e in f.source.edge_ids():
        img = f.edge_map[e]
        if img is not None:
            out[img[0]].append((e, img[1]))
    return out


def _comp_pairing(f):
    """Component data: rep maps on both sides and, for each target
    component rep, the source component reps lying over it."""
    cm_src = component_map(f.source)
    cm_dst = component_map(f.target)
    over = {r: [] for r in set(cm_dst.values())}
    for r in sorted(set(cm_src.values()), key=_sort_key):
        over[cm_dst[f.vertex_map[r]]].append(r)
    return cm_src, cm_dst, over


def _classify_pi0(f):
    cm_src, cm_dst, over = _comp_pairing(f)
    eo = _edges_over(f)

    modal = _edge_free(f)

    connected = all(
        len(sub.vertices) >= 1 and len(pi0(sub)) == 1
        for sub in (fiber(f, y).subgraph for y in f.target.vertices))
    if connected:
        connected = all(len(es) == 1 for es in eo.values())

    equivalence = all(len(cs) == 1 for cs in over.values())

    def one_edge_per_component_over(d, es):
        counts = {}
        for e, _ in es:
            r = cm_src[f.source.ends[e][0]]
            counts[r] = counts.get(r, 0) + 1
        td = cm_dst[f.target.ends[d][0]]
        return (sorted(counts, key=_sort_key) ==
                sorted(over[td], key=_sort_key)
                and all(c == 1 for c in counts.values()))

    fibration = True
    for y in f.target.vertices:
        sub = fiber(f, y).subgraph
        reps = [cm_src[min(K, key=_sort_key)] for K in pi0(sub)]
        if sorted(reps, key=_sort_key) != sorted(over[cm_dst[y]],
                                                 key=_sort_key):
            fibration = False
            break
    if fibration:
        fibration = all(one_edge_per_component_over(d, es)
                        for d, es in eo.items())

    # etale, by its own route: discreteness plus a one-vertex-per-source-
    # component count over every target vertex, with the interior clause.
    etale = modal
    if etale:
        for y in f.target.vertices:
            by_comp = {}
            for x in f.source.vertices:
                if f.vertex_map[x] == y:
                    r = cm_src[x]
                    by_comp[r] = by_comp.get(r, 0) + 1
            if (sorted(by_comp, key=_sort_key) !=
                    sorted(over[cm_dst[y]], key=_sort_key)
                    or any(c != 1 for c in by_comp.values())):
                etale = False
                break
    if etale:
        etale = all(one_edge_per_component_over(d, es)
                    for d, es in eo.items())

    return LevelVerdicts(
        modal=Flag.of(modal), connected=Flag.of(connected),
        etale=Flag.of(etale), equivalence=Flag.of(equivalence),
        fibration=Flag.of(fibration))


def _classify_pi1(f, F, analyzer):
    S, T = F.src, F.dst
    eo = _edges_over(f)

    modal = _edge_free(f)

    connected = all(
        len(sub.vertices) >= 1 and len(pi0(sub)) == 1
        and len(sub.edges) == len(sub.vertices) - 1
        for sub in (fiber(f, y).subgraph for y in f.target.vertices))
    if connected:
        connected = all(len(es) == 1 for es in eo.values())

    over = {tb: [] for tb in T.components}
    for cb in sorted(S.components, key=_sort_key):
        over[T.comp_of[F.obj[cb]]].append(cb)
    equivalence = all(len(cs) == 1 for cs in over.values())
    if equivalence:
        for cb in S.components:
            H = F.image_subgroup(cb)
            if not (H.complete() and H.n == 1
                    and H.rank() == len(S.components[cb].letters)):
                equivalence = False
                break

    fibration = analyzer.everywhere()

    etale = modal
    if etale:
        etale = _etale_shape_route(f, F, over)

    return LevelVerdicts(
        modal=Flag.of(modal), connected=Flag.of(connected),
        etale=Flag.of(etale), equivalence=Flag.of(equivalence),
        fibration=Flag.of(fibration))


def _etale_shape_route(f, F, over):
    """Each source component must be, on the nose, the covering of its
    target component classified by its image subgroup: vertices over
    every target vertex hit each coset state exactly once, and so do the
    edges over every target edge."""
    S, T = F.src, F.dst
    for tb, cbs in over.items():
        tcomp = T.components[tb]
        tvs = tcomp.vertices
        tes = [d for d, u, v in f.target.edges if u in tvs]
        for cb in cbs:
            comp = S.components[cb]
            H = F.image_subgroup(cb)
            if not H.complete() or H.rank() != len(comp.letters):
                return False
            full = list(range(H.n))
            for y in tvs:
                traces = sorted(H.trace(F.conj[x]) for x in comp.vertices
                                if f.vertex_map[x] == y)
                if traces != full:
                    return False
            by_edge = {d: [] for d in tes}
            for e in f.source.edge_ids():
                u, v = f.source.ends[e]
                if u not in comp.vertices:
                    continue
                d, s = f.edge_map[e]
                tail = u if s == +1 else v
                by_edge[d].append(H.trace(F.conj[tail]))
            for d in tes:
                if sorted(by_edge[d]) != full:
                    return False
    return True


def classify(f):
    """Classify one graph map at both levels; all flags exact."""
    F = induce_functor(f)
    analyzer = GammaAnalyzer(f, F)
    return MapClassification(pi0=_classify_pi0(f),
                             pi1=_classify_pi1(f, F, analyzer))


# ---------------------------------------------------------------------------
# component-level factorization

def factor0(f):
    """Factor f through the graph of its collapse pieces.

    Vertices of the middle graph are the components of the subgraph of
    collapsing edges; the left map crushes each piece to its point and
    is connected at the component level, the right map keeps every edge
    and is discrete-fibered.  The composite equals f on the nose.
    """
    X = f.source
    sub_edges = [(e, u, v) for e, u, v in X.edges if f.edge_map[e] is None]
    piece_graph = FinGraph(X.vertices, tuple(sub_edges))
    piece_of = component_map(piece_graph)

    mid_vertices = tuple(sorted(set(piece_of.values()), key=_sort_key))
    mid_edges = tuple((e, piece_of[u], piece_of[v])
                      for e, u, v in X.edges if f.edge_map[e] is not None)
    bp = piece_of[X.basepoint] if X.basepoint is not None else None
    mid = FinGraph(mid_vertices, mid_edges, bp)

    left = GraphMap(X, mid, dict(piece_of),
                    {e: (None if f.edge_map[e] is None else (e, +1))
                     for e in X.edge_ids()})
    right = GraphMap(mid, f.target,
                     {p: f.vertex_map[p] for p in mid_vertices},
                     {e: f.edge_map[e] for e, _, _ in mid_edges})

    if left.compose(right) != f:
        raise FactorError("factorization does not recompose")
    lv = _classify_pi0(left)
    rv = _classify_pi0(right)
    if not lv.connected.is_true:
        raise FactorError("left factor is not component-connected")
    if not rv.modal.is_true:
        raise FactorError("right factor is not discrete-fibered")
    return mid, left, right


# ---------------------------------------------------------------------------
# criteria

def constant_fiber_criterion(f):
    """True when all vertex fibers have the same shape signature: the
    same number of components with the same multiset of free ranks.

    One-way evidence for being a fibration, not proof: the criterion
    ignores how fibers are glued over edges.
    """
    sigs = []
    for y in f.target.vertices:
        sub = fiber(f, y).subgraph
        ranks = []
        for K in pi0(sub):
            edges_in = sum(1 for _, u, _ in sub.edges if u in K)
            ranks.append(edges_in - len(K) + 1)
        sigs.append(tuple(sorted(ranks)))
    return all(s == sigs[0] for s in sigs)


def etale_family_check(f):
    """Discrete-family test: constant fiber cardinality over each target
    component plus the covering star condition.

    Only meaningful for maps whose fibers are already discrete; anything
    with a collapsing edge gets the string "inapplicable".
    """
    if not _edge_free(f):
        return "inapplicable"
    cm_dst = component_map(f.target)
    sizes = {}
    constant = True
    for y in f.target.vertices:
        n = sum(1 for x in f.source.vertices if f.vertex_map[x] == y)
        r = cm_dst[y]
        if r in sizes and sizes[r] != n:
            constant = False
        sizes.setdefault(r, n)
    return constant and is_cover(f)
