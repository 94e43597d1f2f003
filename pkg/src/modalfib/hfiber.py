"""Symbolic homotopy fibers, the prism triangle, and the gamma test.

For a map of graphs and a target vertex y, three fibers interact: the
honest vertex fiber (a graph), its fundamental groupoid, and the fiber
of the induced functor between fundamental groupoids.  The latter can be
infinite, so it is presented symbolically: per source component, the
image subgroup of the target vertex group acts on its own right cosets,
and the coset groupoid records the folded subgroup automaton, marked
representatives for fiber vertices, and stabilizer data.

gamma compares the shape of the vertex fiber with the symbolic fiber.
Deciding whether it is an equivalence is the heart of the package:

  (a) essential surjectivity: the image subgroup must have finite index
      (folded automaton complete) and every coset must be marked by some
      fiber vertex; an empty fiber under a nonempty coset space fails.
  (b) injectivity on components: distinct fiber components must mark
      distinct cosets.
  (c) full faithfulness: the kernel of the induced map on fundamental
      groups is computed through the piece decomposition.  Cut the
      source component along its degenerate edges into pieces (one
      fiber component per target vertex each); the incidence graph of
      pieces and non-degenerate edges controls the kernel by the
      Seifert-van Kampen decomposition of the pulled-back universal
      cover.  A fiber component of rank 0 demands every piece in its
      incidence component be rank 0 and the incidence component inject
      into the target's fundamental group (decided by Hopfian rank
      comparison of the folded image).  A fiber component of positive
      rank demands its incidence component be literally a tree and all
      other pieces be rank 0.

All three conditions are exact; no bounds are involved.
"""

from dataclasses import dataclass, field

from .graphs import _sort_key, fiber, _UnionFind
from .words import reduce_word, mul, inv
from .automata import SubgroupAutomaton
from .groupoids import shape1, induce_functor

__all__ = [
    "CosetEntry", "CosetGroupoid", "homotopy_fiber",
    "PrismData", "prism", "gamma_is_equivalence", "GammaAnalyzer",
]


@dataclass
class CosetEntry:
    """Coset data for one source component lying over the base."""

    source_base: object
    letters: tuple
    subgroup: SubgroupAutomaton     # image subgroup, rebased at a fiber vertex
    basing: tuple                   # word conjugating image to the rebased form
    marked: dict                    # fiber vertex -> representative word

    def same_coset(self, w1, w2):
        return self.subgroup.contains(mul(w1, inv(w2)))

    def vertex_group(self, rep):
        """Stabilizer of the coset of rep: the conjugated subgroup."""
        return self.subgroup.conjugate_by(rep)

    def coset_count(self):
        return self.subgroup.index()

    def enumerate_cosets(self, radius=16, max_cosets=64):
        """Breadth-first reduced words, one per coset, plus a truncation
        flag.  Complete automata finish exactly; infinite coset spaces
        stop at the radius or count bound."""
        reps = [()]
        frontier = [()]
        truncated = False
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for g in self.letters:
                    for s in (+1, -1):
                        if w and w[-1] == (g, -s):
                            continue
                        cand = w + ((g, s),)
                        if any(self.same_coset(cand, r) for r in reps):
                            continue
                        if len(reps) >= max_cosets:
                            return reps, True
                        reps.append(cand)
                        nxt.append(cand)
            frontier = nxt
            if not frontier:
                return reps, truncated
        if frontier:
            n = self.coset_count()
            truncated = n is None or n > len(reps)
        return reps, truncated


@dataclass
class CosetGroupoid:
    """Symbolic fiber of a shape functor over a vertex's component.

    One entry per source component over the target component; empty when
    nothing lies over it.
    """

    target_base: object
    ambient_letters: tuple
    entries: list

    @property
    def ambient_rank(self):
        return len(self.ambient_letters)

    def is_empty(self):
        return not self.entries

    def total_cosets(self):
        """Total number of cosets, or None when some entry is infinite."""
        out = 0
        for e in self.entries:
            n = e.coset_count()
            if n is None:
                return None
            out += n
        return out


def homotopy_fiber(F, y):
    """Coset groupoid of the functor F over the vertex y."""
    T = F.dst
    base = T.comp_of[y]
    letters = T.components[base].letters
    entries = []
    for cb in sorted(F.src.components, key=_sort_key):
        comp = F.src.components[cb]
        if T.comp_of[F.obj[cb]] != base:
            continue
        fib_vertices = sorted((x for x in comp.vertices if F.obj[x] == y),
                              key=_sort_key)
        images = [F.gen_images[l] for l in comp.letters]
        basing = F.conj[fib_vertices[0]] if fib_vertices else ()
        rebased = [mul(inv(basing), w, basing) for w in images]
        subgroup = SubgroupAutomaton.from_words(letters, rebased)
        marked = {x: mul(inv(basing), F.conj[x]) for x in fib_vertices}
        entries.append(CosetEntry(cb, letters, subgroup, basing, marked))
    return CosetGroupoid(base, letters, entries)


@dataclass
class PrismData:
    fiber: object                  # VertexFiber
    fiber_shape: object            # PresGroupoid of the fiber graph
    hfib: CosetGroupoid
    delta: dict                    # fiber vertex -> (source component, word)
    gamma: dict                    # fiber component base -> (source component, word)
    triangle_commutes: bool


def prism(f, y, F=None):
    """The full triangle over y: fiber, its shape, symbolic fiber, and
    the two comparison maps."""
    if F is None:
        F = induce_functor(f)
    fib = fiber(f, y)
    fib_shape = shape1(fib.subgraph)
    hf = homotopy_fiber(F, y)
    entry_of = {e.source_base: e for e in hf.entries}
    delta = {}
    for e in hf.entries:
        for x, w in e.marked.items():
            delta[x] = (e.source_base, w)
    gamma = {}
    for kb in fib_shape.components:
        cb = F.src.comp_of[kb]
        gamma[kb] = (cb, entry_of[cb].marked[kb])
    commutes = True
    for x in fib.subgraph.vertices:
        kb = fib_shape.comp_of[x]
        cb, dw = delta[x]
        cb2, gw = gamma[kb]
        if cb != cb2 or not entry_of[cb].same_coset(dw, gw):
            commutes = False
    return PrismData(fib, fib_shape, hf, delta, gamma, commutes)


# ---------------------------------------------------------------------------
# The gamma decision procedure.

class _ComponentData:
    """Per-source-component facts independent of the queried vertex."""

    def __init__(self, F, f, comp, target_letters):
        self.comp = comp
        T = F.dst
        self.subgroup = SubgroupAutomaton.from_words(
            target_letters, [F.gen_images[l] for l in comp.letters])
        self.complete = self.subgroup.complete()

        # pieces: components of the degenerate part, one fiber component
        # per target vertex each
        uf = _UnionFind(comp.vertices)
        deg_edges = []
        nondeg = []
        for eid, u, v in f.source.edges:
            if u not in comp.vertices:
                continue
            if f.edge_map[eid] is None:
                uf.union(u, v)
                deg_edges.append((eid, u, v))
            else:
                nondeg.append((eid, u, v))
        reps = {}
        for v in comp.vertices:
            r = uf.find(v)
            if r not in reps or _sort_key(v) < _sort_key(reps[r]):
                reps[r] = v
        self.piece_of = {v: reps[uf.find(v)] for v in comp.vertices}
        counts = {p: 0 for p in set(self.piece_of.values())}
        edge_counts = dict(counts)
        for v in comp.vertices:
            counts[self.piece_of[v]] += 1
        for _, u, _ in deg_edges:
            edge_counts[self.piece_of[u]] += 1
        self.piece_rank = {p: edge_counts[p] - counts[p] + 1 for p in counts}

        # incidence graph of pieces along non-degenerate edges
        pieces = sorted(counts, key=_sort_key)
        inc_uf = _UnionFind(pieces)
        arcs = []
        for eid, u, v in nondeg:
            img = f.dart_image(eid, +1)
            label = T.dart_word(img[1], img[2])
            arcs.append((self.piece_of[u], self.piece_of[v], label))
            inc_uf.union(self.piece_of[u], self.piece_of[v])
        self.inc_comp_of = {p: inc_uf.find(p) for p in pieces}

        # per incidence component: nodes, arcs, rank, injectivity into
        # the target fundamental group
        groups = {}
        for p in pieces:
            groups.setdefault(self.inc_comp_of[p], []).append(p)
        arc_groups = {g: [] for g in groups}
        for a in arcs:
            arc_groups[self.inc_comp_of[a[0]]].append(a)
        self.inc_info = {}
        for g, nodes in groups.items():
            these = arc_groups[g]
            rank = len(these) - len(nodes) + 1
            max_piece_rank = max(self.piece_rank[p] for p in nodes)
            pos_rank_pieces = sum(1 for p in nodes if self.piece_rank[p] > 0)
            injective = self._injective_into_target(
                nodes, these, target_letters) if rank > 0 else True
            self.inc_info[g] = {
                "rank": rank,
                "max_piece_rank": max_piece_rank,
                "pos_rank_pieces": pos_rank_pieces,
                "injective": injective,
            }

    @staticmethod
    def _injective_into_target(nodes, arcs, target_letters):
        """Does the incidence component's fundamental group inject into
        the target's?  Fold the cycle words; Hopfian free groups make
        rank preservation equivalent to injectivity."""
        transport = {nodes[0]: ()}
        adj = {}
        for i, (u, v, label) in enumerate(arcs):
            adj.setdefault(u, []).append((v, label, i, +1))
            adj.setdefault(v, []).append((u, label, i, -1))
        tree_arcs = set()
        queue = [nodes[0]]
        while queue:
            u = queue.pop(0)
            for v, label, i, sgn in sorted(
                    adj.get(u, []), key=lambda t: (t[2], -t[3])):
                if v not in transport:
                    transport[v] = mul(transport[u],
                                       label if sgn > 0 else inv(label))
                    tree_arcs.add(i)
                    queue.append(v)
        gens = []
        for i, (u, v, label) in enumerate(arcs):
            if i in tree_arcs:
                continue
            gens.append(mul(transport[u], label, inv(transport[v])))
        folded = SubgroupAutomaton.from_words(target_letters, gens)
        return folded.rank() == len(gens)

    def fiber_pieces_over(self, F, y):
        out = {}
        for x in self.comp.vertices:
            if F.obj[x] == y:
                out.setdefault(self.piece_of[x], []).append(x)
        return out


class GammaAnalyzer:
    """Reusable gamma tester for one map: component data is built once,
    per-vertex queries are cheap."""

    def __init__(self, f, F=None):
        self.f = f
        self.F = F if F is not None else induce_functor(f)
        self._comp_data = {}

    def _data_for(self, cb):
        if cb not in self._comp_data:
            comp = self.F.src.components[cb]
            tb = self.F.dst.comp_of[self.F.obj[cb]]
            letters = self.F.dst.components[tb].letters
            self._comp_data[cb] = _ComponentData(self.F, self.f, comp, letters)
        return self._comp_data[cb]

    def at_vertex(self, y):
        F = self.F
        T = F.dst
        base = T.comp_of[y]
        for cb in F.src.components:
            if T.comp_of[F.obj[cb]] != base:
                continue
            data = self._data_for(cb)
            if not data.complete:
                return False
            H = data.subgroup
            pieces = data.fiber_pieces_over(F, y)
            if not pieces:
                return False
            # (a) all cosets marked, (b) injectively
            states = {}
            for p, xs in pieces.items():
                s = H.trace(F.conj[xs[0]])
                if s in states:
                    return False
                states[s] = p
            if len(states) != H.n:
                return False
            # (c) kernel analysis through the incidence graph
            for p in pieces:
                info = data.inc_info[data.inc_comp_of[p]]
                if data.piece_rank[p] == 0:
                    if info["max_piece_rank"] > 0 or not info["injective"]:
                        return False
                else:
                    if info["rank"] != 0:
                        return False
                    if info["pos_rank_pieces"] > 1:
                        return False
        return True

    def everywhere(self):
        return all(self.at_vertex(y) for y in self.f.target.vertices)


def gamma_is_equivalence(f, y, F=None):
    """Is the comparison functor from the fiber's shape to the symbolic
    fiber an equivalence over y?  Exact, no search bounds."""
    return GammaAnalyzer(f, F).at_vertex(y)
