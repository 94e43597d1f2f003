"""Folded subgroup automata for finitely generated free groups.

A subgroup automaton is the classic folded labeled graph: states with a
root, and for each free-group letter a partial permutation-like
transition relation that is deterministic in both directions.  Words act
by tracing; a word lies in the subgroup iff it traces root to root.

Automata are canonicalized on construction (breadth-first relabeling in
sorted letter order), so two constructions of the same subgroup produce
literally equal objects.  Structural equality and mutual generator
membership are therefore two independent routes to subgroup equality,
and the tests drive them against each other.
"""

from .graphs import _sort_key
from .words import reduce_word, mul, inv

__all__ = ["SubgroupAutomaton"]


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[rb] = ra


def _fold(nstates, edges, root):
    """Identify states until transitions are deterministic both ways."""
    uf = _UF(nstates)
    while True:
        out = {}
        inn = {}
        merge = None
        for u, a, v in edges:
            ru, rv = uf.find(u), uf.find(v)
            k = (ru, a)
            if k in out and out[k] != rv:
                merge = (out[k], rv)
                break
            out[k] = rv
            k = (rv, a)
            if k in inn and inn[k] != ru:
                merge = (inn[k], ru)
                break
            inn[k] = ru
        if merge is None:
            break
        uf.union(*merge)
    seen = set()
    delta = {}
    for u, a, v in edges:
        ru, rv = uf.find(u), uf.find(v)
        delta[(ru, a)] = rv
        seen.add(ru)
        seen.add(rv)
    seen.add(uf.find(root))
    return seen, delta, uf.find(root)


def _trim(states, delta, root):
    """Drop non-root states of degree one until the core remains."""
    while True:
        deg = {s: 0 for s in states}
        for (u, a), v in delta.items():
            deg[u] += 1
            deg[v] += 1
        leaves = {s for s in states if s != root and deg[s] <= 1}
        if not leaves:
            return states, delta
        states = states - leaves
        delta = {(u, a): v for (u, a), v in delta.items()
                 if u not in leaves and v not in leaves}


class SubgroupAutomaton:
    """Core folded automaton of a finitely generated subgroup.

    letters: sorted tuple of ambient free-group generator labels.
    n: number of states, named 0..n-1 with root 0.
    delta: dict (state, letter) -> state, the positive direction.
    """

    def __init__(self, letters, n, delta):
        self.letters = tuple(sorted(set(letters), key=_sort_key))
        self.n = n
        self.delta = dict(delta)
        self.rdelta = {(v, a): u for (u, a), v in self.delta.items()}
        assert len(self.rdelta) == len(self.delta), "not folded"

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_words(letters, words):
        edges = []
        fresh = [1]

        def new_state():
            s = fresh[0]
            fresh[0] += 1
            return s

        for w in words:
            w = reduce_word(w)
            cur = 0
            for i, (g, s) in enumerate(w):
                nxt = 0 if i == len(w) - 1 else new_state()
                if s > 0:
                    edges.append((cur, g, nxt))
                else:
                    edges.append((nxt, g, cur))
                cur = nxt
        states, delta, root = _fold(fresh[0], edges, 0)
        states, delta = _trim(states, delta, root)
        return SubgroupAutomaton._canonical(letters, states, delta, root)

    @staticmethod
    def from_schreier(letters, perms, basepoint):
        """Stabilizer of basepoint under a permutation action.

        perms: dict letter -> dict point -> point (total on a common
        finite point set).  The resulting automaton is complete, with one
        state per point reachable from the basepoint.
        """
        letters = tuple(sorted(set(letters), key=_sort_key))
        for a in letters:
            pa = perms[a]
            assert sorted(pa.values(), key=_sort_key) == \
                sorted(pa.keys(), key=_sort_key), "not a permutation"
        states = set()
        delta = {}
        frontier = [basepoint]
        states.add(basepoint)
        while frontier:
            p = frontier.pop()
            for a in letters:
                q = perms[a][p]
                delta[(p, a)] = q
                if q not in states:
                    states.add(q)
                    frontier.append(q)
        return SubgroupAutomaton._canonical(letters, states, delta, basepoint)

    @staticmethod
    def full_group(letters):
        """The whole free group: one state, every letter a loop."""
        letters = tuple(sorted(set(letters), key=_sort_key))
        return SubgroupAutomaton(letters, 1, {(0, a): 0 for a in letters})

    @staticmethod
    def _canonical(letters, states, delta, root):
        letters = tuple(sorted(set(letters), key=_sort_key))
        rdelta = {(v, a): u for (u, a), v in delta.items()}
        order = {root: 0}
        queue = [root]
        while queue:
            s = queue.pop(0)
            for a in letters:
                for nxt in (delta.get((s, a)), rdelta.get((s, a))):
                    if nxt is not None and nxt not in order:
                        order[nxt] = len(order)
                        queue.append(nxt)
        assert len(order) == len(states), "automaton not connected"
        new_delta = {(order[u], a): order[v] for (u, a), v in delta.items()}
        return SubgroupAutomaton(letters, len(states), new_delta)

    # -- tracing -----------------------------------------------------------

    def step(self, state, letter, sign):
        if sign > 0:
            return self.delta.get((state, letter))
        return self.rdelta.get((state, letter))

    def trace(self, word, start=0):
        s = start
        for g, sg in reduce_word(word):
            s = self.step(s, g, sg)
            if s is None:
                return None
        return s

    def contains(self, word):
        return self.trace(word) == 0

    def coset_state(self, word):
        """State reached from the root, or None; complete automata give
        the full Schreier coset action."""
        return self.trace(word)

    # -- structure ---------------------------------------------------------

    def transitions(self):
        return sorted(self.delta.items(),
                      key=lambda kv: (kv[0][0], _sort_key(kv[0][1])))

    def complete(self):
        need = self.n * len(self.letters)
        return len(self.delta) == need and len(self.rdelta) == need

    def index(self):
        return self.n if self.complete() else None

    def rank(self):
        return len(self.delta) - self.n + 1

    def spanning_paths(self):
        """Word from the root to each state along a BFS tree."""
        paths = {0: ()}
        queue = [0]
        while queue:
            s = queue.pop(0)
            for a in self.letters:
                t = self.delta.get((s, a))
                if t is not None and t not in paths:
                    paths[t] = paths[s] + ((a, +1),)
                    queue.append(t)
                t = self.rdelta.get((s, a))
                if t is not None and t not in paths:
                    paths[t] = paths[s] + ((a, -1),)
                    queue.append(t)
        return paths

    def generators(self):
        """Free basis: one word per transition off a spanning tree."""
        paths = self.spanning_paths()
        tree = set()
        for s, p in paths.items():
            if p:
                g, sg = p[-1]
                prev = self.step(s, g, -sg)
                tree.add((prev, g, s) if sg > 0 else (s, g, prev))
        gens = []
        for (u, a), v in self.transitions():
            if (u, a, v) in tree:
                continue
            gens.append(mul(paths[u], ((a, +1),), inv(paths[v])))
        return gens

    def conjugate_by(self, w):
        """Automaton of w^-1 H w."""
        return SubgroupAutomaton.from_words(
            self.letters, [mul(inv(w), g, w) for g in self.generators()])

    # -- comparisons -------------------------------------------------------

    def key(self):
        return (self.letters, self.n, tuple(self.transitions()))

    def same(self, other):
        """Structural equality of canonical forms."""
        return self.key() == other.key()

    def subgroup_equal(self, other):
        """Mutual membership of generators; independent of `same`."""
        return (all(other.contains(g) for g in self.generators()) and
                all(self.contains(g) for g in other.generators()))

    def __repr__(self):
        return "SubgroupAutomaton(%d states, rank %d%s)" % (
            self.n, self.rank(), ", complete" if self.complete() else "")
