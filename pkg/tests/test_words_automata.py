"""Free-group words and subgroup automata.

Membership gets two independent oracles: bounded products of generators
certify members directly, and permutation actions decide stabilizer
membership exactly in both directions.
"""

import random
from itertools import product as iproduct

from hypothesis import given, settings, strategies as st

from modalfib.words import (
    reduce_word, mul, inv, conj, power,
    cyclic_reduce, is_cyclically_reduced, primitive_root,
    conjugacy_witness, solve_simultaneous_conjugacy, Unknown,
)
from modalfib.automata import SubgroupAutomaton
from modalfib.corpus import random_words, random_permutation

letters2 = st.tuples(st.integers(0, 1), st.sampled_from((-1, +1)))
raw_words = st.lists(letters2, max_size=10).map(tuple)


# ---------------------------------------------------------------------------
# Word laws.

@given(raw_words)
def test_reduce_idempotent(w):
    r = reduce_word(w)
    assert reduce_word(r) == r
    for (g1, s1), (g2, s2) in zip(r, r[1:]):
        assert not (g1 == g2 and s1 == -s2)


@given(raw_words, raw_words, raw_words)
def test_mul_associative(a, b, c):
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


@given(raw_words)
def test_inverse_cancels(w):
    assert mul(w, inv(w)) == ()
    assert mul(inv(w), w) == ()
    assert inv(inv(w)) == tuple(w)
    assert reduce_word(inv(w)) == inv(reduce_word(w))


@given(raw_words, raw_words)
def test_conj_is_hom(p, w):
    assert conj(p, ()) == ()
    assert conj(p, mul(w, w)) == mul(conj(p, w), conj(p, w))


@given(raw_words)
def test_cyclic_reduce_reassembles(w):
    core, pre = cyclic_reduce(w)
    assert is_cyclically_reduced(core)
    assert mul(pre, core, inv(pre)) == reduce_word(w)


def test_primitive_root_cases():
    a, b = (0, +1), (1, +1)
    w = (a, b, a, b, a, b)
    r, k = primitive_root(w)
    assert r == (a, b) and k == 3
    r, k = primitive_root((a,))
    assert r == (a,) and k == 1
    r, k = primitive_root((a, b))
    assert k == 1


def brute_conjugate(a, b, max_len=4):
    """Search all short words for a witness h^-1 a h == b."""
    alphabet = [(0, +1), (0, -1), (1, +1), (1, -1)]
    frontier = [()]
    for _ in range(max_len + 1):
        nxt = []
        for h in frontier:
            if mul(inv(h), a, h) == reduce_word(b):
                return h
            for l in alphabet:
                if h and h[-1] == (l[0], -l[1]):
                    continue
                nxt.append(h + (l,))
        frontier = nxt
    return None


def test_conjugacy_witness_positive():
    rng = random.Random(201)
    for _ in range(80):
        w = random_words(rng, 2, 1, 6)[0]
        p = random_words(rng, 2, 1, 4)[0]
        a = conj(p, w)
        h = conjugacy_witness(a, w)
        assert h is not None
        assert mul(inv(h), a, h) == reduce_word(w)


def test_conjugacy_witness_negative_by_abelianization():
    rng = random.Random(202)
    checked = 0
    for _ in range(120):
        a = random_words(rng, 2, 1, 5)[0]
        b = random_words(rng, 2, 1, 5)[0]

        def abel(w):
            e = [0, 0]
            for g, s in w:
                e[g] += s
            return tuple(e)

        if abel(a) != abel(b):
            assert conjugacy_witness(a, b) is None
            checked += 1
    assert checked > 20


def test_conjugacy_witness_agrees_with_brute_force():
    rng = random.Random(203)
    for _ in range(60):
        a = random_words(rng, 2, 1, 4)[0]
        b = random_words(rng, 2, 1, 4)[0]
        brute = brute_conjugate(a, b)
        smart = conjugacy_witness(a, b)
        if brute is not None:
            assert smart is not None
        if smart is not None:
            assert mul(inv(smart), a, smart) == reduce_word(b)


def test_simultaneous_conjugacy_positive():
    rng = random.Random(204)
    for _ in range(60):
        n = rng.randint(1, 4)
        gens = random_words(rng, 2, n, 5)
        h = random_words(rng, 2, 1, 5)[0]
        pairs = [(a, mul(inv(h), a, h)) for a in gens]
        got = solve_simultaneous_conjugacy(pairs)
        assert got is not None and not isinstance(got, Unknown)
        for a, b in pairs:
            assert mul(inv(got), a, got) == reduce_word(b)


def test_simultaneous_conjugacy_negative():
    x = ((0, +1),)
    y = ((1, +1),)
    # each pair solvable alone, but the solution sets miss each other:
    # the first forces h into the powers of x, the second needs a word
    # ending in y x y up to the centralizer of y.
    w = mul(y, x, y)
    pairs = [(x, x), (y, mul(inv(w), y, w))]
    assert solve_simultaneous_conjugacy(pairs) is None
    # plainly non-conjugate second coordinate
    assert solve_simultaneous_conjugacy([(x, x), (y, inv(y))]) is None


def test_simultaneous_conjugacy_user_bound_reports_unknown():
    x = ((0, +1),)
    y = ((1, +1),)
    h = power(x, 9)
    pairs = [(x, x), (conj(y, x), mul(inv(h), conj(y, x), h))]
    full = solve_simultaneous_conjugacy(pairs)
    assert full is not None and not isinstance(full, Unknown)
    cut = solve_simultaneous_conjugacy(pairs, max_power=1)
    assert isinstance(cut, Unknown) or cut is not None


# ---------------------------------------------------------------------------
# Automata: membership, completeness, rank.

def closure(gens, depth):
    """All reduced products of up to `depth` generator factors."""
    factors = [reduce_word(g) for g in gens] + [inv(g) for g in gens]
    seen = {()}
    frontier = {()}
    for _ in range(depth):
        nxt = set()
        for w in frontier:
            for f in factors:
                r = mul(w, f)
                if r not in seen:
                    seen.add(r)
                    nxt.add(r)
        frontier = nxt
    return seen


def test_membership_accepts_bounded_closure():
    rng = random.Random(301)
    for _ in range(40):
        gens = random_words(rng, 2, rng.randint(1, 3), 4)
        A = SubgroupAutomaton.from_words((0, 1), gens)
        for w in closure(gens, 4):
            assert A.contains(w), (gens, w)


def test_membership_exact_against_permutation_action():
    # stabilizers decided independently by multiplying permutations
    rng = random.Random(302)
    for _ in range(40):
        n = rng.randint(2, 5)
        perms = {0: random_permutation(rng, n), 1: random_permutation(rng, n)}
        A = SubgroupAutomaton.from_schreier((0, 1), perms, 1)

        def act(w, p):
            for g, s in w:
                table = perms[g]
                if s > 0:
                    p = table[p]
                else:
                    p = next(k for k, v in table.items() if v == p)
            return p

        for w in random_words(rng, 2, 30, 8):
            assert A.contains(w) == (act(w, 1) == 1), (perms, w)


def test_schreier_automaton_complete_with_orbit_index():
    rng = random.Random(303)
    for _ in range(30):
        n = rng.randint(1, 6)
        perms = {0: random_permutation(rng, n), 1: random_permutation(rng, n)}
        A = SubgroupAutomaton.from_schreier((0, 1), perms, 1)
        assert A.complete()
        # orbit of 1 under the group generated by both permutations
        orbit = {1}
        frontier = [1]
        while frontier:
            p = frontier.pop()
            for t in perms.values():
                q = t[p]
                if q not in orbit:
                    orbit.add(q)
                    frontier.append(q)
        assert A.index() == len(orbit)
        # Nielsen-Schreier: finite index n in rank 2 gives rank n + 1
        assert A.rank() == len(orbit) + 1


def test_generators_regenerate_same_automaton():
    rng = random.Random(304)
    for _ in range(40):
        gens = random_words(rng, 2, rng.randint(1, 4), 5)
        A = SubgroupAutomaton.from_words((0, 1), gens)
        B = SubgroupAutomaton.from_words((0, 1), A.generators())
        assert A.same(B)
        assert A.subgroup_equal(B)
        assert len(A.generators()) == A.rank()


def test_structural_equality_survives_nielsen_moves():
    rng = random.Random(305)
    for _ in range(30):
        gens = random_words(rng, 2, rng.randint(2, 4), 4)
        A = SubgroupAutomaton.from_words((0, 1), gens)
        moved = list(gens)
        moved[0] = mul(moved[0], moved[1])
        rng.shuffle(moved)
        B = SubgroupAutomaton.from_words((0, 1), moved)
        assert A.same(B)
        assert A.subgroup_equal(B)


def test_distinct_subgroups_differ():
    a = ((0, +1),)
    A1 = SubgroupAutomaton.from_words((0, 1), [a])
    A2 = SubgroupAutomaton.from_words((0, 1), [power(a, 2)])
    assert not A1.same(A2)
    assert not A1.subgroup_equal(A2)
    assert A1.contains(a) and not A2.contains(a)
    assert A2.contains(power(a, 2))


def test_index_two_subgroup():
    a, b = ((0, +1),), ((1, +1),)
    H = SubgroupAutomaton.from_words(
        (0, 1), [power(a, 2), b, mul(a, b, inv(a))])
    assert H.complete()
    assert H.index() == 2
    assert H.rank() == 3
    assert not H.contains(a)
    assert H.contains(mul(a, b, a))


def test_full_group_automaton():
    F = SubgroupAutomaton.full_group((0, 1))
    assert F.complete() and F.index() == 1 and F.rank() == 2
    rng = random.Random(306)
    for w in random_words(rng, 2, 20, 6):
        assert F.contains(w)


def test_conjugate_by_translates_membership():
    rng = random.Random(307)
    for _ in range(30):
        gens = random_words(rng, 2, rng.randint(1, 3), 4)
        w = random_words(rng, 2, 1, 4)[0]
        H = SubgroupAutomaton.from_words((0, 1), gens)
        Hw = H.conjugate_by(w)
        for h in closure(gens, 3):
            assert Hw.contains(mul(inv(w), h, w))
        assert Hw.conjugate_by(inv(w)).same(H)


def test_trivial_and_hanging_tree_cases():
    T = SubgroupAutomaton.from_words((0, 1), [])
    assert T.rank() == 0 and T.n == 1 and not T.complete()
    assert T.contains(())
    assert not T.contains(((0, +1),))
    # a conjugated generator folds through a hanging path, then trims
    a, b = ((0, +1),), ((1, +1),)
    H = SubgroupAutomaton.from_words((0, 1), [mul(a, b, inv(a))])
    assert H.rank() == 1
    assert H.contains(mul(a, b, inv(a)))
    assert not H.contains(b)
    assert not H.contains(a)


def test_coset_states_partition_words():
    # words reach the same state iff they differ by a subgroup element
    rng = random.Random(308)
    a, b = ((0, +1),), ((1, +1),)
    H = SubgroupAutomaton.from_words((0, 1), [power(a, 2), b, mul(a, b, inv(a))])
    for w1 in random_words(rng, 2, 15, 5):
        for w2 in random_words(rng, 2, 3, 5):
            same_state = H.coset_state(w1) == H.coset_state(w2)
            assert same_state == H.contains(mul(w1, inv(w2)))
