import itertools
import random
from collections import deque

import pytest

from conftest import catalogue, load, mat, path
from coxrigid.diagram import INF
from coxrigid.enumeration import build_group
from coxrigid.rigidity import check_conditions
from coxrigid.spherical import is_spherical
from coxrigid.words import (OrbitCapExceeded, ReducedWord, WordError, conjugate, element_order, format_word,
                            in_parabolic, left_descents, length, parse_word, reduce, rewrite_randomly, support,
                            words_equal)

ST3 = mat("s t", ("s", "t", 3))
ST2 = mat("s t", ("s", "t", 2))
ST5 = mat("s t", ("s", "t", 5))


def W(text):
    return tuple(text.split()) if text != "e" else ()


def naive_reduce(M, w):
    """Plain braid-orbit rewriting with no commutation shortcut; returns the lex-least orbit word."""
    w = tuple(w)
    while True:
        seen, queue, shorter = {w}, deque([w]), None
        while queue and shorter is None:
            u = queue.popleft()
            for i in range(len(u) - 1):
                if u[i] == u[i + 1]:
                    shorter = u[:i] + u[i + 2:]
                    break
            if shorter is not None:
                break
            for i in range(len(u)):
                for s, t in itertools.permutations(M.generators, 2):
                    m = M.m(s, t)
                    if m == INF or i + m > len(u):
                        continue
                    alt = tuple(s if k % 2 == 0 else t for k in range(m))
                    if u[i:i + m] == alt:
                        v = u[:i] + tuple(t if k % 2 == 0 else s for k in range(m)) + u[i + m:]
                        if v not in seen:
                            seen.add(v)
                            queue.append(v)
        if shorter is None:
            return min(seen)
        w = shorter


# ---------------------------------------------------------------- examples

def test_reduce_examples():
    assert reduce(ST3, W("s s")).letters == ()
    assert reduce(ST3, W("s t s t s t")).letters == ()
    assert reduce(ST2, W("t s")).letters == ("s", "t")
    assert isinstance(reduce(ST3, ()), ReducedWord)


def test_words_equal_examples():
    assert words_equal(ST3, W("s t s"), W("t s t"))
    assert not words_equal(ST3, W("s"), W("t"))
    M = load("fig2_left")
    assert words_equal(M, W("c b c d c b c"), W("c b d b c"))


def test_length_examples():
    assert length(ST3, ()) == 0
    assert length(ST3, W("s t s")) == 3
    assert length(ST3, W("s t s t")) == 2
    assert reduce(ST3, W("s t s t")).letters == ("t", "s")


def test_support_examples():
    assert support(ST3, W("s t s")) == {"s", "t"}
    assert support(ST3, ()) == frozenset()
    assert support(ST3, W("s t s t")) == {"s", "t"}


def test_in_parabolic_examples():
    M = load("fig2_left")
    assert in_parabolic(M, W("b c b"), {"b", "c"})
    assert not in_parabolic(M, W("a"), {"b", "c"})
    assert in_parabolic(M, W("c d c"), {"d"})


def test_left_descents_examples():
    M = load("fig3_left")
    assert left_descents(M, ()) == frozenset()
    assert left_descents(M, W("a")) == {"a"}
    assert left_descents(M, W("a b")) == {"a"}


def test_element_order_examples():
    assert element_order(ST5, W("s t"), 50) == 5
    assert element_order(ST5, W("s"), 50) == 2
    assert element_order(load("fig3_left"), W("a c"), 50) is None


def test_conjugate_examples():
    M = load("fig2_left")
    assert conjugate(ST3, (), W("s")) == ("s",)
    assert conjugate(M, W("c"), W("d")) == ("d",)
    assert conjugate(M, W("b"), W("c")) == ("b", "c", "b")


def test_parse_and_format():
    assert parse_word(ST3, "e") == ()
    assert parse_word(ST3, "s t  s") == ("s", "t", "s")
    assert format_word(()) == "e"
    with pytest.raises(WordError):
        parse_word(ST3, "s x")


def test_caps():
    with pytest.raises(WordError):
        reduce(ST3, ("s",) * 41)
    assert reduce(ST3, ("s",) * 41, word_cap=50).letters == ("s",)
    with pytest.raises(WordError):
        reduce(ST3, ("q",))
    # orbit of a long reduced word in an infinite group, capped low
    M = load("fig3_right")
    with pytest.raises(OrbitCapExceeded):
        reduce(M, W("a b a c d c a b a c d c"), orbit_cap=1)


def test_element_order_powers_exceed_word_cap():
    # (a c) has infinite order; its powers grow past the word cap without error
    assert element_order(load("fig3_left"), W("a c"), 30, word_cap=2) is None


# ---------------------------------------------------------------- oracles

def test_reduce_matches_naive_rewriter():
    rng = random.Random(11)
    ms = [load("fig2_left"), load("fig3_right"), path([4, 3]), path([5, 3])]
    for M in ms:
        for _ in range(150):
            w = tuple(rng.choice(M.generators) for _ in range(rng.randint(0, 9)))
            assert reduce(M, w, word_cap=None).letters == naive_reduce(M, w)


def test_length_matches_group_table_distance():
    for name in ("B3", "H3", "D4", "I2(3)xA1"):
        M, _ = catalogue()[name]
        G = build_group(M)
        # BFS words from the table are shortest words
        rng = random.Random(12)
        for g in rng.sample(range(G.order), min(G.order, 120)):
            w = G.elt_words[g]
            r = reduce(M, w, word_cap=None)
            assert len(r) == len(w)
            assert G.word_to_element(r.letters) == g


def test_canonical_forms_separate_group_elements():
    M, order = catalogue()["B3"]
    G = build_group(M)
    forms = {reduce(M, w).letters for w in G.elt_words}
    assert len(forms) == order


# ---------------------------------------------------------------- properties

def random_words(M, count, max_len, seed):
    rng = random.Random(seed)
    return [tuple(rng.choice(M.generators) for _ in range(rng.randint(0, max_len))) for _ in range(count)]


@pytest.mark.parametrize("name", ["fig3_left", "fig3_right", "fig2_left", "fig1_right_k3"])
def test_word_properties(name):
    M = load(name)
    rng = random.Random(13)
    for w in random_words(M, 300, 10, 14):
        r = reduce(M, w).letters
        assert reduce(M, r).letters == r
        assert words_equal(M, w, r)
        assert (len(w) - len(r)) % 2 == 0
        assert set(rewrite_randomly(M, w, rng)) == set(r)
        n = len(r)
        desc = left_descents(M, r)
        assert is_spherical(M, desc)
        for s in desc:
            assert length(M, (s,) + r) == n - 1


def test_order_consistency(figure):
    _, M = figure
    for s, t in itertools.combinations(M.generators, 2):
        m = M.m(s, t)
        if m != INF:
            assert element_order(M, (s, t), m + 1) == m


# -------------------------------------------------- conjugation suites

# satisfies (0)-(3): p-q odd, {q,r,s} and {r,s,t} right-angled, t-u odd
LEMMA_MATRIX = mat("p q r s t u", ("p", "q", 3), ("q", "r", 2), ("q", "s", 2), ("r", "s", 2),
                   ("r", "t", 2), ("s", "t", 2), ("t", "u", 5))


def short_elements(M, max_len):
    out = {()}
    frontier = {()}
    for _ in range(max_len):
        frontier = {reduce(M, x + (g,)).letters for x in frontier for g in M.generators}
        out |= frontier
    return sorted(out, key=lambda x: (len(x), x))


def commuting_subsets(M, min_size=2):
    out = []
    for r in range(min_size, M.rank + 1):
        for T in itertools.combinations(M.generators, r):
            if all(M.m(a, b) == 2 for a, b in itertools.combinations(T, 2)):
                out.append(T)
    return out


@pytest.mark.parametrize("M", [LEMMA_MATRIX, load("fig3_right"), load("fig3_left")],
                         ids=["lemma_matrix", "fig3_right", "fig3_left"])
def test_lemma_matrices_satisfy_conditions(M):
    assert check_conditions(M).all_conditions


def test_conjugate_of_commuting_product_is_itself():
    M = LEMMA_MATRIX
    prods = {T: reduce(M, T).letters for T in commuting_subsets(M)}
    assert len(prods) >= 4
    for x in short_elements(M, 4):
        for v in prods.values():
            c = conjugate(M, x, v)
            for w in prods.values():
                if c == w:
                    assert words_equal(M, w, v)


def test_conjugate_into_parabolic_lands_in_intersection():
    M = LEMMA_MATRIX
    subsets = commuting_subsets(M)
    xs = short_elements(M, 4)
    for U in subsets:
        elements_u = [reduce(M, c).letters for r in range(len(U) + 1) for c in itertools.combinations(U, r)]
        for x in xs:
            for u in elements_u:
                c = conjugate(M, x, u)
                for T in subsets:
                    if in_parabolic(M, c, T):
                        assert in_parabolic(M, c, set(T) & set(U))
