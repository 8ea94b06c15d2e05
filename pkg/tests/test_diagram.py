import itertools
import random

import pytest

from conftest import load, mat
from coxrigid.diagram import (INF, CoxeterMatrix, DiagramError, diagram_isomorphism, is_label_preserving,
                              odd_components, parse_diagram, relabel, render_diagram, sub_matrix)


def random_matrix(rng, n, labels=(2, 3, 4, 5, 6, INF)):
    gens = [f"g{i}" for i in range(n)]
    edges = [(u, v, rng.choice(labels)) for u, v in itertools.combinations(gens, 2)]
    return CoxeterMatrix.from_labels(gens, [e for e in edges if e[2] != INF])


def test_parse_single_edge():
    M = parse_diagram("vertices: s t\nedge s t 3")
    assert M.generators == ("s", "t")
    assert M.m("s", "t") == 3 and M.m("t", "s") == 3 and M.m("s", "s") == 1


def test_parse_fig3_right_absent_edges_are_inf():
    M = parse_diagram("vertices: a b c d\nedge a b 3\nedge b c 2\nedge c d 3")
    assert M.m("a", "c") == M.m("a", "d") == M.m("b", "d") == INF
    assert M == load("fig3_right")


def test_parse_comments_and_inf_token():
    M = parse_diagram("# a comment\nvertices: y x   # trailing\n\nedge x y inf\n")
    assert M.generators == ("x", "y")
    assert M.m("x", "y") == INF


@pytest.mark.parametrize("text", [
    "vertices: s t\nedge s t 1",
    "vertices: s t\nedge s t 0",
    "vertices: s s",
    "vertices: s t\nedge s u 3",
    "vertices: s t\nedge s t 3\nedge t s 4",
    "vertices: s t\nedge s s 3",
    "vertices: s t\nedge s t three",
    "edge s t 3",
    "vertices: s\nvertices: t",
    "vertices: s-1 t",
    "vertices:",
])
def test_parse_errors(text):
    with pytest.raises(DiagramError):
        parse_diagram(text)


def test_repeated_identical_edge_is_fine():
    M = parse_diagram("vertices: s t\nedge s t 3\nedge t s 3")
    assert M.m("s", "t") == 3


def test_rank_and_label_caps():
    names = " ".join(f"v{i}" for i in range(13))
    with pytest.raises(DiagramError):
        parse_diagram(f"vertices: {names}")
    assert parse_diagram(f"vertices: {names}", rank_cap=13).rank == 13
    with pytest.raises(DiagramError):
        parse_diagram("vertices: s t\nedge s t 1001")
    assert parse_diagram("vertices: s t\nedge s t 1001", label_cap=2000).m("s", "t") == 1001


def test_render_single_edge():
    assert render_diagram(mat("s t", ("s", "t", 3))) == "vertices: s t\nedge s t 3"


def test_render_sorts_and_omits_inf():
    M = parse_diagram("vertices: c a b\nedge c b 2\nedge b a 4\nedge a c inf")
    assert render_diagram(M) == "vertices: a b c\nedge a b 4\nedge b c 2"


def test_round_trip_figures(figure):
    _, M = figure
    assert parse_diagram(render_diagram(M)) == M
    assert render_diagram(parse_diagram(render_diagram(M))) == render_diagram(M)


def test_round_trip_random():
    rng = random.Random(1)
    for _ in range(200):
        M = random_matrix(rng, rng.randint(1, 7))
        assert parse_diagram(render_diagram(M)) == M


def test_equal_iff_render_equal():
    rng = random.Random(2)
    ms = [random_matrix(rng, 3, labels=(2, 3, INF)) for _ in range(60)]
    for A, B in itertools.combinations(ms, 2):
        assert (A == B) == (render_diagram(A) == render_diagram(B))


def test_isomorphism_relabeled_copy():
    M = load("fig3_left")
    N = relabel(M, {"a": "x", "b": "y", "c": "z"})
    psi = diagram_isomorphism(M, N)
    assert psi == {"a": "x", "b": "y", "c": "z"}


def test_isomorphism_negative_examples():
    assert diagram_isomorphism(load("fig1_left_k3"), load("fig1_right_k3")) is None
    assert diagram_isomorphism(load("fig2_left"), load("fig2_right")) is None


def test_fig2_non_isomorphic_by_exhaustion():
    L, R = load("fig2_left"), load("fig2_right")
    for perm in itertools.permutations(R.generators):
        assert not is_label_preserving(L, R, dict(zip(L.generators, perm)))


def test_isomorphism_reflexive_symmetric_transitive():
    rng = random.Random(3)
    corpus = []
    for _ in range(40):
        M = random_matrix(rng, 4, labels=(2, 3, INF))
        names = [f"h{i}" for i in range(4)]
        rng.shuffle(names)
        corpus.append(M)
        corpus.append(relabel(M, dict(zip(M.generators, names))))
    iso = {}
    for i, A in enumerate(corpus):
        assert diagram_isomorphism(A, A) is not None
        for j, B in enumerate(corpus):
            psi = diagram_isomorphism(A, B)
            iso[i, j] = psi is not None
            if psi is not None:
                assert is_label_preserving(A, B, psi)
    n = len(corpus)
    for i in range(n):
        for j in range(n):
            assert iso[i, j] == iso[j, i]
            if iso[i, j]:
                assert all(iso[i, k] == iso[j, k] for k in range(n))


def test_isomorphism_is_deterministic_and_lexicographic():
    # the all-2 triangle has six automorphisms; the identity comes first
    M = mat("a b c", ("a", "b", 2), ("a", "c", 2), ("b", "c", 2))
    assert diagram_isomorphism(M, M) == {"a": "a", "b": "b", "c": "c"}
    N = mat("x y z", ("x", "y", 2), ("x", "z", 2), ("y", "z", 2))
    assert diagram_isomorphism(M, N) == {"a": "x", "b": "y", "c": "z"}


def test_odd_components_examples():
    right_angled = mat("a b c", ("a", "b", 2), ("a", "c", 2), ("b", "c", 2))
    assert odd_components(right_angled) == [("a",), ("b",), ("c",)]
    assert odd_components(load("fig3_left")) == [("a", "b"), ("c",)]
    assert odd_components(load("fig1_right_k3")) == [("s", "t"), ("u",)]


def test_odd_components_refine_finite_components():
    rng = random.Random(4)
    for _ in range(100):
        M = random_matrix(rng, rng.randint(1, 6))
        # components of the finite-label graph
        comp = {g: {g} for g in M.generators}
        for u, v, _ in M.edges():
            merged = comp[u] | comp[v]
            for g in merged:
                comp[g] = merged
        blocks = odd_components(M)
        assert sorted(g for b in blocks for g in b) == list(M.generators)
        for b in blocks:
            assert set(b) <= comp[b[0]]


def test_sub_matrix():
    M = load("fig2_left")
    assert render_diagram(sub_matrix(M, {"b", "c"})) == "vertices: b c\nedge b c 3"
    assert sub_matrix(M, M.generators) == M
    assert sub_matrix(M, set()).rank == 0
    with pytest.raises(DiagramError):
        sub_matrix(M, {"z"})


def test_matrix_invariants_enforced():
    with pytest.raises(DiagramError):
        CoxeterMatrix(("b", "a"), ((1, 2), (2, 1)))
    with pytest.raises(DiagramError):
        CoxeterMatrix(("a", "b"), ((1, 2), (3, 1)))
    with pytest.raises(DiagramError):
        CoxeterMatrix(("a", "b"), ((2, 2), (2, 1)))
