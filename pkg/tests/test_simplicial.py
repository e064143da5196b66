import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pantsrig import rig, simplicial
from pantsrig.simplicial import Graph, SimplicialComplex


def complete(k: int) -> SimplicialComplex:
    return SimplicialComplex(combinations(range(k), 2))


def test_faces_are_downward_closed():
    X = SimplicialComplex([(0, 1, 2)])
    assert len(X.faces) == 7
    assert (0, 2) in X
    assert X.dim == 2 and X.is_pure()


def test_json_roundtrip():
    X = SimplicialComplex([(0, 1, 2), (2, 3)], vertices=[9])
    assert SimplicialComplex.from_dict(X.to_dict()) == X
    assert SimplicialComplex([]).to_json() == '{"facets": [], "vertices": []}'


def test_link_and_dual_link():
    X = SimplicialComplex([(0, 1, 2), (0, 2, 3)])
    L, dual = simplicial.link_and_dual_link(X, [0])
    assert set(L.facets) == {(1, 2), (2, 3)}
    assert {frozenset(e) for e in dual.edges} == {frozenset((1, 3))}
    with pytest.raises(ValueError):
        simplicial.link(X, [1, 3])


def test_join_of_edges_is_tetrahedron_boundary_part():
    J = simplicial.join(SimplicialComplex([(0, 1)]), SimplicialComplex([(2, 3)]))
    assert J.facets == [(0, 1, 2, 3)]
    tagged = simplicial.join(SimplicialComplex([(0,)]), SimplicialComplex([(0,)]))
    assert tagged.facets == [((0, 0), (1, 0))]


def test_flag_closure():
    hollow = SimplicialComplex(combinations(range(3), 2))
    assert not hollow.is_flag()
    assert simplicial.flag_closure(hollow).facets == [(0, 1, 2)]
    assert simplicial.flag_closure(hollow).is_flag()


def test_dual_graph_of_complete_graph():
    D = simplicial.dual_graph(complete(5))
    assert len(D.vertices) == 10
    # two edges of K5 are adjacent iff they share a vertex
    assert len(D.edges) == 5 * 6


def test_dual_graph_requires_purity():
    with pytest.raises(simplicial.NotPure):
        simplicial.dual_graph(SimplicialComplex([(0, 1, 2), (3, 4)]))


@pytest.mark.parametrize("k", [5, 6, 7])
def test_reconstruct_complete_graphs(k):
    assert rig.reconstruction_roundtrip(complete(k), 1)


def test_reconstruction_hypothesis_violation():
    # K4: each vertex star has only 3 edges, fewer than d+3 = 4
    with pytest.raises(simplicial.HypothesisViolation):
        simplicial.reconstruct_one_skeleton(simplicial.dual_graph(complete(4)), 1)


@given(st.integers(0, 10_000), st.sampled_from([1, 2]))
@settings(max_examples=25, deadline=None)
def test_reconstruction_random_planted(seed, d):
    X = rig.random_planted_complex(random.Random(seed), d)
    assert rig.reconstruction_roundtrip(X, d)


def test_automorphisms_of_simplex_boundary():
    X = SimplicialComplex(combinations(range(4), 3))
    gens, order = simplicial.automorphism_group(X)
    assert order == 24
    assert all(simplicial.is_automorphism(X, g) for g in gens)


def test_isomorphism_detects_relabeling():
    X = SimplicialComplex([(0, 1, 2), (1, 2, 3), (3, 4)])
    perm = {0: "a", 1: "b", 2: "c", 3: "d", 4: "e"}
    Y = SimplicialComplex([[perm[v] for v in f] for f in X.facets])
    iso = simplicial.find_isomorphism(X, Y)
    assert iso is not None
    assert {frozenset(iso[v] for v in f) for f in X.faces} == set(Y.faces)
    Z = SimplicialComplex([(0, 1, 2), (2, 3, 4)])
    assert not simplicial.is_isomorphic(X, Z)


def test_maximal_cliques():
    G = Graph(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    assert simplicial.maximal_cliques(G) == [(0, 1, 2), (2, 3), (3, 4)]
    assert simplicial.maximal_cliques(G, min_size=3) == [(0, 1, 2)]


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph([0, 1], [(0, 2)])
    with pytest.raises(ValueError):
        Graph([0, 1], [(0, 0)])


def test_octahedron_violates_hypothesis():
    # boundary of the octahedron: each edge lies in only two triangles
    X = SimplicialComplex((a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5))
    with pytest.raises(simplicial.HypothesisViolation):
        simplicial.reconstruct_one_skeleton(simplicial.dual_graph(X), 2)
