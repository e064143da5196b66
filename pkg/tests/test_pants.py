import json

import pytest

from pantsrig import curves as cv
from pantsrig import pants
from pantsrig.farey import Slope, farey_adjacent


@pytest.fixture(scope="module")
def s05_ball():
    return pants.bfs_ball((0, 5), 2, 3)


def test_s05_first_shell():
    ball = pants.bfs_ball((0, 5), 1, 3)
    # two Farey families through the base vertex, 2B+1 neighbors each minus the base itself
    assert len(ball.vertices) == 1 + 2 * 7
    assert len(ball.families()) == 2


def test_s05_invariants(s05_ball):
    assert pants.check_ball(s05_ball) == []


def test_every_edge_shares_one_curve(s05_ball):
    for i, j in s05_ball.edges:
        shared = set(s05_ball.vertices[i].curves) & set(s05_ball.vertices[j].curves)
        assert len(shared) == 1


def test_recovery_on_interior_edges(s05_ball):
    frontier = s05_ball.frontier
    families = s05_ball.families()
    for (i, j), label in s05_ball.edges.items():
        if frontier[i] or frontier[j]:
            continue
        expected = {x for x in families[label] if not frontier[x]}
        assert pants.recover_farey_subgraph(s05_ball, (i, j)) == expected


def test_recovery_rejects_frontier_edge(s05_ball):
    frontier = s05_ball.frontier
    edge = next(e for e in s05_ball.edges if frontier[e[0]] or frontier[e[1]])
    with pytest.raises(pants.InsufficientBall):
        pants.recover_farey_subgraph(s05_ball, edge)


def test_s05_vertices_are_disjoint_pairs(s05_ball):
    T = cv.base_triangulation(5)
    for v in s05_ball.vertices:
        a, b = v.curves
        assert cv.is_curve(T, a) and cv.is_curve(T, b)
        assert cv.disjoint(T, a, b)


def test_twist_symmetry_preserves_adjacency(s05_ball):
    images = pants.twist_ball(s05_ball, "g")
    for i, j in s05_ball.edges:
        shared = set(images[i].curves) & set(images[j].curves)
        assert len(shared) == 1


@pytest.mark.parametrize("s", [(1, 1), (0, 4)])
@pytest.mark.parametrize("radius", [1, 2, 3])
def test_d1_balls_are_farey(s, radius):
    ball = pants.bfs_ball(s, radius, 3)
    assert pants.slope_ball_matches_farey(ball)
    assert pants.check_ball(ball) == []


def test_d1_neighbor_window():
    v = pants.base_decomposition((1, 1))
    nbrs = pants.farey_neighbors((1, 1), v, Slope(0, 1), 2)
    assert len(nbrs) == 5
    assert all(farey_adjacent(Slope(0, 1), w.curves[0]) for w in nbrs)


def test_curve_ball_matches_slope_ball():
    curve_ball = pants.s04_curve_ball(2, 3)
    slope_ball = pants.bfs_ball((0, 4), 2, 3)
    as_slopes = {frozenset(cv.s04_slope(curve_ball.vertices[x].curves[0]) for x in e) for e in curve_ball.edges}
    by_slope = {frozenset(slope_ball.vertices[x].curves[0] for x in e) for e in slope_ball.edges}
    assert as_slopes == by_slope


def test_json_schema_and_determinism(s05_ball):
    text = s05_ball.to_json()
    assert text == pants.bfs_ball((0, 5), 2, 3).to_json()
    data = json.loads(text)
    assert set(data) == {"surface", "radius", "width", "vertices", "edges"}
    assert {"u", "v", "family"} <= set(data["edges"][0])


def test_embed_dual_graph_completes_families(s05_ball):
    G = pants.embed_dual_graph(s05_ball)
    assert set(map(frozenset, s05_ball.edges)) <= set(G.edges)


def test_unsupported_surface():
    with pytest.raises(pants.UnsupportedSurface):
        pants.bfs_ball((1, 2), 1, 2)
    with pytest.raises(ValueError):
        pants.farey_neighbors((1, 1), pants.base_decomposition((1, 1)), Slope(0, 1), 0)


def test_bounds():
    with pytest.raises(ValueError):
        pants.bfs_ball((0, 5), pants.MAX_RADIUS + 1, 2)
    with pytest.raises(ValueError):
        pants.bfs_ball((0, 5), 1, pants.MAX_WIDTH + 1)
