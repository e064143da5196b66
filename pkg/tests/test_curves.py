import random

import pytest
from hypothesis import given, settings, strategies as st

from pantsrig import curves as cv
from pantsrig import rig
from pantsrig.farey import Slope


@pytest.fixture(params=[4, 5, 6])
def tri(request):
    return cv.base_triangulation(request.param)


def test_base_triangulation_counts(tri):
    n = tri.n
    assert len(tri.edges) == 3 * n - 6
    assert len(tri.triangles) == 2 * n - 4
    tri.check()


def test_flip_is_involution(tri):
    rng = random.Random(1)
    for _ in range(50):
        x = cv.random_admissible(tri, rng)
        e = rng.choice([e for e in range(len(tri.edges)) if cv.is_flippable(tri, e)])
        T2, y = cv.flip(tri, x, e)
        assert cv.is_admissible(T2, y)
        T3, z = cv.flip(T2, y, e)
        assert z == x
        assert T3.cyclic_faces() == tri.cyclic_faces()


def test_inadmissible_rejected(tri):
    bad = (1,) + (0,) * (len(tri.edges) - 1)
    assert not cv.is_admissible(tri, bad)
    with pytest.raises(cv.InadmissibleCoords):
        cv.flip(tri, bad, 0)


def test_standard_curves_are_curves(tri):
    deg = cv.degrees(tri)
    for e in range(tri.n):
        c = tri.standard_curve(e)
        assert cv.is_curve(tri, c)
        seq, T2, c2, pos = cv.simplify_curve(tri, c)
        assert c2 == T2.standard_curve(pos.eps)
        if 2 in (deg[p] for p in tri.edges[e]):
            assert seq == []


def test_peripheral_components():
    T = cv.base_triangulation(5)
    comps = cv.trace_components(T, T.link(0))
    assert comps == [(T.link(0), True)]
    assert not cv.is_curve(T, T.link(0))


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_dehn_twist_inverts(seed):
    rng = random.Random(seed)
    T = cv.base_triangulation(rng.choice([4, 5]))
    gamma = rig.random_curve(T, rng, 3)
    delta = rig.random_curve(T, rng, 3)
    k = rng.choice([-2, -1, 1, 2])
    assert cv.dehn_twist(T, gamma, cv.dehn_twist(T, gamma, delta, k), -k) == delta


def test_dehn_twist_is_half_twist_squared():
    T = cv.base_triangulation(5)
    gamma, delta = T.standard_curve(1), T.standard_curve(2)
    assert cv.dehn_twist(T, gamma, delta) == cv.half_twist(T, gamma, cv.half_twist(T, gamma, delta))


def test_twist_fixes_curve_and_disjoint_curves():
    T = cv.base_triangulation(5)
    gamma, far = T.standard_curve(1), T.standard_curve(3)
    assert cv.disjoint(T, gamma, far)
    assert cv.dehn_twist(T, gamma, gamma) == gamma
    assert cv.dehn_twist(T, gamma, far) == far


def test_disjointness_states():
    T = cv.base_triangulation(5)
    a, b = T.standard_curve(1), T.standard_curve(2)
    assert cv.disjoint(T, a, b) is cv.Disjointness.CROSSING
    assert cv.disjoint(T, a, a) is cv.Disjointness.SAME_CURVE
    assert not cv.disjoint(T, a, a)


def test_additivity_of_disjoint_curves():
    T = cv.base_triangulation(5)
    a, b = T.standard_curve(1), T.standard_curve(3)
    comps = sorted(c for c, _ in cv.trace_components(T, cv.add(a, b)))
    assert comps == sorted([a, b])


@pytest.mark.parametrize("p, q", [(1, 0), (0, 1), (1, 1), (-1, 1), (2, 3), (-5, 7), (13, 4)])
def test_s04_dictionary_roundtrip(p, q):
    s = Slope.of(p, q)
    coords = cv.s04_coords(s)
    assert cv.s04_slope(coords) == s
    assert cv.is_curve(cv.base_triangulation(4), coords)


def test_s04_twist_matches_slope_model():
    T = cv.base_triangulation(4)
    inf = cv.s04_coords(Slope(1, 0))
    for s in sorted(rig.s04_slopes_within(3)):
        image = cv.s04_slope(cv.dehn_twist(T, inf, cv.s04_coords(s)))
        assert image == Slope.of(s.p + 2 * s.q, s.q) == cv.slope_twist(Slope(1, 0), s)


def test_slope_twist_about_other_curves():
    zero = Slope(0, 1)
    T = cv.base_triangulation(4)
    for s in [Slope(1, 0), Slope(1, 1), Slope(-2, 3)]:
        image = cv.dehn_twist(T, cv.s04_coords(zero), cv.s04_coords(s))
        assert cv.s04_slope(image) == cv.slope_twist(zero, s)
    with pytest.raises(ValueError):
        cv.slope_twist(zero, zero, surface=(0, 5))


@given(st.integers(-30, 30), st.integers(1, 30))
def test_slope_frame_in_sl2(p, q):
    s = Slope.of(p, q)
    a, b, c, d = cv.slope_frame(s)
    assert a * d - b * c == 1
    assert Slope.of(a, c) == s


def test_curve_json_roundtrip():
    T = cv.base_triangulation(5)
    c = T.standard_curve(2)
    assert cv.curve_from_json(cv.curve_to_json(T, c)) == (T, c)
    with pytest.raises(ValueError):
        cv.curve_from_json('{"triangulation":"other","coords":[]}')
