import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pantsrig import farey
from pantsrig.farey import Slope


def sl2_order_by_count(m: int) -> int:
    return sum(1 for a in range(m) for b in range(m) for c in range(m) for d in range(m) if (a * d - b * c) % m == 1)


@pytest.mark.parametrize("m", range(2, 9))
def test_psl2_order_against_enumeration(m):
    sl2 = sl2_order_by_count(m)
    assert farey.psl2_order(m) == (sl2 if m == 2 else sl2 // 2)
    assert len(farey.psl2_elements(m)) == farey.psl2_order(m)


@pytest.mark.parametrize("m, counts", [(2, (3, 3, 2)), (3, (4, 6, 4)), (4, (6, 12, 8)),
                                       (5, (12, 30, 20)), (6, (12, 36, 24)), (7, (24, 84, 56))])
def test_census(m, counts):
    assert farey.build_quotient(m).counts == counts


def test_two_triangle_sphere():
    Q = farey.build_quotient(2)
    assert len(Q.triangles) == 2
    assert len({frozenset(Q.triangles[0]), frozenset(Q.triangles[1])}) == 1


@pytest.mark.parametrize("m", range(2, 14))
def test_gauss_bonnet_exact(m):
    inv = farey.flat_invariants(farey.build_quotient(m))
    assert inv.gb_residue == 0
    assert all(isinstance(a, Fraction) for a in inv.angles)
    assert set(inv.angles) == {Fraction(m, 3)}


def test_genus_sequence():
    assert [farey.flat_invariants(farey.build_quotient(m)).genus for m in range(2, 8)] == [0, 0, 0, 0, 1, 3]


@pytest.mark.parametrize("m, order", [(2, 12), (3, 24), (4, 48), (5, 120)])
def test_automorphism_orders(m, order):
    data = farey.quotient_automorphisms(farey.build_quotient(m))
    assert data.order == order
    assert data.orientation_preserving_order == order // 2


def test_reflection_and_left_action():
    Q = farey.build_quotient(5)
    refl = farey.reflection(Q)
    assert farey.is_cell_automorphism(Q, refl) and not farey.preserves_orientation(Q, refl)
    for h in (farey.T_GEN, farey.S_GEN, farey.R_GEN):
        f = farey.left_action(Q, h)
        assert farey.is_cell_automorphism(Q, f) and farey.preserves_orientation(Q, f)
    data = farey.quotient_automorphisms(Q)
    assert farey.in_group(Q, data.generators, refl, data.order)


def test_automorphism_bound():
    with pytest.raises(ValueError):
        farey.quotient_automorphisms(farey.build_quotient(7), bound=10)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_bfs_matches_coset_construction(m):
    assert farey.bfs_matches_quotient(m)


def test_projection_is_functorial():
    f12_6 = farey.project_quotient(12, 6)
    f6_2 = farey.project_quotient(6, 2)
    assert f12_6.compose(f6_2) == farey.project_quotient(12, 2)
    with pytest.raises(ValueError):
        farey.project_quotient(6, 4)


def test_serialization_is_stable():
    Q = farey.build_quotient(5)
    assert Q.to_json() == farey.build_quotient(5).to_json()
    data = json.loads(Q.to_json())
    assert data["m"] == 5
    dot = Q.to_dot()
    assert dot.count(" -- ") == 30


def test_invariant_csv():
    text = farey.invariant_csv(range(2, 8))
    lines = text.strip().splitlines()
    assert lines[0] == "m,V,E,T,chi,genus,autOrder"
    assert len(lines) == 7


@given(st.integers(-50, 50), st.integers(1, 50))
def test_slope_canonical_form(p, q):
    s = Slope.of(p, q)
    assert s == Slope.of(-p, -q)
    assert s.q > 0
    assert Slope.of(2 * p, 2 * q) == s


def test_slope_validation():
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        Slope.of(0, 0)
    assert farey_adjacent_pairs() == 3


def farey_adjacent_pairs():
    s = [Slope.infinity(), Slope(0, 1), Slope(1, 1)]
    return sum(farey.farey_adjacent(a, b) for i, a in enumerate(s) for b in s[i + 1:])
