import json

import pytest

from pantsrig import farey, rig, simplicial
from pantsrig.surfaces import SurfaceType


def test_registry_ids():
    assert rig.check_ids() == sorted([
        "collisions", "curves", "farey-aut", "farey-bfs", "farey-census", "farey-projection",
        "gauss-bonnet", "pants-ball", "reconstruction", "sep-nsep", "stable-enum",
    ])


def test_unknown_check_and_params():
    with pytest.raises(KeyError):
        rig.verify("nope")
    with pytest.raises(ValueError):
        rig.verify("farey-aut", bogus=1)


def test_farey_aut_at_level_three():
    r = rig.verify("farey-aut", levels=[3])
    assert r.passed
    assert r.computed == {"3": {"order": 24, "orientation_preserving": 12}}


def test_gauss_bonnet_single_level():
    r = rig.verify("gauss-bonnet", levels=[7])
    assert r.passed and r.computed["residue"] == {"7": "0"}


def test_report_schema():
    r = rig.verify("farey-census", levels=[2, 3])
    d = json.loads(r.to_json())
    assert set(d) == {"check", "params", "expected", "computed", "pass", "millis"}
    assert set(d["expected"]) == {"value", "provenance"}
    assert r.line().startswith("PASS  farey-census")


def test_sep_nsep_small_range_reports_defect():
    r = rig.verify("sep-nsep", max_genus=0, max_punctures=6)
    assert not r.passed
    assert r.notes == ["0,3: formula [0, 1] vs brute force [0, 0]", "0,4: formula [0, 2] vs brute force [0, 1]"]


def test_sep_nsep_agrees_away_from_small_spheres():
    r = rig.verify("sep-nsep", max_genus=2, max_punctures=4)
    assert set(r.notes) == {"0,3: formula [0, 1] vs brute force [0, 0]", "0,4: formula [0, 2] vs brute force [0, 1]"}


def test_collision_table_annotations():
    table = rig.collision_table(12)
    notes = {frozenset(SurfaceType(*p) for p in row["pair"]): row["annotation"] for row in table}
    assert notes[frozenset({SurfaceType(1, 2), SurfaceType(0, 5)})] == "exceptional"
    assert notes[frozenset({SurfaceType(1, 3), SurfaceType(0, 6)})] == "excluded-by-fingerprint"
    assert notes[frozenset({SurfaceType(2, 1), SurfaceType(1, 4)})] == "excluded-by-fingerprint"
    assert "unexpected" not in notes.values()
    assert set(notes) == rig.expected_candidates(12)


def test_collision_bound():
    with pytest.raises(ValueError):
        rig.collision_table(13)


def test_verify_all_is_deterministic():
    ids = ["farey-census", "gauss-bonnet", "stable-enum", "collisions"]
    a = rig.reports_json(rig.verify_all(ids=ids), with_timing=False)
    b = rig.reports_json(rig.verify_all(ids=list(reversed(ids)), parallel=True), with_timing=False)
    assert a == b
    assert [r["check"] for r in json.loads(a)] == sorted(ids)


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("PANTSRIG_SEED", "17")
    assert rig.seed() == 17
    r = rig.verify("reconstruction", random_count=5, dims=[1])
    assert r.params["seed"] == 17 and r.passed


def test_exports(tmp_path):
    dot = rig.render(farey.build_quotient(5), "dot")
    assert dot.count("[label=") == 12
    assert dot.count(" -- ") == 30
    empty = json.loads(rig.render(simplicial.SimplicialComplex([]), "json"))
    assert empty == {"facets": [], "vertices": []}
    csv_text = rig.export(list(range(2, 8)), "csv", tmp_path / "t.csv")
    assert len(csv_text.strip().splitlines()) == 7
    assert (tmp_path / "t.csv").read_text() == csv_text
    assert rig.render(list(range(2, 8)), "csv") == csv_text
    with pytest.raises(ValueError):
        rig.render(farey.build_quotient(3), "csv")
    with pytest.raises(ValueError):
        rig.render(object(), "yaml")
