"""The eight acceptance criteria, each run at its stated tolerance and time limit.

Every criterion prints one ``PASS``/``FAIL`` line (also collected into the
terminal summary). Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time

import pytest

from pantsrig import farey, rig, surfaces
from pantsrig.surfaces import SurfaceType


def _run(log, number, title, limit_s, check_id, extra=lambda report: []):
    start = time.perf_counter()
    report = rig.verify(check_id)
    problems = list(extra(report))
    elapsed = time.perf_counter() - start
    if not report.passed:
        problems.append(f"check {check_id} failed: {'; '.join(report.notes) or report.computed}")
    if elapsed >= limit_s:
        problems.append(f"took {elapsed:.1f}s, limit {limit_s}s")
    status = "PASS" if not problems else "FAIL"
    line = f"criterion {number} {status}  {title:<42} {elapsed:7.2f}s (limit {limit_s}s)"
    if problems:
        line += "  " + " | ".join(problems)
    print(line)
    log.append(line)
    assert not problems, line


def test_criterion_1_farey_census(acceptance_log):
    def extra(report):
        rows = report.computed
        if rows["2"] != [3, 3, 2]:
            yield "m=2 is not the two-triangle sphere"
        table = {"3": (4, 6, 4), "4": (6, 12, 8), "5": (12, 30, 20), "6": (12, 36, 24), "7": (24, 84, 56)}
        for m, row in table.items():
            if tuple(rows[m]) != row:
                yield f"m={m}: {rows[m]} != {row}"
        # independent oracle: element enumeration agrees with the prime-power formula
        for m in range(2, 8):
            if len(farey.psl2_elements(m)) != farey.psl2_order(m):
                yield f"|PSL2(Z/{m})| mismatch"
    _run(acceptance_log, 1, "Farey quotient census m=2..7", 1.0, "farey-census", extra)


def test_criterion_2_gauss_bonnet(acceptance_log):
    def extra(report):
        if report.params["levels"] != list(range(2, 14)):
            yield "levels are not 2..13"
        genus = [report.computed["genus"][str(m)] for m in range(2, 8)]
        if genus != [0, 0, 0, 0, 1, 3]:
            yield f"genus sequence {genus}"
    _run(acceptance_log, 2, "Gauss-Bonnet residue 0, genus 0,0,0,0,1,3", 5.0, "gauss-bonnet", extra)


def test_criterion_3_automorphisms(acceptance_log):
    def extra(report):
        for m, order in zip((2, 3, 4, 5, 7), (12, 24, 48, 120, 336)):
            got = report.computed[str(m)]
            if got != {"order": order, "orientation_preserving": order // 2}:
                yield f"m={m}: {got}"
    _run(acceptance_log, 3, "|Aut| = 2|PSL2|, orientation index 2", 120.0, "farey-aut", extra)


def test_criterion_4_sep_nsep(acceptance_log):
    def extra(report):
        expected_types = {f"{g},{n}" for g in range(4) for n in range(9) if SurfaceType(g, n).is_hyperbolic}
        if set(report.computed) != expected_types:
            yield "not every hyperbolic type with g<=3, n<=8 was checked"
    _run(acceptance_log, 4, "Sep/NSep formula vs stable-graph oracle", 120.0, "sep-nsep", extra)


def test_criterion_5_collisions(acceptance_log):
    def extra(report):
        S = SurfaceType
        table = rig.collision_table(12)
        exceptional = {frozenset(S(*p) for p in row["pair"]) for row in table if row["annotation"] == "exceptional"}
        if exceptional != set(rig.EXCEPTIONAL_PAIRS):
            yield f"exceptional pairs {sorted(map(sorted, exceptional))}"
        for row in table:
            if row["annotation"] == "excluded-by-fingerprint":
                a, b = (S(*p) for p in row["pair"])
                if surfaces.cc_fingerprint(a, 1) == surfaces.cc_fingerprint(b, 1):
                    yield f"{row['pair']} not separated by fingerprint"
    _run(acceptance_log, 5, "collision table at d<=12", 60.0, "collisions", extra)


def test_criterion_6_reconstruction(acceptance_log):
    def extra(report):
        if report.computed.get("random") != 500:
            yield f"{report.computed.get('random')}/500 random complexes reconstructed"
    _run(acceptance_log, 6, "1-skeleton reconstruction roundtrip", 120.0, "reconstruction", extra)


def test_criterion_7_pants_ball(acceptance_log):
    def extra(report):
        if report.params != {"radius": 3, "width": 4}:
            yield f"params {report.params}"
        if report.computed["s05_interior_edges"] == 0:
            yield "no interior edges examined"
    _run(acceptance_log, 7, "pants-ball properties on S0,5 and d=1", 300.0, "pants-ball", extra)


def test_criterion_8_curves(acceptance_log):
    def extra(report):
        if report.params["instances"] != 1000 or report.params["twists"] != 6:
            yield f"params {report.params}"
        if report.computed["slopes_checked"] < 100:
            yield "too few slopes checked"
    _run(acceptance_log, 8, "curves layer properties and S0,4 twist", 120.0, "curves", extra)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
