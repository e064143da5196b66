"""Command line interface: ``pantsrig <group> <verb> [options]``."""

from __future__ import annotations

import argparse
import json
import sys

from . import farey, pants, rig, simplicial, surfaces


def _levels(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_farey(args) -> int:
    Q = farey.build_quotient(args.level)
    if args.verb == "build":
        _emit(rig.render(Q, args.format), args.output)
    elif args.verb == "flat":
        inv = farey.flat_invariants(Q)
        V, E, T = Q.counts
        angles = sorted({str(a) for a in inv.angles})
        print(json.dumps({"m": args.level, "V": V, "E": E, "T": T, "chi": inv.euler, "genus": inv.genus,
                          "angles_over_pi": angles, "gb_residue": str(inv.gb_residue)}, sort_keys=True))
    else:
        data = farey.quotient_automorphisms(Q)
        print(json.dumps({"m": args.level, "order": data.order,
                          "orientation_preserving": data.orientation_preserving_order,
                          "generators": len(data.generators)}, sort_keys=True))
    return 0


def _cmd_stable(args) -> int:
    for G in surfaces.enumerate_stable_graphs(tuple(args.surface), args.edges):
        print(G.to_json())
    return 0


def _cmd_surface(args) -> int:
    if args.verb == "invariants":
        s = surfaces.as_surface(tuple(args.surface))
        out = {
            "surface": [s.genus, s.punctures],
            "d": surfaces.modular_dimension(s),
            "formula": list(surfaces.sep_nsep_formula(s)),
            "sep_nsep": list(surfaces.sep_nsep(s)),
            "bruteforce": list(surfaces.sep_nsep_bruteforce(s, bound=args.bound)),
        }
        if out["d"] > 1:
            out["orbit_types"] = surfaces.count_orbit_types(s)
        print(json.dumps(out, sort_keys=True))
    else:
        for row in rig.collision_table(args.max_dim):
            print(json.dumps(row, sort_keys=True))
    return 0


def _cmd_pants(args) -> int:
    ball = pants.bfs_ball(tuple(args.surface), args.radius, args.width)
    if args.verb == "ball":
        _emit(rig.render(ball, args.format), args.output)
        return 0
    if args.edge:
        edge = (min(args.edge), max(args.edge))
    else:
        frontier = ball.frontier
        edge = next((e for e in sorted(ball.edges) if not frontier[e[0]] and not frontier[e[1]]), None)
        if edge is None:
            raise ValueError("ball has no interior edge; increase --radius")
    found = pants.recover_farey_subgraph(ball, edge)
    family = ball.families()[ball.edges[edge]] if edge in ball.edges else set()
    exact = found == {x for x in family if not ball.frontier[x]}
    print(json.dumps({"edge": list(edge), "vertices": sorted(found), "matches_family": exact}))
    return 0


def _cmd_verify(args) -> int:
    if args.check == "all":
        reports = rig.verify_all(parallel=args.parallel)
    else:
        reports = [rig.verify(args.check)]
    if args.json:
        sys.stdout.write(rig.reports_json(reports, with_timing=not args.no_timing))
    else:
        for r in reports:
            print(r.line())
            for note in r.notes:
                print(f"      {note}")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_export(args) -> int:
    if args.object == "farey":
        obj = farey.build_quotient(args.level)
    elif args.object == "table":
        obj = _levels(args.levels)
    elif args.object == "ball":
        obj = pants.bfs_ball(tuple(args.surface), args.radius, args.width)
    elif args.object == "dual":
        obj = pants.embed_dual_graph(pants.bfs_ball(tuple(args.surface), args.radius, args.width))
    else:
        obj = simplicial.SimplicialComplex([])
    _emit(rig.render(obj, args.format), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pantsrig", description=__doc__)
    sub = p.add_subparsers(dest="group", required=True)

    f = sub.add_parser("farey", help="congruence quotients of the Farey tessellation")
    f.add_argument("verb", choices=["build", "flat", "aut"])
    f.add_argument("--level", "-m", type=int, required=True)
    f.add_argument("--format", choices=["json", "dot"], default="json")
    f.add_argument("--output", "-o")
    f.set_defaults(func=_cmd_farey)

    st = sub.add_parser("stable", help="stable graphs")
    st.add_argument("verb", choices=["enum"])
    st.add_argument("--surface", type=int, nargs=2, metavar=("G", "N"), required=True)
    st.add_argument("--edges", "-k", type=int, required=True)
    st.set_defaults(func=_cmd_stable)

    su = sub.add_parser("surface", help="surface invariants")
    su.add_argument("verb", choices=["invariants", "collisions"])
    su.add_argument("--surface", type=int, nargs=2, metavar=("G", "N"))
    su.add_argument("--bound", type=int, default=surfaces.DEFAULT_BRUTEFORCE_BOUND)
    su.add_argument("--max-dim", type=int, default=12)
    su.set_defaults(func=_cmd_surface)

    pa = sub.add_parser("pants", help="pants graph balls")
    pa.add_argument("verb", choices=["ball", "recover"])
    pa.add_argument("--surface", type=int, nargs=2, metavar=("G", "N"), required=True)
    pa.add_argument("--radius", "-r", type=int, default=2)
    pa.add_argument("--width", "-B", type=int, default=3)
    pa.add_argument("--edge", type=int, nargs=2, metavar=("U", "V"), help="default: first interior edge")
    pa.add_argument("--format", choices=["json", "dot"], default="json")
    pa.add_argument("--output", "-o")
    pa.set_defaults(func=_cmd_pants)

    v = sub.add_parser("verify", help="run registered checks")
    v.add_argument("check", help="check id or 'all'")
    v.add_argument("--json", action="store_true")
    v.add_argument("--no-timing", action="store_true", help="omit runtimes from JSON reports")
    v.add_argument("--parallel", action="store_true")
    v.set_defaults(func=_cmd_verify)

    e = sub.add_parser("export", help="write an object as json, dot or csv")
    e.add_argument("--object", choices=["farey", "table", "ball", "dual", "empty"], required=True)
    e.add_argument("--format", choices=["json", "dot", "csv"], required=True)
    e.add_argument("--level", "-m", type=int, default=5)
    e.add_argument("--levels", default="2-7")
    e.add_argument("--surface", type=int, nargs=2, metavar=("G", "N"), default=[0, 5])
    e.add_argument("--radius", "-r", type=int, default=2)
    e.add_argument("--width", "-B", type=int, default=3)
    e.add_argument("--output", "-o")
    e.set_defaults(func=_cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.group == "surface" and args.verb == "invariants" and not args.surface:
        parser.error("--surface is required for 'surface invariants'")
    try:
        return args.func(args)
    except (ValueError, KeyError, pants.InsufficientBall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
