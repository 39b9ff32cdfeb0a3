"""Command-line front end.

Exit codes: 0 on success, 2 when a checked property fails, 1 on usage or
input errors. Machine output is JSON (``--json PATH``, ``-`` for stdout);
human-readable summaries go to stdout.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .certify import (
    CutsetCollection,
    WeightInfeasible,
    check_dagger_separated,
    check_edge_separated,
    check_star_seed,
    check_star_separated,
    check_strong_edge_separated,
    check_vertex_separated,
    solve_weight_equations,
)
from .complexes import (
    EDGE_MODE,
    VERTEX_MODE,
    ComplexError,
    GluingError,
    GluingInfeasible,
    PolygonalComplex,
    build_sigma,
    build_systems,
    check_link_condition,
    gluing_graph,
    solution_from_json,
    solve_gluing_equations,
    systems_from_json,
    verify_sigma,
)
from .corpus import load
from .covers import CoverError, dehn_filling_bound, iterate_cover, sheets_over, verify_cover_separation
from .cutsets import (
    EDGE,
    VERTEX,
    brute_force_cutsets,
    enumerate_separated_cutsets,
    format_cutsets,
    minimal_edge_subcutsets,
    parse_cutsets,
    sort_cutsets,
)
from .fixtures import FIXTURES
from .graph import (
    GraphFormatError,
    MetricGraph,
    diameter,
    format_graph,
    girth,
    is_bipartite,
    is_connected,
    parse_graph,
    regular_degree,
)
from .reproduce import criterion_keys, run_all, summary_line
from .symmetry import ResourceLimitError, automorphisms, orbit_closure, transitivity

OK, PROPERTY_FAIL, USAGE = 0, 2, 1

# default gluing regime of each fixture
FIXTURE_MODES = {"gq-link": EDGE_MODE, "mixed": VERTEX_MODE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


# -- helpers ----------------------------------------------------------------

def _threads(args) -> int:
    raw = args.threads if args.threads is not None else os.environ.get("LINKSEP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"bad thread count {raw!r}") from exc
    if n < 1:
        raise UsageError("thread count must be positive")
    return n


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def _graph(args) -> tuple[MetricGraph, str, Any]:
    if args.named and args.file:
        raise UsageError("give either --named or --file")
    if args.named:
        try:
            d = load(args.named)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
        return d.graph, d.name, d
    if args.file:
        try:
            return parse_graph(Path(args.file).read_text()), args.file, None
        except (OSError, GraphFormatError) as exc:
            raise UsageError(f"cannot read graph: {exc}") from exc
    raise UsageError("a graph source is required (--named or --file)")


def _emit(args, report: dict) -> None:
    target = getattr(args, "json", None)
    if not target:
        return
    text = json.dumps(report, indent=1) + "\n"
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def _report(command: str, inputs: dict, result: dict, started: float, threads: int) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "result": result,
        "tool": {"name": "linksep", "version": __version__},
        "threads": threads,
        "timing": {"seconds": round(time.perf_counter() - started, 3)},
    }


def _say(args, text: str) -> None:
    if getattr(args, "json", None) != "-":
        print(text)


def _cutsets(args, g: MetricGraph, dataset, mode: str | None = None):
    src = args.cutsets
    if src == "paper":
        if dataset is None or not dataset.cutsets:
            raise UsageError("no embedded cutset list for this graph")
        return dataset.primary()
    if src == "search":
        return enumerate_separated_cutsets(g, args.sigma, mode or EDGE, exhaustive=True, min_size=2)
    if dataset is not None and src in dataset.cutsets:
        return dataset.cutsets[src]
    try:
        return parse_cutsets(g, Path(src).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read cutsets: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"bad cutset list: {exc}") from exc


# -- commands -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    t = time.perf_counter()
    g, name, _ = _graph(args)
    res: dict[str, Any] = {
        "vertices": g.n,
        "edges": g.m,
        "connected": is_connected(g),
        "girth": girth(g) if g.m else None,
        "regular_degree": regular_degree(g),
        "bipartite": is_bipartite(g),
    }
    if res["connected"]:
        res["diameter"] = diameter(g)
    try:
        grp = automorphisms(g)
        res["automorphism_order"] = grp.order
        res.update(transitivity(g, grp, search_subgroup=args.subgroup).to_json())
    except ResourceLimitError as exc:
        res["automorphisms"] = f"skipped: {exc}"
    for k, v in res.items():
        _say(args, f"{k}: {v}")
    _emit(args, _report("analyze", {"graph": name}, res, t, _threads(args)))
    return OK


def cmd_find_cutsets(args) -> int:
    t = time.perf_counter()
    g, name, _ = _graph(args)
    found = enumerate_separated_cutsets(
        g, args.sigma, args.mode, proper_only=args.proper_only, exhaustive=args.exhaustive,
        min_size=args.min_size, max_results=args.max_results)
    res: dict[str, Any] = {"count": len(found), "cutsets": [list(c.members) for c in found]}
    code = OK
    if args.oracle:
        try:
            slow = brute_force_cutsets(g, args.sigma, args.mode, min_size=args.min_size,
                                       proper_only=args.proper_only)
        except ValueError as exc:
            raise UsageError(f"oracle unavailable: {exc}") from exc
        same = [c.members for c in sort_cutsets(found)] == [c.members for c in slow]
        res["oracle_agrees"] = same
        code = OK if same else PROPERTY_FAIL
    _say(args, format_cutsets(g, found).rstrip() or "(no cutsets)")
    _say(args, f"{len(found)} cutsets" + ("" if not args.oracle else f"; oracle agrees: {res['oracle_agrees']}"))
    inputs = {"graph": name, "sigma": args.sigma, "mode": args.mode, "proper_only": args.proper_only,
              "exhaustive": args.exhaustive, "min_size": args.min_size}
    _emit(args, _report("find-cutsets", inputs, res, t, _threads(args)))
    return code


def _weights_arg(raw: str | None):
    if raw in (None, "none"):
        return None
    if raw in ("multiplicity", "solve"):
        return raw
    if raw == "ones":
        return "ones"
    try:
        return [int(x) for x in raw.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad weights {raw!r}") from exc


def cmd_certify(args) -> int:
    t = time.perf_counter()
    g, name, dataset = _graph(args)
    prop = args.property
    weights = _weights_arg(args.weights)
    if prop == "star" and args.seeds:
        if dataset is not None and args.seeds in dataset.cutsets:
            seeds = dataset.cutsets[args.seeds]
        else:
            try:
                seeds = parse_cutsets(g, Path(args.seeds).read_text())
            except (OSError, ValueError) as exc:
                raise UsageError(f"cannot read seeds: {exc}") from exc
        cert = check_star_seed(g, args.v1 if args.v1 is not None else min(seeds[0].members),
                               seeds, assume_good=args.assume_good, max_diameter=args.max_diameter)
    else:
        mode = EDGE if prop in ("edge", "strong-edge") else VERTEX
        cs = _cutsets(args, g, dataset, mode)
        if args.minimal:
            bonds = {}
            for c in cs:
                for b in minimal_edge_subcutsets(g, c):
                    bonds[b.members] = b
            cs = sort_cutsets(bonds.values())
        cc = CutsetCollection.of(cs)
        if args.closure:
            cc = orbit_closure(g, automorphisms(g), cc)
        if weights == "ones":
            weights = [1] * len(cc)
        if prop == "edge":
            cert = check_edge_separated(g, args.sigma, cc, weights=weights)
        elif prop == "strong-edge":
            cert = check_strong_edge_separated(g, args.sigma, cc, weights=weights)
        elif prop in ("vertex", "weak-vertex"):
            cert = check_vertex_separated(g, args.sigma, cc, weak=prop == "weak-vertex", weights=weights)
        elif prop == "dagger":
            cert = check_dagger_separated(g, cc)
        else:
            cert = check_star_separated(g, cc, weights=weights)
    data = cert.to_json()
    _say(args, f"{cert.property}: {cert.verdict}")
    for c in cert.failures():
        _say(args, f"  failed clause {c.name}: {json.dumps(c.counterexample)}")
    inputs = {"graph": name, "property": prop, "sigma": args.sigma, "cutsets": args.cutsets,
              "seeds": args.seeds, "closure": args.closure, "minimal": args.minimal, "weights": args.weights}
    _emit(args, _report("certify", inputs, data, t, _threads(args)))
    return OK if cert.passed else PROPERTY_FAIL


def cmd_solve_weights(args) -> int:
    t = time.perf_counter()
    g, name, dataset = _graph(args)
    cc = CutsetCollection.of(_cutsets(args, g, dataset, args.mode))
    if args.closure:
        cc = orbit_closure(g, automorphisms(g), cc)
    res = solve_weight_equations(g, cc)
    if isinstance(res, WeightInfeasible):
        out = {"feasible": False, "functional": [str(x) for x in res.functional]}
        _say(args, "weight equations: infeasible")
        code = PROPERTY_FAIL
    else:
        out = {"feasible": True, "weights": list(res.weights), "N": res.N}
        _say(args, f"weights: {' '.join(map(str, res.weights))}\nN = {res.N}")
        code = OK
    _emit(args, _report("solve-weights", {"graph": name, "cutsets": args.cutsets}, out, t, _threads(args)))
    return code


def cmd_cover(args) -> int:
    t = time.perf_counter()
    g, name, _ = _graph(args)
    try:
        covers = iterate_cover(g, args.m, args.iterate, max_vertices=args.max_vertices)
    except CoverError as exc:
        raise UsageError(str(exc)) from exc
    top = covers[-1]
    res: dict[str, Any] = {
        "sheets": sheets_over(top.total, g),
        "vertices": top.total.n,
        "edges": top.total.m,
        "girth": girth(top.total),
        "betti_numbers": [c.betti for c in covers],
    }
    code = OK
    if args.sigma is not None:
        try:
            cert = verify_cover_separation(top, args.sigma)
        except CoverError as exc:
            raise UsageError(str(exc)) from exc
        res["certificate"] = cert.to_json()
        res["verdict"] = cert.verdict
        code = OK if cert.passed else PROPERTY_FAIL
    if args.export:
        Path(args.export).write_text(format_graph(top.total, f"Z_{args.m} cover of {name}"))
    for k in ("sheets", "vertices", "edges", "girth", "verdict"):
        if k in res:
            _say(args, f"{k}: {res[k]}")
    inputs = {"graph": name, "m": args.m, "iterate": args.iterate, "sigma": args.sigma}
    _emit(args, _report("cover", inputs, res, t, _threads(args)))
    return code


def cmd_bound(args) -> int:
    t = time.perf_counter()
    try:
        fb = dehn_filling_bound(args.k, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = fb.to_json()
    _say(args, f"index: 2^{fb.exponent} = {fb.index}")
    _say(args, f"constructed: {'2^' + str(fb.constructed_exponent) if fb.constructed_exponent is not None else 'not built'}")
    _say(args, f"ceiling: 4^(4^{fb.k * fb.n} + 1); holds: {fb.holds}")
    _emit(args, _report("bound", {"k": args.k, "n": args.n}, res, t, _threads(args)))
    return OK if fb.holds and fb.constructed_exponent in (None, fb.exponent) else PROPERTY_FAIL


def _complex(args) -> tuple[PolygonalComplex, str, str]:
    if args.fixture and args.file:
        raise UsageError("give either --fixture or --file")
    try:
        if args.fixture:
            if args.fixture not in FIXTURES:
                raise UsageError(f"unknown fixture {args.fixture!r}; known: {', '.join(FIXTURES)}")
            cx, label = FIXTURES[args.fixture](), args.fixture
        elif args.file:
            cx, label = PolygonalComplex.from_json(Path(args.file).read_text()), args.file
        else:
            raise UsageError("a complex is required (--fixture or --file)")
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read complex: {exc}") from exc
    mode = args.mode or FIXTURE_MODES.get(args.fixture, EDGE_MODE)
    return cx, label, mode


def cmd_gluing(args) -> int:
    t = time.perf_counter()
    cx, label, mode = _complex(args)
    inputs = {"complex": label, "mode": mode, "regime": args.regime, "method": args.method, "scale": args.scale}
    link_ok = all(v.ok for v in check_link_condition(cx))
    try:
        gg = gluing_graph(cx, mode)
        systems = build_systems(cx, mode, args.regime, gg)
        sol = solve_gluing_equations(cx, systems, mode, gg, scale=args.scale, method=args.method)
    except GluingInfeasible as exc:
        _say(args, f"gluing equations: infeasible ({exc})")
        res = {"feasible": False, "functional": [str(x) for x in exc.functional]}
        _emit(args, _report("gluing", inputs, res, t, _threads(args)))
        return PROPERTY_FAIL
    except (GluingError, ComplexError) as exc:
        _say(args, f"gluing: {exc}")
        _emit(args, _report("gluing", inputs, {"feasible": False, "error": str(exc)}, t, _threads(args)))
        return PROPERTY_FAIL
    res = sol.to_json(systems)
    res["link_condition"] = link_ok
    res["complex"] = cx.to_json()
    _say(args, f"solved via {sol.path} path; M = {sol.M}; total weight {sum(sol.mu.values())}")
    _say(args, f"class sums: {', '.join(sorted({str(v) for v in sol.class_sums.values()}, key=int))}")
    _emit(args, _report("gluing", inputs, res, t, _threads(args)))
    return OK


def cmd_sigma(args) -> int:
    t = time.perf_counter()
    cx, label, mode = _complex(args)
    gg = gluing_graph(cx, mode)
    try:
        if args.solution:
            data = json.loads(Path(args.solution).read_text())
            data = data.get("result", data)
            systems = systems_from_json(cx, data, gg)
            sol = solution_from_json(data)
        else:
            systems = build_systems(cx, mode, args.regime, gg)
            sol = solve_gluing_equations(cx, systems, mode, gg)
        sg = build_sigma(cx, systems, sol, gg, seed=args.seed)
    except OSError as exc:
        raise UsageError(f"cannot read solution: {exc}") from exc
    except (GluingError, ComplexError) as exc:
        _say(args, f"sigma: {exc}")
        return PROPERTY_FAIL
    checks = verify_sigma(cx, systems, sol, sg, gg)
    res = {"invariants": checks, "vertices": len(sg.vertices), "edges": len(sg.edges),
           "components": len(sg.components), "component_sizes": sg.to_json()["component_sizes"],
           "seed": args.seed}
    if args.export:
        text, sidecar = sg.export(f"Sigma of {label}")
        Path(args.export + ".txt").write_text(text)
        Path(args.export + ".json").write_text(sidecar + "\n")
    _say(args, f"Sigma: {res['vertices']} vertices, {res['edges']} edges, {res['components']} components")
    for k, v in checks.items():
        _say(args, f"  {k}: {'ok' if v else 'FAILED'}")
    _emit(args, _report("sigma", {"complex": label, "mode": mode, "seed": args.seed}, res, t, _threads(args)))
    return OK if all(checks.values()) else PROPERTY_FAIL


def cmd_verify_paper(args) -> int:
    t = time.perf_counter()
    only = None
    if args.only:
        only = [k.strip() for item in args.only for k in item.split(",") if k.strip()]
    try:
        results = run_all(only, progress=lambda r: _say(args, summary_line(r)))
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    res = {"criteria": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    _emit(args, _report("verify-paper", {"only": only}, res, t, _threads(args)))
    return OK if res["passed"] else PROPERTY_FAIL


# -- parser -------------------------------------------------------------------

def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--named", help="built-in dataset: GQ, F24A, F26A, F40A, F48A, G54, C_k,2, C_n")
    p.add_argument("--file", help="graph in the incidence format")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--threads", type=int, help="worker count (also LINKSEP_THREADS); results do not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linksep", description="Separated cutsets in graphs and links of polygonal complexes.")
    parser.add_argument("--version", action="version", version=f"linksep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="girth, diameter, regularity and symmetry of a graph")
    _graph_args(p)
    p.add_argument("--subgroup", action="store_true", help="search for an edge-regular subgroup")
    _common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("find-cutsets", help="enumerate sigma-separated cutsets")
    _graph_args(p)
    p.add_argument("--sigma", type=_positive, default=3)
    p.add_argument("--mode", choices=[EDGE, VERTEX], default=EDGE)
    p.add_argument("--proper-only", action="store_true")
    p.add_argument("--exhaustive", action="store_true", help="every separated cutset, not only maximal ones")
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--max-results", type=int)
    p.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    _common(p)
    p.set_defaults(func=cmd_find_cutsets)

    p = sub.add_parser("certify", help="certify a separation property")
    _graph_args(p)
    p.add_argument("--property", required=True,
                   choices=["edge", "strong-edge", "vertex", "weak-vertex", "dagger", "star"])
    p.add_argument("--sigma", type=_positive, default=3)
    p.add_argument("--cutsets", default="paper", help="'paper', 'search', a named list, or a file")
    p.add_argument("--seeds", help="seed cutsets for the star seed check (named list or file)")
    p.add_argument("--v1", type=int, help="seed vertex for the star seed check")
    p.add_argument("--max-diameter", type=int, default=6)
    p.add_argument("--closure", action="store_true", help="close the collection under automorphisms")
    p.add_argument("--minimal", action="store_true", help="replace edge cutsets by their minimal sub-cutsets")
    p.add_argument("--weights", help="none, ones, multiplicity, solve, or comma-separated integers")
    p.add_argument("--assume-good", action="store_true",
                   help="assume an edge-regular bipartition-preserving subgroup instead of searching")
    _common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("solve-weights", help="solve the weight equations exactly")
    _graph_args(p)
    p.add_argument("--cutsets", default="paper")
    p.add_argument("--mode", choices=[EDGE, VERTEX], default=EDGE, help="mode for --cutsets search")
    p.add_argument("--sigma", type=_positive, default=3)
    p.add_argument("--closure", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_solve_weights)

    p = sub.add_parser("cover", help="iterated Z_m homology covers")
    _graph_args(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--iterate", type=_positive, default=1)
    p.add_argument("--sigma", type=_positive, help="certify single-edge preimage cutsets at this sigma")
    p.add_argument("--max-vertices", type=int, default=200_000)
    p.add_argument("--export", metavar="PATH", help="write the cover in the incidence format")
    _common(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("bound", help="index bound for Dehn fillings")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_bound)

    for name, fn, helptext in (("gluing", cmd_gluing, "solve the gluing equations of a complex"),
                               ("sigma", cmd_sigma, "build and check the Sigma graph")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--fixture", help=f"built-in complex: {', '.join(FIXTURES)}")
        p.add_argument("--file", help="complex in JSON")
        p.add_argument("--mode", choices=[EDGE_MODE, VERTEX_MODE])
        p.add_argument("--regime", choices=["auto", "proper-canonical", "dagger-three-coarsenings",
                                            "star-canonical"], default="auto")
        if name == "gluing":
            p.add_argument("--method", choices=["auto", "constructive", "linear"], default="auto")
            p.add_argument("--scale", choices=["lcm", "product"], default="lcm")
        else:
            p.add_argument("--solution", help="solution JSON from the gluing command")
            p.add_argument("--seed", type=int, help="shuffle the per-class bijections")
            p.add_argument("--export", metavar="PREFIX", help="write PREFIX.txt and PREFIX.json")
        _common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("verify-paper", help="run every reproduction criterion")
    p.add_argument("--only", action="append", help=f"criteria to run: {', '.join(criterion_keys())}")
    _common(p)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads(args)
        return args.func(args)
    except (UsageError, ValueError) as exc:
        # library ValueErrors describe bad input
        print(f"linksep: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
