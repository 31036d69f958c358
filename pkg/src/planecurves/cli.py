"""Command-line entry point.

Structured results go to standard output as JSON; a one-line summary goes to
standard error.  Exit codes: 0 success, 1 usage or input error, 2 a
falsification event (a guaranteed witness was not found or failed to verify),
3 a resolution cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import __version__
from .corpus import seeds
from .curves import CurveError, PlaneCurve, chord_diagram, contains_subchord, load_pattern, r1_reducible
from .diagram import (
    ARCS,
    DiagramError,
    DiagramFormatError,
    ImmersedDiagram,
    convex_drawing,
    diagram_from_curve,
    restrict_to_cycle,
    validate,
)
from .graphs import Cycle, GraphError, graph_from_shorthand
from .knots import KnotDiagram, ResolutionCapExceeded, a2, a2_avg, alpha, d_value, fraction_json
from .moves import random_walk
from .theorems import (
    HostError,
    TheoremViolation,
    check_alpha_congruence,
    check_d_parity,
    detect_projection,
    diagram_digest,
    find_nontrivial_projection,
    force_chord_diagram,
    home_dir,
    search_fig8_in_K12,
)

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- I/O helpers --------------------------------------------------------------


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not JSON ({exc})") from None


def _read_diagram(path: str) -> ImmersedDiagram:
    return ImmersedDiagram.from_json(_read_json(path))


def _read_curve(path: str) -> PlaneCurve:
    data = _read_json(path)
    f = PlaneCurve.from_json(data)
    f.check()
    return f


def _emit(data, out: str | None = None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit_diagram(d: ImmersedDiagram, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(d.dumps())
    else:
        Path(out).write_text(d.dumps())


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _cap(args) -> int:
    cap = args.cap_crossings
    if args.max_resolutions is not None:
        cap = min(cap, int(math.log2(max(args.max_resolutions, 1))))
    return cap


def _cycle_arg(d: ImmersedDiagram, spec: str) -> Cycle:
    names = [s for s in spec.replace(" ", ",").split(",") if s]
    try:
        return Cycle(tuple(d.graph.vertex_index(n) for n in names))
    except GraphError as exc:
        raise UsageError(str(exc)) from None


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        d = _read_diagram(args.file)
    except DiagramFormatError as exc:
        _emit({"valid": False, "violations": [{"kind": "format", "where": args.file, "message": str(exc)}]})
        _say(f"invalid: {exc}")
        return EXIT_USAGE
    report = validate(d)
    data = report.to_json()
    data["crossings"] = d.crossing_count
    _emit(data)
    if report.ok:
        _say(f"valid diagram: {d.graph.order} vertices, {d.graph.size} edges, {d.crossing_count} crossings")
        return EXIT_OK
    _say(f"invalid: {len(report.violations)} violation(s), first: {report.violations[0].message}")
    return EXIT_USAGE


def cmd_gen_convex(args) -> int:
    g = graph_from_shorthand(args.graph)
    order = [s for s in args.order.split(",") if s] if args.order else None
    d = convex_drawing(g, order, args.arc)
    _emit_diagram(d, args.output)
    _say(f"convex {args.graph}: {d.crossing_count} crossings")
    return EXIT_OK


def cmd_gen_curve(args) -> int:
    f = _read_curve(args.file)
    if not f.is_realizable():
        raise UsageError("curve is not planar (genus > 0)")
    d = diagram_from_curve(f, args.vertices)
    _emit_diagram(d, args.output)
    _say(f"cycle graph on {args.vertices} vertices, {d.crossing_count} crossings")
    return EXIT_OK


def cmd_perturb(args) -> int:
    d = _read_diagram(args.file)
    _require_valid(d)
    out = random_walk(d, args.steps, args.seed, args.walk_cap)
    _emit_diagram(out, args.output)
    _say(f"{args.steps} steps (seed {args.seed}): {d.crossing_count} -> {out.crossing_count} crossings")
    return EXIT_OK


def _require_valid(d: ImmersedDiagram) -> None:
    report = validate(d)
    if not report.ok:
        raise UsageError(f"invalid diagram: {report.violations[0].where}: {report.violations[0].message}")


def cmd_curve(args) -> int:
    if args.action == "restrict":
        d = _read_diagram(args.file)
        _require_valid(d)
        if not args.cycle:
            raise UsageError("curve restrict needs --cycle")
        f = restrict_to_cycle(d, _cycle_arg(d, args.cycle))
        _emit(f.to_json())
        _say(f"restricted curve: {f.crossing_count} crossings")
        return EXIT_OK
    f = _read_curve(args.file)
    if args.action == "chords":
        cd = chord_diagram(f)
        _emit({"chord_diagram": list(cd.word), "canonical": list(cd.canonical().word), "chords": cd.chords})
        _say(f"{cd.chords} chords")
    elif args.action == "contains":
        if not args.pattern:
            raise UsageError("curve contains needs --pattern")
        pat = load_pattern(args.pattern)
        hit = contains_subchord(chord_diagram(f), pat)
        _emit({"pattern": list(pat.word), "contains": hit is not None,
               "injection": None if hit is None else {str(k): v for k, v in sorted(hit.items())}})
        _say("contains pattern" if hit is not None else "pattern absent")
    elif args.action == "r1reducible":
        value = r1_reducible(f)
        _emit({"r1_reducible": value})
        _say("reducible to an embedded circle by R1" if value else "not R1-reducible")
    elif args.action == "a2avg":
        value = a2_avg(f, _cap(args), args.method)
        _emit({"a2_avg": fraction_json(value), "crossings": f.crossing_count})
        _say(f"averaged a2 = {value}")
    return EXIT_OK


def cmd_knot(args) -> int:
    data = _read_json(args.file)
    try:
        k = KnotDiagram.from_json(data)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    value = a2(k)
    _emit({"a2": value})
    _say(f"a2 = {value}")
    return EXIT_OK


def cmd_alpha(args) -> int:
    d = _read_diagram(args.file)
    _require_valid(d)
    value = alpha(d, args.cycle_length, _cap(args), args.method)
    _emit({"alpha": fraction_json(value), "cycle_length": args.cycle_length or d.graph.order})
    _say(f"alpha = {value}")
    return EXIT_OK


def cmd_dvalue(args) -> int:
    d = _read_diagram(args.file)
    _require_valid(d)
    import warnings

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value = d_value(d)
    for w in caught:
        _say(f"warning: {w.message}")
    _emit({"d": value})
    _say(f"d = {value}")
    return EXIT_OK


def cmd_force(args) -> int:
    d = _read_diagram(args.file)
    _require_valid(d)
    pat = load_pattern(args.pattern)
    w = force_chord_diagram(d, pat)
    _emit({"pattern": list(pat.word), "witness": w.to_json(d.graph), "verified": True})
    _say(f"witness cycle {' '.join(w.cycle.names(d.graph))}")
    return EXIT_OK


def cmd_check(args) -> int:
    d = _read_diagram(args.file)
    _require_valid(d)
    if args.what == "alpha":
        value, ok = check_alpha_congruence(d, _cap(args), args.method)
        _emit({"alpha": fraction_json(value), "congruent": ok})
        _say(f"alpha = {value}; 4 alpha {'odd' if ok else 'NOT odd'}")
    else:
        value, ok = check_d_parity(d)
        _emit({"d": value, "odd": ok})
        _say(f"d = {value} ({'odd' if ok else 'EVEN'})")
    if not ok:
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_find(args) -> int:
    d = _read_diagram(args.file)
    _require_valid(d)
    w = find_nontrivial_projection(d, _cap(args))
    _emit({"witness": w.to_json(d.graph), "verified": True})
    _say(f"cycle {' '.join(w.cycle.names(d.graph))} lifts to a knot with a2 = {w.a2}")
    return EXIT_OK


def cmd_detect(args) -> int:
    f = _read_curve(args.file)
    pat = load_pattern(args.pattern) if args.pattern else None
    found, hit = detect_projection(f, args.knot, pat)
    _emit({"knot": args.knot, "detected": found,
           "injection": None if hit is None else {str(k): v for k, v in sorted(hit.items())}})
    _say(f"{args.knot} projection: {'yes' if found else 'no'}")
    return EXIT_OK


def cmd_search(args) -> int:
    d = _read_diagram(args.file)
    _require_valid(d)
    pat = load_pattern(args.pattern) if args.pattern else None
    ckpt = args.checkpoint
    if ckpt is None and args.resume is None and args.fast_off:
        ckpt = str(home_dir() / "checkpoints" / f"fig8-{diagram_digest(d)}.json")
    result = search_fig8_in_K12(d, pat, fast=not (args.fast_off or args.resume), jobs=args.jobs, checkpoint=ckpt, resume=args.resume)
    _emit({"witness": result.to_json(d.graph), "verified": True})
    _say(f"figure-eight pattern on cycle {' '.join(result.witness.cycle.names(d.graph))} ({result.method})")
    return EXIT_OK


SUITES = ("dparity-K5", "dparity-K3,3", "alpha-K6", "nontrivial-K6", "force-K8")


def _suite_case(job) -> dict:
    suite, seed, steps, walk_cap, cap, method = job
    host = {"dparity-K5": "K5", "dparity-K3,3": "K3,3", "alpha-K6": "K6", "nontrivial-K6": "K6", "force-K8": "K8"}[suite]
    d = random_walk(convex_drawing(graph_from_shorthand(host)), steps, seed, walk_cap)
    out: dict = {"seed": seed, "crossings": d.crossing_count, "valid": validate(d).ok}
    try:
        if suite.startswith("dparity"):
            value, ok = check_d_parity(d)
            out.update(d=value, passed=ok)
        elif suite == "alpha-K6":
            value, ok = check_alpha_congruence(d, cap, method)
            out.update(alpha=fraction_json(value), passed=ok)
        elif suite == "nontrivial-K6":
            w = find_nontrivial_projection(d, cap)
            out.update(cycle=w.cycle.names(d.graph), a2=w.a2, passed=True)
        else:
            from .curves import ChordDiagram

            for word in ((1, 2, 1, 2), (1, 1, 2, 2)):
                force_chord_diagram(d, ChordDiagram(word))
            out.update(passed=True)
    except TheoremViolation as exc:
        out.update(passed=False, error=str(exc))
    except ResolutionCapExceeded as exc:
        out.update(passed=None, error=str(exc))
    out["passed"] = bool(out.get("passed")) and out["valid"] if out.get("passed") is not None else None
    return out


def cmd_corpus(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    jobs = [(args.suite, s, args.steps, args.walk_cap, _cap(args), args.method) for s in seeds(args.seed, args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_suite_case, jobs))
    else:
        results = [_suite_case(j) for j in jobs]
    passed = sum(1 for r in results if r["passed"] is True)
    failed = sum(1 for r in results if r["passed"] is False)
    skipped = sum(1 for r in results if r["passed"] is None)
    _emit({"suite": args.suite, "seed": args.seed, "count": args.count, "passed": passed,
           "failed": failed, "over_cap": skipped, "results": results})
    _say(f"{args.suite}: {passed}/{args.count} pass" + (f", {skipped} over the cap" if skipped else ""))
    if failed:
        return EXIT_FALSIFIED
    if skipped:
        return EXIT_CAP
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planecurves", description="Chord diagrams and averaged a2 of plane immersed graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for corpus runs and cycle scans")
    p.add_argument("--max-crossings", dest="cap_crossings", type=int, default=20,
                   help="largest curve whose 2^c resolutions are enumerated (default 20)")
    p.add_argument("--max-resolutions", type=int, default=None, help="cap on 2^c, as an alternative to --max-crossings")
    p.add_argument("--method", choices=("enumerate", "pairs"), default="enumerate",
                   help="averaged a2: enumerate resolutions, or average the arrow-pair count")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a diagram file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    gen = sub.add_parser("gen", help="generate diagrams").add_subparsers(dest="kind", required=True)
    s = gen.add_parser("convex", help="straight-line drawing with vertices in convex position")
    s.add_argument("--graph", required=True, help="K6, K3,3, K3,3,1, C6, ...")
    s.add_argument("--order", help="comma-separated vertex names along the arc")
    s.add_argument("--arc", choices=sorted(ARCS), default="exp")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen_convex)
    s = gen.add_parser("curve", help="cycle-graph diagram tracing a curve file")
    s.add_argument("file")
    s.add_argument("--vertices", type=int, default=3)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen_curve)

    s = sub.add_parser("perturb", help="seeded random walk of local moves")
    s.add_argument("file")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-crossings", dest="walk_cap", type=int, default=None)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("curve", help="plane-curve operations")
    s.add_argument("action", choices=("chords", "contains", "r1reducible", "a2avg", "restrict"))
    s.add_argument("file")
    s.add_argument("--pattern", help="C1, C2 or a pattern file")
    s.add_argument("--cycle", help="for restrict: comma-separated vertex names")
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("knot", help="knot-diagram invariants")
    s.add_argument("action", choices=("a2",))
    s.add_argument("file")
    s.set_defaults(func=cmd_knot)

    s = sub.add_parser("alpha", help="sum of averaged a2 over all n-cycles")
    s.add_argument("file")
    s.add_argument("--cycle-length", type=int, default=None)
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("dvalue", help="crossings between disjoint edges")
    s.add_argument("file")
    s.set_defaults(func=cmd_dvalue)

    s = sub.add_parser("force-chord", help="K_4n witness cycle for a chord pattern")
    s.add_argument("file")
    s.add_argument("--pattern", required=True)
    s.set_defaults(func=cmd_force)

    s = sub.add_parser("check", help="congruence and parity checks")
    s.add_argument("what", choices=("alpha", "dparity"))
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("find", help="witness searches")
    s.add_argument("what", choices=("nontrivial",))
    s.add_argument("file")
    s.set_defaults(func=cmd_find)

    s = sub.add_parser("detect", help="trefoil / figure-eight projection test for a curve")
    s.add_argument("file")
    s.add_argument("--knot", required=True, choices=("trefoil", "fig8"))
    s.add_argument("--pattern", help="override the preset pattern")
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("search", help="cycle searches in K12")
    s.add_argument("what", choices=("fig8",))
    s.add_argument("file")
    s.add_argument("--pattern", help="override the C2 preset")
    s.add_argument("--resume", help="checkpoint file to continue from")
    s.add_argument("--checkpoint", help="where to write progress (default under $PLANECURVES_HOME)")
    s.add_argument("--stream", dest="fast_off", action="store_true", help="stream all cycles instead of forcing")
    s.set_defaults(func=cmd_search)

    corpus = sub.add_parser("corpus", help="batch checks").add_subparsers(dest="action", required=True)
    s = corpus.add_parser("run", help="apply a named check to seeded random diagrams")
    s.add_argument("--suite", required=True, help=", ".join(SUITES))
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--steps", type=int, default=200)
    s.add_argument("--max-crossings", dest="walk_cap", type=int, default=40, help="walk crossing cap")
    s.set_defaults(func=cmd_corpus)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except TheoremViolation as exc:
        _emit({"falsification": str(exc), "trace": exc.trace})
        _say(f"FALSIFICATION EVENT: {exc}")
        return EXIT_FALSIFIED
    except ResolutionCapExceeded as exc:
        _emit({"error": "cap", "message": str(exc), "crossings": exc.crossings, "cap": exc.cap})
        _say(f"refused: {exc}")
        return EXIT_CAP
    except (UsageError, DiagramError, CurveError, GraphError, HostError, ValueError, KeyError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
