"""Command-line front end.

Exit codes: 0 success, 1 an exception certificate was returned, 2 invalid
input, 3 an internal invariant failed (including a forbidden fallback in
``--strict`` mode).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from . import generator, oracle
from .canvas import NotAPath, check_colouring, validate_canvas
from .engine import (
    AssignmentInvalid,
    CanvasInvalid,
    Engine,
    EngineIncomplete,
    EngineInvariantError,
    EngineTrace,
    PhiImproper,
)
from .girth import INF, girth_profile
from .plane_graph import NotACycle
from .serialize import FormatError, Instance, load, store, to_dot
from .wheels import ExceptionCertificate, classify_exception


EXIT_OK, EXIT_CERT, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_SEED = 20240501


def base_seed(given: int | None) -> int:
    env = os.environ.get("GIRTHWRIGHT_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED if given is None else given


def _emit(obj: Any) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _colouring_json(col: dict[int, int]) -> dict[str, int]:
    return {str(v): col[v] for v in sorted(col)}


def _trace_json(trace: EngineTrace) -> dict[str, Any]:
    counts: dict[str, int] = {}
    for tag in trace.tags():
        counts[tag] = counts.get(tag, 0) + 1
    return {
        "steps": counts,
        "fallbacks": trace.fallbacks,
        "cited": trace.cited,
        "exceptional_searches": trace.exceptional_searches,
    }


def _write_dot(path: str | None, inst: Instance, col: dict[int, int] | None = None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(to_dot(inst, col))


def _phi_of(inst: Instance) -> dict[int, int]:
    phi = inst.phi_map()
    if phi is not None:
        return phi
    if inst.lists is not None and all(len(inst.lists[v]) == 1 for v in inst.s):
        return {v: next(iter(inst.lists[v])) for v in inst.s}
    raise PhiImproper("give phi, or singleton lists on S")


def _extend(inst: Instance, args) -> int:
    trace = EngineTrace()
    result = Engine(strict=args.strict, trace=trace).extend(inst.canvas(), _phi_of(inst))
    if isinstance(result, ExceptionCertificate):
        _emit({"certificate": result.to_json(), "trace": _trace_json(trace)})
        _write_dot(args.dot, inst)
        return EXIT_CERT
    _emit({"colouring": _colouring_json(result), "trace": _trace_json(trace)})
    _write_dot(args.dot, inst, result)
    return EXIT_OK


def cmd_colour(args) -> int:
    inst = load(args.file)
    if inst.lists is None:
        raise FormatError("colour needs lists")
    if inst.s:
        return _extend(inst, args)
    trace = EngineTrace()
    col = Engine(strict=args.strict, trace=trace).colour(inst.graph, inst.lists)
    _emit({"colouring": _colouring_json(col), "trace": _trace_json(trace)})
    _write_dot(args.dot, inst, col)
    return EXIT_OK


def cmd_extend(args) -> int:
    inst = load(args.file)
    if inst.lists is None:
        raise FormatError("extend needs lists")
    return _extend(inst, args)


def cmd_classify(args) -> int:
    inst = load(args.file)
    k = inst.canvas()
    problems = validate_canvas(k)
    if problems:
        raise CanvasInvalid("; ".join(problems))
    phi = inst.phi_map()
    if phi is not None:
        k = k.with_lists({v: {c} for v, c in phi.items()})
    cert = classify_exception(k)
    _emit({"exception": None if cert is None else cert.to_json()})
    _write_dot(args.dot, inst)
    return EXIT_OK


def cmd_girths(args) -> int:
    inst = load(args.file)
    prof = girth_profile(inst.graph)
    _emit({"girth": {str(v): ("inf" if prof[v] == INF else prof[v]) for v in range(inst.graph.n)}})
    _write_dot(args.dot, inst)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    inst = load(args.file)
    k = inst.canvas()
    budget = oracle.SearchBudget(nodes=args.node_limit) if args.node_limit else None
    blocked = oracle.blocked_colourings_of_S(k, budget)
    total = sum(1 for _ in oracle.s_colourings(k))
    _emit({"S": list(k.s), "s_colourings": total, "blocked": sorted(list(b) for b in blocked)})
    return EXIT_OK


def cmd_gen(args) -> int:
    seed = base_seed(args.seed)
    rng = random.Random(seed)
    os.makedirs(args.out, exist_ok=True)
    made: list[Instance] = []
    if args.kind == "all-planar":
        made = [Instance(g) for g in generator.all_connected_planar(args.n)]
    elif args.kind == "planar":
        made = [Instance(generator.random_planar_graph(args.n, rng, args.min_girth)) for _ in range(args.count)]
    elif args.kind == "canvas":
        for i in range(args.count):
            k = generator.random_canvas(args.n, seed + i, min_girth=args.min_girth)
            made.append(Instance.from_canvas(k, {v: next(iter(k.lists[v])) for v in k.s}))
    elif args.kind == "wheel":
        made = [Instance(generator.make_wheel(args.n - 1)[0])]
    elif args.kind == "broken-wheel":
        made = [Instance(generator.make_broken_wheel(args.n)[0])]
    elif args.kind == "generalized-wheel":
        for _ in range(args.count):
            spec = generator.random_wheel_spec(rng, max_vertices=args.n)
            made.append(Instance(generator.make_generalized(spec)[0]))
    paths = []
    for i, inst in enumerate(made):
        path = os.path.join(args.out, f"{args.kind}_n{args.n}_{i:04d}.json")
        store(inst, path)
        paths.append(path)
    _emit({"written": paths})
    return EXIT_OK


def _stress_graph(job: tuple) -> list[dict[str, Any]]:
    n, index, rotations, outer, seeds, universe, strict, seed = job
    from .plane_graph import PlaneGraph

    g = PlaneGraph(rotations, outer)
    rng = random.Random(seed * 1_000_003 + n * 10_007 + index)
    out = []
    for r in range(seeds):
        lists = oracle.sample_local_girth_lists(g, universe, rng)
        trace = EngineTrace()
        verdict: dict[str, Any] = {"n": n, "graph": index, "round": r}
        try:
            col = Engine(strict=strict, trace=trace).colour(g, lists)
            problems = check_colouring(g, lists, col)
            verdict["ok"] = not problems and len(col) == g.n
            if problems:
                verdict["error"] = problems[0]
        except (EngineIncomplete, EngineInvariantError) as exc:
            verdict["ok"] = False
            verdict["error"] = f"{type(exc).__name__}: {exc}"
        verdict["fallbacks"] = trace.fallbacks
        out.append(verdict)
    return out


def cmd_stress(args) -> int:
    seed = base_seed(args.seed)
    jobs = []
    for n in range(1, args.n_max + 1):
        for i, g in enumerate(generator.all_connected_planar(n)):
            jobs.append((n, i, g.rotations, g.outer, args.seeds, args.universe, args.strict, seed))
    start = time.time()
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_stress_graph, jobs, chunksize=8))
    else:
        results = [_stress_graph(j) for j in jobs]
    verdicts = [v for batch in results for v in batch]
    failures = [v for v in verdicts if not v["ok"]]
    report = {
        "instances": len(verdicts),
        "graphs": len(jobs),
        "failures": len(failures),
        "fallbacks": sum(v["fallbacks"] for v in verdicts),
        "seconds": round(time.time() - start, 2),
        "seed": seed,
        "strict": args.strict,
        "first_failures": failures[:10],
    }
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            for v in verdicts:
                fh.write(json.dumps(v, sort_keys=True) + "\n")
    _emit(report)
    return EXIT_OK if not failures else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="girthwright", description="Local girth list colouring of plane graphs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name: str, fn, help_text: str, engine: bool = False, dot: bool = True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file")
        if engine:
            sp.add_argument("--strict", action="store_true", help="fail instead of falling back to search")
        if dot:
            sp.add_argument("--dot", metavar="PATH", help="also write a Graphviz file")
        sp.set_defaults(fn=fn)
        return sp

    with_file("colour", cmd_colour, "colour a graph from its lists", engine=True)
    with_file("extend", cmd_extend, "extend the precolouring of S", engine=True)
    with_file("classify", cmd_classify, "report whether a canvas is exceptional")
    with_file("girths", cmd_girths, "girth of every vertex")
    oc = with_file("oracle-check", cmd_oracle_check, "colourings of S that do not extend", dot=False)
    oc.add_argument("--node-limit", type=int, default=0)

    g = sub.add_parser("gen", help="write generated instances")
    g.add_argument("--n", type=int, required=True)
    g.add_argument(
        "--kind",
        choices=["all-planar", "planar", "canvas", "wheel", "broken-wheel", "generalized-wheel"],
        default="planar",
    )
    g.add_argument("--seed", type=int)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--min-girth", type=int, default=3)
    g.add_argument("--out", default=".")
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("stress", help="colour every small planar graph from sampled lists")
    s.add_argument("--n-max", type=int, default=7)
    s.add_argument("--seeds", type=int, default=50)
    s.add_argument("--universe", type=int, default=6)
    s.add_argument("--strict", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.add_argument("--report", metavar="PATH", help="write one JSON verdict per instance")
    s.set_defaults(fn=cmd_stress)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except (FormatError, CanvasInvalid, AssignmentInvalid, PhiImproper, NotAPath, NotACycle, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EngineIncomplete, EngineInvariantError) as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
