"""Command-line harness: generate instances, run algorithms, verify.

Every subcommand emits one JSON report (stdout or --out) shaped as
{command, graph, result, check, trace, wall_time_s}; exact quantities are
"p/q" strings, never JSON numbers. The exit code is 0 iff every guarantee
check in the run passed. `bench` instead writes a CSV scaling table.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import detect_congest as dc
from . import detect_local as dl
from . import graphs as G
from . import mwu
from . import oracle
from . import orient as ort
from .decompose import ldd_traced
from .engine import RoundTrace
from .graphs import Graph, density, format_ratio, parse_ratio

ORACLE_EDGE_LIMIT = 20000


def _load_graph(path_arg: str):
    with open(path_arg, "r", encoding="utf-8") as f:
        return G.read_edge_list(f.read())


def _graph_stats(g) -> dict:
    stats = {"n": g.n, "m": g.m}
    if isinstance(g, Graph):
        stats["max_degree"] = g.max_degree()
        if 1 <= g.m <= ORACLE_EDGE_LIMIT:
            stats["oracle_density"] = format_ratio(oracle.exact_densest(g).value)
        else:
            stats["oracle_density"] = None
    return stats


def _parse_params(text: str | None) -> dict:
    out = {}
    if text:
        for item in text.split(","):
            key, _, value = item.partition("=")
            if not _:
                raise SystemExit(f"bad --params entry {item!r}; want key=value")
            out[key.strip()] = value.strip()
    return out


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _report(args, g, result: dict, check: dict | None, trace: RoundTrace | None, t0: float):
    payload = {
        "command": " ".join(sys.argv[1:]) if sys.argv[1:] else args.cmd,
        "graph": _graph_stats(g) if g is not None else None,
        "result": result,
        "check": check,
        "trace": trace.to_json() if trace is not None else None,
        "wall_time_s": round(time.time() - t0, 3),
    }
    _emit(args, payload)
    if check is not None and not check.get("pass", True):
        return 1
    return 0


def _check(bound: Fraction, achieved: Fraction, ok: bool) -> dict:
    return {
        "bound": format_ratio(bound),
        "achieved": format_ratio(achieved),
        "pass": bool(ok),
    }


def cmd_gen(args) -> int:
    params = _parse_params(args.params)
    made = G.generate(args.kind, params, args.seed)
    if isinstance(made, tuple):
        if not args.out:
            raise SystemExit("--out is required for lowerbound_pair")
        names = [args.out + ".cycle", args.out + ".path"]
        for g, name in zip(made, names):
            with open(name, "w", encoding="utf-8") as f:
                f.write(G.write_edge_list(g))
        sys.stdout.write(json.dumps({"written": names}) + "\n")
        return 0
    text = G.write_edge_list(made)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        sys.stdout.write(
            json.dumps({"written": [args.out], "n": made.n, "m": made.m}) + "\n"
        )
    else:
        sys.stdout.write(text)
    return 0


def cmd_exact(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    if args.brute:
        res = (
            oracle.brute_directed_densest(g)
            if isinstance(g, G.DirectedGraph)
            else oracle.brute_densest(g)
        )
    else:
        res = oracle.exact_densest(g)
    if isinstance(res.best_subset, tuple):
        s, t = res.best_subset
        result = {
            "D_squared": format_ratio(res.value),
            "S": list(s.ids()),
            "T": list(t.ids()),
        }
    else:
        result = {
            "D": format_ratio(res.value),
            "witness": list(res.best_subset.ids()),
        }
    payload = {
        "command": " ".join(sys.argv[1:]),
        "graph": {"n": g.n, "m": g.m},
        "result": result,
        "check": None,
        "trace": None,
        "wall_time_s": round(time.time() - t0, 3),
    }
    _emit(args, payload)
    return 0


def cmd_detect_local(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    dtilde, eps = parse_ratio(args.dtilde), parse_ratio(args.eps)
    out, trace = dl.local_detect(g, dtilde, eps)
    result = out.to_json(g, trace.rounds_executed)
    bound = (1 - eps) * dtilde
    if len(out.marked):
        achieved = density(g, out.marked)
        ok = achieved >= bound
    else:
        achieved = Fraction(0)
        ok = True  # empty output is sound for any dtilde
    return _report(args, g, result, _check(bound, achieved, ok), trace, t0)


def cmd_detect_congest(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    dtilde, eps = parse_ratio(args.dtilde), parse_ratio(args.eps)
    sub, trace = dc.congest_detect(
        g, dtilde, eps, args.seed, trials_override=args.trials
    )
    bound = (1 - eps) * dtilde
    achieved = density(g, sub) if len(sub) else Fraction(0)
    ok = achieved >= bound if len(sub) else True
    result = {
        "marked": list(sub.ids()),
        "density": format_ratio(achieved) if len(sub) else None,
        "trials": args.trials or dc.default_trials(g.n),
        "rounds": trace.rounds_executed,
    }
    return _report(args, g, result, _check(bound, achieved, ok), trace, t0)


def cmd_approx(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    eps = parse_ratio(args.eps)
    sub, dhat, trace = dc.approx_densest(g, eps, args.seed)
    result = {
        "marked": list(sub.ids()),
        "density": format_ratio(dhat),
        "phases": dc.phase_count(g.n, eps) + 1,
        "rounds": trace.rounds_executed,
    }
    check = None
    if 1 <= g.m <= ORACLE_EDGE_LIMIT:
        d = oracle.exact_densest(g).value
        bound = (1 - eps) * d / (1 + eps)
        check = _check(bound, dhat, dhat >= bound)
    return _report(args, g, result, check, trace, t0)


def cmd_dual(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    z, eps = parse_ratio(args.z), parse_ratio(args.eps)
    sol, trace = mwu.fractional_dual(g, z, eps, T_override=args.T)
    result = sol.to_json()
    check = None
    if 1 <= g.m <= ORACLE_EDGE_LIMIT:
        d = oracle.exact_densest(g).value
        if z >= d:
            check = {
                "bound": "feasible for DUAL((1+2eps)z) since z >= D",
                "achieved": str(sol.feasible),
                "pass": sol.feasible,
            }
    return _report(args, g, result, check, trace, t0)


def cmd_primal(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    z, eps = parse_ratio(args.z), parse_ratio(args.eps)
    sub, trace = mwu.integral_primal(g, z, eps, T_override=args.T)
    bound = (1 - 3 * eps) * z
    if sub is not None:
        achieved = density(g, sub)
        ok = achieved >= bound
        result = {
            "found": True,
            "members": list(sub.ids()),
            "density": format_ratio(achieved),
            "rounds": trace.rounds_executed,
        }
        check = _check(bound, achieved, ok)
    else:
        # the testable contract is the disjunction with the dual run
        sol, _ = mwu.fractional_dual(g, z, eps, T_override=args.T)
        result = {"found": False, "rounds": trace.rounds_executed}
        check = {
            "bound": "no output, so the dual at the same (z, eps) must be feasible",
            "achieved": str(sol.feasible),
            "pass": sol.feasible,
        }
    return _report(args, g, result, check, trace, t0)


def cmd_orient(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    eps = parse_ratio(args.eps)
    rep = ort.orient_low_outdegree_detailed(
        g, args.dtilde, eps, T_override=args.T
    )
    achieved = Fraction(rep.orientation.max_outdeg())
    bound = (1 + eps) * args.dtilde
    if args.orient_out:
        with open(args.orient_out, "w", encoding="utf-8") as f:
            f.write(rep.orientation.to_text())
    result = {
        "max_outdeg": rep.orientation.max_outdeg(),
        "bound": f"(1+{args.eps})*{args.dtilde}",
        "rounds": rep.trace.rounds_executed,
    }
    return _report(
        args, g, result, _check(bound, achieved, achieved <= bound), rep.trace, t0
    )


def cmd_split(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    eps = parse_ratio(args.eps)
    o = ort.directed_split(g, eps)
    outs, ins = o.outdegs(), o.indegs()
    worst = max(
        (abs(outs[v] - ins[v]) - eps * g.degree(v) for v in range(g.n)),
        default=Fraction(0),
    )
    ok = all(
        abs(outs[v] - ins[v]) <= eps * g.degree(v) + 12 for v in range(g.n)
    )
    if args.orient_out:
        with open(args.orient_out, "w", encoding="utf-8") as f:
            f.write(o.to_text())
    result = {
        "max_discrepancy": max(
            (abs(outs[v] - ins[v]) for v in range(g.n)), default=0
        ),
    }
    check = {
        "bound": f"eps*deg(v)+12 with eps={args.eps}",
        "achieved": format_ratio(Fraction(worst)),
        "pass": ok,
    }
    return _report(args, g, result, check, None, t0)


def cmd_weak_orient(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    o, phases = ort.weak_orientation(g)
    outs = o.outdegs()
    ok = all(outs[v] >= g.degree(v) // 3 for v in range(g.n))
    if args.orient_out:
        with open(args.orient_out, "w", encoding="utf-8") as f:
            f.write(o.to_text())
    result = {"phases": phases, "min_slack": min(
        (outs[v] - g.degree(v) // 3 for v in range(g.n)), default=0
    )}
    check = {
        "bound": "outdeg(v) >= floor(deg(v)/3)",
        "achieved": str(ok),
        "pass": ok,
    }
    return _report(args, g, result, check, None, t0)


def cmd_ldd(args) -> int:
    t0 = time.time()
    g = _load_graph(args.infile)
    eps = parse_ratio(args.eps)
    clustering, trace = ldd_traced(g, eps, args.seed)
    # radius check per cluster
    ok = True
    for center, members in clustering.clusters().items():
        mem = set(members)
        from collections import deque

        dist = {center: 0}
        q = deque([center])
        while q:
            v = q.popleft()
            for u in g.neighbors(v):
                if u in mem and u not in dist:
                    dist[u] = dist[v] + 1
                    q.append(u)
        if set(dist) != mem or max(dist.values()) > clustering.budget:
            ok = False
    result = {
        "centers": list(clustering.centers),
        "cut_edges": clustering.cut_edges,
        "budget": clustering.budget,
        "rounds": trace.rounds_executed,
    }
    check = {
        "bound": f"in-cluster radius <= {clustering.budget}, clusters connected",
        "achieved": str(ok),
        "pass": ok,
    }
    return _report(args, g, result, check, trace, t0)


def _bench_rows(suite: str):
    if suite == "ldd":
        for n in (32, 64, 128):
            for eps in (Fraction(1, 2), Fraction(1, 4)):
                for seed in range(3):
                    g = G.erdos_renyi(n, 0.1, seed=seed)
                    clustering, trace = ldd_traced(g, eps, seed)
                    yield {
                        "algorithm": "ldd",
                        "n": n,
                        "eps": format_ratio(eps),
                        "seed": seed,
                        "rounds": trace.rounds_executed,
                        "max_message_bits": trace.max_message_bits,
                        "pass": True,
                    }
    elif suite == "dual":
        for n in (16, 32, 64):
            for eps in (Fraction(1, 8), Fraction(1, 16)):
                g = G.erdos_renyi(n, 0.4, seed=n)
                d = oracle.exact_densest(g).value
                z = Fraction(G.frac_ceil(d))
                sol, trace = mwu.fractional_dual(g, z, eps, T_override=256)
                yield {
                    "algorithm": "dual",
                    "n": n,
                    "eps": format_ratio(eps),
                    "seed": n,
                    "rounds": trace.rounds_executed,
                    "max_message_bits": trace.max_message_bits,
                    "pass": sol.feasible,
                }
    elif suite == "detect-congest":
        for n in (16, 24, 32):
            for seed in range(2):
                g = G.planted_dense(n, 5, seed=seed)
                d = oracle.exact_densest(g).value
                eps = Fraction(1, 8)
                sub, trace = dc.congest_detect(g, d, eps, seed)
                ok = len(sub) > 0 and density(g, sub) >= (1 - eps) * d
                yield {
                    "algorithm": "detect-congest",
                    "n": n,
                    "eps": format_ratio(eps),
                    "seed": seed,
                    "rounds": trace.rounds_executed,
                    "max_message_bits": trace.max_message_bits,
                    "pass": ok,
                }
    else:
        raise SystemExit(
            f"unknown suite {suite!r}; options: ldd, dual, detect-congest"
        )


def cmd_bench(args) -> int:
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf,
        fieldnames=[
            "algorithm",
            "n",
            "eps",
            "seed",
            "rounds",
            "max_message_bits",
            "pass",
        ],
    )
    writer.writeheader()
    all_ok = True
    for row in _bench_rows(args.suite):
        all_ok = all_ok and row["pass"]
        writer.writerow(row)
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="densub",
        description="dense subgraph detection and low-outdegree orientation "
        "on a simulated LOCAL/CONGEST network",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("gen", help="generate an instance")
    sp.add_argument("--kind", required=True)
    sp.add_argument("--params", default=None, help="comma list key=value")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("exact", help="exact densest subgraph oracle")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--brute", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("detect-local", help="LOCAL-model detection")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--dtilde", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_detect_local)

    sp = sub.add_parser("detect-congest", help="CONGEST-model detection")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--dtilde", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_detect_congest)

    sp = sub.add_parser("approx", help="(1-eps)-approximate densest subgraph")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("dual", help="fractional orientation LP solver")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--T", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("primal", help="load-guided dense subgraph search")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--T", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_primal)

    sp = sub.add_parser("orient", help="(1+eps)*dtilde outdegree orientation")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--dtilde", type=int, required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--T", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--orient-out", default=None)
    sp.set_defaults(func=cmd_orient)

    sp = sub.add_parser("split", help="balanced in/out orientation")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--orient-out", default=None)
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("weak-orient", help="floor(deg/3) weak orientation")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--orient-out", default=None)
    sp.set_defaults(func=cmd_weak_orient)

    sp = sub.add_parser("ldd", help="low-diameter clustering")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_ldd)

    sp = sub.add_parser("bench", help="deterministic scaling tables (CSV)")
    sp.add_argument("--suite", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bench)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stdout.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)})
            + "\n"
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
