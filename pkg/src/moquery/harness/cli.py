"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 data error, 4 solver or capacity error.
"""

import argparse
import json
import os
import sys
import time

from moquery import flexsky, oracle, skyline, topk
from moquery.errors import CapacityError, ContractError, DataError, SolverError
from moquery.fixtures import F1, F2, PREFER_SCORE, photographers
from moquery.harness import bench
from moquery.harness.formats import dataset_csv, format_ids, parse_constraints, read_constraints, rows_csv
from moquery.harness.generate import ANTICORRELATED_SPREAD, CORRELATED_JITTER, DISTRIBUTIONS, GenSpec, generate
from moquery.model import ScoringFunction, load_csv, make_polytope
from moquery.stats import Counters

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SOLVER = 0, 2, 3, 4

GEN_EPILOG = f"""\
distributions:
  independent     i.i.d. uniform on [0,1]^m
  correlated      base u ~ U[0,1] per tuple, x_i = u + U(-{CORRELATED_JITTER}, {CORRELATED_JITTER})
  anticorrelated  uniform point projected onto sum(x) = m/2, then offset along
                  the plane normal by N(0, {ANTICORRELATED_SPREAD})
points outside [0,1]^m are redrawn. MOQUERY_SEED overrides --seed.
"""

CONSTRAINT_HELP = ("constraints file, one inequality per line such as 'w1 - w2 <= 0'; "
                   "strict '<'/'>' are treated as closed half-spaces")


class OracleMismatch(SolverError):
    pass


def _seed(args):
    env = os.environ.get("MOQUERY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ContractError(f"MOQUERY_SEED must be an integer, got {env!r}") from None
    return args.seed


def _weights(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise ContractError(f"--weights must be comma-separated numbers, got {text!r}") from None


def _load(args):
    return load_csv(args.data, minimize=args.min or ())


def _polytope(args, m):
    cons = []
    if args.constraints:
        cons += read_constraints(args.constraints, m)
    if args.constraint:
        cons += parse_constraints(args.constraint, m)
    return make_polytope(m, cons)


def _report(op, algo, ids, stats, started):
    return {
        "operator": op, "algo": algo, "outputSize": len(ids),
        "sortedAccesses": stats.sorted_accesses, "randomAccesses": stats.random_accesses,
        "dominanceTests": stats.dominance_tests, "lpSolves": stats.lp_solves,
        "vertexEnumerations": stats.vertex_enumerations, "maxBuffer": stats.max_buffer,
        "wallTime": time.perf_counter() - started,
    }


def cmd_gen(args, out):
    spec = GenSpec(args.n, args.m, args.dist, _seed(args))
    text = dataset_csv(generate(spec))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return {"operator": "gen", "algo": args.dist, "outputSize": args.n, "seed": spec.seed}


def cmd_topk(args, out):
    d = _load(args)
    f = ScoringFunction(_weights(args.weights))
    started = time.perf_counter()
    idx = topk.build_index(d)
    if args.algo == "nra" and args.ordered:
        res = topk.nra_ordered(idx, f, args.k)
    else:
        res = topk.ALGORITHMS[args.algo](idx, f, args.k)
    rep = _report("topk", args.algo, res.ids, res.stats, started)
    if args.oracle:
        want = {i for i, _ in oracle.brute_topk(d, f, args.k)}
        scores = oracle.brute_scores(d, f)
        kth = min(scores[i] for i in want)
        if not all(scores[i] >= kth - 1e-9 for i in res.ids):
            raise OracleMismatch(f"top-k {sorted(res.ids)} disagrees with oracle {sorted(want)}")
    scores = [s for _, s in res.entries] if args.scores and res.entries[0][1] is not None else None
    out.write(format_ids(res.ids, scores, args.json, rep if args.json else None))
    return rep


def cmd_skyline(args, out):
    d = _load(args)
    stats = Counters()
    started = time.perf_counter()
    ids = skyline.bnl(d, stats) if args.algo == "bnl" else skyline.sfs(d, stats)
    rep = _report("skyline", args.algo, ids, stats, started)
    rep["evictions"] = stats.evictions
    if args.oracle and sorted(ids) != oracle.brute_skyline(d):
        raise OracleMismatch("skyline disagrees with the brute-force oracle")
    out.write(format_ids(ids, None, args.json, rep if args.json else None))
    return rep


def cmd_flexsky(args, out):
    d = _load(args)
    W = _polytope(args, d.m)
    stats = Counters()
    started = time.perf_counter()
    q = flexsky.make_query(W, args.backend, stats)
    run = flexsky.nd if args.op == "nd" else flexsky.po
    ids = run(d, q, args.algo, stats)
    rep = _report(f"flexsky {args.op}", f"{args.algo}/{q.backend}", ids, stats, started)
    rep["maxWindowTests"] = stats.max_window_tests
    if args.oracle:
        if args.op == "nd":
            ok = ids == oracle.brute_nd(d, W)
        else:
            ok = set(oracle.brute_po(d, W)) <= set(ids)
        if not ok:
            raise OracleMismatch(f"flexsky {args.op} disagrees with the oracle")
    out.write(format_ids(ids, None, args.json, rep if args.json else None))
    return rep


def cmd_bench(args, out):
    base = _seed(args)
    seeds = [base + i for i in range(args.seeds)]
    dists = args.dist or list(DISTRIBUTIONS)
    sizes = args.n or [1000]
    if args.suite == "sizes":
        rows = bench.bench_sizes(dists, sizes, args.polytope or ["w1<=w2"], args.m, seeds, args.k, args.workers)
        text = rows_csv(rows, bench.SIZE_COLUMNS)
    else:
        rows = bench.bench_access(dists, sizes, args.m, seeds, args.k, args.workers)
        text = rows_csv(rows, bench.ACCESS_COLUMNS)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return {"operator": "bench", "algo": args.suite, "outputSize": len(rows), "seed": base}


def demo_answers():
    """Run every operator on the photographer table."""
    d = photographers()
    idx = topk.build_index(d)
    ans = {}
    for name, w in (("F1", F1), ("F2", F2)):
        f = ScoringFunction(w)
        ans[name] = {a: topk.ALGORITHMS[a](idx, f, 1).ids for a in ("fa", "ta", "nra")}
    ans["skyline"] = {"bnl": skyline.bnl(d), "sfs": sorted(skyline.sfs(d))}
    W = make_polytope(2, [PREFER_SCORE])
    for op, fn in (("nd", flexsky.nd), ("po", flexsky.po)):
        ans[op] = {}
        for backend in flexsky.BACKENDS:
            q = flexsky.make_query(W, backend)
            for algo in ("baseline", "opt"):
                ans[op][f"{algo}/{backend}"] = fn(d, q, algo)
    return ans


def cmd_demo(args, out):
    ans = demo_answers()
    lines = []

    def agreed(key):
        vals = {tuple(v) for v in ans[key].values()}
        if len(vals) != 1:
            raise OracleMismatch(f"algorithms disagree on {key}: {ans[key]}")
        return list(vals.pop())

    lines.append(f"topk(F1)={','.join(agreed('F1'))}")
    lines.append(f"topk(F2)={','.join(agreed('F2'))}")
    lines.append(f"skyline={{{','.join(agreed('skyline'))}}}")
    lines.append(f"nd={{{','.join(agreed('nd'))}}}")
    lines.append(f"po={{{','.join(agreed('po'))}}}")
    if args.json:
        out.write(json.dumps(ans, sort_keys=True) + "\n")
    else:
        out.write("photographer dataset, F1 = 0.6*experience + 2*score, F2 = 1.3*experience + score,"
                  f" flexible skyline under {PREFER_SCORE}\n")
        out.write("\n".join(lines) + "\n")
    return {"operator": "demo", "algo": "all", "outputSize": len(lines)}


def _add_common(p, oracle_flag=True):
    p.add_argument("data", help="CSV file: header row, id in the first column")
    p.add_argument("--min", action="append", metavar="COL", help="column where smaller is better (repeatable)")
    p.add_argument("--json", action="store_true", help="emit {ids, scores?, stats} as JSON")
    if oracle_flag:
        p.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)


def build_parser():
    parser = argparse.ArgumentParser(prog="moquery", description="Top-k, skyline and flexible skyline queries.")
    parser.add_argument("--report", metavar="PATH", help="write a JSON run report")
    sub = parser.add_subparsers(dest="command", required=True)
    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--report", metavar="PATH", default=argparse.SUPPRESS, help="write a JSON run report")

    p = sub.add_parser("gen", parents=[report], help="generate a synthetic dataset", epilog=GEN_EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="independent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("topk", parents=[report], help="top-k under a weighted sum")
    _add_common(p)
    p.add_argument("--algo", choices=sorted(topk.ALGORITHMS), default="ta")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--weights", required=True, help="comma-separated non-negative weights")
    p.add_argument("--scores", action="store_true", help="print scores next to ids (fa, ta)")
    p.add_argument("--ordered", action="store_true", help="with nra: rerun for k'=1..k to order the result")
    p.set_defaults(func=cmd_topk)

    p = sub.add_parser("skyline", parents=[report], help="Pareto skyline")
    _add_common(p)
    p.add_argument("--algo", choices=("bnl", "sfs"), default="sfs")
    p.set_defaults(func=cmd_skyline)

    p = sub.add_parser("flexsky", parents=[report], help="flexible skyline under weight constraints")
    p.add_argument("op", choices=("nd", "po"))
    _add_common(p)
    p.add_argument("--constraints", metavar="FILE", help=CONSTRAINT_HELP)
    p.add_argument("-c", "--constraint", action="append", metavar="EXPR", help="inline constraint (repeatable)")
    p.add_argument("--backend", choices=flexsky.BACKENDS, default=None,
                   help="F-dominance test (default: ve for m<=4 and c<=8, else lp)")
    p.add_argument("--algo", choices=("baseline", "opt"), default="opt")
    p.set_defaults(func=cmd_flexsky)

    p = sub.add_parser("bench", parents=[report], help="benchmark suites as CSV")
    p.add_argument("--suite", choices=("sizes", "access"), default="sizes")
    p.add_argument("--dist", action="append", choices=DISTRIBUTIONS)
    p.add_argument("--n", action="append", type=int)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--polytope", action="append", choices=sorted(bench.POLYTOPES))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("demo", parents=[report], help="run the photographer example")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_demo)
    return parser


def run_cli(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        rep = args.func(args, out)
    except ContractError as e:
        err.write(f"moquery: usage error: {e}\n")
        return EXIT_USAGE
    except (DataError, OSError) as e:
        err.write(f"moquery: {e}\n")
        return EXIT_DATA
    except (CapacityError, SolverError) as e:
        err.write(f"moquery: solver error: {e}\n")
        return EXIT_SOLVER
    if args.report:
        rep.setdefault("seed", getattr(args, "seed", None))
        rep["argv"] = argv
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(rep, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def main():
    sys.exit(run_cli())
