"""Benchmark cells comparing output sizes and operator costs.

Rows are plain dicts written as CSV for plotting. Nothing here asserts
anything; tests and the acceptance suite do that.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from moquery import flexsky, skyline, topk
from moquery.harness.generate import GenSpec, generate
from moquery.model import ScoringFunction, make_polytope
from moquery.stats import Counters

SIZE_COLUMNS = ["distribution", "n", "skylineSize", "ndSize", "poSize",
                "m", "seed", "polytope", "topkSize", "sfsTests", "ndWindowTests", "poLpSolves"]
ACCESS_COLUMNS = ["distribution", "n", "m", "seed", "k",
                  "faSorted", "faRandom", "taSorted", "taRandom", "taMaxBuffer", "nraSorted",
                  "bnlTests", "sfsTests", "bnlEvictions", "sfsEvictions"]

# named polytopes usable from the command line
POLYTOPES = {
    "simplex": (),
    "w1<=w2": ("w1 - w2 <= 0",),
}


@dataclass(frozen=True)
class Cell:
    distribution: str
    n: int
    m: int
    seed: int
    polytope: str = "w1<=w2"
    k: int = 10


def size_cell(cell: Cell) -> dict:
    d = generate(GenSpec(cell.n, cell.m, cell.distribution, cell.seed))
    W = make_polytope(cell.m, POLYTOPES[cell.polytope])
    q = flexsky.make_query(W)
    sky_stats, nd_stats, po_stats = Counters(), Counters(), Counters()
    sky = skyline.sfs(d, sky_stats)
    nd = flexsky.nd_sve1f(d, q, nd_stats)
    po = flexsky.po_podi2(d, q, po_stats)
    k = min(cell.k, d.n)
    top = topk.threshold(topk.build_index(d), ScoringFunction(q.sort_weights()), k)
    return {
        "distribution": cell.distribution, "n": cell.n, "m": cell.m, "seed": cell.seed,
        "polytope": cell.polytope, "skylineSize": len(sky), "ndSize": len(nd),
        "poSize": len(po), "topkSize": len(top.ids), "sfsTests": sky_stats.dominance_tests,
        "ndWindowTests": sum(nd_stats.window_tests), "poLpSolves": po_stats.lp_solves,
    }


def access_cell(cell: Cell) -> dict:
    d = generate(GenSpec(cell.n, cell.m, cell.distribution, cell.seed))
    idx = topk.build_index(d)
    f = ScoringFunction([1.0 / cell.m] * cell.m)
    k = min(cell.k, d.n)
    fa, ta, nr = topk.fagin(idx, f, k), topk.threshold(idx, f, k), topk.nra(idx, f, k)
    b, s = Counters(), Counters()
    skyline.bnl(d, b)
    skyline.sfs(d, s)
    return {
        "distribution": cell.distribution, "n": cell.n, "m": cell.m, "seed": cell.seed, "k": k,
        "faSorted": fa.stats.sorted_accesses, "faRandom": fa.stats.random_accesses,
        "taSorted": ta.stats.sorted_accesses, "taRandom": ta.stats.random_accesses,
        "taMaxBuffer": ta.stats.max_buffer, "nraSorted": nr.stats.sorted_accesses,
        "bnlTests": b.dominance_tests, "sfsTests": s.dominance_tests,
        "bnlEvictions": b.evictions, "sfsEvictions": s.evictions,
    }


def _run(fn, cells, workers):
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(fn, cells))
    return [fn(c) for c in cells]


def grid(distributions, sizes, m=2, seeds=(0,), polytopes=("w1<=w2",), k=10):
    return [Cell(dist, n, m, seed, poly, k)
            for dist in distributions for n in sizes for poly in polytopes for seed in seeds]


def bench_sizes(distributions, sizes, polytopes=("w1<=w2",), m=2, seeds=(0,), k=10, workers=1):
    return _run(size_cell, grid(distributions, sizes, m, seeds, polytopes, k), workers)


def bench_access(distributions, sizes, m=2, seeds=(0,), k=10, workers=1):
    return _run(access_cell, grid(distributions, sizes, m, seeds, ("simplex",), k), workers)
