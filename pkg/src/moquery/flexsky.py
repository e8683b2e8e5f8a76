"""Flexible skyline: non-dominated (ND) and potentially optimal (PO) tuples
under a polytope of admissible weight vectors.

F-dominance is tested with one of two interchangeable backends: vertex
scores ("ve") or one LP per pair ("lp"). Two tuples with identical values
never F-dominate each other. A pair that ties at every vertex (possible only
for polytopes of lower dimension than the simplex) falls back to Pareto
dominance, which keeps the relation a strict order and ND inside the skyline.
"""

from dataclasses import dataclass
from typing import Optional

from moquery import geometry
from moquery.errors import ContractError
from moquery.geometry import EPS, LinearProgram, Row
from moquery.skyline import dominates, sfs
from moquery.stats import Counters

BACKENDS = ("lp", "ve")


def default_backend(W):
    return "ve" if W.m <= 4 and W.c <= 8 else "lp"


@dataclass(frozen=True)
class FlexQuery:
    polytope: object
    vertices: geometry.VertexSet
    backend: str = "ve"
    # LP size caps for the PO tests; exceeding them raises CapacityError
    max_lp_vars: int = geometry.MAX_LP_VARS
    max_lp_rows: int = geometry.MAX_LP_ROWS

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ContractError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        for v in self.vertices.vertices:
            if not self.polytope.contains(v, eps=1e-7):
                raise ContractError(f"vertex {v} lies outside the polytope")

    @classmethod
    def build(cls, W, backend=None, stats=None, **caps):
        """Enumerate the polytope's vertices once and wrap them with ``W``."""
        return cls(W, geometry.enumerate_vertices(W, stats=stats), backend or default_backend(W), **caps)

    @property
    def m(self):
        return self.polytope.m

    def sort_weights(self):
        return self.vertices.centroid()


class _Relation:
    """F-dominance between dataset tuples, memoised per run."""

    def __init__(self, q: FlexQuery, stats: Counters):
        self.q = q
        self.stats = stats
        self._scores = {}
        self._closed = {}

    def scores(self, t):
        s = self._scores.get(t.id)
        if s is None:
            s = self._scores[t.id] = geometry.vertex_scores(t.values, self.q.vertices)
        return s

    def closed(self, a, b):
        """a F-dominates b in the closed sense."""
        key = (a.id, b.id)
        r = self._closed.get(key)
        if r is None:
            self.stats.dominance_tests += 1
            if self.q.backend == "ve":
                r = geometry.scores_dominate(self.scores(a), self.scores(b))
            else:
                r = geometry.fdominates_lp(a.values, b.values, self.q.polytope, stats=self.stats)
            self._closed[key] = r
        return r

    def beats(self, a, b):
        if a.values == b.values or not self.closed(a, b):
            return False
        if not self.closed(b, a):
            return True
        return dominates(a, b)


def _check(d, q):
    if d.m != q.m:
        raise ContractError(f"dataset has {d.m} attributes, polytope has dimension {q.m}")


def _sort_key(q):
    w = q.sort_weights()

    def key(t):
        return (-geometry._dot(w, t.values), tuple(-x for x in t.values), t.id)

    return key


def nd_baseline(d, q: FlexQuery, stats=None):
    """Two phases: SFS skyline, then pairwise F-dominance inside it."""
    _check(d, q)
    stats = stats if stats is not None else Counters()
    sky = [d.by_id[i] for i in sfs(d, stats)]
    rel = _Relation(q, stats)
    out = []
    for t in sky:
        tests = 0
        dominated = False
        for s in sky:
            if s is t:
                continue
            tests += 1
            if rel.beats(s, t):
                dominated = True
                break
        stats.window_tests.append(tests)
        if not dominated:
            out.append(t.id)
    return sorted(out)


def _sve1f_window(d, q, stats):
    rel = _Relation(q, stats)
    window = []
    for t in sorted(d.tuples, key=_sort_key(q)):
        tests = 0
        dominated = False
        for w in window:
            tests += 1
            if rel.beats(w, t):
                dominated = True
                break
        stats.window_tests.append(tests)
        if not dominated:
            window.append(t)
    return window


def nd_sve1f(d, q: FlexQuery, stats=None):
    """One phase: presort by the vertex-centroid score, filter against the ND window."""
    _check(d, q)
    stats = stats if stats is not None else Counters()
    return sorted(t.id for t in _sve1f_window(d, q, stats))


def _others(t, nd):
    return [s for s in nd if s.values != t.values]


def primal_po_test(t, S, q: FlexQuery, stats=None) -> bool:
    """Is ``t`` a top-1 tuple against ``S`` for some admissible weight vector?

    maximize delta s.t. w in W, w.(t - s) >= delta for every s in S.
    At delta == 0, ``t`` counts only if it ties for the top at some relative
    interior point of W.
    """
    if not S:
        return True
    m = q.m
    if q.backend == "lp":
        rows = [Row(tuple(a) + (0.0,), "<=", b) for a, b in (
            (k.coeffs, k.bound) for k in q.polytope.constraints)]
        rows.append(Row((1.0,) * m + (0.0,), "=", 1.0))
        for s in S:
            rows.append(Row(tuple(x - y for x, y in zip(t.values, s.values)) + (-1.0,), ">=", 0.0))
        lp = LinearProgram((0.0,) * m + (1.0,), "max", tuple(rows), (0.0,) * m + (None,))
    else:
        V = q.vertices.vertices
        nv = len(V)
        rows = [Row((1.0,) * nv + (0.0,), "=", 1.0)]
        for s in S:
            diff = [x - y for x, y in zip(t.values, s.values)]
            rows.append(Row(tuple(geometry._dot(v, diff) for v in V) + (-1.0,), ">=", 0.0))
        lp = LinearProgram((0.0,) * nv + (1.0,), "max", tuple(rows), (0.0,) * nv + (None,))
    sol = geometry.solve_lp(lp, max_vars=q.max_lp_vars, max_rows=q.max_lp_rows, stats=stats)
    if not sol.optimal:
        raise geometry.SolverError(f"primal PO LP ended {sol.status}")
    if sol.value > EPS:
        return True
    if sol.value < -EPS:
        return False
    return _ties_in_relative_interior(t, S, q, stats)


def _ties_in_relative_interior(t, S, q, stats):
    V = q.vertices.vertices
    nv = len(V)
    rows = [Row((1.0,) * nv + (0.0,), "=", 1.0)]
    for j in range(nv):
        rows.append(Row(tuple(1.0 if i == j else 0.0 for i in range(nv)) + (-1.0,), ">=", 0.0))
    for s in S:
        diff = [x - y for x, y in zip(t.values, s.values)]
        rows.append(Row(tuple(geometry._dot(v, diff) for v in V) + (0.0,), ">=", 0.0))
    lp = LinearProgram((0.0,) * nv + (1.0,), "max", tuple(rows), (0.0,) * nv + (None,))
    sol = geometry.solve_lp(lp, max_vars=q.max_lp_vars, max_rows=q.max_lp_rows, stats=stats)
    return sol.optimal and sol.value > EPS


def dual_excludes(t, S, q: FlexQuery, stats=None) -> bool:
    """Is ``t`` F-dominated by a convex combination of ``S``?

    A combination that merely ties ``t`` at every vertex does not exclude it.
    """
    if not S:
        return False
    caps = dict(max_vars=q.max_lp_vars, max_rows=q.max_lp_rows)
    sol = geometry.combo_lp(t, S, q.vertices, stats=stats, **caps)
    if sol.value < -EPS:
        return False
    if sol.value > EPS:
        return True
    return geometry.combo_strict_gain(t, S, q.vertices, stats=stats, **caps) > EPS


def po_baseline(d, q: FlexQuery, stats=None):
    """ND first, then the primal potential-optimality LP for every ND tuple."""
    _check(d, q)
    stats = stats if stats is not None else Counters()
    nd = [d.by_id[i] for i in nd_baseline(d, q, stats)]
    return sorted(t.id for t in nd if primal_po_test(t, _others(t, nd), q, stats))


def po_podi2(d, q: FlexQuery, stats=None):
    """ND via SVE1F, then the dual test on batches of doubling size (2, 4, 8, ...)
    taken from the other ND tuples in sort order; a tuple is dropped at the first
    batch whose hull F-dominates it."""
    _check(d, q)
    stats = stats if stats is not None else Counters()
    nd = _sve1f_window(d, q, stats)
    out = []
    for t in nd:
        others = _others(t, nd)
        size = 2
        keep = True
        while others:
            batch = others[:size]
            if dual_excludes(t, batch, q, stats):
                keep = False
                break
            if len(batch) == len(others):
                break
            size *= 2
        if keep:
            out.append(t.id)
    return sorted(out)


ND_ALGOS = {"baseline": nd_baseline, "opt": nd_sve1f}
PO_ALGOS = {"baseline": po_baseline, "opt": po_podi2}


def _lookup(table, algo):
    if algo not in table:
        raise ContractError(f"algorithm must be one of {sorted(table)}, got {algo!r}")
    return table[algo]


def nd(d, q, algo="opt", stats=None):
    return _lookup(ND_ALGOS, algo)(d, q, stats)


def po(d, q, algo="opt", stats=None):
    return _lookup(PO_ALGOS, algo)(d, q, stats)


def make_query(W, backend: Optional[str] = None, stats=None, **caps) -> FlexQuery:
    return FlexQuery.build(W, backend, stats, **caps)
