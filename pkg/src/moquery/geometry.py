"""LP and polytope machinery for flexible skyline queries.

Everything here works on plain sequences and on any polytope-like object
exposing ``m`` and ``halfspaces()`` (see ``model.WeightPolytope``), so the
module has no import-time dependency on the data model.
"""

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from moquery.errors import CapacityError, ContractError, SolverError

EPS = 1e-9
# entries below this (relative to the column) are treated as zero when pivoting
PIVOT_TOL = 1e-9

MAX_LP_VARS = 64
MAX_LP_ROWS = 256
MAX_VE_DIM = 8
MAX_VE_CONSTRAINTS = 32


@dataclass(frozen=True)
class Row:
    coeffs: tuple
    op: str  # "<=", ">=" or "="
    rhs: float


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple
    sense: str = "max"
    rows: tuple = ()
    # per-variable lower bound; None means the variable is free
    lower: Optional[tuple] = None

    @property
    def n_vars(self):
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Optional[float] = None
    witness: Optional[tuple] = None

    @property
    def optimal(self):
        return self.status == "optimal"


@dataclass(frozen=True)
class VertexSet:
    vertices: tuple

    @property
    def q(self):
        return len(self.vertices)

    @property
    def array(self):
        return np.array(self.vertices, dtype=float)

    def centroid(self):
        return tuple(float(x) for x in self.array.mean(axis=0))


def _run_simplex(T, basis, cost, allowed, max_iter):
    """Minimise ``cost . x`` over the canonical tableau ``T`` in place.

    Bland's rule: lowest-index improving column enters; ratio ties leave by
    lowest basic index. Returns "optimal" or "unbounded".
    """
    for _ in range(max_iter):
        reduced = cost[:-1] - cost[basis] @ T[:, :-1]
        improving = np.flatnonzero(allowed & (reduced < -EPS))
        if improving.size == 0:
            return "optimal"
        entering = improving[0]
        col = T[:, entering]
        candidates = np.flatnonzero(col > PIVOT_TOL * max(1.0, float(np.abs(col).max())))
        if candidates.size == 0:
            return "unbounded"
        ratios = T[candidates, -1] / col[candidates]
        best = ratios.min()
        tied = candidates[ratios <= best + PIVOT_TOL * (1.0 + abs(best))]
        leave = min(tied, key=lambda i: basis[i])
        _pivot(T, leave, entering)
        basis[leave] = entering
    raise SolverError(f"simplex did not terminate within {max_iter} pivots")


def _pivot(T, i, j):
    T[i] /= T[i, j]
    col = T[:, j].copy()
    col[i] = 0.0
    T -= np.outer(col, T[i])
    T[i, j] = 1.0


def solve_lp(lp: LinearProgram, *, max_vars=MAX_LP_VARS, max_rows=MAX_LP_ROWS, stats=None) -> LpSolution:
    """Two-phase dense tableau simplex with Bland's anti-cycling rule."""
    n = lp.n_vars
    if lp.sense not in ("max", "min"):
        raise ContractError(f"unknown sense {lp.sense!r}")
    if n > max_vars or len(lp.rows) > max_rows:
        raise CapacityError(
            f"LP of {n} variables x {len(lp.rows)} rows exceeds cap {max_vars} x {max_rows}")
    lower = lp.lower if lp.lower is not None else (0.0,) * n
    if len(lower) != n or any(len(r.coeffs) != n for r in lp.rows):
        raise ContractError("inconsistent LP arity")
    if stats is not None:
        stats.lp_solves += 1

    # column layout: shifted variable, or a positive/negative pair when free
    cols = []
    for j, lb in enumerate(lower):
        cols.append((j, 1.0, lb))
        if lb is None:
            cols.append((j, -1.0, None))
    nx = len(cols)

    A, b, ops = [], [], []
    for r in lp.rows:
        if r.op not in ("<=", ">=", "="):
            raise ContractError(f"unknown row operator {r.op!r}")
        row = [r.coeffs[j] * sgn for j, sgn, _ in cols]
        rhs = r.rhs - sum(r.coeffs[j] * lb for j, lb in enumerate(lower) if lb is not None)
        op = r.op
        if rhs < 0:
            row = [-a for a in row]
            rhs = -rhs
            op = {"<=": ">=", ">=": "<=", "=": "="}[op]
        A.append(row)
        b.append(rhs)
        ops.append(op)
    R = len(A)
    n_slack = sum(op != "=" for op in ops)
    n_art = sum(op != "<=" for op in ops)
    N = nx + n_slack + n_art
    T = np.zeros((R, N + 1))
    basis = [0] * R
    s_idx, a_idx = nx, nx + n_slack
    for i, (row, rhs, op) in enumerate(zip(A, b, ops)):
        T[i, :nx] = row
        T[i, -1] = rhs
        if op == "<=":
            T[i, s_idx] = 1.0
            basis[i] = s_idx
            s_idx += 1
        else:
            if op == ">=":
                T[i, s_idx] = -1.0
                s_idx += 1
            T[i, a_idx] = 1.0
            basis[i] = a_idx
            a_idx += 1
    basis = np.array(basis, dtype=int)
    max_iter = 50 * (R + N) + 100
    is_art = np.zeros(N, dtype=bool)
    is_art[nx + n_slack:] = True
    scale = 1.0 + (max(b) if b else 0.0)

    if n_art:
        cost1 = np.zeros(N + 1)
        cost1[:N][is_art] = 1.0
        _run_simplex(T, basis, cost1, np.ones(N, dtype=bool), max_iter)
        if float(cost1[basis] @ T[:, -1]) > EPS * scale:
            return LpSolution("infeasible")
        keep = []
        for i in range(R):
            if is_art[basis[i]]:
                nz = [j for j in range(N) if not is_art[j] and abs(T[i, j]) > PIVOT_TOL]
                if nz:
                    _pivot(T, i, nz[0])
                    basis[i] = nz[0]
                    keep.append(i)
                # else: redundant row, drop it
            else:
                keep.append(i)
        T = T[keep]
        basis = basis[keep]

    c = np.zeros(N + 1)
    sign = -1.0 if lp.sense == "max" else 1.0
    for k, (j, sgn, _) in enumerate(cols):
        c[k] = sign * sgn * lp.objective[j]
    status = _run_simplex(T, basis, c, ~is_art, max_iter)
    if status == "unbounded":
        return LpSolution("unbounded")

    xs = np.zeros(N)
    xs[basis] = np.maximum(T[:, -1], 0.0)
    x = [0.0 if lb is None else lb for lb in lower]
    for k, (j, sgn, _) in enumerate(cols):
        x[j] += sgn * xs[k]
    x = tuple(float(v) for v in x)
    _verify(lp, lower, x)
    value = float(sum(o * v for o, v in zip(lp.objective, x)))
    return LpSolution("optimal", value, x)


def _verify(lp, lower, x):
    for j, lb in enumerate(lower):
        if lb is not None and x[j] < lb - EPS * (1.0 + abs(lb)):
            raise SolverError(f"witness violates lower bound of variable {j}")
    for r in lp.rows:
        lhs = sum(a * v for a, v in zip(r.coeffs, x))
        mag = 1.0 + abs(r.rhs) + sum(abs(a * v) for a, v in zip(r.coeffs, x))
        tol = EPS * mag
        bad = (r.op == "<=" and lhs > r.rhs + tol) or (r.op == ">=" and lhs < r.rhs - tol) \
            or (r.op == "=" and abs(lhs - r.rhs) > tol)
        if bad:
            raise SolverError(f"witness violates row {r} (lhs={lhs!r})")


def _simplex_rows(W):
    m = W.m
    rows = [Row(tuple(a), "<=", b) for a, b in W.halfspaces() if any(a[i] != 0 for i in range(m)) and not _is_nonneg_row(a, b)]
    rows.append(Row((1.0,) * m, "=", 1.0))
    return rows


def _is_nonneg_row(a, b):
    # -w_i <= 0 rows are already the LP's default lower bounds
    return b == 0.0 and sum(1 for v in a if v != 0) == 1 and min(a) == -1.0


def is_feasible(W, stats=None) -> bool:
    """Whether simplex ∩ user constraints is non-empty."""
    for a, b in W.halfspaces():
        if not any(a) and b < -EPS:
            return False
    rows = _simplex_rows(W)
    sol = solve_lp(LinearProgram((0.0,) * W.m, "max", tuple(rows)),
                   max_rows=max(MAX_LP_ROWS, len(rows)), stats=stats)
    return sol.status == "optimal"


def enumerate_vertices(W, *, max_dim=MAX_VE_DIM, max_constraints=MAX_VE_CONSTRAINTS,
                       stats=None, chunk=20000) -> VertexSet:
    """All extreme points of the weight polytope.

    Intersects every (m-1)-subset of boundary hyperplanes with ``sum(w) = 1``,
    keeps feasible points, deduplicates within ``EPS`` and sorts them.
    """
    m = W.m
    c = len(W.halfspaces()) - m
    if m > max_dim or c > max_constraints:
        raise CapacityError(f"vertex enumeration capped at m<={max_dim}, c<={max_constraints}; got m={m}, c={c}")
    if stats is not None:
        stats.vertex_enumerations += 1
    hs = W.halfspaces()
    A = np.array([a for a, _ in hs], dtype=float).reshape(len(hs), m)
    b = np.array([bb for _, bb in hs], dtype=float)
    if m == 1:
        pts = np.ones((1, 1))
    else:
        found = []
        combos = itertools.combinations(range(len(hs)), m - 1)
        while True:
            block = np.array(list(itertools.islice(combos, chunk)), dtype=int)
            if block.size == 0:
                break
            block = block.reshape(-1, m - 1)
            M = np.concatenate([A[block], np.ones((len(block), 1, m))], axis=1)
            rhs = np.concatenate([b[block], np.ones((len(block), 1))], axis=1)
            ok = np.linalg.cond(M) < 1e10
            if not ok.any():
                continue
            sol = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
            found.append(sol)
        pts = np.concatenate(found) if found else np.empty((0, m))
    if len(pts):
        slack = pts @ A.T - b
        pts = pts[(slack <= EPS * (1.0 + np.abs(b))).all(axis=1)]
    pts = np.where(np.abs(pts) < EPS, 0.0, pts)
    uniq = []
    for p in sorted(map(tuple, pts.tolist())):
        if all(max(abs(x - y) for x, y in zip(p, u)) > EPS for u in uniq):
            uniq.append(p)
    if not uniq:
        raise SolverError("feasible polytope produced no vertices")
    return VertexSet(tuple(uniq))


def _dot(a, b):
    s = 0.0
    for x, y in zip(a, b):
        s += x * y
    return s


def vertex_scores(values, V: VertexSet):
    return tuple(_dot(v, values) for v in V.vertices)


def scores_dominate(st, ss, eps=EPS) -> bool:
    """Closed F-dominance on precomputed vertex scores."""
    return all(a >= b - eps for a, b in zip(st, ss))


def fdominates_ve(t, s, V: VertexSet, eps=EPS) -> bool:
    """True iff ``v.t >= v.s - eps`` at every vertex ``v``."""
    t = getattr(t, "values", t)
    s = getattr(s, "values", s)
    return scores_dominate(vertex_scores(t, V), vertex_scores(s, V), eps)


def fdominates_lp(t, s, W, eps=EPS, stats=None) -> bool:
    """True iff ``min_{w in W} w.(t - s) >= -eps``."""
    t = getattr(t, "values", t)
    s = getattr(s, "values", s)
    if len(t) != W.m or len(s) != W.m:
        raise ContractError("tuple arity does not match polytope dimension")
    diff = tuple(x - y for x, y in zip(t, s))
    rows = _simplex_rows(W)
    sol = solve_lp(LinearProgram(diff, "min", tuple(rows)), max_rows=max(MAX_LP_ROWS, len(rows)), stats=stats)
    if not sol.optimal:
        raise SolverError(f"F-dominance LP ended {sol.status}")
    return sol.value >= -eps


def combo_lp(t, S: Sequence, V: VertexSet, stats=None, max_vars=MAX_LP_VARS, max_rows=MAX_LP_ROWS) -> LpSolution:
    """max delta s.t. lambda in simplex, v.(sum lambda_i s_i) - v.t >= delta for every vertex."""
    t = getattr(t, "values", t)
    S = [getattr(s, "values", s) for s in S]
    if not S:
        raise ContractError("convex combination needs a non-empty set")
    k = len(S)
    rows = [Row((1.0,) * k + (0.0,), "=", 1.0)]
    for v in V.vertices:
        rows.append(Row(tuple(_dot(v, s) for s in S) + (-1.0,), ">=", _dot(v, t)))
    lp = LinearProgram((0.0,) * k + (1.0,), "max", tuple(rows), (0.0,) * k + (None,))
    sol = solve_lp(lp, max_vars=max_vars, max_rows=max_rows, stats=stats)
    if not sol.optimal:
        raise SolverError(f"convex-combination LP ended {sol.status}")
    return sol


def convex_combo_dominates(t, S: Sequence, V: VertexSet, eps=EPS, stats=None) -> bool:
    """Whether some convex combination of ``S`` scores at least ``t`` at every vertex."""
    return combo_lp(t, S, V, stats=stats).value >= -eps


def combo_strict_gain(t, S: Sequence, V: VertexSet, stats=None, max_vars=MAX_LP_VARS,
                      max_rows=MAX_LP_ROWS) -> float:
    """Largest total vertex-score surplus over ``t`` among combinations of ``S``
    that score at least ``t`` at every vertex; 0.0 when none exists.
    """
    t = getattr(t, "values", t)
    S = [getattr(s, "values", s) for s in S]
    k = len(S)
    rows = [Row((1.0,) * k, "=", 1.0)]
    gains = [0.0] * k
    base = 0.0
    for v in V.vertices:
        vs = tuple(_dot(v, s) for s in S)
        vt = _dot(v, t)
        rows.append(Row(vs, ">=", vt))
        gains = [g + x for g, x in zip(gains, vs)]
        base += vt
    sol = solve_lp(LinearProgram(tuple(gains), "max", tuple(rows)), max_vars=max_vars,
                   max_rows=max_rows, stats=stats)
    if not sol.optimal:
        return 0.0
    return max(sol.value - base, 0.0)
