"""Brute-force reference answers for property tests.

Deliberately naive. Nothing here imports topk, skyline, geometry or flexsky;
vertex and F-dominance computations use exact rationals.
"""

import itertools
from fractions import Fraction
from math import comb

import numpy as np

from moquery.errors import CapacityError, ContractError, EmptyPreferenceSet

MAX_M = 4
MAX_C = 10
MAX_GRID_POINTS = 2_000_000


def q(x):
    """Exact rational for a float, read through its shortest decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


def brute_scores(d, f):
    """Exact weighted sums. Any transform on ``f`` is monotone, so it is ignored."""
    w = [q(x) for x in f.weights]
    return {t.id: sum((a * q(v) for a, v in zip(w, t.values)), Fraction(0)) for t in d.tuples}


def brute_topk(d, f, k):
    """Score everything, sort by (score desc, id asc), keep k. Returns (id, score) pairs."""
    if not 1 <= k <= d.n:
        raise ContractError(f"k must be in 1..{d.n}, got {k}")
    ranked = sorted(((-s, i) for i, s in brute_scores(d, f).items()))
    return [(i, -s) for s, i in ranked[:k]]


def brute_skyline(d):
    """Tuples not dominated by any other tuple, by an all-pairs test."""
    X = d.matrix
    out = []
    for i, t in enumerate(d.tuples):
        dominated = np.any(np.all(X >= X[i], axis=1) & np.any(X > X[i], axis=1))
        if not dominated:
            out.append(t.id)
    return sorted(out)


def _solve_exact(A, b):
    """Gauss-Jordan over Fractions; None if singular."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                fac = M[r][col]
                M[r] = [x - fac * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _exact_halfspaces(W):
    rows = [([q(a) for a in k.coeffs], q(k.bound)) for k in W.constraints]
    for i in range(W.m):
        rows.append(([Fraction(-1) if j == i else Fraction(0) for j in range(W.m)], Fraction(0)))
    return rows


def brute_vertices_exact(W):
    """Vertices as tuples of Fractions, sorted."""
    m, c = W.m, len(W.constraints)
    if m > MAX_M or c > MAX_C:
        raise CapacityError(f"oracle capped at m<={MAX_M}, c<={MAX_C}")
    rows = _exact_halfspaces(W)
    found = set()
    for combo in itertools.combinations(rows, m - 1):
        A = [a for a, _ in combo] + [[Fraction(1)] * m]
        b = [bb for _, bb in combo] + [Fraction(1)]
        x = _solve_exact(A, b)
        if x is None:
            continue
        if all(sum(a * xi for a, xi in zip(aa, x)) <= bb for aa, bb in rows):
            found.add(tuple(x))
    if not found:
        raise EmptyPreferenceSet()
    return sorted(found)


def brute_vertices(W):
    """Exact vertex enumeration, converted to floats at the boundary."""
    return [tuple(float(x) for x in v) for v in brute_vertices_exact(W)]


def _beats(sa, sb, va, vb):
    # closed F-dominance on exact vertex scores, Pareto fallback on full ties
    if va == vb:
        return False
    if not all(x >= y for x, y in zip(sa, sb)):
        return False
    if any(x > y for x, y in zip(sa, sb)):
        return True
    return all(x >= y for x, y in zip(va, vb))


def brute_nd(d, W):
    """Tuples not F-dominated by any other tuple; full quadratic scan."""
    V = brute_vertices_exact(W)
    vals = {t.id: tuple(q(x) for x in t.values) for t in d.tuples}
    sc = {i: tuple(sum(w * x for w, x in zip(v, vs)) for v in V) for i, vs in vals.items()}
    out = []
    for t in d.tuples:
        if not any(_beats(sc[s.id], sc[t.id], vals[s.id], vals[t.id]) for s in d.tuples if s is not t):
            out.append(t.id)
    return sorted(out)


def _lattice(m, res):
    """All w in (1/res) Z^m on the unit simplex."""
    for cut in itertools.combinations(range(res + m - 1), m - 1):
        prev = -1
        w = []
        for c in cut:
            w.append(c - prev - 1)
            prev = c
        w.append(res + m - 2 - prev)
        yield w


def weight_grid(W, res):
    """Dense grid of admissible weight vectors as an (N, m) array."""
    m = W.m
    V = brute_vertices(W)
    if m == 2 or len(V) == 1:
        if len(V) == 1:
            return np.array(V, dtype=float)
        a, b = np.array(V[0]), np.array(V[-1])
        f = np.linspace(0.0, 1.0, res + 1)[:, None]
        return a + f * (b - a)
    count = comb(res + m - 1, m - 1)
    if count > MAX_GRID_POINTS:
        raise CapacityError(f"weight grid of {count} points exceeds {MAX_GRID_POINTS}")
    G = np.array(list(_lattice(m, res)), dtype=float) / res
    A = np.array([k.coeffs for k in W.constraints], dtype=float).reshape(-1, m)
    b = np.array([k.bound for k in W.constraints], dtype=float)
    if len(b):
        G = G[(G @ A.T <= b + 1e-12).all(axis=1)]
    return np.concatenate([G, np.array(V, dtype=float)])


def brute_po(d, W, res=1000):
    """Argmax tuples over a weight grid; returns {id: certificate weight}.

    A grid point whose best score is shared by tuples with different values
    certifies nothing, so every returned id is truly potentially optimal.
    """
    if res < 100:
        raise ContractError("grid resolution must be at least 100")
    G = weight_grid(W, res)
    if len(G) == 0:
        raise EmptyPreferenceSet("empty weight grid")
    X = d.matrix
    ids = d.ids
    certs = {}
    for start in range(0, len(G), 20000):
        block = G[start:start + 20000]
        S = block @ X.T
        top = S.max(axis=1, keepdims=True)
        near = S >= top - 1e-12 * (1.0 + np.abs(top))
        for r in np.flatnonzero(near.sum(axis=1) == 1):
            certs.setdefault(ids[int(np.argmax(near[r]))], tuple(float(x) for x in block[r]))
        for r in np.flatnonzero(near.sum(axis=1) > 1):
            winners = np.flatnonzero(near[r])
            if len({tuple(X[i]) for i in winners}) == 1:
                for i in winners:
                    certs.setdefault(ids[i], tuple(float(x) for x in block[r]))
    return dict(sorted(certs.items()))


def optimality_interval(d, W, tid):
    """Exact sub-segment of a 2-d weight polytope on which ``tid`` scores at
    least every tuple with different values.

    Returns the end points as weight vectors of Fractions, or None when the
    segment is empty. A tuple optimal only on a stretch shorter than the grid
    spacing is invisible to ``brute_po``; this settles such cases exactly.
    """
    if W.m != 2:
        raise ContractError("optimality_interval handles m = 2 only")
    V = brute_vertices_exact(W)
    a, b = V[0], V[-1]
    x = tuple(q(v) for v in d.by_id[tid].values)
    lo, hi = Fraction(0), Fraction(1)
    for t in d.tuples:
        y = tuple(q(v) for v in t.values)
        if y == x:
            continue
        g0 = sum(ai * (xi - yi) for ai, xi, yi in zip(a, x, y))
        g1 = sum(bi * (xi - yi) for bi, xi, yi in zip(b, x, y))
        # score gap at a + lam (b - a) is g0 + lam (g1 - g0)
        if g1 == g0:
            if g0 < 0:
                return None
            continue
        root = -g0 / (g1 - g0)
        if g1 > g0:
            lo = max(lo, root)
        else:
            hi = min(hi, root)
        if lo > hi:
            return None
    point = lambda lam: tuple(ai + lam * (bi - ai) for ai, bi in zip(a, b))
    return point(lo), point(hi)
