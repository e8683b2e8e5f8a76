"""Pareto dominance with the block-nested-loop and sort-filter skyline algorithms."""

import math

from moquery.errors import ContractError
from moquery.stats import Counters


def dominates(t, s) -> bool:
    """True iff ``t`` is at least as good as ``s`` everywhere and better somewhere."""
    tv = getattr(t, "values", t)
    sv = getattr(s, "values", s)
    if len(tv) != len(sv):
        raise ContractError("dominance test on tuples of different arity")
    strict = False
    for a, b in zip(tv, sv):
        if a < b:
            return False
        if a > b:
            strict = True
    return strict


def _compare(a, b):
    """1 if ``a`` dominates ``b``, -1 if ``b`` dominates ``a``, else 0."""
    a_better = b_better = False
    for x, y in zip(a, b):
        if x > y:
            a_better = True
        elif x < y:
            b_better = True
        if a_better and b_better:
            return 0
    if a_better:
        return 1
    if b_better:
        return -1
    return 0


def bnl(d, stats=None):
    """Block-nested-loop skyline with an unbounded window.

    Returns skyline ids sorted ascending.
    """
    stats = stats if stats is not None else Counters()
    window = []
    for t in d.tuples:
        keep = []
        dominated = False
        for i, w in enumerate(window):
            stats.dominance_tests += 1
            rel = _compare(w.values, t.values)
            if rel == 1:
                dominated = True
                break
            if rel == -1:
                stats.evictions += 1
            else:
                keep.append(w)
        if dominated:
            continue
        keep.append(t)
        window = keep
    return sorted(w.id for w in window)


def entropy_key(d):
    """Sort key for SFS: entropy of min-max normalised values, descending.

    Equal entropies fall back to descending lexicographic values, then id.
    """
    m = d.m
    lo = [min(t.values[i] for t in d.tuples) for i in range(m)]
    hi = [max(t.values[i] for t in d.tuples) for i in range(m)]

    def key(t):
        e = 0.0
        for x, a, b in zip(t.values, lo, hi):
            if b > a:
                e += math.log1p((x - a) / (b - a))
        return (-e, tuple(-x for x in t.values), t.id)

    return key


def sfs_iter(d, stats=None):
    """Yield skyline ids as soon as they enter the window."""
    stats = stats if stats is not None else Counters()
    window = []
    for t in sorted(d.tuples, key=entropy_key(d)):
        dominated = False
        for w in window:
            stats.dominance_tests += 1
            rel = _compare(w.values, t.values)
            if rel == 1:
                dominated = True
                break
            if rel == -1:
                # cannot happen for a monotone presort; counted so tests can check
                stats.evictions += 1
        if not dominated:
            window.append(t)
            yield t.id


def sfs(d, stats=None):
    """Sort-filter skyline; ids in emission order."""
    return list(sfs_iter(d, stats))
