"""Top-k aggregation over sorted and random access: Fagin (FA), Threshold (TA)
and No-Random-Access (NRA).

An ``AccessIndex`` is immutable and shareable; every run counts its accesses
in a private ``Counters`` object returned with the result.
"""

import bisect
import numbers
from dataclasses import dataclass, field
from typing import Optional

from moquery.errors import ContractError, EmptyDatasetError
from moquery.stats import Counters


@dataclass(frozen=True)
class AccessIndex:
    # lists[i] is a tuple of (id, value) sorted by value desc, id asc
    lists: tuple
    by_id: dict
    # per-attribute offsets making every shifted value >= 0 (NRA bounds)
    shift: tuple

    @property
    def n(self):
        return len(self.by_id)

    @property
    def m(self):
        return len(self.lists)


@dataclass
class RankedResult:
    entries: list  # [(id, score or None)]
    ordered: bool
    stats: Counters = field(default_factory=Counters)

    @property
    def ids(self):
        return [i for i, _ in self.entries]


def build_index(d) -> AccessIndex:
    if d.n == 0:
        raise EmptyDatasetError("cannot index an empty dataset")
    lists = []
    for i in range(d.m):
        col = sorted(((t.id, t.values[i]) for t in d.tuples), key=lambda p: (-p[1], p[0]))
        lists.append(tuple(col))
    shift = tuple(max(0.0, -lst[-1][1]) for lst in lists)
    return AccessIndex(tuple(lists), dict(d.by_id), shift)


def _check(idx, f, k):
    if f.m != idx.m:
        raise ContractError(f"scoring function has {f.m} weights, index has {idx.m} lists")
    if not (isinstance(k, numbers.Integral) and not isinstance(k, bool) and 1 <= k <= idx.n):
        raise ContractError(f"k must be in 1..{idx.n}, got {k!r}")


class _TopBuffer:
    """At most k (id, score) candidates ordered by score desc, id asc."""

    def __init__(self, k):
        self.k = k
        self.keys = []

    def offer(self, tid, s):
        key = (-s, tid)
        if len(self.keys) < self.k:
            bisect.insort(self.keys, key)
        elif key < self.keys[-1]:
            bisect.insort(self.keys, key)
            self.keys.pop()

    def __len__(self):
        return len(self.keys)

    def kth_score(self):
        return -self.keys[-1][0]

    def entries(self):
        return [(tid, -neg) for neg, tid in self.keys]


def fagin(idx: AccessIndex, f, k: int) -> RankedResult:
    """Round-robin sorted access until k ids were seen in every list, then
    resolve every seen id by random access."""
    _check(idx, f, k)
    stats = Counters()
    seen_in = {}
    complete = 0
    depth = 0
    while complete < k and depth < idx.n:
        for lst in idx.lists:
            tid, _ = lst[depth]
            stats.sorted_accesses += 1
            c = seen_in.get(tid, 0) + 1
            seen_in[tid] = c
            if c == idx.m:
                complete += 1
        depth += 1
        stats.note_buffer(len(seen_in))
    scored = []
    for tid in seen_in:
        stats.random_accesses += 1
        scored.append((-f.aggregate(idx.by_id[tid].values), tid))
    scored.sort()
    entries = [(tid, -neg) for neg, tid in scored[:k]]
    return RankedResult(entries, True, stats)


def threshold(idx: AccessIndex, f, k: int, hook=None) -> RankedResult:
    """Parallel sorted access with full scoring of each new id; stop once the
    k-th best score reaches the threshold of the last seen values."""
    _check(idx, f, k)
    stats = Counters()
    seen = set()
    buf = _TopBuffer(k)
    last = [lst[0][1] for lst in idx.lists]
    for depth in range(idx.n):
        for i, lst in enumerate(idx.lists):
            tid, v = lst[depth]
            stats.sorted_accesses += 1
            last[i] = v
            if tid not in seen:
                seen.add(tid)
                stats.random_accesses += 1
                buf.offer(tid, f.aggregate(idx.by_id[tid].values))
                stats.note_buffer(len(buf))
        tau = f.aggregate(last)
        if hook is not None:
            hook("round", depth + 1, tau, len(buf))
        if len(buf) == k and buf.kth_score() >= tau:
            break
    return RankedResult(buf.entries(), True, stats)


def nra(idx: AccessIndex, f, k: int, hook=None) -> RankedResult:
    """Sorted access only, with lower/upper score bounds per seen object.

    Stops when the k-th best lower bound is >= every other upper bound
    (including the bound of a wholly unseen object). Returns k ids, unordered.
    """
    _check(idx, f, k)
    stats = Counters()
    m = idx.m
    shift = idx.shift
    known = {}
    last = [lst[0][1] + shift[i] for i, lst in enumerate(idx.lists)]
    chosen = None
    for depth in range(idx.n):
        for i, lst in enumerate(idx.lists):
            tid, v = lst[depth]
            stats.sorted_accesses += 1
            last[i] = v + shift[i]
            known.setdefault(tid, [None] * m)[i] = v + shift[i]
        stats.note_buffer(len(known))
        bounds = []
        for tid, vals in known.items():
            lo = f.aggregate([0.0 if x is None else x for x in vals])
            hi = f.aggregate([last[i] if x is None else x for i, x in enumerate(vals)])
            bounds.append((-lo, tid, hi))
        bounds.sort()
        if len(bounds) < k:
            continue
        kth_lower = -bounds[k - 1][0]
        rivals = [hi for _, _, hi in bounds[k:]]
        if len(known) < idx.n:
            rivals.append(f.aggregate(last))
        if hook is not None:
            hook("round", depth + 1, kth_lower, max(rivals, default=None))
        if not rivals or kth_lower >= max(rivals):
            chosen = [tid for _, tid, _ in bounds[:k]]
            break
    if chosen is None:
        raise AssertionError("NRA exhausted all lists without stopping")
    return RankedResult([(tid, None) for tid in sorted(chosen)], False, stats)


def nra_ordered(idx: AccessIndex, f, k: int) -> RankedResult:
    """Ordered NRA: run for k' = 1..k and append each newly confirmed id."""
    _check(idx, f, k)
    total = Counters()
    order = []
    for kk in range(1, k + 1):
        res = nra(idx, f, kk)
        total.sorted_accesses += res.stats.sorted_accesses
        total.note_buffer(res.stats.max_buffer)
        for tid in sorted(set(res.ids) - set(order)):
            if len(order) < kk:
                order.append(tid)
    return RankedResult([(tid, None) for tid in order], True, total)


ALGORITHMS = {"fa": fagin, "ta": threshold, "nra": nra}


def topk(d, f, k, algo="ta", index: Optional[AccessIndex] = None) -> RankedResult:
    if algo not in ALGORITHMS:
        raise ContractError(f"unknown top-k algorithm {algo!r}")
    idx = index if index is not None else build_index(d)
    return ALGORITHMS[algo](idx, f, k)
