"""Datasets, tuples, scoring functions and weight polytopes.

All stored attribute values are benefit oriented ("larger is better").
Columns declared as ``min`` are negated when loaded.
"""

import csv
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from moquery.errors import ContractError, EmptyDatasetError, EmptyPreferenceSet, LoadError

MAX = "max"
MIN = "min"


@dataclass(frozen=True)
class Attribute:
    name: str
    direction: str = MAX

    def __post_init__(self):
        if self.direction not in (MAX, MIN):
            raise ContractError(f"direction must be 'max' or 'min', got {self.direction!r}")


@dataclass(frozen=True)
class Tuple:
    id: str
    values: tuple

    @property
    def m(self):
        return len(self.values)


@dataclass(frozen=True)
class Dataset:
    schema: tuple
    tuples: tuple

    def __post_init__(self):
        m = len(self.schema)
        seen = set()
        for row, t in enumerate(self.tuples, start=1):
            if t.id in seen:
                raise LoadError(f"duplicate id {t.id!r}", row=row)
            seen.add(t.id)
            if len(t.values) != m:
                raise LoadError(f"expected {m} values, got {len(t.values)}", row=row)
            for name, v in zip(self.schema, t.values):
                if not math.isfinite(v):
                    raise LoadError(f"non-finite value {v!r}", row=row, column=name.name)

    @classmethod
    def from_rows(cls, rows: Iterable, names: Optional[Sequence[str]] = None,
                  minimize: Iterable[str] = ()) -> "Dataset":
        """Build a dataset from ``(id, raw_values)`` pairs.

        Raw values of columns listed in ``minimize`` are negated.
        """
        rows = [(str(i), tuple(float(v) for v in vals)) for i, vals in rows]
        if not rows:
            raise EmptyDatasetError("empty dataset")
        m = len(rows[0][1])
        if names is None:
            names = [f"a{i + 1}" for i in range(m)]
        minimize = set(minimize)
        unknown = minimize - set(names)
        if unknown:
            raise LoadError(f"unknown column(s) for --min: {sorted(unknown)}")
        schema = tuple(Attribute(n, MIN if n in minimize else MAX) for n in names)
        flip = [a.direction == MIN for a in schema]
        tuples = []
        for i, vals in rows:
            if len(vals) == m:
                vals = tuple(-v if f else v for v, f in zip(vals, flip))
            tuples.append(Tuple(i, vals))
        return cls(schema, tuple(tuples))

    @property
    def n(self):
        return len(self.tuples)

    @property
    def m(self):
        return len(self.schema)

    @property
    def ids(self):
        return [t.id for t in self.tuples]

    @cached_property
    def by_id(self):
        return {t.id: t for t in self.tuples}

    @cached_property
    def matrix(self):
        """Benefit-oriented values as an (n, m) float array."""
        arr = np.array([t.values for t in self.tuples], dtype=float).reshape(self.n, self.m)
        arr.setflags(write=False)
        return arr

    def raw_values(self, t: Tuple):
        """Undo the min-column negation for display."""
        return tuple(-v if a.direction == MIN else v for v, a in zip(t.values, self.schema))

    def subset(self, ids: Iterable[str]) -> "Dataset":
        keep = set(ids)
        return Dataset(self.schema, tuple(t for t in self.tuples if t.id in keep))


def load_csv(path, minimize: Iterable[str] = ()) -> Dataset:
    """Read a dataset from a UTF-8 CSV file whose first column is the id."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{path}: empty dataset (no header)") from None
        header = [h.strip() for h in header]
        if len(header) < 2:
            raise LoadError("header needs an id column and at least one attribute", row=1)
        names = header[1:]
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) != len(header):
                raise LoadError(f"ragged row: expected {len(header)} fields, got {len(rec)}", row=lineno)
            vals = []
            for name, cell in zip(names, rec[1:]):
                try:
                    v = float(cell)
                except ValueError:
                    raise LoadError(f"malformed number {cell!r}", row=lineno, column=name) from None
                if not math.isfinite(v):
                    raise LoadError(f"non-finite value {cell!r}", row=lineno, column=name)
                vals.append(v)
            rows.append((rec[0].strip(), vals))
    if not rows:
        raise EmptyDatasetError(f"{path}: empty dataset")
    return Dataset.from_rows(rows, names=names, minimize=minimize)


@dataclass(frozen=True)
class ScoringFunction:
    """Non-negative weighted sum, optionally followed by a strictly increasing transform."""

    weights: tuple
    transform: Optional[Callable[[float], float]] = field(default=None, compare=False)

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ContractError("scoring function needs at least one weight")
        if any(not math.isfinite(x) or x < 0 for x in w):
            raise ContractError(f"weights must be finite and non-negative: {w}")
        if not any(x > 0 for x in w):
            raise ContractError("at least one weight must be strictly positive")

    @property
    def m(self):
        return len(self.weights)

    def aggregate(self, values: Sequence[float]) -> float:
        s = 0.0
        for w, x in zip(self.weights, values):
            s += w * x
        if self.transform is not None:
            return self.transform(s)
        return s

    def __call__(self, t: Tuple) -> float:
        return score(self, t)


def score(f: ScoringFunction, t: Tuple) -> float:
    if len(t.values) != f.m:
        raise ContractError(f"arity mismatch: function has {f.m} weights, tuple {t.id!r} has {len(t.values)} values")
    return f.aggregate(t.values)


@dataclass(frozen=True)
class LinearConstraint:
    """Closed half-space ``coeffs . w <= bound``."""

    coeffs: tuple
    bound: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        object.__setattr__(self, "bound", float(self.bound))

    def __str__(self):
        terms = " ".join(f"{c:+g} w{i + 1}" for i, c in enumerate(self.coeffs) if c != 0) or "0"
        return f"{terms.lstrip('+')} <= {self.bound:g}"


_TERM = re.compile(r"([+-]?)\s*(\d*\.?\d+(?:[eE][+-]?\d+)?)?\s*\*?\s*(w(\d+))?")
_OPS = ("<=", ">=", "=<", "=>", "<", ">", "==", "=")


def _parse_side(text, m, lineno):
    coeffs = [0.0] * m
    const = 0.0
    s = text.replace(" ", "")
    if not s:
        raise LoadError(f"empty side in constraint {text!r}", row=lineno)
    pos = 0
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if not mt or mt.end() == pos or (mt.group(2) is None and mt.group(3) is None):
            raise LoadError(f"cannot parse term at {s[pos:]!r}", row=lineno)
        sign = -1.0 if mt.group(1) == "-" else 1.0
        if pos > 0 and not mt.group(1):
            raise LoadError(f"missing operator before {s[pos:]!r}", row=lineno)
        num = float(mt.group(2)) if mt.group(2) is not None else 1.0
        if mt.group(3) is None:
            const += sign * num
        else:
            j = int(mt.group(4)) - 1
            if not 0 <= j < m:
                raise ContractError(f"weight index w{j + 1} out of range for m={m}")
            coeffs[j] += sign * num
        pos = mt.end()
    return coeffs, const


def parse_constraint(text: str, m: int, lineno: Optional[int] = None) -> list:
    """Parse ``lhs OP rhs`` over ``w1..wm`` into closed ``<=`` constraints.

    Strict inequalities are closed (``w2 > w1`` becomes ``w1 - w2 <= 0``).
    ``=`` yields two constraints.
    """
    for op in _OPS:
        if op in text:
            lhs, rhs = text.split(op, 1)
            break
    else:
        raise LoadError(f"no comparison operator in {text!r}", row=lineno)
    lc, lk = _parse_side(lhs, m, lineno)
    rc, rk = _parse_side(rhs, m, lineno)
    # lhs - rhs  OP  0
    diff = [a - b for a, b in zip(lc, rc)]
    const = rk - lk
    if op in ("<=", "=<", "<"):
        return [LinearConstraint(diff, const)]
    if op in (">=", "=>", ">"):
        return [LinearConstraint([-c for c in diff], -const)]
    return [LinearConstraint(diff, const), LinearConstraint([-c for c in diff], -const)]


@dataclass(frozen=True)
class WeightPolytope:
    """Standard simplex intersected with user half-spaces. Never empty."""

    m: int
    constraints: tuple = ()

    @property
    def c(self):
        return len(self.constraints)

    def contains(self, w: Sequence[float], eps: float = 1e-9) -> bool:
        if len(w) != self.m or abs(sum(w) - 1.0) > eps or min(w) < -eps:
            return False
        return all(sum(a * x for a, x in zip(k.coeffs, w)) <= k.bound + eps for k in self.constraints)

    def halfspaces(self):
        """All inequality rows ``A w <= b`` including ``-w_i <= 0``."""
        rows = [(k.coeffs, k.bound) for k in self.constraints]
        for i in range(self.m):
            rows.append((tuple(-1.0 if j == i else 0.0 for j in range(self.m)), 0.0))
        return rows

    def tighten(self, *extra) -> "WeightPolytope":
        return make_polytope(self.m, list(self.constraints) + list(extra))


def make_polytope(m: int, constraints: Sequence = ()) -> WeightPolytope:
    """Validate constraints and build a non-empty ``WeightPolytope``.

    ``constraints`` items may be ``LinearConstraint`` objects, ``(coeffs, bound)``
    pairs or strings such as ``"w2 > w1"``.
    """
    from moquery import geometry

    if m < 1:
        raise ContractError("dimension must be at least 1")
    parsed = []
    for k in constraints:
        if isinstance(k, str):
            parsed.extend(parse_constraint(k, m))
            continue
        if not isinstance(k, LinearConstraint):
            k = LinearConstraint(*k)
        if len(k.coeffs) != m:
            raise ContractError(f"constraint arity {len(k.coeffs)} does not match m={m}")
        if not all(math.isfinite(c) for c in k.coeffs) or not math.isfinite(k.bound):
            raise ContractError(f"non-finite constraint {k}")
        parsed.append(k)
    W = WeightPolytope(m, tuple(parsed))
    if not geometry.is_feasible(W):
        raise EmptyPreferenceSet()
    return W
