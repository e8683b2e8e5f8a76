"""Synthetic datasets in the three classic skyline benchmark shapes.

independent     i.i.d. uniform on [0, 1]^m
correlated      one uniform base value per tuple plus uniform jitter of
                amplitude 0.1 on each attribute
anticorrelated  uniform points projected onto the hyperplane sum(x) = m/2,
                then offset along its normal by N(0, 0.15)

Correlated and anticorrelated points falling outside [0, 1]^m are redrawn,
so the distributions have no atoms on the cube faces.
"""

from dataclasses import dataclass

import numpy as np

from moquery.errors import DataError
from moquery.model import Dataset

DISTRIBUTIONS = ("independent", "correlated", "anticorrelated")
CORRELATED_JITTER = 0.1
ANTICORRELATED_SPREAD = 0.15


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    distribution: str = "independent"
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DataError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.m, int) or not 2 <= self.m <= 8:
            raise DataError(f"m must be between 2 and 8, got {self.m!r}")
        if self.distribution not in DISTRIBUTIONS:
            raise DataError(f"distribution must be one of {DISTRIBUTIONS}, got {self.distribution!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise DataError("seed must be a 64-bit unsigned integer")


def _draw(rng, n, m, dist):
    if dist == "independent":
        return rng.random((n, m))
    if dist == "correlated":
        base = rng.random((n, 1))
        return base + rng.uniform(-CORRELATED_JITTER, CORRELATED_JITTER, (n, m))
    x = rng.random((n, m))
    x += (m / 2 - x.sum(axis=1, keepdims=True)) / m
    offset = rng.normal(0.0, ANTICORRELATED_SPREAD, (n, 1))
    return x + offset / np.sqrt(m)


def sample(spec: GenSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    out = np.empty((0, spec.m))
    while len(out) < spec.n:
        need = spec.n - len(out)
        x = _draw(rng, max(need, 16), spec.m, spec.distribution)
        x = x[((x >= 0.0) & (x <= 1.0)).all(axis=1)]
        out = np.concatenate([out, x[:need]])
    return out


def generate(spec: GenSpec) -> Dataset:
    X = sample(spec)
    width = len(str(spec.n))
    rows = ((f"t{i:0{width}d}", row) for i, row in enumerate(X.tolist(), start=1))
    return Dataset.from_rows(rows, names=[f"a{j + 1}" for j in range(spec.m)])
