import numpy as np
import pytest

from moquery.fixtures import photographers
from moquery.model import Dataset, LinearConstraint, make_polytope

ACCEPTANCE_RESULTS = []


@pytest.fixture
def photo():
    return photographers()


@pytest.fixture
def prefer_score():
    return make_polytope(2, ["w2 > w1"])


def random_dataset(rng, n, m, kind="uniform"):
    """Continuous data, coarse grids (lots of ties) or anticorrelated bands."""
    if kind == "uniform":
        X = rng.random((n, m))
    elif kind == "grid":
        X = rng.integers(0, 5, (n, m)).astype(float)
    elif kind == "anti":
        X = rng.random((n, m))
        X += (m / 2 - X.sum(axis=1, keepdims=True)) / m + rng.normal(0, 0.05, (n, 1))
    else:
        raise ValueError(kind)
    return Dataset.from_rows(((f"t{i:03d}", row) for i, row in enumerate(X.tolist())))


def random_polytope(rng, m, c=None):
    """Feasible, full-dimensional polytope with 2-decimal rational coefficients."""
    if c is None:
        c = int(rng.integers(0, 4))
    w0 = rng.dirichlet(np.ones(m))
    cons = []
    for _ in range(c):
        a = np.round(rng.normal(size=m), 2)
        b = np.round(a @ w0 + rng.uniform(0.01, 0.3), 2)
        if a @ w0 >= b:
            b = np.round(a @ w0 + 0.01, 2) + 0.01
        cons.append(LinearConstraint(a.tolist(), float(b)))
    return make_polytope(m, cons)


def nested_chain(rng, m, length=4):
    """Polytopes W0 ⊇ W1 ⊇ ... each adding one constraint through a common interior point."""
    w0 = rng.dirichlet(np.ones(m) * 2)
    W = make_polytope(m)
    chain = [W]
    for _ in range(length - 1):
        a = np.round(rng.normal(size=m), 2)
        b = float(np.round(a @ w0 + rng.uniform(0.01, 0.1), 2)) + 0.01
        W = W.tighten(LinearConstraint(a.tolist(), b))
        chain.append(W)
    return chain


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, title, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}: {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
