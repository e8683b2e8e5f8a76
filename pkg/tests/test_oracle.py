from fractions import Fraction

import numpy as np
import pytest

from moquery import oracle
from moquery.errors import CapacityError, ContractError
from moquery.fixtures import F1, F2
from moquery.model import ScoringFunction, make_polytope


def test_exact_rationals():
    assert oracle.q(0.1) == Fraction(1, 10)
    assert oracle.q(3) == Fraction(3)


def test_brute_topk_photographers(photo):
    assert [i for i, _ in oracle.brute_topk(photo, ScoringFunction(F1), 3)] == ["JS", "PT", "FS"]
    top = oracle.brute_topk(photo, ScoringFunction(F2), 1)
    assert top == [("NF", Fraction(174, 10))]


def test_brute_skyline_and_nd(photo, prefer_score):
    assert oracle.brute_skyline(photo) == ["JS", "NF", "PT", "SS"]
    assert oracle.brute_nd(photo, prefer_score) == ["JS", "NF", "PT"]


def test_brute_vertices_exact():
    V = oracle.brute_vertices_exact(make_polytope(2, ["w1 <= 0.3"]))
    assert sorted(V) == [(0, 1), (Fraction(3, 10), Fraction(7, 10))]
    with pytest.raises(CapacityError):
        oracle.brute_vertices_exact(make_polytope(5))


def test_brute_po_photographers(photo, prefer_score):
    cert = oracle.brute_po(photo, prefer_score)
    assert set(cert) == {"JS", "NF"}
    assert cert["JS"] == pytest.approx((0.0, 1.0))
    w = np.array(cert["NF"])
    vals = {t.id: w @ t.values for t in photo.tuples}
    assert max(vals, key=vals.get) == "NF"
    assert prefer_score.contains(tuple(w))
    assert set(oracle.brute_po(photo, make_polytope(2))) == {"JS", "NF", "SS"}


def test_brute_po_resolution_floor(photo):
    with pytest.raises(ContractError):
        oracle.brute_po(photo, make_polytope(2), res=50)


def test_weight_grid_stays_inside():
    W = make_polytope(3, ["w1 <= 0.2"])
    G = oracle.weight_grid(W, 50)
    assert (G[:, 0] <= 0.2 + 1e-12).all()
    assert np.allclose(G.sum(axis=1), 1.0)


def test_optimality_interval(photo, prefer_score):
    lo, hi = oracle.optimality_interval(photo, prefer_score, "NF")
    # NF beats JS once w1 exceeds 4.1/10.1 (scores tie at w1 = 41/101)
    assert lo == (Fraction(41, 101), Fraction(60, 101)) and hi == (Fraction(1, 2), Fraction(1, 2))
    assert oracle.optimality_interval(photo, prefer_score, "PT") is None
    with pytest.raises(ContractError):
        oracle.optimality_interval(photo, make_polytope(3), "JS")
