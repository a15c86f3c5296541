import pytest

from minklen.oracle import (
    OracleBudgetExceeded,
    oracle_length,
    oracle_length_of_sum,
    witness_fits,
)
from minklen.polytope import box_points, hull

TETRA = [(-1, -1, -1), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
T0 = [(1, 0), (0, 1), (2, 2)]


def simplex3(k):
    return hull([(0, 0, 0), (k, 0, 0), (0, k, 0), (0, 0, k)])


def test_trivial_sets():
    assert oracle_length([(0, 0)]).length == 0
    assert oracle_length([]).length == 0
    assert oracle_length([(0, 0), (1, 0)]).length == 1


def test_polygons():
    assert oracle_length(hull(T0)).length == 1
    assert oracle_length(hull([(0, 0), (1, 0), (0, 1)])).length == 1
    assert oracle_length(hull([(0, 0), (2, 0), (0, 2)])).length == 2
    assert oracle_length(box_points(0, 3, 2)).length == 6
    # 3 x 2 rectangle
    assert oracle_length(hull([(0, 0), (3, 0), (0, 2), (3, 2)])).length == 5


@pytest.mark.parametrize("k", range(1, 5))
def test_simplex_dilates(k):
    assert oracle_length(simplex3(k)).length == k


def test_cube():
    assert oracle_length(box_points(0, 2, 3)).length == 6


def test_tetra():
    P = hull(TETRA)
    assert oracle_length(P).length == 1
    assert oracle_length(P.dilate(2)).length == 2
    assert oracle_length_of_sum([P, P]).length == 2


def test_t0_sum():
    P = hull(T0)
    assert oracle_length_of_sum([P, P]).length == 3


def test_witness_is_valid():
    P = hull([(0, 0, 0), (3, 0, 0), (0, 2, 0), (0, 0, 2), (2, 2, 2)])
    res = oracle_length(P)
    assert len(res.witness) == res.length
    assert witness_fits(P, res)


def test_deterministic():
    P = simplex3(3)
    assert oracle_length(P) == oracle_length(P)


def test_budget():
    with pytest.raises(OracleBudgetExceeded) as info:
        oracle_length(box_points(0, 3, 3), budget=5)
    assert info.value.budget == 5


def test_stop_at():
    P = box_points(0, 3, 3)
    res = oracle_length(P, stop_at=4)
    assert not res.exact
    assert res.length >= 4
    assert witness_fits(P, res)
    # target not reachable: the result is exact
    res = oracle_length(hull(TETRA), stop_at=3)
    assert res.exact and res.length == 1
