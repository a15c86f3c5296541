from itertools import combinations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from minklen.lattice import (
    UnimodularMap,
    all_mod3_classes,
    class_combinations,
    mod3_class,
    parallelepiped_volume,
    random_unimodular,
)
from minklen.minkowski import length
from minklen.oracle import oracle_length, witness_fits
from minklen.polytope import erode, hull

coord = st.integers(min_value=-20, max_value=20)
vec3 = st.tuples(coord, coord, coord).filter(lambda v: any(c % 3 for c in v))


def points(dim, box):
    p = st.tuples(*[st.integers(0, box)] * dim)
    return st.lists(p, min_size=1, max_size=8)


class _Rng:
    """Adapter so random_unimodular can draw from hypothesis."""

    def __init__(self, data):
        self.data = data

    def randrange(self, n):
        return self.data.draw(st.integers(0, n - 1))


slow = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@given(vec3)
def test_mod3_sign_invariant(v):
    assert mod3_class(v) == mod3_class(tuple(-c for c in v))
    assert mod3_class(v) == mod3_class(tuple(c + 3 for c in v))


@given(st.sampled_from(all_mod3_classes(3)), st.sampled_from(all_mod3_classes(3)))
def test_class_line_closed(a, b):
    if a == b:
        return
    line = class_combinations(a, b)
    for x in line:
        for y in line:
            if x != y:
                assert class_combinations(x, y) == line


@slow
@given(points(3, 3), st.data())
def test_unimodular_invariance_counts(pts, data):
    P = hull(pts)
    m = random_unimodular(_Rng(data), 3)
    Q = P.transform(m)
    assert Q.num_lattice_points == P.num_lattice_points
    assert len(Q.interior_points()) == len(P.interior_points())


@given(points(2, 4), st.sampled_from([(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)]))
def test_erosion_shrinks(pts, v):
    S = hull(pts).point_set
    E = erode(S, v)
    assert E < S
    assert all(tuple(a + b for a, b in zip(x, v)) in S for x in E)


@slow
@given(points(3, 3))
def test_fast_matches_oracle_3d(pts):
    P = hull(pts)
    res = length(P)
    assert res.length == oracle_length(P).length
    assert res.witness.fits_in(P)
    assert res.witness.length == res.length


@slow
@given(points(2, 5))
def test_fast_matches_oracle_2d(pts):
    P = hull(pts)
    res = length(P)
    assert res.length == oracle_length(P).length
    assert res.witness.fits_in(P)


@slow
@given(points(3, 2), points(3, 2))
def test_oracle_superadditive(a, b):
    P, Q = hull(a), hull(b)
    assert oracle_length(P + Q).length >= oracle_length(P).length + oracle_length(Q).length


@slow
@given(points(3, 3), points(3, 3))
def test_oracle_monotone(a, b):
    P, PQ = hull(a), hull(a + b)
    assert oracle_length(PQ).length >= oracle_length(P).length


@slow
@given(points(3, 3))
def test_oracle_witness_valid(pts):
    P = hull(pts)
    res = oracle_length(P)
    assert len(res.witness) == res.length
    assert witness_fits(P, res)


@slow
@given(points(3, 3))
def test_witness_template_invariants(pts):
    res = length(hull(pts))
    dirs = res.witness.directions
    assert len(dirs) <= 7
    assert len({tuple(c % 2 for c in v) for v in dirs}) == len(dirs)
    if len(dirs) >= 3:
        for u, v, w in combinations(dirs, 3):
            assert parallelepiped_volume(u, v, w) <= 2


@slow
@given(points(3, 3), st.data())
def test_length_unimodular_invariant(pts, data):
    P = hull(pts)
    m = random_unimodular(_Rng(data), 3)
    r = length(P)
    assert length(P.transform(m)).length == r.length
    assert r.witness.transform(m).fits_in(P.transform(m))


def test_identity_map():
    m = UnimodularMap.linear(((1, 0), (0, 1)))
    assert m((3, 4)) == (3, 4)
