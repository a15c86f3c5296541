from itertools import combinations

import pytest

from minklen.classify import (
    PRIMITIVE_SEGMENT,
    T0,
    T10,
    T3_7,
    T3322,
    T4222,
    T22_6,
    UNCLASSIFIABLE,
    UNIT_SIMPLEX,
    PreconditionError,
    SegmentClassProfile,
    check_pair_theorem,
    check_triple_theorem,
    classify_length1_polygon,
    closed_length1_sets,
    five_point_type,
    interior_ledger,
    lemma_intersection_check,
    pairwise_condition,
    subset_types,
    symmetry_key,
)
from minklen.oracle import oracle_length
from minklen.polytope import hull

SIMPLEX4 = [(0, 0, 0), (1, 3, 0), (0, 2, 3), (4, 1, 3)]
TETRA = [(-1, -1, -1), (1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_type10_example():
    tag, profile = five_point_type([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (0, 0, 0)])
    assert tag == T10
    assert profile.total == 10
    assert profile.pattern() == (1,) * 10


def test_five_point_errors():
    with pytest.raises(ValueError):
        five_point_type([(0, 0, 0)] * 4)
    with pytest.raises(ValueError):
        five_point_type([(0, 0, 0), (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_unclassifiable():
    # (0,0,0)-(3,0,0) is divisible by 3
    tag, profile = five_point_type([(0, 0, 0), (3, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    assert tag == UNCLASSIFIABLE
    assert dict(profile.multiplicities)[None] == 1
    # two points congruent mod 3
    tag, _ = five_point_type([(0, 0, 0), (3, 3, 0), (0, 1, 0), (0, 0, 1), (1, 0, 0)])
    assert tag == UNCLASSIFIABLE


def test_typing_only_sees_classes():
    # a unit square has translate segments, so it lies in no length one
    # polytope, but mod 3 its segments still fit the 2+2+(6) pattern
    tag, _ = five_point_type([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])
    assert tag == T22_6


def test_profile_counts_pairs():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (2, 1, 1)]
    assert SegmentClassProfile.of(pts).total == 15


# (5-subset, lattice points of a length one polytope containing it), found by
# a brute-force search of [0,3]^3 with the oracle as the length filter
FOUND = {
    T4222: ([(0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 3, 0), (3, 0, 2)],
            [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 1), (1, 3, 0), (3, 0, 2)]),
    T3322: ([(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 3, 2), (3, 2, 1)],
            [(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 3, 2), (1, 0, 2), (1, 1, 1), (3, 2, 1)]),
    T3_7: ([(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (3, 3, 2)],
           [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 2, 3), (3, 3, 2)]),
    T22_6: ([(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 2, 3)],
            [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 2, 3)]),
    T10: ([(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)],
          [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)]),
}


@pytest.mark.parametrize("tag", sorted(FOUND))
def test_found_type_examples(tag):
    subset, points = FOUND[tag]
    P = hull(points)
    assert P.lattice_points == tuple(points)
    assert oracle_length(P).length == 1
    assert five_point_type(subset)[0] == tag


def test_multiplicities_alone_do_not_type():
    # pattern (4,2,2,2) but the classes do not form {a, b, a+b, a-b}
    from collections import Counter

    from minklen.classify import _is_4222
    from minklen.lattice import mod3_class

    a, b, c, d = (mod3_class(v) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    assert not _is_4222(Counter({a: 4, b: 2, c: 2, d: 2}))
    assert _is_4222(Counter({a: 4, b: 2, a + b: 2, a - b: 2}))


def test_tetra_subsets():
    assert subset_types(hull(TETRA)) == {T10: 1}


def test_polygon_kinds():
    assert classify_length1_polygon(hull([(0, 0), (1, 0)])) == PRIMITIVE_SEGMENT
    assert classify_length1_polygon(hull([(0, 0), (1, 0), (0, 1)])) == UNIT_SIMPLEX
    assert classify_length1_polygon(hull([(1, 0), (0, 1), (2, 2)])) == T0
    # T0 placed in a lattice plane of 3-space
    assert classify_length1_polygon(hull([(1, 0, 1), (0, 1, 0), (2, 2, 2)])) == T0
    with pytest.raises(PreconditionError):
        classify_length1_polygon(hull([(0, 0), (2, 0), (0, 2)]))
    with pytest.raises(PreconditionError):
        classify_length1_polygon(hull(TETRA))


def test_interior_ledger():
    P = hull(SIMPLEX4)
    led = interior_ledger([P], P)
    assert led.total == 4 and led.parts_with_interior == 1
    assert led.flags == {"total_at_most_4": True, "shared_at_most_2": True}
    cube = hull([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])
    segs = [hull([(0, 0, 0), e]) for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]]
    assert interior_ledger(segs, cube).total == 0
    T = hull(TETRA)
    assert interior_ledger([T], T).total == 1


def test_interior_ledger_preconditions():
    T = hull(TETRA)
    with pytest.raises(PreconditionError, match="part 0"):
        interior_ledger([T.dilate(2)], T.dilate(2))
    with pytest.raises(PreconditionError, match="does not fit"):
        interior_ledger([T, T], T)


def test_pair_theorem():
    T = hull(TETRA)
    rep = check_pair_theorem(T, T, exact=True)
    assert rep.length == 2 and rep.both_type10 and rep.same_up_to_translation and rep.holds
    P = hull(SIMPLEX4)
    rep = check_pair_theorem(P, T)
    assert rep.length >= 3 and rep.holds


def test_pair_theorem_t0():
    t0 = hull([(1, 0, 1), (0, 1, 0), (2, 2, 2)])
    with pytest.raises(PreconditionError):
        check_pair_theorem(t0, t0)
    rep = check_pair_theorem(t0, t0, min_points=4, exact=True)
    assert rep.length == 3 and rep.holds


def test_triple_theorem():
    T = hull(TETRA)
    rep = check_triple_theorem(T, T, T)
    assert rep.length >= 4 and rep.holds
    with pytest.raises(PreconditionError):
        check_triple_theorem(T, T, hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]))


def test_lemma_intersection():
    checked, failures = lemma_intersection_check()
    assert checked == 78 * 78 and failures == 0


def test_pairwise_condition():
    assert pairwise_condition(hull(TETRA).lattice_points)
    assert not pairwise_condition([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert not pairwise_condition([(0, 0, 0), (2, 0, 0)])


def test_symmetry_key():
    pts = [(0, 0, 0), (1, 0, 0), (0, 2, 1)]
    moved = [(5 - x, z + 1, y) for x, y, z in pts]
    assert symmetry_key(pts) == symmetry_key(moved)


def test_small_box_census():
    levels = closed_length1_sets(box=2)
    # every set that survives is lattice closed and of length one
    for size, found in levels.items():
        for key in found:
            P = hull(list(key))
            assert P.num_lattice_points == size
            if size >= 2:
                assert oracle_length(P).length == 1
    assert max(levels) <= 8
    for key in levels.get(5, {}):
        for S in combinations(key, 5):
            assert five_point_type(S)[0] != UNCLASSIFIABLE


def test_more_types_present_in_box_two():
    tags = set()
    levels = closed_length1_sets(box=2)
    for size in (5, 6):
        for key in levels.get(size, {}):
            tags |= set(subset_types(hull(list(key))))
    assert {T3_7, T22_6} <= tags
