"""Mod-3 structure of Minkowski length one polytopes.

Inside a polytope of length one every lattice segment is primitive and
no two segments are translates of each other, so the classes of segments
mod 3 carry most of the combinatorics.  This module types 5-point sets by
the multiplicities of their segment classes, identifies length one
polygons, counts interior points of decompositions, and checks the
pair and triple sum bounds with the brute-force oracle.
"""

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .lattice import all_mod3_classes, class_combinations, content, mod3_class, sub
from .minkowski import length
from .oracle import DEFAULT_BUDGET, OracleBudgetExceeded, oracle_length, oracle_length_of_sum
from .polytope import LatticePolytope, minkowski_sum_all, plane_reduce

T4222 = "4+2+2+2"
T3322 = "3+3+2+2"
T3_7 = "3+(7)"
T22_6 = "2+2+(6)"
T10 = "(10)"
UNCLASSIFIABLE = "unclassifiable"

FIVE_POINT_TYPES = (T4222, T3322, T3_7, T22_6, T10)

PRIMITIVE_SEGMENT = "primitive segment"
UNIT_SIMPLEX = "unit simplex"
T0 = "T0"


class PreconditionError(ValueError):
    """An input does not satisfy what a check assumes (e.g. length one)."""


class TheoremViolation(AssertionError):
    """A length one polygon that fits none of the known shapes."""


@dataclass(frozen=True)
class SegmentClassProfile:
    """Counts of segment classes over all pairs of a point set.

    Segments whose vector is divisible by 3 have no class and are counted
    under ``None``.
    """

    multiplicities: tuple  # sorted ((class or None, count), ...)

    @classmethod
    def of(cls, points):
        counts = Counter()
        for p, q in combinations(points, 2):
            try:
                counts[mod3_class(sub(q, p))] += 1
            except ValueError:
                counts[None] += 1
        items = sorted(counts.items(), key=lambda kv: (kv[0] is None, kv[0].rep if kv[0] else ()))
        return cls(tuple(items))

    def as_counter(self):
        return Counter(dict(self.multiplicities))

    @property
    def total(self):
        return sum(n for _, n in self.multiplicities)

    def pattern(self):
        """Multiplicities in decreasing order, e.g. (4, 2, 2, 2)."""
        return tuple(sorted((n for _, n in self.multiplicities), reverse=True))


def _cls(v):
    """Class of an integer vector, or None if it is divisible by 3."""
    try:
        return mod3_class(v)
    except ValueError:
        return None


def _neg(v):
    return tuple(-c for c in v)


def _plus(*vs):
    return tuple(sum(cs) for cs in zip(*vs))


def _signed(rep):
    return (rep, _neg(rep))


def _matches(counts, wanted):
    """``wanted`` is a list of (vector, multiplicity); compare as class counts."""
    expect = Counter()
    for v, n in wanted:
        c = _cls(v)
        if c is None:
            return False
        expect[c] += n
    return expect == counts


def _is_4222(counts):
    fours = [c for c, n in counts.items() if n == 4]
    twos = [c for c, n in counts.items() if n == 2]
    if len(fours) != 1 or len(twos) != 3:
        return False
    a = fours[0]
    for b in twos:
        if counts == Counter({a: 4, b: 2, a + b: 2, a - b: 2}) and len({a, b, a + b, a - b}) == 4:
            return True
    return False


def _is_3322(counts):
    threes = [c for c, n in counts.items() if n == 3]
    if len(threes) != 2 or sorted(counts.values()) != [2, 2, 3, 3]:
        return False
    a, b = threes
    return counts == Counter({a: 3, b: 3, a + b: 2, a - b: 2})


def _is_3_7(counts):
    threes = [c for c, n in counts.items() if n == 3]
    singles = [c for c, n in counts.items() if n == 1]
    if len(threes) != 1 or len(singles) != 7 or len(counts) != 8:
        return False
    a = threes[0].rep
    for b0, c0 in product(singles, repeat=2):
        if b0 == c0:
            continue
        for b, c in product(_signed(b0.rep), _signed(c0.rep)):
            wanted = [(a, 3), (b, 1), (_plus(a, b), 1), (_plus(a, _neg(b)), 1), (c, 1),
                      (_plus(a, c), 1), (_plus(a, _neg(c)), 1), (_plus(a, b, _neg(c)), 1)]
            if _matches(counts, wanted):
                return True
    return False


def _is_22_6(counts):
    twos = [c for c, n in counts.items() if n == 2]
    singles = [c for c, n in counts.items() if n == 1]
    if len(twos) != 2 or len(singles) != 6 or len(counts) != 8:
        return False
    a = twos[0].rep
    for b, c0 in product(_signed(twos[1].rep), singles):
        for c in _signed(c0.rep):
            wanted = [(a, 2), (b, 2), (_plus(a, b), 1), (_plus(a, _neg(b)), 1),
                      (_plus(a, c), 1), (_plus(b, c), 1), (_plus(a, b, c), 1), (c, 1)]
            if _matches(counts, wanted):
                return True
    return False


def five_point_type(points):
    """Type of a 5-point lattice set by its segment classes.

    Returns ``(tag, profile)``.  Each tag other than ``UNCLASSIFIABLE`` is
    only given after the class relations of that type are checked, not from
    the multiplicities alone.
    """
    pts = [tuple(int(c) for c in p) for p in points]
    if len(pts) != 5:
        raise ValueError(f"five_point_type needs exactly 5 points, got {len(pts)}")
    if len(set(pts)) != 5:
        raise ValueError("five_point_type needs distinct points")
    profile = SegmentClassProfile.of(pts)
    counts = profile.as_counter()
    if None in counts:
        return UNCLASSIFIABLE, profile
    pattern = profile.pattern()
    if pattern == (1,) * 10:
        return T10, profile
    checks = {
        (4, 2, 2, 2): (T4222, _is_4222),
        (3, 3, 2, 2): (T3322, _is_3322),
        (3,) + (1,) * 7: (T3_7, _is_3_7),
        (2, 2) + (1,) * 6: (T22_6, _is_22_6),
    }
    if pattern in checks:
        tag, test = checks[pattern]
        if test(counts):
            return tag, profile
    return UNCLASSIFIABLE, profile


def subset_types(P):
    """Counter of the types of all 5-point subsets of the lattice points of P."""
    return Counter(five_point_type(S)[0] for S in combinations(P.lattice_points, 5))


# -- length one polygons ------------------------------------------------------


def classify_length1_polygon(P):
    """Primitive segment, unit simplex or T0, for a polygon of length one."""
    if P.affine_dim > 2:
        raise PreconditionError("not a polygon: the polytope is full-dimensional in 3D")
    L = length(P).length
    if L != 1:
        raise PreconditionError(f"polygon has Minkowski length {L}, not 1")
    n = P.num_lattice_points
    if P.affine_dim == 1 and n == 2:
        return PRIMITIVE_SEGMENT
    if P.affine_dim == 2:
        area = P.twice_area()
        if n == 3 and area == 1:
            return UNIT_SIMPLEX
        if n == 4 and area == 3 and _polygon_interior_count(P) == 1:
            return T0
    raise TheoremViolation(
        f"length one polygon with {n} lattice points matches no known shape: {P!r}"
    )


def _polygon_interior_count(P):
    """Interior points of a polygon in its own plane."""
    flat = P if P.dim == 2 else LatticePolytope(plane_reduce(P.vertices)[0])
    return len(flat.interior_points())


# -- interior ledgers ---------------------------------------------------------


@dataclass(frozen=True)
class InteriorLedger:
    per_part: tuple  # ((index, interior count), ...)
    total: int
    parts_with_interior: int
    flags: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        return {
            "per_part": [list(x) for x in self.per_part],
            "total": self.total,
            "parts_with_interior": self.parts_with_interior,
            "flags": dict(self.flags),
        }


def fits_by_translation(inner, container):
    """Whether some lattice translate of ``inner`` lies in ``container``."""
    if inner.dim != container.dim:
        return False
    v0 = inner.vertices[0]
    for q in container.lattice_points:
        t = sub(q, v0)
        if all(container.contains(_plus(v, t)) for v in inner.vertices):
            return True
    return False


def interior_ledger(parts, container):
    """Interior lattice point counts of the parts of a decomposition.

    Every part must have length one and their Minkowski sum must fit in
    ``container``.  The ledger only reports; ``flags`` say whether the
    expected bounds (at most 4 in total, at most 2 when several parts have
    interior points) hold.
    """
    parts = list(parts)
    if not parts:
        raise PreconditionError("a decomposition needs at least one part")
    for i, Q in enumerate(parts):
        L = length(Q).length
        if L != 1:
            raise PreconditionError(f"part {i} has Minkowski length {L}, not 1")
    if not fits_by_translation(minkowski_sum_all(parts), container):
        raise PreconditionError("the sum of the parts does not fit in the container")
    per_part = tuple((i, len(Q.interior_points())) for i, Q in enumerate(parts))
    total = sum(n for _, n in per_part)
    with_interior = sum(1 for _, n in per_part if n)
    flags = {
        "total_at_most_4": total <= 4,
        "shared_at_most_2": with_interior <= 1 or total <= 2,
    }
    return InteriorLedger(per_part, total, with_interior, flags)


# -- sum checks ---------------------------------------------------------------


def _require_length1(polys, min_points):
    for i, P in enumerate(polys):
        if P.num_lattice_points < min_points:
            raise PreconditionError(
                f"polytope {i} has {P.num_lattice_points} lattice points, need at least {min_points}"
            )
        L = length(P).length
        if L != 1:
            raise PreconditionError(f"polytope {i} has Minkowski length {L}, not 1")


def all_type10(P):
    return P.num_lattice_points >= 5 and set(subset_types(P)) == {T10}


@dataclass(frozen=True)
class PairReport:
    length: int
    both_type10: bool
    same_up_to_translation: bool
    holds: bool
    exact: bool = True  # False: ``length`` is a lower bound that settled the check

    def as_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class TripleReport:
    length: int
    holds: bool
    exact: bool = True

    def as_dict(self):
        return dict(self.__dict__)


def check_pair_theorem(P, Q, budget=DEFAULT_BUDGET, min_points=5, exact=False):
    """Either L(P+Q) >= 3, or P and Q are translates of each other of type (10).

    Unless ``exact`` is set the oracle stops once it has found 3 segments,
    which is all the check needs.
    """
    _require_length1([P, Q], min_points)
    res = oracle_length_of_sum([P, Q], budget, None if exact else 3)
    both10 = all_type10(P) and all_type10(Q)
    same = P.same_up_to_translation(Q)
    return PairReport(res.length, both10, same, res.length >= 3 or (both10 and same), res.exact)


def check_triple_theorem(P, Q, R, budget=DEFAULT_BUDGET, min_points=5, exact=False):
    """L(P+Q+R) >= 4; the oracle stops at 4 unless ``exact`` is set."""
    _require_length1([P, Q, R], min_points)
    res = oracle_length_of_sum([P, Q, R], budget, None if exact else 4)
    return TripleReport(res.length, res.length >= 4, res.exact)


# -- census of small length one polytopes -------------------------------------


def _signed_permutations(dim):
    return [(perm, signs) for perm in permutations(range(dim)) for signs in product((1, -1), repeat=dim)]


def symmetry_key(points):
    """Canonical form of a point set up to translation and the cube's symmetries."""
    dim = len(points[0])
    best = None
    for perm, signs in _signed_permutations(dim):
        img = [tuple(s * p[i] for i, s in zip(perm, signs)) for p in points]
        lo = tuple(min(c) for c in zip(*img))
        key = tuple(sorted(sub(p, lo) for p in img))
        if best is None or key < best:
            best = key
    return best


def pairwise_condition(points):
    """All segments primitive and no two of them translates (up to sign).

    For the lattice points of a polytope this is equivalent to length one:
    a non-primitive segment gives length two, and two translate segments
    span a parallelogram inside the hull.
    """
    seen = set()
    for p, q in combinations(points, 2):
        d = sub(q, p)
        if content(d) != 1:
            return False
        key = min(d, _neg(d))
        if key in seen:
            return False
        seen.add(key)
    return True


@dataclass
class Census:
    polytopes: list
    box: int
    candidates: int = 0
    overruns: int = 0
    rejected: int = 0
    max_size: int = 0

    def as_dict(self):
        return {
            "box": self.box,
            "count": len(self.polytopes),
            "candidates": self.candidates,
            "overruns": self.overruns,
            "rejected": self.rejected,
            "largest_candidate": self.max_size,
            "by_size": dict(sorted(Counter(P.num_lattice_points for P in self.polytopes).items())),
        }


def _extensions(S, box):
    """Points that keep ``S`` inside a cube of side ``box`` and the pairwise condition."""
    lo = [min(c) for c in zip(*S)]
    hi = [max(c) for c in zip(*S)]
    keys = set()
    for p, q in combinations(S, 2):
        d = sub(q, p)
        keys.add(min(d, _neg(d)))
    ranges = [range(h - box, l + box + 1) for l, h in zip(lo, hi)]
    members = set(S)
    for q in product(*ranges):
        if q in members:
            continue
        new = []
        for p in S:
            d = sub(q, p)
            k = min(d, _neg(d))
            if content(d) != 1 or k in keys:
                break
            new.append(k)
        else:
            if len(set(new)) == len(new):
                yield q


def closed_length1_sets(box=3):
    """Lattice-closed point sets meeting the pairwise condition, by size.

    Returns ``{size: {symmetry key: points}}`` for sets that fit in a cube of
    side ``box``.  Removing a vertex from a lattice-closed set leaves a
    lattice-closed set, so every set of size k + 1 grows from one of size k
    by adding a single point.
    """
    levels = {1: {((0, 0, 0),): ((0, 0, 0),)}}
    size = 1
    while levels[size]:
        nxt = {}
        for S in levels[size].values():
            for q in _extensions(S, box):
                T = S + (q,)
                if size >= 2:
                    P = LatticePolytope(T)
                    if P.num_lattice_points != len(T):
                        continue
                key = symmetry_key(T)
                if key not in nxt:
                    nxt[key] = key
        size += 1
        levels[size] = nxt
    del levels[size]
    return levels


def length1_census(box=3, min_points=5, budget=DEFAULT_BUDGET):
    """Length one 3D polytopes with at least ``min_points`` lattice points in [0, box]^3.

    Candidates are lattice-closed point sets meeting the pairwise condition,
    taken up to translation and cube symmetries; each is then confirmed with
    the oracle.  Oracle budget overruns are counted and left out.
    """
    levels = closed_length1_sets(box)
    keys = sorted(k for size, found in levels.items() if size >= min_points for k in found)
    census = Census([], box, len(keys))
    census.max_size = max(levels)
    for k in keys:
        P = LatticePolytope(list(k))
        try:
            L = oracle_length(P, budget).length
        except OracleBudgetExceeded:
            census.overruns += 1
            continue
        if L == 1:
            census.polytopes.append(P)
        else:
            census.rejected += 1
    return census


def lemma_intersection_check(dim=3):
    """Every two class lines {a, b, a+b, a-b} meet; returns (pairs checked, failures)."""
    classes = all_mod3_classes(dim)
    lines = [class_combinations(a, b) for a, b in combinations(classes, 2)]
    checked = failures = 0
    for x, y in product(lines, repeat=2):
        checked += 1
        if not x & y:
            failures += 1
    return checked, failures
