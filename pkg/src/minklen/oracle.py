"""Brute-force Minkowski length by recursive erosion.

The longest sum of primitive segments that fits in a convex lattice region
either is empty, or starts with some primitive direction ``v`` and continues
inside the region eroded by ``[0, v]``.  Erosion of the lattice point set
``S`` is just ``{x in S : x + v in S}``, so the whole search runs on point
sets and never touches facet data.  That keeps it independent of the
template algorithm in :mod:`minklen.minkowski`, which it is used to check.

Points are packed into single integers with a linear, order-preserving map,
so translating, eroding and hashing a set are all plain integer operations.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

from .lattice import canonical_direction, det2, det3, sub
from .polytope import LatticePolytope, minkowski_sum_all, zonotope_vertices

DEFAULT_BUDGET = 10_000_000


class OracleBudgetExceeded(RuntimeError):
    def __init__(self, budget):
        super().__init__(f"oracle node budget of {budget} exceeded")
        self.budget = budget


@dataclass(frozen=True)
class OracleResult:
    length: int
    witness: tuple  # primitive directions, with repetition
    anchor: tuple = None
    nodes: int = field(default=0, compare=False)
    exact: bool = True  # False when the search stopped early at a target

    def zonotope_vertices(self):
        if self.anchor is None:
            return []
        return zonotope_vertices(self.anchor, [(1, v) for v in self.witness])


def _width_bases(dim):
    """Unimodular bases drawn from the small functionals with entries in {-1,0,1}.

    For any basis f_1..f_d every nonzero integer vector v has some
    f_j(v) != 0, so the sum of the widths of a set along a basis bounds the
    number of primitive segments that fit in it.
    """
    funcs = []
    for f in product((-1, 0, 1), repeat=dim):
        if any(f) and canonical_direction(f) == f:
            funcs.append(f)
    det = det2 if dim == 2 else det3
    bases = [
        idx
        for idx in combinations(range(len(funcs)), dim)
        if abs(det(*(funcs[i] for i in idx))) == 1
    ]
    return funcs, bases


class _Reached(Exception):
    def __init__(self, dirs, anchor):
        self.dirs = dirs
        self.anchor = anchor


class _Search:
    def __init__(self, points, budget, stop_at=None):
        self.budget = budget
        self.stop_at = stop_at
        self.path = []
        self.nodes = 0
        self.dim = len(points[0])
        bound = max(abs(c) for p in points for c in p)
        # |coordinate| < base / 2 for points, differences and translated keys
        self.base = 4 * bound + 3
        self.coords = {self.encode(p): p for p in points}
        self.funcs, self.bases = _width_bases(self.dim)
        self.func_vals = {
            code: tuple(sum(a * b for a, b in zip(f, p)) for f in self.funcs)
            for code, p in self.coords.items()
        }
        self.dir_of = {}
        codes = sorted(self.coords)
        for i, a in enumerate(codes):
            pa = self.coords[a]
            for b in codes[i + 1:]:
                d = canonical_direction(sub(self.coords[b], pa))
                self.dir_of[b - a] = self.encode(d)
        self.memo = {}

    def encode(self, p):
        code = 0
        for c in p:
            code = code * self.base + c
        return code

    def decode(self, code):
        out = []
        half = self.base // 2
        for _ in range(self.dim):
            r = (code + half) % self.base - half
            out.append(r)
            code = (code - r) // self.base
        return tuple(reversed(out))

    def upper_bound(self, S):
        nf = len(self.funcs)
        lo = [None] * nf
        hi = [None] * nf
        for p in S:
            vals = self.func_vals[p]
            if lo[0] is None:
                lo = list(vals)
                hi = list(vals)
                continue
            for j, x in enumerate(vals):
                if x < lo[j]:
                    lo[j] = x
                elif x > hi[j]:
                    hi[j] = x
        widths = [h - l for h, l in zip(hi, lo)]
        best = len(S) - 1
        for idx in self.bases:
            w = sum(widths[i] for i in idx)
            if w < best:
                best = w
        return best

    def solve(self, S):
        """Return ``(length, directions, anchor)`` for the point set ``S``."""
        m = min(S)
        key = frozenset(p - m for p in S)
        hit = self.memo.get(key)
        if hit is not None:
            length, dirs, rel = hit
            return length, dirs, rel + m

        self.nodes += 1
        if self.nodes > self.budget:
            raise OracleBudgetExceeded(self.budget)

        pts = sorted(S)
        cands = set()
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                cands.add(self.dir_of[b - a])

        best_len, best_dirs, best_anchor = 0, (), m
        if cands:
            ceiling = self.upper_bound(S)
            for v in sorted(cands):
                child = frozenset(p for p in S if p + v in S)
                if 1 + self.upper_bound(child) <= best_len:
                    continue
                self.path.append(v)
                length, dirs, anchor = self.solve(child)
                self.path.pop()
                if self.stop_at is not None and len(self.path) + length + 1 >= self.stop_at:
                    raise _Reached(tuple(self.path) + (v,) + dirs, anchor)
                if length + 1 > best_len:
                    best_len, best_dirs, best_anchor = length + 1, (v,) + dirs, anchor
                    if best_len >= ceiling:
                        break
        self.memo[key] = (best_len, best_dirs, best_anchor - m)
        return best_len, best_dirs, best_anchor


def _point_list(S):
    if isinstance(S, LatticePolytope):
        return list(S.lattice_points)
    return sorted({tuple(int(c) for c in p) for p in S})


def oracle_length(S, budget=DEFAULT_BUDGET, stop_at=None):
    """Minkowski length of the convex hull of the lattice point set ``S``.

    ``S`` must be the full set of lattice points of some convex region (a
    :class:`LatticePolytope` is accepted as well).  Among optimal first
    directions the lexicographically smallest canonical one wins, so the
    witness is deterministic.  Raises :class:`OracleBudgetExceeded` when more
    than ``budget`` distinct point sets would have to be expanded.

    With ``stop_at`` the search ends as soon as a chain of that many
    segments is found; the result then has ``exact=False`` and its length is
    only a certified lower bound.  If no such chain exists the search runs
    to the end and the length is exact.
    """
    pts = _point_list(S)
    if not pts:
        return OracleResult(0, (), None, 0)
    search = _Search(pts, budget, stop_at)
    try:
        length, dirs, anchor = search.solve(frozenset(search.coords))
        exact = True
    except _Reached as hit:
        dirs, anchor = hit.dirs, hit.anchor
        length, exact = len(dirs), False
    return OracleResult(
        length,
        tuple(search.decode(d) for d in dirs),
        search.decode(anchor),
        search.nodes,
        exact,
    )


def oracle_length_of_sum(polytopes, budget=DEFAULT_BUDGET, stop_at=None):
    return oracle_length(minkowski_sum_all(polytopes), budget, stop_at)


def witness_fits(S, result):
    """Re-check that the witness zonotope sits inside the hull of ``S``."""
    if result.length == 0:
        return True
    pts = frozenset(_point_list(S))
    return all(v in pts for v in result.zonotope_vertices())
