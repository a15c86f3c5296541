"""Minkowski length through zonotope templates.

Some smallest maximal decomposition of a lattice polygon is a sum of
segments along ``e1, e2, e1+e2`` in a suitable lattice basis; in 3-space it
is a sum along at most seven directions of one of two shapes, built on three
lattice segments that span a parallelepiped of volume one or two.  The
length is therefore the best value of

    max n_1 + ... + n_k   such that   F + n_1 [0, E_1] + ... + n_k [0, E_k]  fits in P

over every template ``E_1..E_k`` that lattice points of ``P`` can generate,
plus the single-direction (collinear) case.

Templates are enumerated with numpy, deduplicated by their direction sets,
bounded, and then searched best-bound first with a depth-first branch and
bound over the multiplicities.  Feasibility of a multiplicity tuple is the
exact facet test ``<a, F> + support(Z, a) <= b`` against every lattice
anchor ``F`` at once.
"""

import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .lattice import (
    add,
    canonical_direction,
    dot,
    is_primitive,
    sub,
)
from .polytope import LatticePolytope, plane_reduce, zonotope_vertices

COLLINEAR = "collinear"
PLANAR = "planar"
VOLUME1 = "volume1"
VOLUME2 = "volume2"


@dataclass(frozen=True)
class Decomposition:
    """``anchor + sum n_i [0, v_i]`` with primitive, pairwise non-parallel ``v_i``."""

    anchor: tuple
    parts: tuple = ()

    @property
    def length(self):
        return sum(n for n, _ in self.parts)

    @property
    def directions(self):
        return [v for _, v in self.parts]

    def vertices(self):
        return zonotope_vertices(self.anchor, self.parts)

    def fits_in(self, P):
        if P.facets:
            return all(
                dot(a, self.anchor) + sum(n * max(dot(a, v), 0) for n, v in self.parts) <= b
                for a, b in P.facets
            )
        return all(P.contains(x) for x in self.vertices())

    def transform(self, umap):
        return Decomposition(
            umap.apply(self.anchor),
            tuple((n, umap.apply_linear(v)) for n, v in self.parts),
        )

    def as_dict(self):
        return {
            "anchor": list(self.anchor),
            "parts": [{"multiplicity": n, "direction": list(v)} for n, v in self.parts],
        }


@dataclass(frozen=True)
class TemplateBasis:
    """A template family member: its kind and up to seven segment directions.

    For the volume-one kind ``variant`` names the pair of basis segments whose
    difference (rather than sum) is used, e.g. ``"u-v"``; ``None`` means all
    pairwise sums.
    """

    kind: str
    segments: tuple
    variant: str = None


@dataclass
class SearchStats:
    triples: int = 0
    quadruples: int = 0
    templates: int = 0
    searched: int = 0
    pruned: int = 0
    nodes: int = 0
    elapsed: float = 0.0

    def as_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class LengthResult:
    length: int
    witness: Decomposition
    basis: TemplateBasis = None
    stats: SearchStats = field(default_factory=SearchStats, compare=False)


# -- helpers on integer arrays ------------------------------------------------


def _canonical_rows(V):
    """Negate rows whose first nonzero entry is negative."""
    sign = np.zeros(len(V), dtype=np.int64)
    for j in range(V.shape[1] - 1, -1, -1):
        col = np.sign(V[:, j])
        sign = np.where(col != 0, col, sign)
    sign = np.where(sign == 0, 1, sign)
    return V * sign[:, None]


def _gcd_rows(V):
    return np.gcd.reduce(np.abs(V), axis=1)


def _cross_rows(U, V):
    return np.cross(U, V)


def _det_rows(U, V, W):
    return np.einsum("ij,ij->i", U, np.cross(V, W))


_COMBOS = {}


def _combos(n, k):
    key = (n, k)
    if key not in _COMBOS:
        if n < k:
            arr = np.zeros((0, k), dtype=np.int64)
        else:
            arr = np.array(list(combinations(range(n), k)), dtype=np.int64).reshape(-1, k)
        _COMBOS[key] = arr
    return _COMBOS[key]


def _width_functionals(dim):
    out = []
    for f in np.ndindex(*(3,) * dim):
        f = tuple(c - 1 for c in f)
        if any(f) and canonical_direction(f) == f:
            out.append(f)
    return out


# -- the fitting context ------------------------------------------------------


class _Fitter:
    """Exact fit queries for a full-dimensional polytope in its ambient space."""

    def __init__(self, P):
        if not P.is_full_dimensional:
            raise ValueError("fitting context needs a full-dimensional polytope")
        self.P = P
        self.dim = P.dim
        self.A = P.A
        self.pts = P.points_array()
        self.slack = P.b[:, None] - self.A @ self.pts.T  # facets x points
        ext = int((self.pts.max(axis=0) - self.pts.min(axis=0)).max())
        self.radius = 3 * max(ext, 1)
        self.base = 2 * self.radius + 1
        self.directions = self._difference_directions()
        # row 0 stands for "no direction": zero vector, zero caps
        self.dir_array = np.zeros((len(self.directions) + 1, self.dim), dtype=np.int64)
        self.dir_index = np.zeros(self.base ** self.dim, dtype=np.int64)
        self.anchor_caps = np.zeros((len(self.directions) + 1, len(self.pts)), dtype=np.int64)
        for i, v in enumerate(self.directions, 1):
            self.dir_array[i] = v
            self.dir_index[self.code(v)] = i
            self.anchor_caps[i] = self._anchor_caps(v)
        self.max_caps = self.anchor_caps.max(axis=1)
        self.caps = {v: int(c) for v, c in zip(self.directions, self.max_caps[1:])}
        # functionals bounding widths: facet normals plus small ones
        funcs = [tuple(int(x) for x in row) for row in self.A]
        funcs += [f for f in _width_functionals(self.dim) if f not in funcs]
        self.funcs = np.array(funcs, dtype=np.int64)
        proj = self.funcs @ self.pts.T
        self.widths = proj.max(axis=1) - proj.min(axis=1)

    def code(self, v):
        c = 0
        for x in v:
            c = c * self.base + int(x) + self.radius
        return c

    def codes(self, V):
        c = np.zeros(len(V), dtype=np.int64)
        for j in range(V.shape[1]):
            c = c * self.base + V[:, j] + self.radius
        return c

    def _difference_directions(self):
        n = len(self.pts)
        if n < 2:
            return []
        idx = _combos(n, 2)
        D = self.pts[idx[:, 1]] - self.pts[idx[:, 0]]
        D = _canonical_rows(D)
        D = D[_gcd_rows(D) == 1]
        D = np.unique(D, axis=0)
        return [tuple(int(x) for x in row) for row in D]

    def _anchor_caps(self, v):
        """For each lattice point F, the largest t with F + t v in P."""
        pos = self.A @ np.asarray(v, dtype=np.int64)
        rows = pos > 0
        return (self.slack[rows] // pos[rows, None]).min(axis=0)

    def indices(self, V):
        """Direction indices of the rows of V (0 if not a difference direction)."""
        return self.dir_index[self.codes(_canonical_rows(V))]

    def fit(self, dirs, mults):
        """Lexicographically smallest lattice anchor for the zonotope, or None."""
        h = np.zeros(len(self.A), dtype=np.int64)
        for n, v in zip(mults, dirs):
            if n:
                h += n * np.maximum(self.A @ np.asarray(v, dtype=np.int64), 0)
        ok = (self.slack >= h[:, None]).all(axis=0)
        hits = np.flatnonzero(ok)
        if len(hits) == 0:
            return None
        return tuple(int(x) for x in self.pts[hits[0]])

    def knapsack_bound(self, V, caps):
        """Upper bound on sum(n) for templates given as rows of direction stacks.

        ``V`` is (rows, k, dim), ``caps`` is (rows, k).  For a functional f the
        zonotope has width ``sum n_i |f(v_i)|`` which cannot exceed the width of
        P; with ``0 <= n_i <= cap_i`` the fractional knapsack optimum bounds the
        integer one.  The minimum over all functionals is returned.
        """
        rows, k, _ = V.shape
        best = caps.sum(axis=1)
        for f, width in zip(self.funcs, self.widths):
            cost = np.abs(V @ f)  # rows x k
            order = np.argsort(cost, axis=1, kind="stable")
            cs = np.take_along_axis(cost, order, axis=1)
            ms = np.take_along_axis(caps, order, axis=1)
            spend = np.cumsum(cs * ms, axis=1)
            full = spend <= width
            taken = (ms * full).sum(axis=1)
            nfull = full.sum(axis=1)
            part = np.zeros(rows, dtype=np.int64)
            has_next = nfull < k
            if has_next.any():
                r = np.flatnonzero(has_next)
                j = nfull[r]
                before = np.where(j > 0, spend[r, np.maximum(j - 1, 0)], 0)
                part[r] = (width - before) // cs[r, j]
            best = np.minimum(best, taken + part)
        return best

    # -- branch and bound over multiplicities --

    def search(self, dirs, best, stats):
        """Best multiplicities for a template, or None if nothing beats ``best``.

        Returns ``(total, mults, anchor)`` with ``mults`` aligned to ``dirs``.
        """
        k = len(dirs)
        caps = [self.caps.get(canonical_direction(v), 0) for v in dirs]
        order = sorted(range(k), key=lambda i: -caps[i])
        pos = np.stack([np.maximum(self.A @ np.asarray(dirs[i], dtype=np.int64), 0) for i in order])
        active = (pos > 0)[:, :, None]
        safe = np.where(pos > 0, pos, 1)[:, :, None]
        # anchors that an unconstrained row would never limit
        big = int(self.slack.max()) + 1
        found = None
        cols0 = np.arange(self.slack.shape[1])

        def rec(i, R, cols, total, mults):
            nonlocal best, found
            stats.nodes += 1
            if i == k:
                if total > best:
                    best = total
                    found = (total, mults, int(cols[0]))
                return
            per_col = np.where(active[i:], R[None] // safe[i:], big).min(axis=1)
            here = per_col[0]
            # per anchor, the remaining directions can add at most this much
            rest = per_col[1:].sum(axis=0)
            if total + int((here + rest).max()) <= best:
                return
            for n in range(int(here.max()), -1, -1):
                keep = here >= n
                if total + n + int(rest[keep].max()) <= best:
                    continue
                if n:
                    rec(i + 1, R[:, keep] - n * pos[i][:, None], cols[keep], total + n, mults + (n,))
                else:
                    rec(i + 1, R, cols, total, mults + (0,))

        rec(0, self.slack, cols0, 0, ())
        if found is None:
            return None
        total, mults, col = found
        aligned = [0] * k
        for slot, i in enumerate(order):
            aligned[i] = mults[slot]
        anchor = tuple(int(x) for x in self.pts[col])
        return total, tuple(aligned), anchor


# -- template enumeration -----------------------------------------------------


VOL1_VARIANTS = (None, "u-v", "u-w", "v-w")


def _vol1_stack(U, V, W, variant):
    uv = U - V if variant == "u-v" else U + V
    uw = U - W if variant == "u-w" else U + W
    vw = V - W if variant == "v-w" else V + W
    return np.stack([U, V, W, U + V + W, uv, uw, vw], axis=1)


def _vol2_stack(U, V, W):
    s = U + V + W
    return np.stack(
        [U, V, W, s // 2, (U + V - W) // 2, (U - V + W) // 2, (V + W - U) // 2], axis=1
    )


def _planar_stack(U, V, sign):
    return np.stack([U, V, U + sign * V], axis=1)


class _TemplatePool:
    """Collects template direction sets and orders them by an upper bound.

    A template is stored as the sorted tuple of its direction indices, with
    directions that cannot be used at all (cap 0) dropped.  The tuple is kept
    as a fixed-width byte string of big-endian 16-bit indices, so byte order
    is lexicographic order and deduplication is a plain 1D unique.
    """

    def __init__(self, fitter, floor, width=7):
        if len(fitter.directions) >= 1 << 16:
            raise ValueError("too many lattice directions for the template pool")
        self.fitter = fitter
        self.floor = floor
        self.width = width
        self.keys = []
        self.meta = []
        self.pending = 0
        self.compact_at = 1 << 21

    def add(self, stack, meta):
        """``stack`` is (rows, k, dim); ``meta`` is (rows, m) ints for the witness."""
        if len(stack) == 0:
            return
        fitter = self.fitter
        rows, k, dim = stack.shape
        idx = fitter.indices(stack.reshape(-1, dim)).reshape(rows, k)
        caps = fitter.max_caps[idx]
        live = caps.sum(axis=1) > self.floor
        if not live.any():
            return
        idx = np.sort(np.where(caps[live] > 0, idx[live], 0), axis=1)
        if k < self.width:
            idx = np.hstack([np.zeros((len(idx), self.width - k), dtype=np.int64), idx])
        keys, first = np.unique(self._pack(idx), return_index=True)
        self.keys.append(keys)
        self.meta.append(meta[live][first].astype(np.int32))
        self.pending += len(keys)
        if self.pending > self.compact_at:
            self._compact()

    def _pack(self, idx):
        raw = np.ascontiguousarray(idx.astype(">u2"))
        return raw.view(np.dtype((np.void, 2 * self.width))).reshape(-1)

    def _unpack(self, keys):
        return keys.view(">u2").reshape(-1, self.width).astype(np.int64)

    def _compact(self):
        keys, first = np.unique(np.concatenate(self.keys), return_index=True)
        self.meta = [np.vstack(self.meta)[first]]
        self.keys = [keys]
        self.pending = 0
        self.compact_at = max(self.compact_at, 2 * len(keys))

    def _bounds(self, idx):
        """Upper bounds for templates given as rows of direction indices."""
        fitter = self.fitter
        bounds = fitter.knapsack_bound(fitter.dir_array[idx], fitter.max_caps[idx])
        # each anchor fixes its own caps; sum them and take the best anchor
        per_anchor = fitter.anchor_caps[idx].sum(axis=1).max(axis=1)
        return np.minimum(bounds, per_anchor)

    def ordered(self):
        """Yield ``(bound, indices, meta)`` by decreasing bound, ties by indices.

        Only templates whose bound beats the floor are yielded.
        """
        if not self.keys:
            return
        self._compact()
        keys, meta = self.keys[0], self.meta[0]
        chunk = max(1, (1 << 22) // (self.width * len(self.fitter.pts)))
        kept_idx, kept_meta, kept_bounds = [], [], []
        for s in range(0, len(keys), chunk):
            idx = self._unpack(keys[s:s + chunk])
            bounds = self._bounds(idx)
            live = bounds > self.floor
            kept_idx.append(idx[live])
            kept_meta.append(meta[s:s + chunk][live])
            kept_bounds.append(bounds[live])
        idx = np.concatenate(kept_idx)
        meta = np.concatenate(kept_meta)
        bounds = np.concatenate(kept_bounds)
        order = np.lexsort(tuple(idx.T[::-1]) + (-bounds,))
        for i in order:
            yield int(bounds[i]), [int(c) for c in idx[i] if c], tuple(int(x) for x in meta[i])


def _others(n, a):
    idx = np.arange(n)
    return idx[idx != a]


def _enumerate_3d(fitter, pool, stats, chunk=1 << 17):
    pts = fitter.pts
    n = len(pts)
    c3 = _combos(n - 1, 3)
    c2 = _combos(n - 1, 2)
    for a in range(n):
        others = _others(n, a)
        D = pts[others] - pts[a]
        # planar templates: empty parallelograms at A
        if len(c2):
            U, V = D[c2[:, 0]], D[c2[:, 1]]
            stats.triples += len(c2)
            ok = _gcd_rows(_cross_rows(U, V)) == 1
            if ok.any():
                U, V = U[ok], V[ok]
                sel = c2[ok]
                for sign, tag in ((1, 0), (-1, 1)):
                    meta = np.column_stack(
                        [np.full(len(sel), 1), np.full(len(sel), a), others[sel[:, 0]],
                         others[sel[:, 1]], np.full(len(sel), -1), np.full(len(sel), tag)]
                    )
                    pool.add(_planar_stack(U, V, sign), meta)
        for start in range(0, len(c3), chunk):
            _volume_templates(pool, stats, a, others, D, c3[start:start + chunk])


def _volume_templates(pool, stats, a, others, D, c3):
    U, V, W = D[c3[:, 0]], D[c3[:, 1]], D[c3[:, 2]]
    stats.quadruples += len(c3)
    vol = np.abs(_det_rows(U, V, W))
    sel1 = vol == 1
    if sel1.any():
        s = c3[sel1]
        for tag, variant in enumerate(VOL1_VARIANTS):
            meta = np.column_stack(
                [np.full(len(s), 2), np.full(len(s), a), others[s[:, 0]],
                 others[s[:, 1]], others[s[:, 2]], np.full(len(s), tag)]
            )
            pool.add(_vol1_stack(U[sel1], V[sel1], W[sel1], variant), meta)
    sel2 = vol == 2
    if sel2.any():
        U2, V2, W2 = U[sel2], V[sel2], W[sel2]
        s = c3[sel2]
        good = (
            (_gcd_rows(U2) == 1)
            & (_gcd_rows(V2) == 1)
            & (_gcd_rows(W2) == 1)
            & (_gcd_rows(_cross_rows(U2, V2)) == 1)
            & (_gcd_rows(_cross_rows(U2, W2)) == 1)
            & (_gcd_rows(_cross_rows(V2, W2)) == 1)
            & ((U2 + V2 + W2) % 2 == 0).all(axis=1)
        )
        if good.any():
            s = s[good]
            meta = np.column_stack(
                [np.full(len(s), 3), np.full(len(s), a), others[s[:, 0]],
                 others[s[:, 1]], others[s[:, 2]], np.full(len(s), 0)]
            )
            pool.add(_vol2_stack(U2[good], V2[good], W2[good]), meta)


def _enumerate_2d(fitter, pool, stats):
    pts = fitter.pts
    n = len(pts)
    c2 = _combos(n - 1, 2)
    if not len(c2):
        return
    for a in range(n):
        others = _others(n, a)
        D = pts[others] - pts[a]
        U, V = D[c2[:, 0]], D[c2[:, 1]]
        stats.triples += len(c2)
        ok = np.abs(U[:, 0] * V[:, 1] - U[:, 1] * V[:, 0]) == 1
        if ok.any():
            sel = c2[ok]
            meta = np.column_stack(
                [np.full(len(sel), 1), np.full(len(sel), a), others[sel[:, 0]],
                 others[sel[:, 1]], np.full(len(sel), -1), np.full(len(sel), 0)]
            )
            pool.add(_planar_stack(U[ok], V[ok], 1), meta)


_KINDS = {1: PLANAR, 2: VOLUME1, 3: VOLUME2}


def _basis_from_meta(fitter, meta, dirs):
    kind, tag = meta[0], meta[-1]
    if kind == 1:
        variant = "u-v" if tag == 1 else None
        return TemplateBasis(PLANAR, tuple(dirs), variant)
    variant = VOL1_VARIANTS[tag] if kind == 2 else None
    return TemplateBasis(_KINDS[kind], tuple(dirs), variant)


# -- public operations --------------------------------------------------------


def max_cap(P, v):
    """Largest t >= 0 such that some lattice translate of ``t [0, v]`` lies in P."""
    v = tuple(int(c) for c in v)
    if not is_primitive(v):
        raise ValueError(f"{v!r} is not primitive")
    if P.is_full_dimensional:
        pos = [dot(a, v) for a, _ in P.facets]
        best = 0
        for F in P.lattice_points:
            t = min((b - dot(a, F)) // p for (a, b), p in zip(P.facets, pos) if p > 0)
            best = max(best, t)
        return best
    pts = P.point_set
    best = 0
    for F in P.lattice_points:
        t, x = 0, add(F, v)
        while x in pts:
            t, x = t + 1, add(x, v)
        best = max(best, t)
    return best


def fit_zonotope(P, basis, mults):
    """Lexicographically smallest lattice anchor F with ``F + sum n_i E_i`` in P."""
    segments = basis.segments if isinstance(basis, TemplateBasis) else tuple(basis)
    if len(segments) != len(mults):
        raise ValueError("multiplicity tuple does not match the template")
    parts = [(int(n), tuple(v)) for n, v in zip(mults, segments)]
    if P.is_full_dimensional:
        hits = [
            F for F in P.lattice_points
            if all(dot(a, F) + sum(n * max(dot(a, v), 0) for n, v in parts) <= b for a, b in P.facets)
        ]
        return hits[0] if hits else None
    for F in P.lattice_points:
        if all(P.contains(x) for x in zonotope_vertices(F, parts)):
            return F
    return None


def _decomposition(anchor, dirs, mults):
    parts = tuple((n, v) for n, v in zip(mults, dirs) if n)
    return Decomposition(anchor, parts)


def length_1d(P):
    """Best single-direction decomposition ``t [0, v]``."""
    start = time.perf_counter()
    stats = SearchStats()
    if P.num_lattice_points < 2:
        return LengthResult(0, Decomposition(P.lattice_points[0]), None, stats)
    if P.is_full_dimensional:
        fitter = _Fitter(P)
        dirs, caps = fitter.directions, fitter.caps
    else:
        dirs = sorted({canonical_direction(sub(q, p)) for p, q in combinations(P.lattice_points, 2)})
        caps = {v: max_cap(P, v) for v in dirs}
    best_v = max(dirs, key=lambda v: (caps[v], tuple(-c for c in v)))
    t = caps[best_v]
    anchor = fit_zonotope(P, [best_v], [t])
    stats.elapsed = time.perf_counter() - start
    return LengthResult(t, Decomposition(anchor, ((t, best_v),)), TemplateBasis(COLLINEAR, (best_v,)), stats)


def _run_templates(P, enumerate_fn):
    start = time.perf_counter()
    base = length_1d(P)
    stats = SearchStats()
    fitter = _Fitter(P)
    best, witness, basis = base.length, base.witness, base.basis
    pool = _TemplatePool(fitter, best)
    enumerate_fn(fitter, pool, stats)
    # direction sets already covered by a searched template: the optimum over
    # a subset is never larger than over the superset, which is <= best
    covered = set()
    for bound, idx, meta in pool.ordered():
        stats.templates += 1
        if bound <= best:
            break
        mask = 0
        for i in idx:
            mask |= 1 << i
        if mask in covered:
            stats.pruned += 1
            continue
        stats.searched += 1
        sub = mask
        while sub:
            covered.add(sub)
            sub = (sub - 1) & mask
        dirs = [fitter.directions[i - 1] for i in idx]
        hit = fitter.search(dirs, best, stats)
        if hit is not None:
            total, mults, anchor = hit
            best = total
            witness = _decomposition(anchor, dirs, mults)
            basis = _basis_from_meta(fitter, meta, dirs)
    stats.elapsed = time.perf_counter() - start
    return LengthResult(best, witness, basis, stats)


def length_2d(P):
    """Minkowski length of a polygon (or lower-dimensional set) in the plane."""
    if P.dim != 2:
        if P.affine_dim == 3:
            raise ValueError("length_2d called on a full 3D polytope; use length_3d")
        return length(P)
    if P.affine_dim < 2:
        return length_1d(P)
    return _run_templates(P, _enumerate_2d)


def length_3d(P):
    """Minkowski length of a full-dimensional 3D lattice polytope."""
    if P.dim != 3 or P.affine_dim != 3:
        raise ValueError("length_3d needs a full-dimensional 3D polytope; use length()")
    return _run_templates(P, _enumerate_3d)


def length(P):
    """Dispatch on the affine dimension of P."""
    if P.affine_dim == 0:
        return LengthResult(0, Decomposition(P.vertices[0]), None, SearchStats())
    if P.affine_dim == 1:
        return length_1d(P)
    if P.affine_dim == P.dim:
        return length_2d(P) if P.dim == 2 else length_3d(P)
    flat, umap = plane_reduce(P.vertices)
    res = length_2d(LatticePolytope(flat))
    back = umap.inverse()
    w = res.witness
    lifted = Decomposition(
        back.apply(tuple(w.anchor) + (0,)),
        tuple((n, back.apply_linear(tuple(v) + (0,))) for n, v in w.parts),
    )
    basis = None
    if res.basis is not None:
        basis = TemplateBasis(
            res.basis.kind,
            tuple(back.apply_linear(tuple(v) + (0,)) for v in res.basis.segments),
            res.basis.variant,
        )
    return LengthResult(res.length, lifted, basis, res.stats)
