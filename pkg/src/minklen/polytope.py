"""Lattice polytopes in dimension 2 and 3 with exact facet data.

A :class:`LatticePolytope` is immutable; its vertices, facet inequalities and
lattice points are computed once, at construction.  Facet inequalities are
``<normal, x> <= offset`` with primitive integer normals and only exist for
full-dimensional polytopes.  Lower-dimensional polytopes (points, segments,
planar polygons sitting in 3-space) are first-class and answer membership
queries through a reduction to their affine hull.
"""

from itertools import combinations, product

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .lattice import (
    UnimodularMap,
    add,
    canonical_direction,
    complete_to_unimodular,
    content,
    cross,
    det2,
    dot,
    primitive_part,
    rank,
    sub,
)


class DegenerateInputError(ValueError):
    pass


def _as_points(points):
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts:
        raise ValueError("cannot build a polytope from an empty point list")
    dim = len(pts[0])
    if dim not in (2, 3) or any(len(p) != dim for p in pts):
        raise ValueError("points must all be 2D or all be 3D")
    return pts


def affine_dimension(points):
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]])


# -- planar hulls -------------------------------------------------------------


def _hull_2d(pts):
    """Monotone chain; returns the strictly convex vertices counter-clockwise."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def turn(o, a, b):
        return det2(sub(a, o), sub(b, o))

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _facets_2d(ccw):
    facets = []
    n = len(ccw)
    for i in range(n):
        p, q = ccw[i], ccw[(i + 1) % n]
        d = sub(q, p)
        normal = primitive_part((d[1], -d[0]))
        facets.append((normal, dot(normal, p)))
    return facets


def twice_area_2d(ccw):
    """Twice the Euclidean area of a counter-clockwise polygon (an integer)."""
    n = len(ccw)
    return sum(det2(ccw[i], ccw[(i + 1) % n]) for i in range(n))


# -- spatial hulls ------------------------------------------------------------


def _plane_through(p, q, r, pts):
    normal = cross(sub(q, p), sub(r, p))
    if not any(normal):
        return None
    normal = primitive_part(normal)
    offset = dot(normal, p)
    vals = [dot(normal, x) for x in pts]
    if max(vals) <= offset:
        return normal, offset
    if min(vals) >= offset:
        return tuple(-c for c in normal), -offset
    return None


def _facets_3d_bruteforce(pts):
    planes = set()
    for p, q, r in combinations(pts, 3):
        plane = _plane_through(p, q, r, pts)
        if plane is not None:
            planes.add(plane)
    return planes


def _facets_closed(planes, pts):
    """Check that every edge of every facet is shared by exactly two facets."""
    edge_count = {}
    for normal, offset in planes:
        on = [p for p in pts if dot(normal, p) == offset]
        if len(on) < 3:
            return False
        m = complete_to_unimodular(normal)
        flat = {m.apply(p)[:2]: p for p in on}
        ring = _hull_2d(list(flat))
        if len(ring) < 3:
            return False
        for i in range(len(ring)):
            e = frozenset((flat[ring[i]], flat[ring[(i + 1) % len(ring)]]))
            edge_count[e] = edge_count.get(e, 0) + 1
    return all(c == 2 for c in edge_count.values())


def _facets_3d(pts):
    """Exact facets of a full-dimensional point set.

    Qhull proposes the facet planes; each one is rebuilt from integer
    points, oriented and verified exactly, and the facet complex is checked
    for closure.  Any inconsistency falls back to the cubic brute force.
    """
    planes = set()
    try:
        hull = ConvexHull(np.asarray(pts, dtype=float))
        for simplex in hull.simplices:
            plane = _plane_through(*(pts[i] for i in simplex), pts)
            if plane is None:
                raise QhullError("inexact facet")
            planes.add(plane)
        if not _facets_closed(planes, pts):
            raise QhullError("open facet complex")
    except QhullError:
        planes = _facets_3d_bruteforce(pts)
    return sorted(planes)


def _vertices_from_facets(pts, facets):
    verts = []
    for p in pts:
        active = [n for n, b in facets if dot(n, p) == b]
        if rank(active) == len(p):
            verts.append(p)
    return verts


# -- lattice point scanning ---------------------------------------------------


def _scan_lattice_points(A, b, lo, hi, strict=False):
    """Integer points with ``A x <= b`` (or ``<`` when strict) in the box [lo, hi].

    All coordinates but the last are scanned; the last one gets an exact
    interval from the facet inequalities.
    """
    dim = A.shape[1]
    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(dim - 1)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim - 1)
    rest = b[None, :] - grid @ A[:, :-1].T  # (cells, facets)
    if strict:
        rest = rest - 1
    last = A[:, -1]
    zlo = np.full(len(grid), lo[-1], dtype=np.int64)
    zhi = np.full(len(grid), hi[-1], dtype=np.int64)
    ok = np.ones(len(grid), dtype=bool)
    for j, a in enumerate(last):
        r = rest[:, j]
        if a > 0:
            zhi = np.minimum(zhi, np.floor_divide(r, a))
        elif a < 0:
            zlo = np.maximum(zlo, -np.floor_divide(r, -a))
        else:
            ok &= r >= 0
    out = []
    for cell, z0, z1, good in zip(grid.tolist(), zlo.tolist(), zhi.tolist(), ok.tolist()):
        if good and z0 <= z1:
            out.extend(tuple(cell) + (z,) for z in range(z0, z1 + 1))
    return out


# -- the polytope type --------------------------------------------------------


class LatticePolytope:
    """Convex hull of finitely many lattice points in Z^2 or Z^3.

    Build one with :func:`hull`.  Attributes:

    ``vertices``       sorted tuple of extreme points
    ``dim``            ambient dimension (2 or 3)
    ``affine_dim``     dimension of the affine hull
    ``facets``         tuple of ``(normal, offset)``, empty unless full-dimensional
    ``lattice_points`` sorted tuple of all lattice points
    """

    __slots__ = (
        "vertices",
        "dim",
        "affine_dim",
        "facets",
        "lattice_points",
        "_point_set",
        "_reduction",
        "A",
        "b",
    )

    def __init__(self, points):
        pts = _as_points(points)
        self.dim = len(pts[0])
        self.affine_dim = affine_dimension(pts)
        self._reduction = None
        self.facets = ()
        if self.affine_dim == 0:
            self.vertices = (pts[0],)
            lattice = [pts[0]]
        elif self.affine_dim == 1:
            p, q = pts[0], pts[-1]  # lexicographic extremes of a collinear set
            self.vertices = (p, q)
            step = primitive_part(sub(q, p))
            lattice = [add(p, tuple(k * c for c in step)) for k in range(content(sub(q, p)) + 1)]
        elif self.affine_dim == self.dim:
            if self.dim == 2:
                ring = _hull_2d(pts)
                facets = _facets_2d(ring)
            else:
                facets = _facets_3d(pts)
            self.facets = tuple(sorted(facets))
            self.vertices = tuple(_vertices_from_facets(pts, self.facets))
        else:
            # a polygon in 3-space: work in the plane's own lattice
            flat, umap = plane_reduce(pts)
            poly2 = LatticePolytope(flat)
            self._reduction = (poly2, umap, umap.inverse())
            self.vertices = tuple(sorted(self._lift(v) for v in poly2.vertices))
            lattice = [self._lift(p) for p in poly2.lattice_points]

        if self.facets:
            self.A = np.array([n for n, _ in self.facets], dtype=np.int64)
            self.b = np.array([o for _, o in self.facets], dtype=np.int64)
            lo = np.min(self.vertices, axis=0)
            hi = np.max(self.vertices, axis=0)
            lattice = _scan_lattice_points(self.A, self.b, lo, hi)
        else:
            self.A = self.b = None
        self.lattice_points = tuple(sorted(lattice))
        self._point_set = frozenset(self.lattice_points)

    def _lift(self, p2):
        return self._reduction[2].apply(tuple(p2) + (0,))

    # -- basic queries --

    @property
    def is_full_dimensional(self):
        return self.affine_dim == self.dim

    @property
    def point_set(self):
        return self._point_set

    @property
    def num_lattice_points(self):
        return len(self.lattice_points)

    def points_array(self):
        return np.array(self.lattice_points, dtype=np.int64)

    def contains(self, x):
        x = tuple(int(c) for c in x)
        if len(x) != self.dim:
            raise ValueError("dimension mismatch")
        if self.facets:
            return all(dot(n, x) <= o for n, o in self.facets)
        if self.affine_dim == 0:
            return x == self.vertices[0]
        if self.affine_dim == 1:
            p, q = self.vertices
            d, e = sub(q, p), sub(x, p)
            if rank([d, e]) > 1:
                return False
            t = dot(d, e)
            return 0 <= t <= dot(d, d)
        poly2, umap, _ = self._reduction
        y = umap.apply(x)
        return y[2] == 0 and poly2.contains(y[:2])

    def __contains__(self, x):
        return self.contains(x)

    def interior_points(self):
        """Lattice points strictly inside; empty unless full-dimensional."""
        if not self.facets:
            return frozenset()
        return frozenset(
            p for p in self.lattice_points if all(dot(n, p) < o for n, o in self.facets)
        )

    def canonical_form(self):
        """Vertices translated so the lexicographically smallest one is the origin."""
        v0 = self.vertices[0]
        return tuple(sub(v, v0) for v in self.vertices)

    def same_up_to_translation(self, other):
        return self.dim == other.dim and self.canonical_form() == other.canonical_form()

    def twice_area(self):
        """Twice the area of a polygon in its own plane lattice."""
        if self.affine_dim != 2:
            raise ValueError("twice_area is defined for polygons only")
        if self.dim == 2:
            return twice_area_2d(_hull_2d(list(self.vertices)))
        return self._reduction[0].twice_area()

    def volume6(self):
        """Six times the volume of a full-dimensional 3D polytope."""
        if self.dim != 3 or not self.is_full_dimensional:
            raise ValueError("volume6 needs a full-dimensional 3D polytope")
        inner = self.lattice_points[0]
        total = 0
        for normal, offset in self.facets:
            on = [v for v in self.vertices if dot(normal, v) == offset]
            m = complete_to_unimodular(normal)
            flat = {m.apply(v)[:2]: v for v in on}
            ring = _hull_2d(list(flat))
            height = offset - dot(normal, inner)
            total += height * twice_area_2d(ring)
        return total

    def translate(self, t):
        return LatticePolytope([add(v, t) for v in self.vertices])

    def transform(self, umap):
        return LatticePolytope([umap.apply(v) for v in self.vertices])

    def dilate(self, k):
        return LatticePolytope([tuple(k * c for c in v) for v in self.vertices])

    def __add__(self, other):
        return minkowski_sum(self, other)

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolytope({list(self.vertices)!r})"


def hull(points):
    """Convex hull of a nonempty list of 2D or 3D integer points."""
    return LatticePolytope(points)


def lattice_points(P):
    return P.point_set


def contains(P, x):
    return P.contains(x)


def interior_points(P):
    return P.interior_points()


def minkowski_sum(P, Q):
    if P.dim != Q.dim:
        raise ValueError("Minkowski sum of polytopes of different dimension")
    return LatticePolytope([add(p, q) for p in P.vertices for q in Q.vertices])


def minkowski_sum_all(polys):
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polytope")
    total = polys[0]
    for P in polys[1:]:
        total = minkowski_sum(total, P)
    return total


def erode(S, v):
    """``{x in S : x + v in S}``: lattice points of the region shrunk by ``[0, v]``."""
    v = tuple(v)
    if not any(v):
        raise ValueError("cannot erode by the zero vector")
    S = frozenset(S)
    return frozenset(x for x in S if add(x, v) in S)


def support(segments, normal):
    """Support value of the zonotope ``sum n_i [0, v_i]`` in direction ``normal``."""
    return sum(n * max(dot(normal, v), 0) for n, v in segments)


def zonotope_vertices(anchor, segments):
    """All corner points ``anchor + sum eps_i n_i v_i`` (with repeats removed)."""
    corners = {tuple(anchor)}
    for n, v in segments:
        if n:
            step = tuple(n * c for c in v)
            corners |= {add(c, step) for c in corners}
    return sorted(corners)


def plane_reduce(points):
    """Map coplanar 3D points into the plane ``z = 0`` by a unimodular map.

    Returns ``(points_2d, umap)`` where ``umap`` sends each input point ``p``
    to ``points_2d[i] + (0,)``.
    """
    pts = _as_points(points)
    if len(pts[0]) != 3:
        raise DegenerateInputError("plane_reduce needs 3D points")
    p0 = pts[0]
    normal = None
    for q, r in combinations(pts[1:], 2):
        c = cross(sub(q, p0), sub(r, p0))
        if any(c):
            normal = canonical_direction(c)
            break
    if normal is None:
        raise DegenerateInputError("points are collinear")
    level = dot(normal, p0)
    if any(dot(normal, p) != level for p in pts):
        raise DegenerateInputError("points are not coplanar")
    m = complete_to_unimodular(normal)
    umap = UnimodularMap(m.matrix, (0, 0, -level))
    flat = [umap.apply(tuple(int(c) for c in p))[:2] for p in points]
    return flat, umap


def translation_key(points):
    """Sorted points translated so their lexicographic minimum is the origin."""
    pts = sorted(points)
    if not pts:
        return ()
    p0 = pts[0]
    return tuple(sub(p, p0) for p in pts)


def box_points(lo, hi, dim):
    return list(product(range(lo, hi + 1), repeat=dim))
