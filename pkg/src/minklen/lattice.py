"""Exact integer linear algebra on small lattice vectors.

Everything here works on plain tuples of Python ints, so there is no
overflow to worry about and values hash and compare directly.
"""

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd


def _check_vector(v):
    if len(v) not in (2, 3):
        raise ValueError(f"expected a 2D or 3D integer vector, got {v!r}")
    return tuple(int(c) for c in v)


def content(v):
    """gcd of the absolute values of the coordinates (0 for the zero vector)."""
    return reduce(gcd, (abs(c) for c in v), 0)


def is_primitive(v):
    return content(v) == 1


def primitive_part(v):
    """Divide out the content; the zero vector raises."""
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(c // g for c in v)


def canonical_direction(v):
    """Primitive part of ``v`` signed so the first nonzero entry is positive."""
    p = primitive_part(v)
    for c in p:
        if c:
            return p if c > 0 else tuple(-x for x in p)
    return p


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(k, v):
    return tuple(k * a for a in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def det3(u, v, w):
    return dot(u, cross(v, w))


def parallelogram_area(v1, v2):
    """Normalised area ``|det(v1, v2)|`` of the parallelogram on two 2D vectors."""
    if len(v1) != 2 or len(v2) != 2:
        raise ValueError("parallelogram_area needs 2D vectors")
    return abs(det2(v1, v2))


def parallelepiped_volume(v1, v2, v3):
    """``|det(v1, v2, v3)|``, the lattice volume of the spanned parallelepiped."""
    if not (len(v1) == len(v2) == len(v3) == 3):
        raise ValueError("parallelepiped_volume needs 3D vectors")
    return abs(det3(v1, v2, v3))


def rank(vectors):
    """Rank of a list of integer vectors (fraction-free Gaussian elimination)."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pr = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [pr[col] * x - f * y for x, y in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


# -- mod 3 projective classes -------------------------------------------------


def _canon_mod3(entries):
    red = [((c + 1) % 3) - 1 for c in entries]
    for c in red:
        if c:
            return tuple(red) if c > 0 else tuple(-x for x in red)
    raise ValueError("vector is divisible by 3, it has no mod-3 class")


@dataclass(frozen=True, order=True)
class Mod3Class:
    """A direction reduced mod 3 and identified with its negative.

    ``rep`` has entries in {-1, 0, 1} and its first nonzero entry is +1.
    """

    rep: tuple

    def __post_init__(self):
        if _canon_mod3(self.rep) != self.rep:
            raise ValueError(f"{self.rep!r} is not a canonical mod-3 representative")

    def __add__(self, other):
        return Mod3Class(_canon_mod3(add(self.rep, other.rep)))

    def __sub__(self, other):
        return Mod3Class(_canon_mod3(sub(self.rep, other.rep)))

    def __repr__(self):
        return f"Mod3Class{self.rep}"


def mod3_class(v):
    v = _check_vector(v)
    return Mod3Class(_canon_mod3(v))


def all_mod3_classes(dim):
    """All classes of Z3 P^(dim-1): 4 in dimension 2, 13 in dimension 3."""
    seen = set()
    for v in product((-1, 0, 1), repeat=dim):
        if any(v):
            seen.add(Mod3Class(_canon_mod3(v)))
    return sorted(seen)


def class_combinations(a, b):
    """The projective line through two distinct classes: {a, b, a+b, a-b}."""
    if a == b:
        raise ValueError("class_combinations needs two distinct classes")
    return frozenset((a, b, a + b, a - b))


def classes_independent(a, b, c):
    return a != b and c not in class_combinations(a, b)


# -- unimodular maps ----------------------------------------------------------


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(m1, m2):
    return [
        [sum(m1[i][k] * m2[k][j] for k in range(len(m2))) for j in range(len(m2[0]))]
        for i in range(len(m1))
    ]


def _det(m):
    if len(m) == 2:
        return det2(m[0], m[1])
    return det3(m[0], m[1], m[2])


def _inverse_unimodular(m):
    """Integer inverse of a matrix with determinant +-1 (via the adjugate)."""
    n = len(m)
    d = _det(m)
    if abs(d) != 1:
        raise ValueError(f"matrix {m!r} is not unimodular (det {d})")
    if n == 2:
        (a, b), (c, e) = m
        adj = [[e, -b], [-c, a]]
    else:
        adj = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                minor = [
                    [m[r][c] for c in range(3) if c != j] for r in range(3) if r != i
                ]
                adj[j][i] = (-1) ** (i + j) * det2(minor[0], minor[1])
    return [[d * x for x in row] for row in adj]


@dataclass(frozen=True)
class UnimodularMap:
    """Affine unimodular map ``x -> matrix @ x + shift``."""

    matrix: tuple
    shift: tuple

    def __post_init__(self):
        m = [list(row) for row in self.matrix]
        n = len(m)
        if n not in (2, 3) or any(len(row) != n for row in m):
            raise ValueError("matrix must be square of size 2 or 3")
        if len(self.shift) != n:
            raise ValueError("shift has the wrong dimension")
        if abs(_det(m)) != 1:
            raise ValueError(f"matrix {self.matrix!r} is not unimodular")

    @classmethod
    def linear(cls, matrix):
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        return cls(matrix, (0,) * len(matrix))

    @classmethod
    def translation(cls, t):
        t = tuple(int(x) for x in t)
        return cls(tuple(map(tuple, _identity(len(t)))), t)

    @property
    def dim(self):
        return len(self.matrix)

    def apply(self, x):
        return tuple(dot(row, x) + s for row, s in zip(self.matrix, self.shift))

    def apply_linear(self, v):
        return tuple(dot(row, v) for row in self.matrix)

    def __call__(self, x):
        return self.apply(x)

    def compose(self, other):
        """``self`` after ``other``."""
        m = _matmul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        shift = add(self.apply_linear(other.shift), self.shift)
        return UnimodularMap(tuple(map(tuple, m)), shift)

    def inverse(self):
        inv = _inverse_unimodular([list(r) for r in self.matrix])
        inv = tuple(map(tuple, inv))
        shift = tuple(-dot(row, self.shift) for row in inv)
        return UnimodularMap(inv, shift)


def complete_to_unimodular(u):
    """Return a unimodular map whose matrix has ``u`` as its last row.

    Column operations reduce the row vector ``u`` to a unit vector ``e_n``
    (``u @ V = e_n``); the inverse of ``V`` then has last row ``u``.
    """
    u = _check_vector(u)
    if not is_primitive(u):
        raise ValueError(f"{u!r} is not primitive")
    n = len(u)
    row = list(u)
    V = _identity(n)

    def col_op(dst, src, k):
        # column dst -= k * column src
        row[dst] -= k * row[src]
        for r in V:
            r[dst] -= k * r[src]

    def swap(i, j):
        row[i], row[j] = row[j], row[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    while sum(1 for c in row if c) > 1:
        nz = [i for i, c in enumerate(row) if c]
        piv = min(nz, key=lambda i: abs(row[i]))
        for i in nz:
            if i != piv:
                col_op(i, piv, row[i] // row[piv])
    j = next(i for i, c in enumerate(row) if c)
    if j != n - 1:
        swap(j, n - 1)
    if row[n - 1] == -1:
        row[n - 1] = 1
        for r in V:
            r[n - 1] = -r[n - 1]
    inv = _inverse_unimodular(V)
    return UnimodularMap.linear(inv)


def random_unimodular(rng, dim, steps=3, shift_range=3):
    """Random affine unimodular map built from signed permutations and unit shears.

    ``rng`` only needs a ``randrange(n)`` method.
    """
    perm = list(range(dim))
    for i in range(dim - 1, 0, -1):
        j = rng.randrange(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    m = [[0] * dim for _ in range(dim)]
    for i, p in enumerate(perm):
        m[i][p] = 1 if rng.randrange(2) else -1
    for _ in range(steps):
        i = rng.randrange(dim)
        j = rng.randrange(dim - 1)
        if j >= i:
            j += 1
        k = 1 if rng.randrange(2) else -1
        shear = _identity(dim)
        shear[i][j] = k
        m = _matmul(shear, m)
    shift = tuple(rng.randrange(2 * shift_range + 1) - shift_range for _ in range(dim))
    return UnimodularMap(tuple(map(tuple, m)), shift)
