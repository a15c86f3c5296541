"""Seeded random instances that reproduce across platforms.

The generator is a 64-bit multiplicative congruential generator::

    state_0   = (2 * seed + 1) mod 2**64          (always odd)
    state_k+1 = state_k * 0xD1342543DE82EF95 mod 2**64
    output    = state_k+1 >> 32                   (top 32 bits)

and ``randrange(n)`` maps an output ``x`` to ``(x * n) >> 32``.  The
multiplier is a full-period odd multiplier from Steele and Vigna's tables.
Only the top bits are used since the low bits of an MCG are weak.  The
mapping has a bias of at most ``n / 2**32``, which is irrelevant here, and
it keeps every step a handful of integer operations that any language can
repeat exactly.
"""

from .polytope import LatticePolytope

MULTIPLIER = 0xD1342543DE82EF95
MASK = (1 << 64) - 1


class Mcg64:
    def __init__(self, seed=0):
        self.seed = int(seed)
        self.state = (2 * self.seed + 1) & MASK

    def next32(self):
        self.state = (self.state * MULTIPLIER) & MASK
        return self.state >> 32

    def randrange(self, n):
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        return (self.next32() * n) >> 32

    def randint(self, lo, hi):
        """Uniform integer in the closed range [lo, hi]."""
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def sample(self, seq, k):
        """``k`` distinct items, by a partial Fisher-Yates shuffle."""
        pool = list(seq)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.randrange(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


def random_points(rng, dim, box, lo=4, hi=10):
    k = rng.randint(lo, hi)
    return [tuple(rng.randint(0, box) for _ in range(dim)) for _ in range(k)]


def random_polytope(rng, dim, box, lo=4, hi=10):
    """Hull of ``lo..hi`` uniform points of ``[0, box]^dim``."""
    if box < 1:
        raise ValueError("box must be at least 1")
    return LatticePolytope(random_points(rng, dim, box, lo, hi))


def random_polytopes(seed, count, dim, box, lo=4, hi=10):
    rng = Mcg64(seed)
    return [random_polytope(rng, dim, box, lo, hi) for _ in range(count)]
