"""Permutation algebra for the symmetric group S_t.

Conventions used throughout the package:

- a permutation is stored by its image tuple, ``sigma(i) = images[i]``;
- ``compose(a, b)`` applies ``b`` first, i.e. ``compose(a, b)(i) = a(b(i))``;
- a cycle ``(c0, c1, ..., ck)`` maps ``c0 -> c1 -> ... -> ck -> c0``;
- ``size(sigma)`` is the minimal number of transpositions in a factorization
  of ``sigma``, equal to ``t`` minus the number of orbits (fixed points count
  as orbits).

The sub-permutation partial order ``pi <= sigma`` is additivity of the size
metric, ``size(inv(pi) * sigma) == size(sigma) - size(pi)``.  Below a fixed
cycle this order is the lattice of non-crossing partitions of the cycle's
index sequence, which is what ``enumerate_subpermutations`` exploits.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb

DEFAULT_MAX_ORDER = 6
MAX_ORDER_ENV = "CHANNEL_MOMENTS_MAX_T"


def max_order() -> int:
    """Largest allowed copy count t (720 permutations by default)."""
    return int(os.environ.get(MAX_ORDER_ENV, DEFAULT_MAX_ORDER))


class OrderMismatchError(ValueError):
    """Raised when combining permutations of different order t."""


class Permutation:
    """An element of S_t, with eagerly computed cycle data.

    Instances are immutable and hashable; all derived quantities (cycles,
    size, support) are computed once at construction.
    """

    __slots__ = ("images", "t", "cycles", "size", "support", "_hash")

    def __init__(self, images):
        images = tuple(images)
        t = len(images)
        if sorted(images) != list(range(t)):
            raise ValueError(f"not a bijection on [{t}]: {images!r}")
        self.images = images
        self.t = t

        seen = [False] * t
        cycles = []
        for start in range(t):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = images[j]
            if len(cyc) > 1:
                cycles.append(tuple(cyc))
        self.cycles = tuple(sorted(cycles))
        self.size = sum(len(c) - 1 for c in cycles)
        self.support = frozenset(i for i in range(t) if images[i] != i)
        self._hash = hash(images)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.cycles:
            return f"Perm(e, t={self.t})"
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)
        return f"Perm({body}, t={self.t})"

    def cycle_type(self):
        """Partition of t listing all orbit lengths, fixed points included."""
        lens = [len(c) for c in self.cycles]
        lens += [1] * (self.t - sum(lens))
        return tuple(sorted(lens, reverse=True))

    def cycle_label(self) -> str:
        """Compact text form, e.g. ``e`` or ``(0 1)(2 3 4)``."""
        if not self.cycles:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)


def identity(t: int) -> Permutation:
    return Permutation(range(t))


def transposition(t: int, i: int, j: int) -> Permutation:
    images = list(range(t))
    images[i], images[j] = j, i
    return Permutation(images)


def from_cycles(t: int, cycles) -> Permutation:
    """Build a permutation from disjoint cycles, each mapping c[k] -> c[k+1]."""
    images = list(range(t))
    for cyc in cycles:
        for k, c in enumerate(cyc):
            images[c] = cyc[(k + 1) % len(cyc)]
    return Permutation(images)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Product a∘b: apply b, then a."""
    if a.t != b.t:
        raise OrderMismatchError(f"order mismatch: {a.t} != {b.t}")
    return Permutation(tuple(a.images[b.images[i]] for i in range(a.t)))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * a.t
    for i, x in enumerate(a.images):
        inv[x] = i
    return Permutation(inv)


def size(sigma: Permutation) -> int:
    """Minimal transposition count: t minus the number of orbits."""
    return sigma.size


def support(sigma: Permutation) -> frozenset:
    return sigma.support


def relative_size(pi: Permutation, sigma: Permutation) -> int:
    """size(inv(pi) * sigma), the transposition distance from pi to sigma."""
    return compose(inverse(pi), sigma).size


def is_subpermutation(pi: Permutation, sigma: Permutation) -> bool:
    """True iff pi lies below sigma in the sub-permutation order."""
    if pi.t != sigma.t:
        raise OrderMismatchError(f"order mismatch: {pi.t} != {sigma.t}")
    return relative_size(pi, sigma) == sigma.size - pi.size


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def _noncrossing_partitions(items):
    """All non-crossing partitions of an ordered sequence, as block lists.

    Recursion on the block containing the first element: chosen block members
    split the remainder into independent gaps, which keeps every produced
    partition non-crossing by construction.
    """
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    m = len(rest)
    for k in range(m + 1):
        for picks in combinations(range(m), k):
            block = [first] + [rest[i] for i in picks]
            bounds = list(picks) + [m]
            gaps = []
            lo = 0
            for b in bounds:
                gaps.append(rest[lo:b])
                lo = b + 1
            for sub in product(*[list(_noncrossing_partitions(g)) for g in gaps]):
                out = [block]
                for part in sub:
                    out.extend(part)
                yield out


def enumerate_subpermutations(sigma: Permutation) -> list:
    """All pi with pi below sigma, built per cycle from non-crossing partitions.

    A block {i1 < i2 < ...} of positions inside a cycle (c0, c1, ...) becomes
    the sub-cycle (c_i1, c_i2, ...) in the same orientation.  The count is the
    product of Catalan numbers of the cycle lengths.
    """
    t = sigma.t
    per_cycle = []
    for cyc in sigma.cycles:
        opts = []
        for part in _noncrossing_partitions(range(len(cyc))):
            blocks = [tuple(cyc[i] for i in block) for block in part if len(block) > 1]
            opts.append(blocks)
        per_cycle.append(opts)
    out = []
    for combo in product(*per_cycle):
        blocks = [b for blocks in combo for b in blocks]
        out.append(from_cycles(t, blocks))
    out.sort(key=canonical_key)
    return out


def subpermutation_count(sigma: Permutation) -> int:
    """Catalan-product count of the lattice below sigma (no enumeration)."""
    n = 1
    for cyc in sigma.cycles:
        n *= catalan(len(cyc))
    return n


def mobius(sigma: Permutation) -> int:
    """Product over cycles of (-1)^(len-1) * catalan(len-1)."""
    m = 1
    for cyc in sigma.cycles:
        k = len(cyc) - 1
        m *= (-1) ** k * catalan(k)
    return m


def character(sigma: Permutation, d: int, pi: Permutation | None = None):
    """Normalized overlap d^(-size); two-argument form uses inv(sigma)*pi."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    k = sigma.size if pi is None else relative_size(sigma, pi)
    return Fraction(1, d**k)


def canonical_key(sigma: Permutation):
    """Sort key grouping permutations by support, smallest supports first."""
    mask = 0
    for i in sigma.support:
        mask |= 1 << i
    return (len(sigma.support), mask, sigma.images)


@lru_cache(maxsize=None)
def _symmetric_group_cached(t: int) -> tuple:
    from itertools import permutations as _perms

    elems = [Permutation(p) for p in _perms(range(t))]
    elems.sort(key=canonical_key)
    return tuple(elems)


def symmetric_group(t: int) -> tuple:
    """All of S_t in canonical block order (identity first)."""
    if t < 1:
        raise ValueError("order must be >= 1")
    if t > max_order():
        raise ValueError(
            f"t={t} exceeds the cap {max_order()} "
            f"(set {MAX_ORDER_ENV} to raise it)"
        )
    return _symmetric_group_cached(t)


@lru_cache(maxsize=None)
def group_index(t: int) -> dict:
    """images tuple -> position in the canonical order."""
    return {p.images: i for i, p in enumerate(symmetric_group(t))}


@lru_cache(maxsize=None)
def conjugacy_classes(t: int) -> tuple:
    """Cycle types in sorted order, paired with member counts."""
    counts: dict = {}
    for p in symmetric_group(t):
        key = p.cycle_type()
        counts[key] = counts.get(key, 0) + 1
    return tuple(sorted(counts.items()))


def derangement_count(l: int) -> int:
    """Number of fixed-point-free permutations of l elements."""
    from math import factorial

    return sum((-1) ** k * factorial(l) // factorial(k) for k in range(l + 1))
