"""Bit-coded multi-indices and permutation sign combinatorics.

Index ``i`` (1-based) is stored in bit ``i - 1`` of an int.  Ordered index
sequences, possibly with repeats, are plain tuples of ints.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

# Largest ambient dimension accepted anywhere in the package.  Adjustable at
# runtime, e.g. ``multiindex.DIM_CAP = 20``.
DIM_CAP = 16


def check_dim(n: int) -> int:
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"dimension must be a non-negative int, got {n!r}")
    if n > DIM_CAP:
        raise ValueError(f"dimension {n} exceeds cap {DIM_CAP}")
    return n


# ---------------------------------------------------------------------------
# raw bitmask helpers

def popcount(b: int) -> int:
    return bin(b).count("1")


def bits_to_indices(b: int) -> tuple[int, ...]:
    out = []
    i = 1
    while b:
        if b & 1:
            out.append(i)
        b >>= 1
        i += 1
    return tuple(out)


def indices_to_bits(seq: Iterable[int]) -> int:
    b = 0
    for i in seq:
        if i < 1:
            raise ValueError(f"indices are 1-based, got {i}")
        b |= 1 << (i - 1)
    return b


@lru_cache(maxsize=1 << 18)
def pairs_bits(a: int, b: int) -> int:
    """Number of pairs (x, y), x in a, y in b, with x > y.

    Shifting ``a`` down by k lines up every x with y = x - k.
    """
    count = 0
    a >>= 1
    while a:
        count += popcount(a & b)
        a >>= 1
    return count


def concat_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation of increasing a and b; 0 on overlap."""
    if a & b:
        return 0
    return -1 if pairs_bits(a, b) & 1 else 1


def norm_bits(b: int) -> int:
    return sum(bits_to_indices(b))


def subsets_of_grade(n: int, p: int) -> Iterator[int]:
    """Bitmasks of grade p in dimension n, in index-lexicographic order."""
    for combo in combinations(range(n), p):
        yield sum(1 << c for c in combo)


def all_bits(n: int) -> list[int]:
    """All 2**n bitmasks, ordered by grade then lexicographically."""
    return [b for p in range(n + 1) for b in subsets_of_grade(n, p)]


def lex_key(b: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: grade first, then the increasing index tuple."""
    return (popcount(b), bits_to_indices(b))


# ---------------------------------------------------------------------------
# sequences

def pairs(r: Sequence[int], s: Sequence[int]) -> int:
    """Count pairs (a, b) with a in r, b in s and a > b, with multiplicity."""
    return sum(1 for a in r for b in s if a > b)


def epsilon(r: Sequence[int]) -> int:
    """Sign of the permutation sorting r; 0 when r repeats an index."""
    if len(set(r)) != len(r):
        return 0
    # inversions of r equal pairs(r, r) restricted to a before b
    inv = 0
    for x in range(len(r)):
        for y in range(x + 1, len(r)):
            if r[x] > r[y]:
                inv += 1
    return -1 if inv & 1 else 1


def zeta(k: int) -> int:
    return -1 if (k * (k + 1) // 2) & 1 else 1


def xi(r: Sequence[int] | "MultiIndex") -> int:
    s = r.norm() if isinstance(r, MultiIndex) else sum(r)
    return -1 if s & 1 else 1


# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=False)
class MultiIndex:
    """Increasing multi-index, stored as a bitset in ambient dimension n."""

    bits: int
    n: int

    def __post_init__(self):
        check_dim(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:b} out of range for n={self.n}")

    @classmethod
    def of(cls, indices: Iterable[int], n: int) -> "MultiIndex":
        idx = tuple(indices)
        if len(set(idx)) != len(idx):
            raise ValueError(f"repeated index in {idx}")
        if any(i > n for i in idx):
            raise ValueError(f"index out of range for n={n}: {idx}")
        return cls(indices_to_bits(idx), n)

    @classmethod
    def empty(cls, n: int) -> "MultiIndex":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "MultiIndex":
        return cls((1 << n) - 1, n)

    def indices(self) -> tuple[int, ...]:
        return bits_to_indices(self.bits)

    def grade(self) -> int:
        return popcount(self.bits)

    def norm(self) -> int:
        return norm_bits(self.bits)

    def complement(self) -> "MultiIndex":
        return MultiIndex(((1 << self.n) - 1) & ~self.bits, self.n)

    def _same(self, other: "MultiIndex"):
        if self.n != other.n:
            raise ValueError(f"ambient mismatch: {self.n} vs {other.n}")

    def __or__(self, other):
        self._same(other)
        return MultiIndex(self.bits | other.bits, self.n)

    def __and__(self, other):
        self._same(other)
        return MultiIndex(self.bits & other.bits, self.n)

    def __sub__(self, other):
        self._same(other)
        return MultiIndex(self.bits & ~other.bits, self.n)

    union = __or__
    intersection = __and__
    difference = __sub__

    def issubset(self, other: "MultiIndex") -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "MultiIndex") -> bool:
        return self.bits & other.bits == 0

    def __len__(self):
        return self.grade()

    def __iter__(self):
        return iter(self.indices())

    def __str__(self):
        idx = self.indices()
        if not idx:
            return "()"
        if self.n <= 9:
            return "".join(map(str, idx))
        return "{" + ",".join(map(str, idx)) + "}"


def epsilon_concat(i: MultiIndex | int, j: MultiIndex | int) -> int:
    """(-1)**pairs(i, j) for disjoint increasing i, j; 0 if they overlap."""
    a = i.bits if isinstance(i, MultiIndex) else i
    b = j.bits if isinstance(j, MultiIndex) else j
    return concat_sign(a, b)


def complement(i: MultiIndex) -> MultiIndex:
    return i.complement()
