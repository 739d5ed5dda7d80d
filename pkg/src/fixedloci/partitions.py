"""Partitions, Young diagrams and the arm/leg statistics used by the census.

A partition ``lam`` is drawn as the box set ``{(i, j) : 0 <= i < len(lam),
0 <= j < lam[i]}``, i.e. part ``lam[i]`` is the length of column ``i``.  With
this convention ``c_0(D) = lam[0]`` and ``r_0(D) = len(lam)``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, NamedTuple, Optional, Sequence


class Partition(tuple):
    """Weakly decreasing tuple of positive integers (immutable, hashable)."""

    __slots__ = ()

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        for k, p in enumerate(parts):
            if p < 1:
                raise ValueError(f"partition parts must be positive: {parts}")
            if k and parts[k - 1] < p:
                raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    @property
    def largest_part(self) -> int:
        return self[0] if self else 0

    @property
    def is_distinct(self) -> bool:
        return all(self[k] > self[k + 1] for k in range(len(self) - 1))

    def column(self, i: int) -> int:
        """Number of boxes in column ``i`` (zero past the last part)."""
        return self[i] if 0 <= i < len(self) else 0

    def row(self, j: int) -> int:
        """Number of boxes in row ``j``: how many parts exceed ``j``."""
        if j < 0:
            return 0
        count = 0
        for p in self:
            if p <= j:
                break
            count += 1
        return count

    def boxes(self) -> Iterator["BoxCoord"]:
        for i, p in enumerate(self):
            for j in range(p):
                yield BoxCoord(i, j)

    def has_box(self, s: Sequence[int]) -> bool:
        i, j = s
        return 0 <= i < len(self) and 0 <= j < self[i]

    def conjugate(self) -> "Partition":
        return Partition(self.row(j) for j in range(self.largest_part))


class BoxCoord(NamedTuple):
    i: int
    j: int


def arm_leg(host: Partition, s: Sequence[int]) -> tuple[int, int]:
    """Return ``(a, l)`` with ``a = c_i - j - 1`` and ``l = r_j - i - 1``.

    ``s`` may lie outside ``host``; then at least one value is negative.

    >>> arm_leg(Partition((2, 1)), (0, 0))
    (1, 1)
    """
    i, j = s
    if i < 0 or j < 0:
        raise ValueError(f"box coordinates must be nonnegative: {s}")
    return host.column(i) - j - 1, host.row(j) - i - 1


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int, distinct: bool) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for head in range(min(n, max_part), 0, -1):
        tail_max = head - 1 if distinct else head
        for tail in _partitions(n - head, tail_max, distinct):
            out.append((head,) + tail)
    return tuple(out)


def enumerate_partitions(
    n: int,
    distinct: bool = False,
    max_part: Optional[int] = None,
    max_length: Optional[int] = None,
) -> list[Partition]:
    """All partitions of ``n`` meeting the constraints, in lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    bound = n if max_part is None else max(0, min(n, max_part))
    found = [
        Partition(p)
        for p in _partitions(n, bound, distinct)
        if max_length is None or len(p) <= max_length
    ]
    return sorted(found)


def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``n`` into ``k`` nonnegative parts, lexicographic."""
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def in_s_set(entries: Sequence[Partition], m: int) -> bool:
    """Membership in S(r, m): distinct parts and the interlacing bound."""
    r = len(entries)
    if not all(Partition(e).is_distinct for e in entries):
        return False
    for i in range(1, r):
        lam, nxt = entries[i - 1], entries[i]
        bound = len(nxt) + (1 if i == m else 0)
        if (lam[0] if lam else 0) > bound:
            return False
    return True


def enumerate_s_tuples(r: int, m: int, n: int) -> list[tuple[Partition, ...]]:
    """All r-tuples of distinct-part partitions in S(r, m) with total size ``n``."""
    if r < 1:
        raise ValueError("rank r must be at least 1")
    if not 0 <= m <= r:
        raise ValueError(f"marker m must satisfy 0 <= m <= r, got m={m}, r={r}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    for sizes in compositions(n, r):
        pools = [enumerate_partitions(k, distinct=True) for k in sizes]
        for entries in product(*pools):
            if in_s_set(entries, m):
                out.append(tuple(entries))
    return sorted(out)


def count_s_tuples(r: int, m: int, n: int) -> int:
    return len(enumerate_s_tuples(r, m, n))
