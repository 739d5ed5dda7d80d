"""Torus fixed points of M(r, n) and Bialynicki-Birula cell dimensions.

Fixed points of the full torus are r-tuples of Young diagrams.  For a
one-parameter subtorus (t^alpha, t^beta, t^w_1, ..., t^w_r) the fixed locus is
compact when max(w) - min(w) < alpha + beta, and a generic refinement of the
subtorus cuts it into affine cells, one per fixed point.  The cell dimension is
the number of tangent weights that pair to zero with the subtorus and are
positive for the refinement.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Callable, NamedTuple, Optional, Sequence

from .partitions import Partition, arm_leg, compositions, enumerate_partitions
from .qseries import BivariateSeries, TruncatedSeries


class NonCompactError(ValueError):
    """Raised when a cocharacter is outside the compactness criterion."""


@dataclass(frozen=True)
class Cocharacter:
    alpha: int
    beta: int
    w: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        if self.alpha < 1 or self.beta < 1:
            raise ValueError("alpha and beta must be positive")
        if gcd(self.alpha, self.beta) != 1:
            raise ValueError(f"alpha={self.alpha} and beta={self.beta} are not coprime")
        if not self.w:
            raise ValueError("weight vector must have at least one entry")

    @property
    def rank(self) -> int:
        return len(self.w)

    @classmethod
    def homogeneous(cls, r: int, m: int) -> "Cocharacter":
        """(1, 1, ow(m)) with ``ow(m) = (1,)*m + (0,)*(r-m)``."""
        return cls(1, 1, ow(r, m))


def ow(r: int, m: int) -> tuple[int, ...]:
    if not 0 <= m <= r:
        raise ValueError(f"need 0 <= m <= r, got m={m}, r={r}")
    return (1,) * m + (0,) * (r - m)


@dataclass(frozen=True)
class FixedPoint:
    diagrams: tuple[Partition, ...]

    def __post_init__(self):
        object.__setattr__(self, "diagrams", tuple(Partition(d) for d in self.diagrams))
        if not self.diagrams:
            raise ValueError("a fixed point needs r >= 1 diagrams")

    @property
    def r(self) -> int:
        return len(self.diagrams)

    @property
    def n(self) -> int:
        return sum(d.size for d in self.diagrams)


class TangentWeight(NamedTuple):
    """The character e_j e_i^{-1} t1^k1 t2^k2, framing indices 1-based."""

    i: int
    j: int
    k1: int
    k2: int


def tangent_weights(fp: FixedPoint) -> list[TangentWeight]:
    """Weights of the tangent space at ``fp``, with multiplicity (2rn of them)."""
    D = fp.diagrams
    out = []
    for i, Di in enumerate(D, start=1):
        for j, Dj in enumerate(D, start=1):
            for s in Di.boxes():
                a_i, _ = arm_leg(Di, s)
                _, l_j = arm_leg(Dj, s)
                out.append(TangentWeight(i, j, -l_j, a_i + 1))
            for s in Dj.boxes():
                a_j, _ = arm_leg(Dj, s)
                _, l_i = arm_leg(Di, s)
                out.append(TangentWeight(i, j, l_i + 1, -a_j))
    return out


def weight_pairing(wt: TangentWeight, c: Cocharacter) -> int:
    r = c.rank
    if not (1 <= wt.i <= r and 1 <= wt.j <= r):
        raise ValueError(f"weight indices ({wt.i}, {wt.j}) out of range for rank {r}")
    return c.w[wt.j - 1] - c.w[wt.i - 1] + c.alpha * wt.k1 + c.beta * wt.k2


def refinement_sign(wt: TangentWeight) -> int:
    """Sign under v_1 >> ... >> v_r >> gamma >> 1 acting as (t, t^gamma, t^v)."""
    if wt.j < wt.i:
        return 1
    if wt.j > wt.i:
        return -1
    if wt.k2:
        return 1 if wt.k2 > 0 else -1
    return 1 if wt.k1 > 0 else -1


def cell_dimension(fp: FixedPoint, c: Cocharacter) -> int:
    if fp.r != c.rank:
        raise ValueError(f"fixed point has rank {fp.r}, cocharacter has rank {c.rank}")
    return _cell_dimension(fp.diagrams, c.alpha, c.beta, c.w)


def _cell_dimension(D: Sequence[Partition], alpha: int, beta: int, w: Sequence[int]) -> int:
    # Same count as tangent_weights + weight_pairing + refinement_sign, without
    # materializing the weights.
    cols = [list(d) for d in D]
    rows = [[d.row(y) for y in range(d.largest_part)] for d in D]

    def col(x, i):
        return cols[x][i] if i < len(cols[x]) else 0

    def row(x, j):
        return rows[x][j] if j < len(rows[x]) else 0

    dim = 0
    r = len(D)
    for x in range(r):
        for y in range(r):
            shift = w[y] - w[x]
            # positivity: y < x always positive, y > x never, y == x by sign of k2
            if y > x:
                continue
            same = x == y
            for i, ci in enumerate(cols[x]):
                for j in range(ci):
                    k1 = -(row(y, j) - i - 1)
                    k2 = ci - j
                    if shift + alpha * k1 + beta * k2 == 0:
                        dim += 1
            for i, ci in enumerate(cols[y]):
                for j in range(ci):
                    k1 = row(x, j) - i
                    k2 = -(ci - j - 1)
                    if shift + alpha * k1 + beta * k2 == 0:
                        if not same or k2 > 0 or (k2 == 0 and k1 > 0):
                            dim += 1
    return dim


def is_compact_regime(c: Cocharacter) -> bool:
    return max(c.w) - min(c.w) < c.alpha + c.beta


def require_compact(c: Cocharacter) -> None:
    if not is_compact_regime(c):
        spread = max(c.w) - min(c.w)
        raise NonCompactError(
            f"non-compact regime: max(w) - min(w) = {spread} is not < alpha + beta = {c.alpha + c.beta}"
        )


@lru_cache(maxsize=None)
def _fixed_points(r: int, n: int) -> tuple[tuple[Partition, ...], ...]:
    out = []
    for sizes in compositions(n, r):
        pools = [enumerate_partitions(k) for k in sizes]
        out.extend(product(*pools))
    return tuple(out)


def fixed_points(r: int, n: int) -> list[FixedPoint]:
    """All torus fixed points of M(r, n): r-tuples of diagrams of total size n."""
    if r < 1 or n < 0:
        raise ValueError("need r >= 1 and n >= 0")
    return [FixedPoint(D) for D in _fixed_points(r, n)]


def count_fixed_points(r: int, n: int) -> int:
    """Coefficient of q^n in 1/(q)_inf^r."""
    c = [0] * (n + 1)
    c[0] = 1
    for _ in range(r):
        for k in range(1, n + 1):
            for m in range(k, n + 1):
                c[m] += c[m - k]
    return c[n]


def _dims_worker(args):
    r, alpha, beta, w, n = args
    return sorted(_cell_dimension(D, alpha, beta, w) for D in _fixed_points(r, n))


def dimension_multiset(c: Cocharacter, n: int) -> list[int]:
    """Sorted cell dimensions over all fixed points of size ``n``."""
    return _dims_worker((c.rank, c.alpha, c.beta, c.w, n))


DimensionSource = Callable[[Cocharacter, int], list]


def dimension_table(
    c: Cocharacter,
    max_n: int,
    source: Optional[DimensionSource] = None,
    jobs: int = 1,
) -> list[list[int]]:
    """Per-n sorted dimension multisets for n = 0..max_n.

    ``source`` (e.g. a cache lookup) replaces the direct computation; ``jobs > 1``
    fans the sizes out over worker processes.
    """
    require_compact(c)
    if source is not None:
        return [source(c, n) for n in range(max_n + 1)]
    if jobs > 1 and max_n > 4:
        args = [(c.rank, c.alpha, c.beta, c.w, n) for n in range(max_n + 1)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_dims_worker, args))
    return [dimension_multiset(c, n) for n in range(max_n + 1)]


def h0_series(r: int, c: Cocharacter, order: int, source: Optional[DimensionSource] = None) -> TruncatedSeries:
    """Generating series of the number of components of the fixed locus."""
    if c.rank != r:
        raise ValueError(f"cocharacter has rank {c.rank}, expected {r}")
    table = dimension_table(c, order, source)
    return TruncatedSeries(order, tuple(dims.count(0) for dims in table))


def poincare_series(r: int, c: Cocharacter, t_order: int, source: Optional[DimensionSource] = None) -> BivariateSeries:
    """sum_n P_q(fixed locus of M(r, n)) t^n, q counting cell dimension."""
    if c.rank != r:
        raise ValueError(f"cocharacter has rank {c.rank}, expected {r}")
    table = dimension_table(c, t_order, source)
    polys = []
    for dims in table:
        p = [0] * (max(dims) + 1 if dims else 0)
        for d in dims:
            p[d] += 1
        polys.append(p)
    return BivariateSeries.from_polys(polys, t_order)
