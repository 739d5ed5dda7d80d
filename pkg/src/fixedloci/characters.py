"""Virasoro minimal-model characters and the s=2 quantum-continuous gl_inf labels."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .census import Cocharacter
from .qseries import (
    PLUS,
    RECIPROCAL,
    TruncatedSeries,
    inverse_q_poch,
    mul,
    residue_product,
)


@dataclass(frozen=True)
class MinimalModelLabel:
    p: int
    pp: int
    r: int
    s: int

    def __post_init__(self):
        if not 1 < self.p < self.pp:
            raise ValueError(f"need 1 < p < p', got p={self.p}, p'={self.pp}")
        if not 1 <= self.r < self.p:
            raise ValueError(f"need 1 <= r < p, got r={self.r}")
        if not 1 <= self.s < self.pp:
            raise ValueError(f"need 1 <= s < p', got s={self.s}")

    @property
    def coprime(self) -> bool:
        return gcd(self.p, self.pp) == 1

    def reflected(self) -> "MinimalModelLabel":
        return MinimalModelLabel(self.p, self.pp, self.p - self.r, self.pp - self.s)


def conformal_dimension(label: MinimalModelLabel) -> Fraction:
    p, pp, r, s = label.p, label.pp, label.r, label.s
    return Fraction((pp * r - p * s) ** 2 - (pp - p) ** 2, 4 * p * pp)


def _quadratic_terms(a: int, b: int, c: int, order: int):
    """Yield a*l^2 + b*l + c for all integers l where the value is <= order."""
    # a > 0; beyond |l| = L the value is at least a L^2 - |b| L + c
    L = 0
    while True:
        for l in ((0,) if L == 0 else (L, -L)):
            v = a * l * l + b * l + c
            if v <= order:
                yield v
        L += 1
        if a * L * L - abs(b) * L + c > order:
            return


def virasoro_numerator(label: MinimalModelLabel, order: int) -> TruncatedSeries:
    """sum over integer l of q^(l^2 p p' + l (p' r - p s)) - q^((l p + r)(l p' + s))."""
    p, pp, r, s = label.p, label.pp, label.r, label.s
    c = [0] * (order + 1)
    for e in _quadratic_terms(p * pp, pp * r - p * s, 0, order):
        c[e] += 1
    # (l p + r)(l p' + s) = p p' l^2 + (p s + p' r) l + r s
    for e in _quadratic_terms(p * pp, p * s + pp * r, r * s, order):
        c[e] -= 1
    return TruncatedSeries(order, tuple(c))


def virasoro_char(label: MinimalModelLabel, order: int) -> TruncatedSeries:
    """Normalized character: the theta-type numerator divided by (q)_inf.

    Labels with gcd(p, p') > 1 are accepted; the formula is still defined, though
    such labels are not minimal models (see ``MinimalModelLabel.coprime``).
    """
    return mul(virasoro_numerator(label, order), inverse_q_poch(None, order))


def euler_plus(order: int) -> TruncatedSeries:
    """(-q)_inf = prod (1 + q^n)."""
    return residue_product(1, {0}, PLUS, 1, order)


def gordon_product(modulus: int, i: int, order: int) -> TruncatedSeries:
    """prod over n >= 1, n not in {0, i, -i} mod ``modulus``, of 1/(1 - q^n)."""
    excluded = {0, i % modulus, (-i) % modulus}
    allowed = [x for x in range(modulus) if x not in excluded]
    return residue_product(modulus, allowed, RECIPROCAL, 1, order)


def theorem1_rhs(r: int, m: int, order: int) -> TruncatedSeries:
    """(-q)_inf times the product over n not congruent to 0, +-(m+1) mod r+2."""
    if r < 1 or not 0 <= m <= r:
        raise ValueError(f"need r >= 1 and 0 <= m <= r, got r={r}, m={m}")
    return mul(euler_plus(order), gordon_product(r + 2, m + 1, order))


def character_form(r: int, m: int, order: int) -> TruncatedSeries:
    """(-q)_inf times the normalized (2, r+2) character with label (1, m+1)."""
    return mul(euler_plus(order), virasoro_char(MinimalModelLabel(2, r + 2, 1, m + 1), order))


# ---------------------------------------------------------------------------
# quantum continuous gl_inf labels


@dataclass(frozen=True)
class FfjmmLabel:
    p: int
    pp: int
    abar: tuple[int, ...]
    bbar: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "abar", tuple(self.abar))
        object.__setattr__(self, "bbar", tuple(self.bbar))
        if len(self.abar) != len(self.bbar):
            raise ValueError("abar and bbar must have the same length s-1")
        if self.p < 0 or self.pp < 0 or self.p == self.pp:
            raise ValueError("need nonnegative p != p'")
        if any(x < 0 for x in self.abar + self.bbar):
            raise ValueError("label entries must be nonnegative")
        if not self.admissible:
            raise ValueError(f"inadmissible label {self}")

    @property
    def s(self) -> int:
        return len(self.abar) + 1

    @property
    def admissible(self) -> bool:
        return (
            self.p - 1 - sum(a + 1 for a in self.abar) >= 0
            and self.pp - 1 - sum(b + 1 for b in self.bbar) >= 0
        )


def _extend(cbar: Sequence[int], m: int) -> list[int]:
    s = len(cbar) + 1
    return list(cbar) + [m - s - sum(cbar)]


def tau(cbar: Sequence[int], m: int) -> tuple[int, ...]:
    return tuple(_extend(cbar, m)[1:])


def sigma(cbar: Sequence[int], m: int) -> tuple[int, ...]:
    c = _extend(cbar, m)
    s = len(c)
    return tuple(c[s - i] for i in range(1, s))


def tau_sigma(cbar: Sequence[int], m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tau(cbar, m), sigma(cbar, m)


def symmetry_orbit(label: FfjmmLabel) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (abar, bbar) reachable by applying tau or sigma to both vectors at once."""
    start = (label.abar, label.bbar)
    seen = {start}
    todo = [start]
    while todo:
        a, b = todo.pop()
        for f in (tau, sigma):
            nxt = (f(a, label.p), f(b, label.pp))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def conjecture1_label(c: Cocharacter, use_beta_inverse: bool = False) -> FfjmmLabel:
    """Label (alpha+beta, alpha+beta+r, 0, a'') attached to the subtorus ``c``.

    a_i counts weights equal to i; a'_i = a_{alpha' i mod (alpha+beta)} where
    alpha' inverts alpha; a'' drops the last entry.  ``use_beta_inverse``
    multiplies by beta^{-1} instead, which lands in the same symmetry orbit.
    """
    n = c.alpha + c.beta
    if any(not 0 <= x < n for x in c.w):
        raise ValueError(f"weights must lie in [0, {n}), got {c.w}")
    counts = [0] * n
    for x in c.w:
        counts[x] += 1
    unit = pow(c.beta if use_beta_inverse else c.alpha, -1, n)
    a_prime = [counts[(unit * i) % n] for i in range(n)]
    return FfjmmLabel(n, n + c.rank, (0,) * (n - 1), tuple(a_prime[:-1]))


def ffjmm_char_s2(p: int, pp: int, a1: int, b1: int, order: int, allow_noncoprime: bool = False) -> TruncatedSeries:
    """chi^{p,p'}_{a1,b1} = virasoro_char(p, p', a1+1, b1+1) / (q)_inf for s = 2.

    The relation is established only for coprime p < p'.  ``allow_noncoprime``
    applies it anyway (callers must flag the result).
    """
    if not pp > p > 1:
        raise ValueError(f"need p' > p > 1, got p={p}, p'={pp}")
    if gcd(p, pp) != 1 and not allow_noncoprime:
        raise ValueError(f"gcd(p, p') = {gcd(p, pp)} != 1")
    if not (0 <= a1 <= p - 2 and 0 <= b1 <= pp - 2):
        raise ValueError(f"need 0 <= a1 <= p-2 and 0 <= b1 <= p'-2, got a1={a1}, b1={b1}")
    chi = virasoro_char(MinimalModelLabel(p, pp, a1 + 1, b1 + 1), order)
    return mul(inverse_q_poch(None, order), chi)
