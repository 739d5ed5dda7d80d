"""Fermionic multi-sums: rho-sums, the reduced odd/even sums, Andrews' J,
Corteel's E, and the two summation functionals used to test polynomial
transformation rules.

Every sum here runs over weakly decreasing tuples lam_1 >= ... >= lam_k >= 0.
Truncation uses a per-variable lower bound on the q-exponent that grows
quadratically, so the enumeration is finite at any order.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .characters import euler_plus, gordon_product
from .qseries import TruncatedSeries, inverse_q_poch_lambda, mul, pochhammer

Monomials = Iterable[tuple[int, int]]  # (coefficient, q-exponent)


def _chains(k: int, cost: Callable[[int, int], int], order: int) -> Iterator[tuple[int, ...]]:
    """Weakly decreasing k-tuples whose summed ``cost(position, value)`` is <= order.

    ``cost`` must be nonnegative and nondecreasing in the value from 1 on.
    """
    if k == 0:
        yield ()
        return

    def rec(pos, prev, spent, acc):
        if pos == k:
            yield tuple(acc)
            return
        v = 0
        while prev is None or v <= prev:
            cst = cost(pos, v)
            if spent + cst > order:
                if v >= 1:
                    break
                v += 1
                continue
            acc.append(v)
            yield from rec(pos + 1, v, spent + cst, acc)
            acc.pop()
            v += 1

    yield from rec(0, None, 0, [])


def _sum(
    k: int,
    order: int,
    cost: Callable[[int, int], int],
    exponent: Callable[[tuple], int],
    monomials: Callable[[tuple], Monomials],
    extra: Optional[Callable[[tuple], TruncatedSeries]] = None,
) -> TruncatedSeries:
    """sum_lam q^exponent(lam) / (q)_lam * (sum of monomials) * extra(lam)."""
    acc = [0] * (order + 1)
    for lam in _chains(k, cost, order):
        base = exponent(lam)
        poly = defaultdict(int)
        for coeff, e in monomials(lam):
            if base + e < 0:
                raise ValueError(f"negative net exponent {base + e} at lam={lam}")
            if base + e <= order and coeff:
                poly[base + e] += coeff
        if not any(poly.values()):
            continue
        lo = min(e for e, c in poly.items() if c)
        room = order - lo
        body = inverse_q_poch_lambda(lam, room) if lam else TruncatedSeries.one(room)
        if extra is not None:
            body = mul(body, extra(lam).truncate(room))
        for e, coeff in poly.items():
            if not coeff:
                continue
            for d in range(order - e + 1):
                acc[e + d] += coeff * body.coeffs[d]
    return TruncatedSeries(order, tuple(acc))


def _tri(v: int) -> int:
    return v * (v + 1) // 2


def _marker_monomials(lam: Sequence[int], indices: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """1 + sum over index groups of q^(sum_{j in group} (lam_j + 1)), 1-based."""
    out = [(1, 0)]
    for group in indices:
        out.append((1, sum(lam[j - 1] + 1 for j in group)))
    return out


def fermionic_rho_sum(r: int, m: int, order: int) -> TruncatedSeries:
    """sum q^{sum (rho_i^2+rho_i)/2}/(q)_rho (1 + sum_{i<m} q^{sum_{j<=i}(rho_{r-m+j}+1)})."""
    if r < 1 or not 0 <= m <= r - 1:
        raise ValueError(f"need 0 <= m <= r-1, got r={r}, m={m}")
    groups = [[r - m + j for j in range(i + 1)] for i in range(m)]
    return _sum(
        r, order,
        cost=lambda pos, v: _tri(v),
        exponent=lambda lam: sum(_tri(v) for v in lam),
        monomials=lambda lam: _marker_monomials(lam, groups),
    )


def fermionic_alt_sum(r: int, m: int, order: int) -> TruncatedSeries:
    """Same weight as the rho-sum, factor 1 + sum_{i<m'} q^{sum_{j<=i}(lam_{r-1-2j}+1)}, m' = min(m, r-m)."""
    if r < 1 or not 0 <= m <= r - 1:
        raise ValueError(f"need 0 <= m <= r-1, got r={r}, m={m}")
    mm = min(m, r - m)
    groups = [[r - 1 - 2 * j for j in range(i + 1)] for i in range(mm)]
    return _sum(
        r, order,
        cost=lambda pos, v: _tri(v),
        exponent=lambda lam: sum(_tri(v) for v in lam),
        monomials=lambda lam: _marker_monomials(lam, groups),
    )


def _k_groups(k: int, m: int) -> list[list[int]]:
    return [[k - j for j in range(i + 1)] for i in range(m)]


def reduced_sum_odd(k: int, m: int, order: int) -> TruncatedSeries:
    """(-q)_inf * sum q^{sum(lam_i^2+lam_i)}/(q)_lam (1 + sum_{i<m} q^{sum_{j<=i}(lam_{k-j}+1)})."""
    if k < 0 or not 0 <= m <= k:
        raise ValueError(f"need 0 <= m <= k, got k={k}, m={m}")
    groups = _k_groups(k, m)
    inner = _sum(
        k, order,
        cost=lambda pos, v: v * v + v,
        exponent=lambda lam: sum(v * v + v for v in lam),
        monomials=lambda lam: _marker_monomials(lam, groups),
    )
    return mul(euler_plus(order), inner)


def reduced_sum_even(k: int, m: int, order: int) -> TruncatedSeries:
    """sum (-q)_{lam_1} q^{(lam_1^2+lam_1)/2 + sum_{i>=2}(lam_i^2+lam_i)}/(q)_lam times the marker factor."""
    if k < 1 or not 0 <= m <= k:
        raise ValueError(f"need k >= 1 and 0 <= m <= k, got k={k}, m={m}")
    return _even_pieces(k, order, [_k_groups(k, m)])


def _even_weight(lam: Sequence[int]) -> int:
    return _tri(lam[0]) + sum(v * v + v for v in lam[1:])


def _even_pieces(k: int, order: int, group_sets: list) -> TruncatedSeries:
    """Sum over the even-case weight with a factor that is a sum of marker monomials.

    ``group_sets`` is a list of index-group lists; each contributes
    q^{sum_{j in group}(lam_j + 1)} per group (plus the leading 1 when the group
    list is the marker factor).
    """
    def monomials(lam):
        out = []
        for groups in group_sets:
            out.extend(_marker_monomials(lam, groups))
        return out

    return _sum(
        k, order,
        cost=lambda pos, v: _tri(v) if pos == 0 else v * v + v,
        exponent=_even_weight,
        monomials=monomials,
        extra=lambda lam: pochhammer(1, -1, lam[0], order),
    )


def even_partial_sums(k: int, order: int) -> list[TruncatedSeries]:
    """S_0..S_k: the even-case weight times q^{sum_{j<i}(lam_{k-j}+1)} for i = 0..k."""
    out = []
    for i in range(k + 1):
        group = [k - j for j in range(i)]
        out.append(_sum(
            k, order,
            cost=lambda pos, v: _tri(v) if pos == 0 else v * v + v,
            exponent=_even_weight,
            monomials=lambda lam, g=group: [(1, sum(lam[j - 1] + 1 for j in g))],
            extra=lambda lam: pochhammer(1, -1, lam[0], order),
        ))
    return out


def andrews_J(k: int, i: int, x_exponent: int, order: int) -> TruncatedSeries:
    """J_{k,i}(0; x; q) at x = q^x_exponent, summed over k-1 variables.

    sum x^{|lam|} q^{lam_1^2+...+lam_{k-1}^2 + lam_i+...+lam_{k-1}} / (q)_lam.
    """
    if k < 1 or not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k, got k={k}, i={i}")
    if x_exponent < 0:
        raise ValueError("x must be a nonnegative power of q")
    e = x_exponent
    return _sum(
        k - 1, order,
        cost=lambda pos, v: v * v + e * v + (v if pos + 1 >= i else 0),
        exponent=lambda lam: sum(v * v + e * v for v in lam) + sum(lam[i - 1:]),
        monomials=lambda lam: [(1, 0)],
    )


def corteel_E(k: int, i: int, a_exponent: int, order: int) -> TruncatedSeries:
    """E_{k+1,i}(a, q) at a = q^a_exponent, summed over k variables with m = i - 1.

    sum q^{(lam_1^2+lam_1)/2 + sum_{j>=2} lam_j^2 + sum_{j>m} lam_j} (-1/a)_{lam_1} a^{lam_1} / (q)_lam.
    """
    if k < 1 or not 1 <= i <= k + 1:
        raise ValueError(f"need 1 <= i <= k+1, got k={k}, i={i}")
    m = i - 1
    e = a_exponent

    # (-1/a)_n a^n = prod_{t<n} (q^e + q^t) = q^{sum min(e,t)} prod (1 + q^{|t-e|})
    def offset(n):
        return sum(min(e, t) for t in range(n))

    def lead(n):
        return _tri(n) + offset(n) + (n if m < 1 else 0)

    if e < -1 or lead(1) < 0:
        raise ValueError(f"a = q^{e} produces negative exponents")

    def extra(lam):
        n = lam[0]
        c = [0] * (order + 1)
        c[0] = 1
        for t in range(n):
            d = abs(t - e)
            if d == 0:
                c = [2 * x for x in c]
            elif d <= order:
                for z in range(order, d - 1, -1):
                    c[z] += c[z - d]
        return TruncatedSeries(order, tuple(c))

    def exponent(lam):
        return lead(lam[0]) + sum(v * v for v in lam[1:]) + sum(v for pos, v in enumerate(lam[1:], start=2) if pos > m)

    return _sum(
        k, order,
        cost=lambda pos, v: lead(v) if pos == 0 else v * v + (v if pos + 1 > m else 0),
        exponent=exponent,
        monomials=lambda lam: [(1, 0)],
        extra=extra,
    )


def corteel_E_product(k: int, m: int, order: int) -> TruncatedSeries:
    """(-q)_inf (G_{m+1} + G_m) with G_j the product avoiding 0, +-j mod 2k+2; G_0 = 0."""
    mod = 2 * k + 2
    prod = gordon_product(mod, m + 1, order)
    if m > 0:
        prod = prod + gordon_product(mod, m, order)
    return mul(euler_plus(order), prod)


def even_product(k: int, m: int, order: int) -> TruncatedSeries:
    """(-q)_inf times the product avoiding 0, +-(m+1) mod 2k+2."""
    return mul(euler_plus(order), gordon_product(2 * k + 2, m + 1, order))


# ---------------------------------------------------------------------------
# polynomials in x_1..x_r, q and the two summation functionals


class XPoly:
    """Sparse polynomial in x_1..x_r and q with integer coefficients.

    ``XPoly.x(i, r)`` follows the conventions x_i = 0 for i < 1 and x_i = 1
    for i > r.
    """

    __slots__ = ("r", "terms")

    def __init__(self, r: int, terms: Optional[dict] = None):
        self.r = r
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, r: int, c: int = 1, qexp: int = 0) -> "XPoly":
        return cls(r, {((0,) * r, qexp): c})

    @classmethod
    def x(cls, i: int, r: int) -> "XPoly":
        if i < 1:
            return cls(r)
        if i > r:
            return cls.const(r)
        e = [0] * r
        e[i - 1] = 1
        return cls(r, {(tuple(e), 0): 1})

    @classmethod
    def q(cls, r: int, k: int = 1) -> "XPoly":
        return cls.const(r, 1, k)

    def _lift(self, other) -> "XPoly":
        if isinstance(other, XPoly):
            if other.r != self.r:
                raise ValueError("rank mismatch")
            return other
        if isinstance(other, int):
            return XPoly.const(self.r, other)
        raise TypeError(other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return XPoly(self.r, t)

    __radd__ = __add__

    def __neg__(self):
        return XPoly(self.r, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t: dict = {}
        for (ea, qa), va in self.terms.items():
            for (eb, qb), vb in other.terms.items():
                key = (tuple(x + y for x, y in zip(ea, eb)), qa + qb)
                t[key] = t.get(key, 0) + va * vb
        return XPoly(self.r, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = XPoly.const(self.r)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, XPoly) and self.r == other.r and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def as_terms(self) -> list[tuple[int, tuple[int, ...], int]]:
        """(coefficient, x-exponents, q-exponent) triples in a fixed order."""
        return sorted((v, e, qe) for (e, qe), v in self.terms.items())

    def __repr__(self):
        return f"XPoly(r={self.r}, {self.as_terms()})"


def _as_terms(r: int, P) -> list[tuple[int, tuple[int, ...], int]]:
    terms = P.as_terms() if isinstance(P, XPoly) else list(P)
    out = []
    for coeff, exps, qexp in terms:
        exps = tuple(exps)
        if len(exps) != r or any(x < 0 for x in exps) or qexp < 0:
            raise ValueError(f"malformed term exponents {exps}, q^{qexp} for {r} variables")
        out.append((int(coeff), exps, int(qexp)))
    return out


def approx_functional(r: int, P, order: int) -> TruncatedSeries:
    """sum over lam of q^{sum(lam_i^2+lam_i)/2}/(q)_lam * P(q^lam_1, ..., q^lam_r, q)."""
    terms = _as_terms(r, P)
    return _sum(
        r, order,
        cost=lambda pos, v: _tri(v),
        exponent=lambda lam: sum(_tri(v) for v in lam),
        monomials=lambda lam: [(c, sum(a * v for a, v in zip(ex, lam)) + qe) for c, ex, qe in terms],
    )


def approx2_functional(k: int, P, order: int) -> TruncatedSeries:
    """sum over lam of (-q)_{lam_1} q^{(lam_1^2-lam_1)/2 + sum_{i>=2} lam_i^2}/(q)_lam * P(q^lam, q)."""
    terms = _as_terms(k, P)
    return _sum(
        k, order,
        cost=lambda pos, v: v * (v - 1) // 2 if pos == 0 else v * v,
        exponent=lambda lam: lam[0] * (lam[0] - 1) // 2 + sum(v * v for v in lam[1:]),
        monomials=lambda lam: [(c, sum(a * v for a, v in zip(ex, lam)) + qe) for c, ex, qe in terms],
        extra=lambda lam: pochhammer(1, -1, lam[0], order),
    )


# ---------------------------------------------------------------------------
# instances of the transformation rules, as LHS - RHS polynomials


def _prod(polys, r):
    out = XPoly.const(r)
    for p in polys:
        out = out * p
    return out


def _sample_polys(r: int, allowed: Sequence[int]) -> list[tuple[str, XPoly]]:
    """A few test polynomials in the allowed variables (always includes 1)."""
    out = [("1", XPoly.const(r))]
    allowed = [i for i in allowed if 1 <= i <= r]
    if allowed:
        a, b = allowed[0], allowed[-1]
        out.append((f"x{a}", XPoly.x(a, r)))
        out.append((f"q*x{a}*x{b}^2+x{b}", XPoly.q(r) * XPoly.x(a, r) * XPoly.x(b, r) ** 2 + XPoly.x(b, r)))
    return out


def shift_rule(r: int, s: int, P: XPoly) -> XPoly:
    """x_s (1 + q x_{s+1}) P - x_{s+1} (1 + q x_{s-1}) P, P free of x_s."""
    x = lambda i: XPoly.x(i, r)
    q = XPoly.q(r)
    return x(s) * (1 + q * x(s + 1)) * P - x(s + 1) * (1 + q * x(s - 1)) * P


def parity_rule(r: int, l: int, s: int, P: XPoly) -> XPoly:
    """(1 + q x_l) prod_{i<=s} x_{l-1-2i} P - (1 + q x_{l-2s-2}) prod_{i<=s} x_{l-2i} P."""
    x = lambda i: XPoly.x(i, r)
    q = XPoly.q(r)
    lhs = (1 + q * x(l)) * _prod([x(l - 1 - 2 * i) for i in range(s + 1)], r)
    rhs = (1 + q * x(l - 2 * s - 2)) * _prod([x(l - 2 * i) for i in range(s + 1)], r)
    return (lhs - rhs) * P


def marker_rule(r: int, l: int, s: int, P: XPoly) -> XPoly:
    """Moves the marker chain x_{l-s} ... x_{l-1} onto every other variable below l."""
    x = lambda i: XPoly.x(i, r)
    lhs = sum((XPoly.q(r, i) * _prod([x(l - s + j) for j in range(i + 1)], r) for i in range(s)), XPoly(r))
    rhs = sum(
        (XPoly.q(r, i) * _prod([x(l - 1 - 2 * j) for j in range(i + 1)], r) for i in range(min(s, l - s))),
        XPoly(r),
    )
    return (lhs - rhs) * P


def shift_rule2(k: int, s: int, P: XPoly) -> XPoly:
    """The weight-two shift: s >= 2 and s = 1 forms."""
    x = lambda i: XPoly.x(i, k)
    q = XPoly.q(k)
    if s >= 2:
        return x(s) * (1 + q * x(s) * x(s + 1)) * P - x(s + 1) * (1 + q * x(s - 1) * x(s)) * P
    return x(1) * (1 + x(2) + q * x(1) * x(2)) * P - x(2) * P


def _run(k, lo, hi, power=1):
    return _prod([XPoly.x(i, k) ** power for i in range(lo, hi + 1)], k)


def ladder_rule2(k: int, s: int, l: int) -> XPoly:
    """1 <= s < l <= k+1; the s >= 2 and s = 1 forms."""
    x = lambda i: XPoly.x(i, k)
    q = XPoly.q(k)
    if s >= 2:
        lhs = (x(l) - x(s)) * _run(k, s + 1, l) * _run(k, l + 1, k, 2)
        rhs = q * (x(l - 1) - x(s - 1)) * _run(k, s, l - 1) * _run(k, l, k, 2)
    else:
        lhs = (x(l) - x(1)) * _run(k, 2, l) * _run(k, l + 1, k, 2)
        rhs = (1 + q * x(l - 1)) * _run(k, 1, l - 1) * _run(k, l, k, 2)
    return lhs - rhs


def telescope_rule2(k: int, s: int) -> XPoly:
    """(1 - x_s) prod_{i>s} x_i - q^{s-1} (1 + q x_{k-s+1}) prod_{i<=k-s+1} x_i prod_{i>k-s+1} x_i^2."""
    x = lambda i: XPoly.x(i, k)
    q = XPoly.q(k)
    lhs = (1 - x(s)) * _run(k, s + 1, k)
    rhs = XPoly.q(k, s - 1) * (1 + q * x(k - s + 1)) * _run(k, 1, k - s + 1) * _run(k, k - s + 2, k, 2)
    return lhs - rhs


def marker_rule2(k: int, m: int) -> XPoly:
    """prod_{i>m} x_i - (2 sum_{i<m} q^i prod_{j>k-i} x_j + q^m prod_{i>k-m} x_i) prod_i x_i."""
    q = lambda e: XPoly.q(k, e)
    bracket = sum((2 * q(i) * _run(k, k - i + 1, k) for i in range(m)), XPoly(k)) + q(m) * _run(k, k - m + 1, k)
    return _run(k, m + 1, k) - bracket * _run(k, 1, k)


def approx_instances(r: int) -> list[tuple[str, XPoly]]:
    """LHS - RHS of every first-family rule instance at rank r."""
    out = []
    for s in range(1, r + 1):
        for name, P in _sample_polys(r, [i for i in range(1, r + 1) if i != s]):
            out.append((f"shift(r={r},s={s},P={name})", shift_rule(r, s, P)))
    for l in range(1, r + 1):
        samples = _sample_polys(r, range(l, r + 1))
        for s in range(0, (l - 2) // 2 + 1) if l >= 2 else ():
            for name, P in samples:
                out.append((f"parity(r={r},l={l},s={s},P={name})", parity_rule(r, l, s, P)))
        for s in range(0, l):
            for name, P in samples:
                out.append((f"marker(r={r},l={l},s={s},P={name})", marker_rule(r, l, s, P)))
    return out


def approx2_instances(k: int) -> list[tuple[str, XPoly]]:
    """LHS - RHS of every second-family rule instance at rank k."""
    out = []
    for s in range(1, k + 1):
        allowed = [i for i in range(1, k + 1) if i != s] if s >= 2 else list(range(2, k + 1))
        for name, P in _sample_polys(k, allowed):
            out.append((f"shift2(k={k},s={s},P={name})", shift_rule2(k, s, P)))
    for l in range(2, k + 2):
        for s in range(1, l):
            out.append((f"ladder2(k={k},s={s},l={l})", ladder_rule2(k, s, l)))
    for s in range(1, k + 1):
        out.append((f"telescope2(k={k},s={s})", telescope_rule2(k, s)))
    for m in range(0, k + 1):
        out.append((f"marker2(k={k},m={m})", marker_rule2(k, m)))
    return out
