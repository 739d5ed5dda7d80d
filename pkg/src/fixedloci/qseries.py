"""Exact truncated power series in q, and in (t, q).

Every series carries an explicit truncation order.  Arithmetic between series
of different orders silently truncates to the smaller one, since identity checks
always work at one global order.  Coefficients are Python ints throughout.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import comb
from typing import Iterable, NamedTuple, Optional, Sequence, Union


@dataclass(frozen=True)
class TruncatedSeries:
    """``c_0 + c_1 q + ... + c_N q^N + O(q^{N+1})``."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if len(self.coeffs) != self.order + 1:
            raise ValueError("expected order+1 coefficients")

    # construction

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], order: int) -> "TruncatedSeries":
        """Pad with zeros or truncate ``coeffs`` to exactly ``order``."""
        c = [int(x) for x in coeffs][: order + 1]
        c.extend([0] * (order + 1 - len(c)))
        return cls(order, tuple(c))

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls(order, (0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, degree: int, order: int, coeff: int = 1) -> "TruncatedSeries":
        if degree < 0:
            raise ValueError("negative exponent in a power series")
        c = [0] * (order + 1)
        if degree <= order:
            c[degree] = coeff
        return cls(order, tuple(c))

    # access

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series known to O(q^{self.order + 1})")
        return TruncatedSeries(order, self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> Optional[int]:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    # arithmetic

    def _coerce(self, other) -> Optional["TruncatedSeries"]:
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, int):
            return TruncatedSeries.monomial(0, self.order, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries(n, tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(self.order, tuple(other * a for a in self.coeffs))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return mul(self, invert(other))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return mul(other, invert(self))

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else invert(self)
        result = TruncatedSeries.one(self.order)
        for _ in range(abs(k)):
            result = mul(result, base)
        return result

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``q^k`` (``k >= 0``), keeping the order."""
        if k < 0:
            raise ValueError("negative shift")
        return TruncatedSeries.from_coeffs([0] * k + list(self.coeffs), self.order)

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        return f"{body} + O(q^{self.order + 1})"

    # serialization

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        return cls.from_coeffs(data["coeffs"], int(data["order"]))

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["degree", "coefficient"])
        for k, c in enumerate(self.coeffs):
            w.writerow([k, c])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TruncatedSeries":
        """Read ``degree,coefficient`` rows; ``#`` lines and a header are skipped."""
        pairs = {}
        for row in csv.reader(line for line in text.splitlines() if line.strip() and not line.startswith("#")):
            if row[0].strip() == "degree":
                continue
            deg, coeff = int(row[0]), int(row[1])
            if deg < 0 or deg in pairs:
                raise ValueError(f"bad or duplicate degree {deg}")
            pairs[deg] = coeff
        if not pairs:
            raise ValueError("no coefficients found")
        order = max(pairs)
        if sorted(pairs) != list(range(order + 1)):
            raise ValueError("degrees must be contiguous from 0")
        return cls(order, tuple(pairs[k] for k in range(order + 1)))


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller order."""
    n = min(a.order, b.order)
    out = [0] * (n + 1)
    bc = b.coeffs
    for i, ai in enumerate(a.coeffs[: n + 1]):
        if not ai:
            continue
        for j in range(n + 1 - i):
            bj = bc[j]
            if bj:
                out[i + j] += ai * bj
    return TruncatedSeries(n, tuple(out))


def invert(a: TruncatedSeries) -> TruncatedSeries:
    """Two-sided inverse; the constant term must be +1 or -1."""
    c0 = a.coeffs[0]
    if c0 not in (1, -1):
        raise ZeroDivisionError(f"series with constant term {c0} is not a unit over the integers")
    n = a.order
    out = [0] * (n + 1)
    out[0] = c0
    for k in range(1, n + 1):
        s = 0
        for j in range(1, k + 1):
            if a.coeffs[j]:
                s += a.coeffs[j] * out[k - j]
        out[k] = -c0 * s
    return TruncatedSeries(n, tuple(out))


# in-place factor updates on coefficient lists; these are the workhorses for
# the infinite products below

def _times_one_minus(c: list, k: int, sign: int = 1) -> None:
    """c <- c * (1 - sign*q^k)."""
    for n in range(len(c) - 1, k - 1, -1):
        c[n] -= sign * c[n - k]


def _divide_one_minus(c: list, k: int, sign: int = 1) -> None:
    """c <- c / (1 - sign*q^k)."""
    for n in range(k, len(c)):
        c[n] += sign * c[n - k]


RECIPROCAL = "reciprocal"
PLUS = "plus"
MINUS = "minus"
_MODES = (RECIPROCAL, PLUS, MINUS)


def residue_product(
    modulus: int,
    allowed: Iterable[int],
    mode: str,
    scale: int = 1,
    order: int = 0,
) -> TruncatedSeries:
    """Expand prod over n >= 1 with ``n % modulus in allowed`` of f(q^(scale*n)).

    ``mode`` selects f(x): ``"reciprocal"`` 1/(1-x), ``"plus"`` 1+x, ``"minus"`` 1-x.
    """
    if modulus < 1 or scale < 1:
        raise ValueError("modulus and scale must be positive")
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}")
    allowed = {int(x) % modulus for x in allowed}
    c = [0] * (order + 1)
    c[0] = 1
    n = 1
    while scale * n <= order:
        if n % modulus in allowed:
            k = scale * n
            if mode == RECIPROCAL:
                _divide_one_minus(c, k)
            elif mode == PLUS:
                _times_one_minus(c, k, sign=-1)
            else:
                _times_one_minus(c, k)
        n += 1
    return TruncatedSeries(order, tuple(c))


def pochhammer(base_exponent: int, sign: int, n: Optional[int], order: int) -> TruncatedSeries:
    """(a)_n = (1-a)(1-aq)...(1-aq^(n-1)) with ``a = sign * q^base_exponent``.

    ``n=None`` means the infinite product.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n is not None and n < 0:
        raise ValueError("length must be nonnegative")
    if (n is None or n > 0) and base_exponent < 1:
        raise ValueError(f"factor exponent {base_exponent} is not positive; result is not a unit series")
    c = [0] * (order + 1)
    c[0] = 1
    t = 0
    while (n is None or t < n) and base_exponent + t <= order:
        _times_one_minus(c, base_exponent + t, sign)
        t += 1
    return TruncatedSeries(order, tuple(c))


def inverse_q_poch(n: Optional[int], order: int) -> TruncatedSeries:
    """1/(q)_n; ``n=None`` gives 1/(q)_inf."""
    return _inv_poch(n, order)


_INV_CACHE: dict = {}


def _inv_poch(n: Optional[int], order: int) -> TruncatedSeries:
    key = (n, order)
    hit = _INV_CACHE.get(key)
    if hit is None:
        c = [0] * (order + 1)
        c[0] = 1
        top = order if n is None else min(n, order)
        for k in range(1, top + 1):
            _divide_one_minus(c, k)
        hit = _INV_CACHE[key] = TruncatedSeries(order, tuple(c))
    return hit


def q_binomial(M: int, N: int, order: Optional[int] = None) -> TruncatedSeries:
    """Gaussian binomial [M, N]; zero unless M >= N >= 0.

    Without ``order`` the result is returned exactly, to its own degree.
    """
    if not M >= N >= 0:
        return TruncatedSeries.zero(0 if order is None else order)
    deg = N * (M - N)
    # Pascal recursion [m, j] = [m-1, j] + q^(m-j) [m-1, j-1], polynomials as lists
    row = [[1]]
    for m in range(1, M + 1):
        new = []
        for j in range(0, min(m, N) + 1):
            left = row[j] if j < len(row) else []
            right = row[j - 1] if j >= 1 else []
            size = max(len(left), len(right) + m - j)
            p = [0] * size
            for d, x in enumerate(left):
                p[d] += x
            for d, x in enumerate(right):
                p[d + m - j] += x
            new.append(p)
        row = new
    poly = row[N]
    return TruncatedSeries.from_coeffs(poly, deg if order is None else order)


def q_poch_lambda(lam: Sequence[int], order: int) -> TruncatedSeries:
    """(q)_lam = (q)_{l1-l2} ... (q)_{l_{s-1}-l_s} (q)_{l_s}."""
    lam = list(lam)
    if any(x < 0 for x in lam) or any(lam[k] < lam[k + 1] for k in range(len(lam) - 1)):
        raise ValueError(f"expected a weakly decreasing nonnegative sequence, got {lam}")
    c = [0] * (order + 1)
    c[0] = 1
    gaps = [lam[k] - lam[k + 1] for k in range(len(lam) - 1)] + lam[-1:]
    for g in gaps:
        for k in range(1, min(g, order) + 1):
            _times_one_minus(c, k)
    return TruncatedSeries(order, tuple(c))


def inverse_q_poch_lambda(lam: Sequence[int], order: int) -> TruncatedSeries:
    """1/(q)_lam, built from cached 1/(q)_n factors."""
    lam = list(lam)
    gaps = [lam[k] - lam[k + 1] for k in range(len(lam) - 1)] + lam[-1:]
    out = TruncatedSeries.one(order)
    for g in gaps:
        if g < 0:
            raise ValueError(f"expected a weakly decreasing sequence, got {lam}")
        if g:
            out = mul(out, _inv_poch(g, order))
    return out


# ---------------------------------------------------------------------------
# bivariate series


def _padd(a: Sequence[int], b: Sequence[int], cap: Optional[int]) -> tuple:
    n = max(len(a), len(b))
    out = [0] * n
    for k, x in enumerate(a):
        out[k] += x
    for k, x in enumerate(b):
        out[k] += x
    return _trim(out, cap)


def _pmul(a: Sequence[int], b: Sequence[int], cap: Optional[int]) -> tuple:
    if not a or not b:
        return ()
    n = len(a) + len(b) - 1
    if cap is not None:
        n = min(n, cap + 1)
    out = [0] * n
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            out[i + j] += x * y
    return _trim(out, cap)


def _trim(p: Sequence[int], cap: Optional[int]) -> tuple:
    p = list(p if cap is None else p[: cap + 1])
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


@dataclass(frozen=True)
class BivariateSeries:
    """Series in t to O(t^{t_order+1}) whose coefficients are polynomials in q.

    ``coeffs[n]`` is the q-polynomial multiplying ``t^n``, as a trimmed tuple of
    ints.  With ``q_cap`` set, q-degrees above the cap are dropped.
    """

    t_order: int
    coeffs: tuple[tuple[int, ...], ...]
    q_cap: Optional[int] = None

    def __post_init__(self):
        if len(self.coeffs) != self.t_order + 1:
            raise ValueError("expected t_order+1 coefficient polynomials")

    @classmethod
    def from_polys(cls, polys: Iterable[Sequence[int]], t_order: int, q_cap: Optional[int] = None):
        ps = [_trim(p, q_cap) for p in list(polys)[: t_order + 1]]
        ps.extend([()] * (t_order + 1 - len(ps)))
        return cls(t_order, tuple(ps), q_cap)

    @classmethod
    def one(cls, t_order: int, q_cap: Optional[int] = None):
        return cls.from_polys([(1,)], t_order, q_cap)

    @classmethod
    def from_series(cls, s: TruncatedSeries, t_order: int) -> "BivariateSeries":
        """Embed a q-series as the t^0 coefficient, capping q at its order."""
        return cls.from_polys([s.coeffs], t_order, q_cap=s.order)

    @classmethod
    def t_monomial(cls, k: int, t_order: int, q_cap: Optional[int] = None):
        return cls.from_polys([()] * k + [(1,)], t_order, q_cap)

    def __getitem__(self, n: int) -> tuple[int, ...]:
        return self.coeffs[n]

    def coefficient(self, n: int, d: int) -> int:
        p = self.coeffs[n]
        return p[d] if d < len(p) else 0

    def at_q_equals_one(self) -> list[int]:
        return [sum(p) for p in self.coeffs]

    def _meet(self, other: "BivariateSeries"):
        M = min(self.t_order, other.t_order)
        caps = [c for c in (self.q_cap, other.q_cap) if c is not None]
        return M, (min(caps) if caps else None)

    def _coerce(self, other):
        if isinstance(other, BivariateSeries):
            return other
        if isinstance(other, int):
            return BivariateSeries.from_polys([(other,)], self.t_order, self.q_cap)
        if isinstance(other, TruncatedSeries):
            return BivariateSeries.from_series(other, self.t_order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        M, cap = self._meet(other)
        return BivariateSeries(M, tuple(_padd(self.coeffs[n], other.coeffs[n], cap) for n in range(M + 1)), cap)

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries(self.t_order, tuple(tuple(-x for x in p) for p in self.coeffs), self.q_cap)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        M, cap = self._meet(other)
        out = [()] * (M + 1)
        for i in range(M + 1):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(M + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = _padd(out[i + j], _pmul(a, b, cap), cap)
        return BivariateSeries(M, tuple(out), cap)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.invert()
        out = BivariateSeries.one(self.t_order, self.q_cap)
        for _ in range(abs(k)):
            out = out * base
        return out

    def invert(self) -> "BivariateSeries":
        a0 = self.coeffs[0]
        if self.q_cap is None:
            if a0 not in ((1,), (-1,)):
                raise ZeroDivisionError("t^0 coefficient must be +1 or -1 without a q-cap")
            b0 = a0
        else:
            b0 = invert(TruncatedSeries.from_coeffs(a0, self.q_cap)).coeffs
            b0 = _trim(b0, self.q_cap)
        cap = self.q_cap
        out = [b0]
        for n in range(1, self.t_order + 1):
            acc: tuple = ()
            for k in range(1, n + 1):
                if self.coeffs[k] and out[n - k]:
                    acc = _padd(acc, _pmul(self.coeffs[k], out[n - k], cap), cap)
            out.append(_trim([-x for x in _pmul(b0, acc, cap)], cap) if acc else ())
        return BivariateSeries(self.t_order, tuple(out), cap)

    def __str__(self) -> str:
        lines = []
        for n, p in enumerate(self.coeffs):
            body = str(TruncatedSeries.from_coeffs(p, max(len(p) - 1, 0))).rsplit(" + O(", 1)[0]
            lines.append(f"t^{n}: {body}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"t_order": self.t_order, "q_cap": self.q_cap, "coeffs": [list(p) for p in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "BivariateSeries":
        return cls.from_polys(data["coeffs"], int(data["t_order"]), data.get("q_cap"))

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["t_degree", "q_degree", "coefficient"])
        for n, p in enumerate(self.coeffs):
            for d, c in enumerate(p):
                if c:
                    w.writerow([n, d, c])
        return buf.getvalue()


Series = Union[TruncatedSeries, BivariateSeries]


class BivariateFactor(NamedTuple):
    """prod over i >= 1 with ``i % modulus in residues`` of
    ``(1 - sign * q^q_exp * t^(t_scale*i))^power``.
    """

    t_scale: int
    q_exp: int = 0
    modulus: int = 1
    residues: tuple = (0,)
    power: int = -1
    sign: int = 1


def bivariate_product(
    factors: Sequence[BivariateFactor],
    t_order: int,
    q_cap: Optional[int] = None,
) -> BivariateSeries:
    out = [()] * (t_order + 1)
    out[0] = (1,)
    for f in factors:
        f = BivariateFactor(*f)
        if f.t_scale < 1:
            raise ValueError("every factor needs a positive t-exponent per step")
        if f.q_exp < 0:
            raise ValueError("negative q-exponent")
        residues = {r % f.modulus for r in f.residues}
        i = 1
        while f.t_scale * i <= t_order:
            if i % f.modulus in residues:
                out = _times_binomial(out, f.t_scale * i, f.q_exp, f.power, f.sign, q_cap)
            i += 1
    return BivariateSeries(t_order, tuple(out), q_cap)


def _times_binomial(c: list, tdeg: int, qdeg: int, power: int, sign: int, cap) -> list:
    """c * (1 - sign q^qdeg t^tdeg)^power, truncated in t."""
    M = len(c) - 1
    # coefficients of (1 - sign x)^power in x
    terms = []
    k = 0
    while k * tdeg <= M:
        if power >= 0:
            if k > power:
                break
            co = comb(power, k) * (-sign) ** k
        else:
            co = comb(-power + k - 1, k) * sign ** k
        terms.append(co)
        k += 1
    out = [()] * (M + 1)
    for n, p in enumerate(c):
        if not p:
            continue
        for k, co in enumerate(terms):
            if n + k * tdeg > M:
                break
            if co:
                shifted = [0] * (k * qdeg) + [co * x for x in p]
                out[n + k * tdeg] = _padd(out[n + k * tdeg], shifted, cap)
    return out
