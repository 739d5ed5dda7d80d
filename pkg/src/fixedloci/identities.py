"""Named identity checks: two independently built series and a first-mismatch report."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional, Sequence, Union

from . import fermionic as F
from .cache import CensusCache
from .census import Cocharacter, NonCompactError, h0_series, poincare_series
from .characters import (
    FfjmmLabel,
    MinimalModelLabel,
    character_form,
    conjecture1_label,
    ffjmm_char_s2,
    gordon_product,
    symmetry_orbit,
    theorem1_rhs,
    virasoro_char,
)
from .partitions import count_s_tuples
from .qseries import (
    MINUS,
    BivariateFactor,
    BivariateSeries,
    TruncatedSeries,
    bivariate_product,
    mul,
    residue_product,
)

Series = Union[TruncatedSeries, BivariateSeries]

EQUAL = "equal"
MISMATCH = "mismatch"
REFUSED = "refused"

EVEN_RANK_NOTE = (
    "open question: for even r the product form is an identity under test; "
    "a mismatch here is reported as a finding and no formula is adjusted"
)
CORTEEL_NOTE = (
    "open question: the product evaluation of the E-function at a = 1/q is an identity under test"
)


class UnknownIdentity(KeyError):
    pass


class ParameterError(ValueError):
    pass


class Refusal(Exception):
    """A side of the identity cannot be computed; carries the reason."""

    def __init__(self, reason: str, lhs: Optional[Series] = None, notes: Sequence[str] = ()):
        super().__init__(reason)
        self.reason = reason
        self.lhs = lhs
        self.notes = list(notes)


@dataclass
class Report:
    identity: str
    params: dict
    order: int
    status: str
    anchor: str
    first_mismatch: Optional[dict] = None
    notes: list = field(default_factory=list)
    reason: Optional[str] = None
    lhs_series: Optional[dict] = None
    runtime: float = 0.0

    def payload(self) -> dict:
        """Deterministic part of the report (no runtime)."""
        out = {
            "identity": self.identity,
            "params": self.params,
            "order": self.order,
            "status": self.status,
        }
        if self.first_mismatch is not None:
            out["first_mismatch"] = self.first_mismatch
        out["anchor"] = self.anchor
        if self.reason is not None:
            out["reason"] = self.reason
        if self.notes:
            out["notes"] = list(self.notes)
        if self.lhs_series is not None:
            out["lhs_series"] = self.lhs_series
        return out

    def to_json(self, include_runtime: bool = False) -> str:
        data = self.payload()
        if include_runtime:
            data = {"report": data, "runtime": round(self.runtime, 6)}
        return json.dumps(data, separators=(",", ":"))


def _kind(s) -> str:
    if isinstance(s, TruncatedSeries):
        return "univariate"
    if isinstance(s, BivariateSeries):
        return "bivariate"
    raise TypeError(f"not a series: {type(s).__name__}")


def first_difference(lhs: Series, rhs: Series) -> Optional[dict]:
    """Lowest differing degree, lexicographic (t, q) for bivariate series."""
    k1, k2 = _kind(lhs), _kind(rhs)
    if k1 != k2:
        raise TypeError(f"cannot compare {k1} with {k2} series")
    if k1 == "univariate":
        for d in range(min(lhs.order, rhs.order) + 1):
            if lhs[d] != rhs[d]:
                return {"degree": [d], "lhs": lhs[d], "rhs": rhs[d]}
        return None
    caps = [c for c in (lhs.q_cap, rhs.q_cap) if c is not None]
    cap = min(caps) if caps else None
    for n in range(min(lhs.t_order, rhs.t_order) + 1):
        a, b = lhs[n], rhs[n]
        top = max(len(a), len(b)) - 1
        if cap is not None:
            top = min(top, cap)
        for d in range(top + 1):
            x = a[d] if d < len(a) else 0
            y = b[d] if d < len(b) else 0
            if x != y:
                return {"degree": [n, d], "lhs": x, "rhs": y}
    return None


def compare(lhs: Series, rhs: Series, label: str = "compare") -> Report:
    """Coefficientwise comparison up to the common order."""
    diff = first_difference(lhs, rhs)
    if _kind(lhs) == "univariate":
        order = min(lhs.order, rhs.order)
    else:
        order = min(lhs.t_order, rhs.t_order)
    return Report(
        identity=label,
        params={},
        order=order,
        status=EQUAL if diff is None else MISMATCH,
        anchor="user expressions",
        first_mismatch=diff,
    )


# ---------------------------------------------------------------------------
# schemas


@dataclass(frozen=True)
class Param:
    name: str
    kind: str = "int"  # "int" or "list"
    default: object = None
    doc: str = ""


@dataclass
class Context:
    cache: CensusCache = field(default_factory=CensusCache)
    char_file: Optional[str] = None

    @property
    def source(self):
        return self.cache.dimensions


@dataclass(frozen=True)
class IdentitySchema:
    name: str
    anchor: str
    params: tuple
    constraints: str
    bivariate: bool
    build: Callable
    check: Callable[[dict], Optional[str]]
    grid: Callable[[], list] = lambda: []

    def describe(self) -> dict:
        return {
            "identity": self.name,
            "anchor": self.anchor,
            "params": [p.name for p in self.params],
            "constraints": self.constraints,
            "order": "t-order" if self.bivariate else "N",
        }


Comparison = tuple  # (label, lhs, rhs)


def _s_count_series(r: int, m: int, order: int) -> TruncatedSeries:
    return TruncatedSeries(order, tuple(count_s_tuples(r, m, n) for n in range(order + 1)))


def _rho(r: int, m: int, order: int) -> TruncatedSeries:
    # S(r, r) = S(r, 0)
    return F.fermionic_rho_sum(r, 0 if m == r else m, order)


def _h0(ctx: Context, r: int, c: Cocharacter, order: int) -> TruncatedSeries:
    return h0_series(r, c, order, ctx.source)


def _rm(p) -> Optional[str]:
    if p["r"] < 1:
        return "need r >= 1"
    if not 0 <= p["m"] <= p["r"]:
        return "need 0 <= m <= r"
    return None


def _km(lo: int):
    def check(p):
        if p["k"] < lo:
            return f"need k >= {lo}"
        if not 0 <= p["m"] <= p["k"]:
            return "need 0 <= m <= k"
        return None
    return check


def _build_thm1(p, order, ctx):
    r, m = p["r"], p["m"]
    lhs = _h0(ctx, r, Cocharacter.homogeneous(r, m), order)
    notes = [EVEN_RANK_NOTE] if r % 2 == 0 else []
    return [("", lhs, theorem1_rhs(r, m, order))], notes


def _build_thm1_char(p, order, ctx):
    r, m = p["r"], p["m"]
    lhs = _h0(ctx, r, Cocharacter.homogeneous(r, m), order)
    notes = []
    if gcd(2, r + 2) != 1:
        notes.append(f"label (2, {r + 2}) is not coprime; the character sum formula is used as a q-series")
    return [("", lhs, character_form(r, m, order))], notes


def _build_ferm_rho(p, order, ctx):
    r, m = p["r"], p["m"]
    notes = ["m = r evaluated through S(r, r) = S(r, 0)"] if m == r else []
    return [("", _s_count_series(r, m, order), _rho(r, m, order))], notes


def _build_ferm_alt(p, order, ctx):
    r, m = p["r"], p["m"]
    return [("", F.fermionic_rho_sum(r, m, order), F.fermionic_alt_sum(r, m, order))], []


def _build_reduce_odd(p, order, ctx):
    k, m = p["k"], p["m"]
    return [("", _rho(2 * k + 1, m, order), F.reduced_sum_odd(k, m, order))], []


def _build_reduce_even(p, order, ctx):
    k, m = p["k"], p["m"]
    return [("", _rho(2 * k, m, order), F.reduced_sum_even(k, m, order))], []


def _build_even_product(p, order, ctx):
    k, m = p["k"], p["m"]
    return [("", F.reduced_sum_even(k, m, order), F.even_product(k, m, order))], [EVEN_RANK_NOTE]


def _build_gordon(p, order, ctx):
    k, m = p["k"], p["m"]
    lhs = F.andrews_J(k + 1, m + 1, 0, order)
    return [("", lhs, gordon_product(2 * k + 3, m + 1, order))], []


def _build_jrec(p, order, ctx):
    k, i, e = p["k"], p["i"], p["e"]
    lhs = F.andrews_J(k, i, e, order)
    if i > 1:
        lhs = lhs - F.andrews_J(k, i - 1, e, order)
    rhs = F.andrews_J(k, k - i + 1, e + 1, order).shift((e + 1) * (i - 1))
    return [("", lhs, rhs)], []


def _build_corteel(p, order, ctx):
    k, m = p["k"], p["m"]
    lhs = F.corteel_E(k, m + 1, -1, order)
    return [("", lhs, F.corteel_E_product(k, m, order))], [CORTEEL_NOTE]


def _build_corteel_sum(p, order, ctx):
    k, m = p["k"], p["m"]
    S = F.even_partial_sums(k, order)
    rhs = S[m]
    for i in range(m):
        rhs = rhs + S[i] + S[i]
    return [("", F.corteel_E(k, m + 1, -1, order), rhs)], []


def _build_approx(p, order, ctx):
    fam, r = p["family"], p["r"]
    if fam == 1:
        inst = [(name, F.approx_functional(r, P, order)) for name, P in F.approx_instances(r)]
    else:
        inst = [(name, F.approx2_functional(r, P, order)) for name, P in F.approx2_instances(r)]
    zero = TruncatedSeries.zero(order)
    return [(name, s, zero) for name, s in inst], [f"{len(inst)} rule instances checked"]


def read_char_file(path: str) -> tuple[FfjmmLabel, str, TruncatedSeries]:
    """Header ``# p=.. pp=.. abar=a1;a2 bbar=b1;b2 source=free text``, then CSV."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    header = None
    for line in text.splitlines():
        if line.startswith("#"):
            header = line.lstrip("#").strip()
            break
    if header is None:
        raise ParameterError(f"{path}: missing '# p=.. pp=.. abar=.. bbar=.. source=..' header")
    fields = {}
    rest = header
    if "source=" in rest:
        rest, src = rest.split("source=", 1)
        fields["source"] = src.strip()
    for tok in rest.replace(",", " ").split():
        if "=" not in tok:
            raise ParameterError(f"{path}: malformed header token {tok!r}")
        k, v = tok.split("=", 1)
        fields[k.strip()] = v.strip()
    try:
        vec = lambda s: tuple(int(x) for x in s.split(";") if x != "")
        label = FfjmmLabel(int(fields["p"]), int(fields["pp"]), vec(fields["abar"]), vec(fields["bbar"]))
    except KeyError as exc:
        raise ParameterError(f"{path}: header lacks {exc.args[0]}") from None
    except ValueError as exc:
        raise ParameterError(f"{path}: {exc}") from None
    try:
        series = TruncatedSeries.from_csv(text)
    except ValueError as exc:
        raise ParameterError(f"{path}: {exc}") from None
    return label, fields.get("source", "unspecified"), series


def _conj1_cocharacter(p) -> Cocharacter:
    return Cocharacter(p["alpha"], p["beta"], tuple(p["w"]))


def _build_conj1(p, order, ctx):
    c = _conj1_cocharacter(p)
    r = c.rank
    label = conjecture1_label(c)
    n = c.alpha + c.beta
    lhs = _h0(ctx, r, c, order)
    notes = [f"label p={label.p} pp={label.pp} abar={list(label.abar)} bbar={list(label.bbar)}"]
    prefactor = residue_product(1, {0}, MINUS, n, order)
    if n == 2:
        if gcd(label.p, label.pp) != 1:
            notes.append(
                f"s=2 reduction applied to the non-coprime label ({label.p}, {label.pp}); "
                "the character sum formula is used as a q-series"
            )
        chi = ffjmm_char_s2(label.p, label.pp, label.abar[0], label.bbar[0], order, allow_noncoprime=True)
        return [("", lhs, mul(prefactor, chi))], notes
    if ctx.char_file is None:
        raise Refusal("character data required", lhs, notes)
    imported, source, chi = read_char_file(ctx.char_file)
    if (imported.p, imported.pp) != (label.p, label.pp):
        raise ParameterError(
            f"character file has (p, p') = ({imported.p}, {imported.pp}), expected ({label.p}, {label.pp})"
        )
    if (imported.abar, imported.bbar) not in symmetry_orbit(label):
        raise ParameterError("character file label is not in the tau/sigma orbit of the expected label")
    notes.append(f"character data source: {source}")
    if chi.order < order:
        notes.append(f"character data ends at degree {chi.order}")
    return [("", lhs, mul(prefactor.truncate(chi.order) if chi.order < order else prefactor, chi.truncate(min(order, chi.order))))], notes


def _check_conj1(p):
    if p["alpha"] < 1 or p["beta"] < 1 or gcd(p["alpha"], p["beta"]) != 1:
        return "need coprime alpha, beta >= 1"
    if not p["w"]:
        return "w must be nonempty"
    n = p["alpha"] + p["beta"]
    if any(not 0 <= x < n for x in p["w"]):
        return f"need 0 <= w_i < alpha + beta = {n}"
    return None


def _factors_m0():
    return [
        BivariateFactor(1, 0, 4, (1, 2, 3)),
        BivariateFactor(1, 1, 4, (1, 2, 3)),
        BivariateFactor(4, 1),
        BivariateFactor(4, 2),
    ]


def _factors_m1():
    # n -> 2n-1 and 4n-2 are the odd and 2 mod 4 indices of t^i
    return [
        BivariateFactor(1, 0, 4, (2,), power=1),
        BivariateFactor(1, 0, 2, (1,), power=-2),
        BivariateFactor(1, 1, 4, (2,), power=-2),
        BivariateFactor(1, 2, 4, (2,), power=-1),
        BivariateFactor(4, 1, power=-2),
    ]


def _build_conj2(w, factors):
    def build(p, order, ctx):
        lhs = poincare_series(2, Cocharacter(1, 1, w), order, ctx.source)
        return [("", lhs, bivariate_product(factors(), order))], []
    return build


def _build_oldconj(p, order, ctx):
    a, b = p["alpha"], p["beta"]
    n = a + b
    lhs = poincare_series(1, Cocharacter(a, b, (0,)), order, ctx.source)
    factors = [
        BivariateFactor(1, 0, n, tuple(range(1, n))),
        BivariateFactor(n, 1),
    ]
    return [("", lhs, bivariate_product(factors, order))], []


def _check_coprime(p):
    if p["alpha"] < 1 or p["beta"] < 1 or gcd(p["alpha"], p["beta"]) != 1:
        return "need coprime alpha, beta >= 1"
    return None


def _build_vir(p, order, ctx):
    label = MinimalModelLabel(p["p"], p["pp"], p["r"], p["s"])
    notes = [] if label.coprime else [f"label ({label.p}, {label.pp}) is not coprime"]
    return [("", virasoro_char(label, order), virasoro_char(label.reflected(), order))], notes


def _check_vir(p):
    try:
        MinimalModelLabel(p["p"], p["pp"], p["r"], p["s"])
    except ValueError as exc:
        return str(exc)
    return None


def _grid_rm(rs):
    return lambda: [{"r": r, "m": m} for r in rs for m in range(r + 1)]


def _grid_km(ks):
    return lambda: [{"k": k, "m": m} for k in ks for m in range(k + 1)]


_R = Param("r")
_M = Param("m")
_K = Param("k")
_ALPHA = Param("alpha")
_BETA = Param("beta")

_SCHEMAS = [
    IdentitySchema(
        "THM1", "main theorem: components of the homogeneous fixed locus as (-q)_inf times a residue product",
        (_R, _M), "r >= 1, 0 <= m <= r", False, _build_thm1, _rm, _grid_rm((1, 2, 3)),
    ),
    IdentitySchema(
        "THM1-CHAR", "odd-rank character form: (-q)_inf times the normalized (2, r+2) character (1, m+1)",
        (_R, _M), "r >= 1, 0 <= m <= r", False, _build_thm1_char, _rm, _grid_rm((1, 2, 3)),
    ),
    IdentitySchema(
        "FERM-RHO", "fermionic rho-sum for the generating series of S(r, m)",
        (_R, _M), "r >= 1, 0 <= m <= r", False, _build_ferm_rho, _rm, _grid_rm((1, 2, 3, 4)),
    ),
    IdentitySchema(
        "FERM-ALT", "marker transformation: rho-sum equals the alternating-index sum",
        (_R, _M), "r >= 1, 0 <= m <= r-1", False, _build_ferm_alt,
        lambda p: _rm(p) or ("need m <= r-1" if p["m"] == p["r"] else None),
        lambda: [{"r": r, "m": m} for r in (1, 2, 3, 4) for m in range(r)],
    ),
    IdentitySchema(
        "REDUCE-ODD", "odd rank 2k+1: reduction of the rho-sum to a k-fold sum",
        (_K, _M), "k >= 0, 0 <= m <= k", False, _build_reduce_odd, _km(0), _grid_km((0, 1, 2)),
    ),
    IdentitySchema(
        "REDUCE-EVEN", "even rank 2k: reduction of the rho-sum to a k-fold sum with (-q)_{lam_1}",
        (_K, _M), "k >= 1, 0 <= m <= k", False, _build_reduce_even, _km(1), _grid_km((1, 2)),
    ),
    IdentitySchema(
        "EVEN-PRODUCT", "even rank 2k: k-fold sum against (-q)_inf times the mod 2k+2 residue product",
        (_K, _M), "k >= 1, 0 <= m <= k", False, _build_even_product, _km(1), _grid_km((1, 2, 3)),
    ),
    IdentitySchema(
        "GORDON-J", "Gordon-Andrews: J_{k+1,m+1}(0; 1; q) as the product avoiding 0, +-(m+1) mod 2k+3",
        (_K, _M), "k >= 0, 0 <= m <= k", False, _build_gordon, _km(0), _grid_km((0, 1, 2, 3)),
    ),
    IdentitySchema(
        "J-RECURSION", "functional equation J_{k,i} - J_{k,i-1} = (xq)^{i-1} J_{k,k-i+1}(0; xq; q) at x = q^e",
        (_K, Param("i"), Param("e", default=0)), "k >= 1, 1 <= i <= k, e >= 0", False, _build_jrec,
        lambda p: None if p["k"] >= 1 and 1 <= p["i"] <= p["k"] and p["e"] >= 0 else "need k >= 1, 1 <= i <= k, e >= 0",
        lambda: [{"k": k, "i": i, "e": e} for k in (1, 2, 3, 4) for i in range(1, k + 1) for e in (0, 1)],
    ),
    IdentitySchema(
        "CORTEEL-E", "Corteel E_{k+1,m+1}(1/q, q) against (-q)_inf (G_{m+1} + G_m) mod 2k+2",
        (_K, _M), "k >= 1, 0 <= m <= k", False, _build_corteel, _km(1), _grid_km((1, 2, 3)),
    ),
    IdentitySchema(
        "CORTEEL-E-SUM", "Corteel E_{k+1,m+1}(1/q, q) against the weighted marker combination 2(S_0+..+S_{m-1}) + S_m",
        (_K, _M), "k >= 1, 0 <= m <= k", False, _build_corteel_sum, _km(1), _grid_km((1, 2, 3)),
    ),
    IdentitySchema(
        "APPROX-LEMMAS", "transformation rules under the two summation functionals (family 1 and 2)",
        (Param("family"), _R), "family in {1, 2}, r >= 1", False, _build_approx,
        lambda p: None if p["family"] in (1, 2) and p["r"] >= 1 else "need family in {1, 2} and r >= 1",
        lambda: [{"family": 1, "r": r} for r in (1, 2, 3, 4)] + [{"family": 2, "r": k} for k in (1, 2, 3)],
    ),
    IdentitySchema(
        "CONJ1", "conjecture for arbitrary (alpha, beta): components via quantum continuous gl_inf characters",
        (_ALPHA, _BETA, Param("w", "list")), "alpha, beta coprime, 0 <= w_i < alpha + beta", False,
        _build_conj1, _check_conj1,
        lambda: [{"alpha": 1, "beta": 1, "w": [1] * m + [0] * (r - m)} for r in (1, 2, 3) for m in range(r + 1)],
    ),
    IdentitySchema(
        "CONJ2-M0", "Betti-number conjecture for M(2, n), cocharacter (1, 1, (0, 0))",
        (), "t-order", True, _build_conj2((0, 0), _factors_m0), lambda p: None, lambda: [{}],
    ),
    IdentitySchema(
        "CONJ2-M1", "Betti-number conjecture for M(2, n), cocharacter (1, 1, (0, 1))",
        (), "t-order", True, _build_conj2((0, 1), _factors_m1), lambda p: None, lambda: [{}],
    ),
    IdentitySchema(
        "OLDCONJ", "Betti-number conjecture for Hilbert schemes M(1, n) under (alpha, beta)",
        (_ALPHA, _BETA), "alpha, beta coprime, t-order", True, _build_oldconj, _check_coprime,
        lambda: [{"alpha": a, "beta": b} for a, b in ((1, 1), (1, 2), (1, 3), (2, 3))],
    ),
    IdentitySchema(
        "VIR-REFLECT", "normalized character symmetry (r, s) -> (p - r, p' - s)",
        (Param("p"), Param("pp"), _R, Param("s")), "1 < p < p', 1 <= r < p, 1 <= s < p'", False,
        _build_vir, _check_vir,
        lambda: [
            {"p": p, "pp": pp, "r": r, "s": s}
            for p, pp in ((2, 5), (2, 7), (3, 4))
            for r in range(1, p)
            for s in range(1, pp)
        ],
    ),
]

_BY_NAME = {s.name: s for s in _SCHEMAS}


def catalog() -> list[IdentitySchema]:
    return list(_SCHEMAS)


def schema(name: str) -> IdentitySchema:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownIdentity(f"unknown identity {name!r}; known: {', '.join(_BY_NAME)}") from None


@dataclass
class IdentityCase:
    name: str
    params: dict
    order: int

    def normalized(self) -> dict:
        """Params in schema order with defaults filled; raises ParameterError."""
        sch = schema(self.name)
        known = {p.name for p in sch.params}
        extra = set(self.params) - known
        if extra:
            raise ParameterError(f"{self.name}: unknown parameter(s) {sorted(extra)}")
        out = {}
        for p in sch.params:
            if p.name in self.params:
                v = self.params[p.name]
            elif p.default is not None:
                v = p.default
            else:
                raise ParameterError(f"{self.name}: missing parameter {p.name}")
            if p.kind == "list":
                if isinstance(v, int):
                    v = [v]
                v = [int(x) for x in v]
            elif not isinstance(v, int) or isinstance(v, bool):
                raise ParameterError(f"{self.name}: parameter {p.name} must be an integer")
            out[p.name] = v
        if self.order < 0:
            raise ParameterError("order must be nonnegative")
        problem = sch.check(out)
        if problem:
            raise ParameterError(f"{self.name}: {problem}")
        return out


def run_case(case: IdentityCase, ctx: Optional[Context] = None) -> Report:
    """Evaluate both sides and report the first mismatch.

    Unknown names raise ``UnknownIdentity``; invalid parameters raise
    ``ParameterError``.  Uncomputable sides (non-compact regime, missing
    character data) give a report with status ``refused``.
    """
    ctx = ctx or Context()
    sch = schema(case.name)
    params = case.normalized()
    start = time.perf_counter()
    report = Report(case.name, params, case.order, EQUAL, sch.anchor)
    try:
        comparisons, notes = sch.build(params, case.order, ctx)
    except Refusal as exc:
        report.status = REFUSED
        report.reason = exc.reason
        report.notes = exc.notes
        if exc.lhs is not None:
            report.lhs_series = exc.lhs.to_json()
    except NonCompactError as exc:
        report.status = REFUSED
        report.reason = str(exc)
    else:
        report.notes = list(notes)
        checked = 0
        for label, lhs, rhs in comparisons:
            diff = first_difference(lhs, rhs)
            checked += 1
            if diff is not None:
                report.status = MISMATCH
                report.first_mismatch = diff
                if label:
                    report.notes.append(f"first failing instance: {label}")
                break
    report.runtime = time.perf_counter() - start
    return report


def default_cases(order: int) -> list[IdentityCase]:
    """The fully computable grid used by verify-all, in catalog order."""
    return [IdentityCase(s.name, dict(p), order) for s in _SCHEMAS for p in s.grid()]


def run_all(cases: Sequence[IdentityCase], ctx: Optional[Context] = None) -> list[Report]:
    ctx = ctx or Context()
    return [run_case(c, ctx) for c in cases]


def exit_status(reports: Sequence[Report]) -> int:
    statuses = {r.status for r in reports}
    if REFUSED in statuses:
        return 3
    if MISMATCH in statuses:
        return 1
    return 0
