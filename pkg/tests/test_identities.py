import pytest

from fixedloci.census import Cocharacter, h0_series
from fixedloci.characters import conjecture1_label, sigma, tau
from fixedloci.identities import (
    Context,
    IdentityCase,
    ParameterError,
    UnknownIdentity,
    catalog,
    compare,
    default_cases,
    exit_status,
    run_case,
)
from fixedloci.qseries import MINUS, BivariateSeries, TruncatedSeries, invert, mul, residue_product


def S(*c):
    return TruncatedSeries(len(c) - 1, tuple(c))


def test_compare_basics():
    a = S(1, 2, 3, 4, 5, 6, 7, 8, 9)
    assert compare(a, a, "x").status == "equal"
    b = S(1, 2, 3, 4, 5, 6, 7, 0, 9)
    rep = compare(a, b, "x")
    assert rep.status == "mismatch"
    assert rep.first_mismatch == {"degree": [7], "lhs": 8, "rhs": 0}
    with pytest.raises(TypeError):
        compare(a, BivariateSeries.one(2), "x")


def test_compare_bivariate_lexicographic():
    a = BivariateSeries.from_polys([(1,), (1, 1), (2, 5)], 2)
    b = BivariateSeries.from_polys([(1,), (1, 2), (3, 5)], 2)
    assert compare(a, b).first_mismatch == {"degree": [1, 1], "lhs": 1, "rhs": 2}


def test_catalog_metadata():
    entries = {s.name: s.describe() for s in catalog()}
    assert entries["THM1"]["params"] == ["r", "m"]
    assert "0 <= m <= r" in entries["THM1"]["constraints"]
    assert entries["OLDCONJ"]["params"] == ["alpha", "beta"]
    assert "coprime" in entries["OLDCONJ"]["constraints"] and entries["OLDCONJ"]["order"] == "t-order"
    assert all(e["anchor"] for e in entries.values())


def test_run_case_examples():
    assert run_case(IdentityCase("THM1", {"r": 3, "m": 1}, 8)).status == "equal"
    rep = run_case(IdentityCase("THM1", {"r": 2, "m": 1}, 8))
    assert rep.status == "mismatch"
    assert rep.first_mismatch == {"degree": [2], "lhs": 2, "rhs": 3}
    assert any("open question" in n for n in rep.notes)
    assert run_case(IdentityCase("THM1-CHAR", {"r": 2, "m": 1}, 5)).status == "equal"


def test_run_case_errors():
    with pytest.raises(UnknownIdentity):
        run_case(IdentityCase("NOPE", {}, 3))
    with pytest.raises(ParameterError):
        run_case(IdentityCase("THM1", {"r": 2, "m": 3}, 3))
    with pytest.raises(ParameterError):
        run_case(IdentityCase("THM1", {"r": 2, "m": 1, "k": 1}, 3))
    with pytest.raises(ParameterError):
        run_case(IdentityCase("OLDCONJ", {"alpha": 2, "beta": 4}, 3))
    with pytest.raises(ParameterError):
        run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 1, "w": [2]}, 3))


def test_non_compact_is_refused(monkeypatch):
    # catalog cocharacters are compact by construction; exercise the runner path directly
    from fixedloci import identities
    from fixedloci.identities import IdentitySchema, _h0

    def build(p, order, ctx):
        return [("", _h0(ctx, 2, Cocharacter(1, 1, (2, 0)), order), S(1))], []

    sch = IdentitySchema("TEST-NC", "test", (), "", False, build, lambda p: None)
    monkeypatch.setitem(identities._BY_NAME, "TEST-NC", sch)
    rep = run_case(IdentityCase("TEST-NC", {}, 3))
    assert rep.status == "refused"
    assert "non-compact" in rep.reason
    assert exit_status([rep]) == 3


def test_reports_are_deterministic():
    a = run_case(IdentityCase("CONJ2-M1", {}, 4)).to_json()
    b = run_case(IdentityCase("CONJ2-M1", {}, 4), Context()).to_json()
    assert a == b
    assert "runtime" not in a


def test_prefix_stability_across_orders():
    for name, params in [("THM1", {"r": 2, "m": 1}), ("CORTEEL-E", {"k": 2, "m": 2}), ("OLDCONJ", {"alpha": 1, "beta": 2})]:
        lo = run_case(IdentityCase(name, params, 5))
        hi = run_case(IdentityCase(name, params, 8))
        if lo.status == "mismatch":
            assert lo.first_mismatch == hi.first_mismatch
        else:
            assert hi.status in ("equal", "mismatch")
            if hi.status == "mismatch":
                assert hi.first_mismatch["degree"][-1] > 5 or len(hi.first_mismatch["degree"]) == 2


def test_conj1_matches_thm1_char_for_homogeneous():
    ctx = Context()
    for r in (1, 2, 3):
        for m in range(r + 1):
            w = [1] * m + [0] * (r - m)
            c1 = run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 1, "w": w}, 12), ctx)
            ch = run_case(IdentityCase("THM1-CHAR", {"r": r, "m": m}, 12), ctx)
            assert c1.status == ch.status == "equal"
            assert c1.first_mismatch == ch.first_mismatch


def test_conj1_refuses_without_character_data():
    rep = run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 2, "w": [0]}, 6))
    assert rep.status == "refused"
    assert rep.reason == "character data required"
    assert rep.lhs_series == h0_series(1, Cocharacter(1, 2, (0,)), 6).to_json()
    assert exit_status([rep]) == 3


def _write_char_file(path, p, pp, abar, bbar, series, source="fixture"):
    body = "\n".join(f"{d},{c}" for d, c in enumerate(series))
    fmt = lambda v: ";".join(map(str, v))
    path.write_text(f"# p={p} pp={pp} abar={fmt(abar)} bbar={fmt(bbar)} source={source}\ndegree,coefficient\n{body}\n")


def test_conj1_char_file_plumbing(tmp_path):
    # The fixture is built from the census side itself, so only the file
    # handling and label validation are under test here.
    c = Cocharacter(1, 2, (0,))
    lab = conjecture1_label(c)
    N = 8
    lhs = h0_series(1, c, N)
    chi = mul(lhs, invert(residue_product(1, {0}, MINUS, 3, N)))
    f = tmp_path / "chi.csv"
    _write_char_file(f, lab.p, lab.pp, lab.abar, lab.bbar, chi, source="census-derived fixture")
    rep = run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 2, "w": [0]}, N), Context(char_file=str(f)))
    assert rep.status == "equal"
    assert any("census-derived fixture" in n for n in rep.notes)

    # an orbit-equivalent label is accepted
    _write_char_file(f, lab.p, lab.pp, tau(lab.abar, lab.p), tau(lab.bbar, lab.pp), chi)
    assert run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 2, "w": [0]}, N), Context(char_file=str(f))).status == "equal"
    _write_char_file(f, lab.p, lab.pp, sigma(lab.abar, lab.p), sigma(lab.bbar, lab.pp), chi)
    assert run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 2, "w": [0]}, N), Context(char_file=str(f))).status == "equal"

    # wrong (p, p') or an inadmissible label is rejected
    for args in [(3, 5, (0, 0), (1, 0)), (3, 4, (1, 1), (1, 0))]:
        _write_char_file(f, *args, chi)
        with pytest.raises(ParameterError):
            run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 2, "w": [0]}, N), Context(char_file=str(f)))


def test_conj1_char_file_outside_orbit(tmp_path):
    # rank 2, (alpha, beta) = (1, 2), w = (0, 0): label (3, 5, (0, 0), (2, 0));
    # (1, 1) is admissible but not tau/sigma-equivalent
    f = tmp_path / "chi.csv"
    _write_char_file(f, 3, 5, (0, 0), (1, 1), [1, 0, 0])
    with pytest.raises(ParameterError, match="orbit"):
        run_case(IdentityCase("CONJ1", {"alpha": 1, "beta": 2, "w": [0, 0]}, 2), Context(char_file=str(f)))


def test_default_grid_statuses():
    reps = [run_case(c) for c in default_cases(8)]
    assert all(r.status in ("equal", "mismatch") for r in reps)
    mism = sorted((r.identity, tuple(r.params.values())) for r in reps if r.status == "mismatch")
    # findings: even-rank product forms at m = k, recorded rather than corrected
    assert mism == sorted([
        ("THM1", (2, 1)),
        ("EVEN-PRODUCT", (1, 1)), ("EVEN-PRODUCT", (2, 2)), ("EVEN-PRODUCT", (3, 3)),
        ("CORTEEL-E", (1, 1)), ("CORTEEL-E", (2, 2)), ("CORTEEL-E", (3, 3)),
    ])
    assert exit_status(reps) == 1
