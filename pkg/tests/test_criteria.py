import json
from fractions import Fraction
from math import factorial as fact
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from fockcalc.calculus import AnalyticPoly, MixedSymbol, sum_decomposition
from fockcalc.criteria import (
    HypoCase,
    HypothesisError,
    QuasiCase,
    TwoTermSymbol,
    classify_hypo,
    classify_quasi,
    master_bracket,
    necessary_sweep,
    quasi_coefficient,
    remark24_check,
    remark27_bound,
    thm21_inequality,
    thm31_classify,
    zn_c_form,
)
from fockcalc.dsl import parse_poly, parse_symbol
from fockcalc.scalar import GaussianRational as G
from fockcalc.scalar import PiScalar

SCHEMAS = Path(__file__).resolve().parents[1] / "src" / "fockcalc" / "schemas"

small = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
coeffs = st.builds(G, small, small)
UNIMODULAR = [G(1), G(0, 1), G(-1), G(Fraction(3, 5), Fraction(4, 5))]


def _schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def _valid_hypo_params(limit=4):
    for p in range(limit + 1):
        for n in range(p + 1):
            for s in range(limit + 1):
                for t in range(s, limit + 1):
                    if p - n != t - s:
                        yield p, n, s, t


def test_two_term_validation():
    with pytest.raises(HypothesisError):
        TwoTermSymbol(1, 1, 1, 2, 0, 1)
    with pytest.raises(HypothesisError):
        TwoTermSymbol(1, 1, 2, 1, 3, 1)
    sym = TwoTermSymbol.from_symbol(parse_symbol("z*zb^3 + z^2*zb"))
    assert (sym.p, sym.n, sym.s, sym.t) == (2, 1, 1, 3)
    assert sym.symbol() == parse_symbol("z*zb^3 + z^2*zb")
    with pytest.raises(HypothesisError):
        TwoTermSymbol.from_symbol(parse_symbol("z + z^2 + zb"))
    with pytest.raises(HypothesisError):
        TwoTermSymbol.from_symbol(parse_symbol("zb + z*zb^3"))


def test_single_term_never_lands_in_h3():
    for p in range(5):
        for n in range(5):
            sym = TwoTermSymbol.from_symbol(MixedSymbol({(p, n): 1}))
            assert classify_hypo(sym) is not HypoCase.H3
            assert abs(sym.p - sym.n) != abs(sym.t - sym.s)


def test_case_tags_are_exclusive():
    for p, n, s, t in _valid_hypo_params():
        sym = TwoTermSymbol(1, 1, p, n, s, t)
        h1 = t > s + 1 and p == n + 1
        h2 = t > s + 1 and p > n + 1
        h3 = t == s + 1 and p > n + 1
        assert h1 + h2 + h3 <= 1
        expected = HypoCase.H1 if h1 else HypoCase.H2 if h2 else HypoCase.H3 if h3 else HypoCase.OUT_OF_SCOPE
        assert classify_hypo(sym) is expected
        q = {(True, True): "Qa", (False, True): "Qb", (True, False): "Qc", (False, False): "Qd"}
        assert classify_quasi(sym).value == q[(p != n, s != t)]


def test_thm21_h1_example():
    sym = TwoTermSymbol(1, 1, 2, 1, 1, 3)
    rep = thm21_inequality(sym, 1, 4)
    # 7!^2/6! - 6!^2/4!  versus  8!^2/7! - 6!^2/3!
    lhs = Fraction(fact(7) ** 2, fact(6)) - Fraction(fact(6) ** 2, fact(4))
    rhs = Fraction(fact(8) ** 2, fact(7)) - Fraction(fact(6) ** 2, fact(3))
    assert (lhs, rhs) == (13680, 236160)
    assert rep.case == "H1"
    assert (rep.lhs, rep.rhs, rep.holds) == (lhs, rhs, False)
    assert rep.cross_check == lhs - rhs


def test_thm21_h2_example_against_form():
    sym = TwoTermSymbol(1, 1, 3, 1, 1, 4)
    rep = thm21_inequality(sym, 1, 5)
    assert rep.case == "H2"
    assert rep.lhs - rep.rhs == rep.cross_check
    assert rep.holds == (rep.cross_check >= 0)


def test_thm21_h3_printed_and_derived():
    sym = TwoTermSymbol(2, 1, 4, 1, 1, 2)
    m, k = 1, 5
    printed = thm21_inequality(sym, m, k)
    assert printed.case == "H3" and printed.variant == "printed"
    # coefficient-free reduction: (p+k+m-1)!^2((p+k+m)^2-1) vs (s+k+m)!^2((s+k+m+1)^2-(k+m+1)(k+m))
    assert printed.lhs == fact(9) ** 2 * (10**2 - 1)
    assert printed.rhs == fact(7) ** 2 * (8**2 - 7 * 6)
    derived = thm21_inequality(sym, m, k, variant="derived")
    assert derived.variant == "derived"
    assert derived.lhs - derived.rhs == derived.cross_check


def test_thm21_preconditions():
    with pytest.raises(HypothesisError, match="k > p, t"):
        thm21_inequality(TwoTermSymbol(1, 1, 2, 1, 1, 3), 1, 3)
    with pytest.raises(HypothesisError, match=r"\|p - n\| != \|t - s\|"):
        thm21_inequality(TwoTermSymbol(1, 1, 2, 1, 1, 2), 1, 5)


def test_master_bracket_equals_form_on_grid():
    for p, n, s, t in _valid_hypo_params(3):
        sym = TwoTermSymbol(G(1, 2), G(-3, 1), p, n, s, t)
        for m in range(3):
            for k in range(max(p, t) + 1, 8):
                rep = thm21_inequality(sym, m, k, variant="derived")
                assert master_bracket(sym, m, k) == rep.cross_check


def test_analytic_single_term_always_holds():
    sym = TwoTermSymbol.from_symbol(parse_symbol("z^2"))
    res = necessary_sweep(sym, 1, range(4, 12))
    assert res.all_hold
    assert all(r.rhs == 0 and r.lhs > 0 for r in res.reports)


def test_radial_single_term_holds_with_equality():
    sym = TwoTermSymbol.from_symbol(parse_symbol("3*|z|^4"))
    res = necessary_sweep(sym, 2, range(4, 10))
    assert res.all_hold
    assert all(r.lhs == r.rhs and r.cross_check == 0 for r in res.reports)


def test_sweep_first_failure_and_threads(monkeypatch):
    sym = TwoTermSymbol.from_symbol(parse_symbol("z*zb^3 + z^2*zb"))
    serial = necessary_sweep(sym, 1, range(4, 11))
    assert serial.first_failing_k == 4
    monkeypatch.setenv("FOCKCALC_THREADS", "4")
    threaded = necessary_sweep(sym, 1, range(4, 11))
    assert threaded.to_dict() == serial.to_dict()
    assert [r.k for r in threaded.reports] == list(range(4, 11))
    jsonschema.validate(serial.to_dict(), _schema("sweep"))


def test_remark24_examples():
    rep = remark24_check(TwoTermSymbol(1, 2, 1, 0, 2, 3), 1)
    assert (rep.lhs, rep.rhs, rep.holds) == (12, 43776, False)
    assert rep.lhs == fact(2) ** 2 * (9 - 6)
    assert rep.rhs == 4 * fact(4) ** 2 * (25 - 6)
    same = remark24_check(TwoTermSymbol(1, 1, 2, 1, 1, 2), 1)
    assert same.holds and same.lhs == same.rhs
    assert remark24_check(TwoTermSymbol(1, 0, 2, 1, 1, 2), 1).holds
    with pytest.raises(HypothesisError):
        remark24_check(TwoTermSymbol(1, 1, 3, 1, 1, 2), 1)


def _zn_c_oracle(n, s, C, m, f):
    # hyponormality form of z^n + C|z|^{2s} at f, summed term by term
    return sum_decomposition(MixedSymbol({(n, 0): 1}), MixedSymbol({(s, s): C}), f, m)


def test_zn_c_examples():
    f = parse_poly("1 + z")
    ok = zn_c_form(1, 1, 1, 1, f)
    assert ok.full == PiScalar(2 + 2 + 4) and ok.full_holds
    bad = zn_c_form(1, 1, -2, 1, f)
    assert bad.full == PiScalar(2 + 2 - 8) and not bad.full_holds
    vacuous = zn_c_form(3, 1, G(5, 5), 1, f)
    assert vacuous.reduced == 0 and vacuous.reduced_holds
    with pytest.raises(HypothesisError):
        zn_c_form(0, 1, 1, 1, f)


def test_zn_c_low_degree_reduction():
    for n in range(2, 5):
        for m in range(3):
            a0, a1 = G(2, -1), G(Fraction(1, 2), 3)
            res = zn_c_form(n, 2, G(7, 1), m, AnalyticPoly({0: a0, 1: a1}))
            assert res.full == PiScalar(a0.abs_sq() * fact(n + m) + a1.abs_sq() * fact(1 + n + m))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 3),
    coeffs,
    st.integers(0, 2),
    st.lists(coeffs, min_size=1, max_size=7),
)
def test_zn_c_matches_sum_decomposition(n, s, C, m, c):
    f = AnalyticPoly.from_coeffs(c)
    assert zn_c_form(n, s, C, m, f).full == _zn_c_oracle(n, s, C, m, f)


def test_remark27_values():
    assert remark27_bound(1, 1) == 1
    assert remark27_bound(1, 2) == Fraction(1, 36)
    assert remark27_bound(0, 1) == 1
    for m in range(8):
        for s in range(1, 8):
            assert remark27_bound(m, s) == Fraction(fact(1 + m) ** 2, s * s * fact(m + s) ** 2) <= 1
    with pytest.raises(HypothesisError):
        remark27_bound(1, 0)


def _qb_oracle(p, s, t, m, k):
    lhs = Fraction(fact(p + k + m) * fact(t + k + m) ** 2, fact(k + m) * fact(t + k + m - s))
    rhs = Fraction(fact(s + k + m) ** 2 * fact(s + k + m + p - t), fact(s + k + m - t) ** 2)
    return lhs, rhs


def test_qb_sides_at_small_k():
    # the sides at k = 4 for (1,1,1,3); the classifier itself needs k > 6 here
    assert _qb_oracle(1, 1, 3, 1, 4) == (1935360, 345600)
    assert _qb_oracle(1, 1, 3, 1, 4)[0] == Fraction(fact(6) * fact(8) ** 2, fact(5) * fact(7))
    with pytest.raises(HypothesisError, match="k > 2p, 2t"):
        thm31_classify(TwoTermSymbol(1, 1, 1, 1, 1, 3), 1, 4)


def test_thm31_qb():
    sym = TwoTermSymbol(G(2, 1), 3, 1, 1, 1, 3)
    for k in range(7, 12):
        rep = thm31_classify(sym, 1, k)
        assert rep.case is QuasiCase.QB and rep.outcome == "identity-required"
        assert (rep.lhs, rep.rhs) == _qb_oracle(1, 1, 3, 1, k)
        assert rep.cross_check == quasi_coefficient(sym) * (rep.rhs - rep.lhs)
        assert rep.holds == (rep.cross_check == 0)


def test_thm31_as_stated_variant():
    sym = TwoTermSymbol(1, 1, 2, 2, 1, 3)
    k, m = 7, 1
    stated = thm31_classify(sym, m, k, as_stated=True)
    assert stated.variant == "as-stated"
    assert stated.lhs == Fraction(fact(2 + k + m) * fact(3 + k + m) ** 2, fact(k + m) * fact(3 + k + m + 1))
    assert stated.rhs == Fraction(fact(1 + k + m) ** 2 * fact(1 + k + m - 2 - 3), fact(1 + k + m - 3) ** 2)
    assert thm31_classify(sym, m, k).lhs != stated.lhs


def test_thm31_auto_and_degenerate():
    rep = thm31_classify(TwoTermSymbol(1, 1, 2, 1, 1, 3), 1, 7)
    assert rep.case is QuasiCase.QA and rep.outcome == "auto-quasinormal" and rep.holds is None
    rep = thm31_classify(TwoTermSymbol(1, 1, 1, 1, 2, 2), 1, 5)
    assert rep.case is QuasiCase.QD and rep.outcome == "auto-quasinormal"
    assert rep.cross_check == 0
    rep = thm31_classify(TwoTermSymbol(1, 0, 1, 1, 1, 3), 1, 7)
    assert rep.outcome == "degenerate"
    jsonschema.validate(rep.to_dict(), _schema("quasi_report"))


def test_thm31_qc_identity_grid():
    for p in range(4):
        for n in range(p):
            for s in range(4):
                sym = TwoTermSymbol(G(1, -2), G(3, 1), p, n, s, s)
                for m in range(3):
                    for k in range(2 * max(p, s) + 1, 10):
                        rep = thm31_classify(sym, m, k)
                        assert rep.case is QuasiCase.QC
                        assert rep.cross_check == quasi_coefficient(sym) * (rep.rhs - rep.lhs)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(list(_valid_hypo_params(3))),
    coeffs.filter(bool),
    coeffs,
    st.sampled_from(UNIMODULAR),
    st.sampled_from(UNIMODULAR),
    st.integers(0, 2),
)
def test_verdicts_invariant_under_unimodular_scaling(params, a, b, u, v, m):
    sym = TwoTermSymbol(a, b, *params)
    turned = sym.with_coefficients(a * u, b * v)
    k = max(sym.p, sym.t) + 1
    assert thm21_inequality(sym, m, k).holds == thm21_inequality(turned, m, k).holds
    assert thm21_inequality(sym, m, k).cross_check == thm21_inequality(turned, m, k).cross_check


def test_report_schema():
    rep = thm21_inequality(TwoTermSymbol(G(1, 1), Fraction(1, 3), 2, 1, 1, 3), 2, 5)
    data = json.loads(json.dumps(rep.to_dict()))
    jsonschema.validate(data, _schema("criterion_report"))
    assert Fraction(data["lhs"]) == rep.lhs
    jsonschema.validate(remark24_check(TwoTermSymbol(1, 2, 1, 0, 2, 3), 1).to_dict(), _schema("criterion_report"))
    jsonschema.validate(zn_c_form(1, 1, 1, 1, parse_poly("1 + z")).to_dict(), _schema("zn_c_report"))
