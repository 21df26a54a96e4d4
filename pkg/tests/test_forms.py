import itertools
import json
from fractions import Fraction
from math import factorial as fact
from pathlib import Path

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockcalc.calculus import AnalyticPoly, MixedSymbol, hyponormality_form, quasinormality_defect
from fockcalc.dsl import parse_poly, parse_symbol
from fockcalc.forms import (
    FormMatrix,
    HermForm,
    commutator_gram,
    psd_test,
    quasi_defect_matrix,
    quasi_zero_test,
)
from fockcalc.scalar import GaussianRational as G
from fockcalc.scalar import PiScalar

SCHEMAS = Path(__file__).resolve().parents[1] / "src" / "fockcalc" / "schemas"

small = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3))
coeffs = st.builds(G, small, small)
symbols = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), coeffs, min_size=1, max_size=3
).map(MixedSymbol)


def _schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def _pi_matrix(rows):
    return [[PiScalar(x) for x in row] for row in rows]


def test_gram_conjugate_shift():
    G_ = commutator_gram(parse_symbol("zb"), 0, 1)
    assert G_.entries == _pi_matrix([[-1, 0], [0, -1]])


def test_gram_shift_diagonal():
    for m in range(3):
        G_ = commutator_gram(parse_symbol("z"), m, 3)
        # T* z^0 = 0, so the first entry is the norm of z rather than m!
        expected = [fact(1 + m)] + [fact(k + m) for k in range(1, 4)]
        for j in range(4):
            for k in range(4):
                assert G_[j, k] == PiScalar(expected[k] if j == k else 0)


def test_gram_zero_symbol():
    assert commutator_gram(MixedSymbol(), 1, 3).is_zero()


def test_gram_rejects_negative_n():
    with pytest.raises(ValueError):
        commutator_gram(parse_symbol("z"), 1, -1)


@settings(max_examples=40, deadline=None)
@given(symbols, st.integers(0, 2), st.lists(coeffs, min_size=1, max_size=5))
def test_gram_reproduces_form(phi, m, c):
    N = len(c) - 1
    G_ = commutator_gram(phi, m, N)
    assert G_.is_hermitian()
    f = AnalyticPoly.from_coeffs(c)
    assert G_.evaluate(f) == hyponormality_form(phi, f, m)
    assert G_.evaluate(c) == hyponormality_form(phi, f, m)


def test_gram_diagonal_matches_bracket():
    a, b = G(1, 1), G(2)
    p, n, s, t = 3, 1, 1, 4
    phi = MixedSymbol({(p, n): a, (s, t): b})
    m = 1
    G_ = commutator_gram(phi, m, 9)

    def part(x, y, k):
        return Fraction(fact(x + k + m) ** 2, fact(x + k + m - y)) - Fraction(fact(y + k + m) ** 2, fact(y + k + m - x))

    for k in range(max(p, t) + 1, 10):
        assert G_[k, k] == PiScalar(a.abs_sq() * part(p, n, k) + b.abs_sq() * part(s, t, k))


def test_herm_form_rejects_non_hermitian():
    with pytest.raises(ValueError):
        HermForm(_pi_matrix([[0, 1], [2, 0]]))
    with pytest.raises(ValueError):
        psd_test(FormMatrix(_pi_matrix([[0, 1], [2, 0]])))


def test_psd_examples():
    v = psd_test(HermForm(_pi_matrix([[-1, 0], [0, -1]])))
    assert v.status == "NotPSD"
    assert v.witness == AnalyticPoly({0: 1})
    assert v.witness_value == PiScalar(-1)

    v = psd_test(HermForm(_pi_matrix([[0, 1], [1, 0]])))
    assert v.status == "NotPSD"
    assert v.witness == parse_poly("1 - z")
    assert v.witness_value == PiScalar(-2)

    assert psd_test(commutator_gram(parse_symbol("z"), 1, 4)).psd
    assert psd_test(HermForm(_pi_matrix([[0, 0], [0, 0]]))).psd


def test_psd_complex_off_diagonal_witness():
    # eigenvalues +-|i|; witness e0 - conj(i) e1 = 1 + i z gives -2
    v = psd_test(HermForm([[PiScalar(0), PiScalar(G(0, 1))], [PiScalar(G(0, -1)), PiScalar(0)]]))
    assert v.witness == AnalyticPoly({0: 1, 1: G(0, 1)})
    assert v.witness_value == PiScalar(-2)


def test_psd_needs_elimination():
    # positive diagonal but indefinite: [[1, 2], [2, 1]]
    v = psd_test(HermForm(_pi_matrix([[1, 2], [2, 1]])))
    assert not v.psd
    # pivot on entry 0, then e1 - 2 e0 scaled to lead 1: 1 - z/2 with value 1 - 2 + 1/4
    assert v.witness == parse_poly("1 - 1/2*z")
    assert v.witness_value == PiScalar(Fraction(-3, 4))


def _brute_psd(rows, bound=2):
    n = len(rows)
    for c in itertools.product(range(-bound, bound + 1), repeat=n):
        if sum(c[j] * rows[j][k] * c[k] for j in range(n) for k in range(n)) < 0:
            return False
    return True


def _sym_matrix(draw_entries, n):
    rows = [[0] * n for _ in range(n)]
    it = iter(draw_entries)
    for j in range(n):
        for k in range(j, n):
            rows[j][k] = rows[k][j] = next(it)
    return rows


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(-3, 3), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2))))
def test_psd_agrees_with_eigenvalues_real(data):
    n, entries = data
    rows = _sym_matrix(entries, n)
    verdict = psd_test(HermForm(_pi_matrix(rows)))
    eig_psd = np.linalg.eigvalsh(np.array(rows, dtype=float)).min() >= -1e-9
    assert verdict.psd == eig_psd
    if verdict.psd:
        assert _brute_psd(rows)
    else:
        f = verdict.witness
        assert f.coeff(int(min(f.terms))) == 1
        value = sum(
            f.coeff(j).conj() * rows[j][k] * f.coeff(k) for j in range(n) for k in range(n)
        )
        assert PiScalar(value) == verdict.witness_value < 0


@settings(max_examples=80, deadline=None)
@given(symbols, st.integers(0, 2), st.integers(0, 4))
def test_psd_on_symbols(phi, m, N):
    G_ = commutator_gram(phi, m, N)
    verdict = psd_test(G_)
    dense = np.array([[complex(x) for x in row] for row in G_.coefficients()])
    lam = np.linalg.eigvalsh(dense)
    scale = max(1.0, np.abs(dense).max())
    if verdict.psd:
        assert lam.min() >= -1e-9 * scale
    else:
        assert hyponormality_form(phi, verdict.witness, m) == verdict.witness_value < 0
        assert lam.min() < 0


def test_quasi_matrix_shift():
    Q = quasi_defect_matrix(parse_symbol("z"), 0, 2)
    for j in range(3):
        for k in range(3):
            want = fact(k + 1) if j == k + 1 else 0
            assert Q[j, k] == PiScalar(want)
    zt = quasi_zero_test(Q)
    assert (zt.zero, zt.j, zt.k, zt.value) == (False, 1, 0, PiScalar(1))


def test_quasi_matrix_constant_and_zero():
    Q = quasi_defect_matrix(MixedSymbol.constant(G(2, 1)), 1, 3)
    assert Q.is_zero()
    assert quasi_zero_test(Q).zero


def test_quasi_matrix_diagonal_probe():
    Q = quasi_defect_matrix(parse_symbol("2*z^3 + 2*z^3*zb + zb^3 + 3*z*zb^3"), 1, 1)
    assert Q[1, 1] == 0


@settings(max_examples=30, deadline=None)
@given(symbols, st.integers(0, 2), st.lists(coeffs, min_size=1, max_size=4), st.lists(coeffs, min_size=1, max_size=4))
def test_quasi_matrix_is_sesquilinear_defect(phi, m, c, d):
    N = max(len(c), len(d)) - 1
    Q = quasi_defect_matrix(phi, m, N)
    f, g = AnalyticPoly.from_coeffs(c), AnalyticPoly.from_coeffs(d)
    total = G(0)
    for j in range(N + 1):
        for k in range(N + 1):
            total = total + g.coeff(j).conj() * Q[j, k].coeff * f.coeff(k)
    assert PiScalar(total) == quasinormality_defect(phi, f, g, m)


def test_quasi_matrix_published_symbol():
    phi = parse_symbol("4*zb^3*z^2 + 6*z^3*zb")
    Q = quasi_defect_matrix(phi, 1, 4)
    assert not quasi_zero_test(Q).zero
    f = parse_poly("z - z^4")
    assert Q.evaluate(f) == quasinormality_defect(phi, f, f, 1)


def test_matrix_json_roundtrip():
    G_ = commutator_gram(parse_symbol("(1+i)*z^2*zb + 3*zb^2"), 1, 3)
    data = json.loads(G_.to_json())
    jsonschema.validate(data, _schema("form_matrix"))
    assert data["unit"] == "pi"
    assert FormMatrix.from_dict(data) == G_
    with pytest.raises(ValueError):
        FormMatrix.from_dict(dict(data, unit="1"))


def test_psd_verdict_schema():
    schema = _schema("psd_verdict")
    jsonschema.validate(psd_test(commutator_gram(parse_symbol("z"), 1, 2)).to_dict(), schema)
    bad = psd_test(commutator_gram(parse_symbol("zb"), 1, 2)).to_dict()
    jsonschema.validate(bad, schema)
    assert PiScalar.parse(bad["witness_value"]) < 0


def test_psd_finds_negativity_outside_small_grid():
    # the negative cone of [[96, 672], [672, 3744]] needs c0/c2 between about -10.2 and -3.8,
    # so no vector with entries in -2..2 sees it
    G_ = commutator_gram(parse_symbol("2*z^2*zb^2 + z^3*zb"), 1, 2)
    rows = [[e.coeff.re for e in row] for row in G_.entries]
    assert rows == [[96, 0, 672], [0, 600, 0], [672, 0, 3744]]
    assert _brute_psd(rows)
    v = psd_test(G_)
    assert v.witness == parse_poly("1 - 1/7*z^2")
    assert v.witness_value == PiScalar(Fraction(-960, 49))
