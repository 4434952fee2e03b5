from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modcount.exactnum import qp_evaluate
from modcount.laplace import (
    Const,
    Monomial,
    NotExpandableError,
    TruncatedSeries,
    airy_form_from_volume,
    asymptotic_airy_check,
    closed_form_omega,
    compare_airy_form,
    compare_discrete_form,
    discrete_omega_series,
    first_mismatch,
    laurent_terms,
    series_expand,
    var,
)
from modcount.moduli import n_quasipolynomial


def _coeffs(series):
    return {e: c for e, c in series.coeffs.items()}


# -- series engine ----------------------------------------------------------------


def test_series_examples():
    z = var(0, 1)
    assert _coeffs(series_expand(z**2 / (1 - z**2), 7)) == {(2,): 1, (4,): 1, (6,): 1}
    assert _coeffs(series_expand(z**3 / (1 - z**2) ** 4, 9)) == {(3,): 1, (5,): 4, (7,): 10, (9,): 20}
    z1, z2 = var(0, 2), var(1, 2)
    assert _coeffs(series_expand(1 / (1 - z1 * z2), 4)) == {(0, 0): 1, (1, 1): 1, (2, 2): 1}


def test_not_expandable():
    z = var(0, 1)
    with pytest.raises(NotExpandableError):
        series_expand(1 / z, 4)
    with pytest.raises(NotExpandableError):
        series_expand(1 / (z - z), 4)
    with pytest.raises(NotExpandableError):
        TruncatedSeries(1, 3, {(1,): 1}).reciprocal()


def test_truncation_is_enforced():
    s = TruncatedSeries(2, 3, {(1, 1): 2, (2, 2): 5})
    assert s.coeffs == {(1, 1): Fraction(2)}
    with pytest.raises(ValueError):
        s.coefficient((2, 2))


series2 = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=6,
).map(lambda d: TruncatedSeries(2, 5, d))


@given(series2, series2, series2)
def test_series_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a


@given(series2)
def test_reciprocal_of_units(a):
    u = a + 1 - TruncatedSeries(2, 5, {(0, 0): a.coeffs.get((0, 0), 0)})
    assert u * u.reciprocal() == TruncatedSeries.const(1, 2, 5)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=5).filter(lambda x: x not in (0, 1)))
def test_expression_evaluation_matches_series_shape(x):
    # the expression tree evaluates pointwise, consistent with the algebra
    z = var(0, 1)
    e = (1 + z) ** 2 / (1 - z) - Const(3) * z
    assert e.evaluate([x]) == (1 + x) ** 2 / (1 - x) - 3 * x


def test_first_mismatch_reports_lowest_degree():
    a = TruncatedSeries(2, 4, {(0, 1): 1, (2, 0): 3})
    b = TruncatedSeries(2, 4, {(0, 1): 1, (2, 0): 2, (1, 0): 1})
    assert first_mismatch(a, b) == {"exp": [1, 0], "lhs": "0", "rhs": "1"}
    assert first_mismatch(a, a) is None


def test_laurent_terms():
    e = Const(Fraction(1, 2)) * Monomial((-2, -2)) + Monomial((0, -1))
    assert laurent_terms(e) == {(-2, -2): Fraction(1, 2), (0, -1): 1}
    with pytest.raises(NotExpandableError):
        laurent_terms(1 / (1 - var(0, 1)))


# -- discrete forms -----------------------------------------------------------------


def test_discrete_series_examples():
    s03 = discrete_omega_series(0, 3, 4)
    assert s03.coefficient((0, 0, 1)) == 2
    s11 = discrete_omega_series(1, 1, 9)
    assert s11.coefficient((3,)) == 1
    assert s11.coefficient((2,)) == 0


def test_w11_closed_form():
    assert closed_form_omega("w11", 9) == discrete_omega_series(1, 1, 9)


def test_w03_coefficients():
    s = closed_form_omega("ω03", 6)
    for e in product(range(7), repeat=3):
        if sum(e) <= 6:
            b = [x + 1 for x in e]
            expected = b[0] * b[1] * b[2] if sum(b) % 2 == 0 else 0
            assert s.coefficient(e) == expected


@pytest.mark.parametrize("form", ["w03", "w11", "w04_corrected"])
def test_forms_match_to_order_12(form):
    report = compare_discrete_form(form, 12)
    assert report["matched"], report["first_mismatch"]
    assert report["first_mismatch"] is None


def test_printed_w04_discrepancy_is_reported():
    report = compare_discrete_form("w04", 10)
    assert not report["matched"]
    assert report["first_mismatch"] == {"exp": [0, 0, 1, 1], "lhs": "13/2", "rhs": "8"}
    assert report["mismatches"] == 420 and report["compared"] == 580


@pytest.mark.parametrize("g,n,M", [(0, 3, 8), (1, 1, 12), (0, 4, 6), (1, 2, 8)])
def test_total_derivative_consistency(g, n, M):
    s = discrete_omega_series(g, n, M)
    qp = n_quasipolynomial(g, n)
    for e in product(range(M + 1), repeat=n):
        if sum(e) <= M:
            b = [x + 1 for x in e]
            p = 1
            for x in b:
                p *= x
            assert s.coefficient(e) == p * qp_evaluate(qp, b)


# -- Airy forms --------------------------------------------------------------------


def test_airy_from_volume_examples():
    assert laurent_terms(airy_form_from_volume(0, 3), 3) == {(-2, -2, -2): Fraction(-1, 2)}
    assert laurent_terms(airy_form_from_volume(1, 1), 1) == {(-4,): Fraction(-1, 16)}
    w04 = laurent_terms(airy_form_from_volume(0, 4), 4)
    assert w04 == {tuple(-4 if j == i else -2 for j in range(4)): Fraction(3, 4) for i in range(4)}


def test_printed_airy_forms():
    assert laurent_terms(closed_form_omega("w11_airy"), 1) == {(-4,): Fraction(-1, 16)}
    for g, n in [(0, 3), (1, 1)]:
        assert compare_airy_form(g, n)["matched"]


def test_w04_airy_constant_ratio():
    report = compare_airy_form(0, 4)
    assert not report["matched"]
    assert report["ratio_printed_over_computed"] == "2/3"


# -- asymptotics ---------------------------------------------------------------------


def test_w11_asymptotic_thresholds():
    rep = asymptotic_airy_check(1, 1, [Fraction(1, 10), Fraction(1, 100)])
    assert rep.deviation(Fraction(1, 10)) < Fraction(2, 5)
    assert rep.deviation(Fraction(1, 100)) < Fraction(1, 20)
    assert rep.passed


def test_w03_asymptotics_approach_one():
    rep = asymptotic_airy_check(0, 3, [Fraction(1, 4), Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)])
    devs = [abs(abs(r) - 1) for _, r in rep.ratios]
    assert rep.passed
    assert devs[-1] < Fraction(1, 100)


def test_asymptotic_rejects_bad_inputs():
    with pytest.raises(ValueError):
        asymptotic_airy_check(1, 1, [0])
    with pytest.raises(ValueError):
        asymptotic_airy_check(1, 1, [Fraction(1, 2)])
    with pytest.raises(ValueError):
        asymptotic_airy_check(0, 4, [Fraction(1, 10)])
