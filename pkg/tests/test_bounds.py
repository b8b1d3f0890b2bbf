import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from conway_mk.algebraic import floor_log_phi, phi, phi_power
from conway_mk.board import GameParams
from conway_mk.bounds import (
    C_bound,
    achieved_row,
    bounds_report,
    construction_epsilons,
    error_term_E,
    growth_ratio,
    lower_bound_row_formula,
    max_row_1d,
    projected_m,
    row1_cap,
    scan_gap,
    single_square_caps,
    upper_bound_row,
)
from conway_mk.sequences import lucas


def test_upper_examples():
    assert upper_bound_row(GameParams(1, 2, 2)) == (4, True)
    assert upper_bound_row(GameParams(3, 2, 1)) == (4, False)
    assert upper_bound_row(GameParams(1, 2, 1)) == (1, True)


def test_lower_examples():
    assert lower_bound_row_formula(GameParams(1, 2, 2)) == 4
    assert lower_bound_row_formula(GameParams(3, 2, 2)) == 6
    assert lower_bound_row_formula(GameParams(2, 2, 1)) == 2
    with pytest.raises(ValueError):
        lower_bound_row_formula(GameParams(1, 3, 2))


def test_max_row_and_cap_examples():
    assert max_row_1d(2, 2) == 3
    assert max_row_1d(3, 2) == 4
    assert max_row_1d(1, 2) == 1
    assert row1_cap(1, 2) == 1
    assert row1_cap(5, 2) == 8
    for k in range(2, 9):
        assert row1_cap(1, k) >= 1


def test_projection_examples():
    assert projected_m(GameParams(1, 2, 2)) == [1, 3]
    assert projected_m(GameParams(3, 2, 2)) == [3, 11]
    assert projected_m(GameParams(7, 3, 1)) == [7]
    assert achieved_row(GameParams(1, 2, 2)) == 4
    assert achieved_row(GameParams(3, 2, 2)) == 6
    assert achieved_row(GameParams(4, 2, 2)) == 7


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5), st.integers(2, 500), st.integers(1, 4))
def test_sandwich(k, m, d):
    params = GameParams(m, k, d)
    lo = lower_bound_row_formula(params)
    ach = achieved_row(params)
    up, _ = upper_bound_row(params)
    assert lo <= ach <= up
    assert up - lo <= 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 500), st.integers(1, 4))
def test_golden_case_collapses(m, d):
    params = GameParams(m, 2, d)
    t, _ = floor_log_phi(m, 2)
    up, strict = upper_bound_row(params)
    assert up + strict == t + 3 * d - 1
    assert lower_bound_row_formula(params) == t + 3 * d - 2


@given(st.integers(2, 6), st.integers(1, 10**6))
def test_row1_cap_is_exact_floor(k, m):
    r = row1_cap(m, k)
    p1 = phi(k) - 1
    assert (m - r * p1).sign() == 1
    assert (m - (r + 1) * p1).sign() == -1


def test_row1_cap_golden_is_floor_m_phi():
    for m in range(1, 300):
        assert row1_cap(m, 2) == (m * phi(2)).floor()


def test_report():
    rep = bounds_report(GameParams(3, 2, 2))
    j = rep.to_json()
    assert (j["lower"], j["upper"], j["achieved"]) == (6, 7, 6)
    assert j["upper_element"]["coeffs"] == ["6", "9"]
    rep1 = bounds_report(GameParams(1, 2, 2))
    assert rep1.strict_upper and rep1.upper == 4
    assert any("projected count 3" in n for n in rep1.notes)
    assert bounds_report(GameParams(1, 3, 2)).lower is None


def test_single_square_examples():
    assert single_square_caps(GameParams(2, 2, 1)) == (8, 8)
    assert single_square_caps(GameParams(1, 2, 2)) == (11, 17)
    assert single_square_caps(GameParams(1, 2, 2))[1] == phi_power(2, 6).floor()


def test_scan_small_range():
    rows = scan_gap(2, 2, range(2, 51))
    ms = [r[0] for r in rows]
    for m in (3, 7, 18, 47):
        assert m in ms
    assert 4 not in ms
    assert all(a < u for _, u, a in rows)
    assert scan_gap(2, 2, range(2, 51), workers=2) == rows


def test_scan_is_ordered_by_m():
    rows = scan_gap(2, 2, [50, 3, 18, 7, 3])
    assert [r[0] for r in rows] == [3, 7, 18]


# --- the even Lucas numbers -------------------------------------------------


@pytest.mark.parametrize("j", range(1, 17))
def test_even_lucas_points_fail(j):
    m = lucas(2 * j)
    params = GameParams(m, 2, 2)
    up, _ = upper_bound_row(params)
    assert achieved_row(params) == up - 1


@pytest.mark.parametrize("j", range(1, 17))
def test_projected_lucas_closed_form(j):
    # m' = L(2j) + 2 floor(L(2j) phi) satisfies m' phi = phi^(2j+4) - phi^-(2j+2),
    # just below a power of phi, so the final floor loses one row
    m = lucas(2 * j)
    mp = projected_m(GameParams(m, 2, 2))[-1]
    assert mp * phi(2) == phi_power(2, 2 * j + 4) - phi_power(2, -(2 * j + 2))
    assert max_row_1d(mp, 2) == 2 * j + 4


def test_lucas_32_in_high_precision():
    m = lucas(32)
    mp = projected_m(GameParams(m, 2, 2))[-1]
    with mpmath.workdps(80):
        g = (1 + mpmath.sqrt(5)) / 2
        x = mpmath.log(mp * g) / mpmath.log(g)
        assert 36 - x > mpmath.mpf("4e-15")
        assert 36 - x < mpmath.mpf("6e-15")
    # evaluated term by term in double precision it rounds onto 36,
    # which makes the construction look like it meets the bound
    g = (1 + math.sqrt(5)) / 2
    naive = math.log(mp) / math.log(g) - math.log(g - 1) / math.log(g)
    assert naive == 36.0
    assert math.floor(naive) + 1 == 37 == upper_bound_row(GameParams(m, 2, 2))[0]
    assert max_row_1d(mp, 2) == 36


# --- analysis utilities -----------------------------------------------------


def test_C_bound_validation():
    with pytest.raises(ValueError):
        C_bound(1, 2, [1])
    with pytest.raises(ValueError):
        C_bound(1, 2, [1, 2])
    with pytest.raises(ValueError):
        C_bound(0, 2, [0])
    assert C_bound(-1, 2, []).is_zero()
    assert C_bound(1, 2, [1, 1]) == 1 + growth_ratio(2)


@pytest.mark.parametrize("k", [2, 3, 6])
@pytest.mark.parametrize("d", [0, 1, 3])
def test_C_bound_near_two(k, d):
    eps = [Fraction(199, 100)] * (d + 1)
    c = C_bound(d, k, eps)
    p, r = phi(k), growth_ratio(k)
    # geometric sum with ratio r, all weights below 2
    assert (c - ((p + 1) * r**d - (p - 1))).sign() < 0
    # the shorter closed form (phi+1)(r^d - 1) is 2 too small to bound this
    assert (c - (p + 1) * (r**d - 1)).sign() > 0


def test_error_term_small_m():
    eps = Fraction(199, 100)
    for k in range(2, 7):
        for d in range(1, 7):
            iv = error_term_E(2, d, k, [eps] * max(d - 1, 0))
            assert iv.a >= 0 and iv.b < 1


def test_error_term_large_m():
    iv = error_term_E(10**6, 3, 2, [Fraction(199, 100)] * 2)
    assert 0 < iv.a and iv.b < 0.01
    with pytest.raises(ValueError):
        error_term_E(0, 2, 2, [1])


def test_construction_epsilons_in_range():
    for m in (1, 3, 10, 47):
        eps = construction_epsilons(m, 2, 4)
        assert len(eps) == 3
        for e in eps:
            assert e.sign() > 0 and (e - 2).sign() < 0
