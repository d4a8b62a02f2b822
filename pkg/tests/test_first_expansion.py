import math

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from legendre_e import first_expansion as fe
from legendre_e.core import EvalPoint
from legendre_e.errors import DomainError, OrderTooHighError
from legendre_e.special import oracle_E

SAMPLE = [(0.8, 0.8), (0.9, 0.9), (0.95, 0.99), (0.3, 0.95), (0.05, 0.5), (0.7, 0.2), (0.99, 0.999)]


# ---- s_n ----

@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("x", [0.01, 0.3, 0.9, 2.0, 50.0])
def test_closed_forms_match_reference(n, x):
    ref = float(oracles.s_ref(n, x))
    # the printed s_2 loses digits to cancellation as x -> 0
    tol = 1e-7 if (n == 2 and x < 0.1) else 1e-13
    assert fe.s_closed(n, x) == pytest.approx(ref, rel=tol)


@pytest.mark.parametrize("n", range(0, 10))
@pytest.mark.parametrize("x", [1e-4, 0.1, 0.5, 0.74])
def test_series_against_reference(n, x):
    assert fe.s_series(n, x) == pytest.approx(float(oracles.s_series(n, x)), rel=1e-13)


@pytest.mark.parametrize("n", [3, 5, 8, 12])
@pytest.mark.parametrize("x", [1e-3, 0.1, 0.8, 5.0, 900.0, 1e5, 1e9])
def test_recurrence_against_reference(n, x):
    # 1e-12 is the relative error the enclosures allow for recurrence values
    assert fe.s_rec(n, x) == pytest.approx(float(oracles.s_ref(n, x)), rel=1e-12)


@pytest.mark.parametrize("n", [0, 3, 7])
@pytest.mark.parametrize("x", [0.2, 0.6])
def test_two_references_agree(n, x):
    assert abs(oracles.s_ref(n, x) - oracles.s_series(n, x)) < 1e-30


def test_s_values_sources():
    vals = fe.s_values(5, 0.5)
    assert all(v.source is fe.SnSource.SERIES for v in vals)
    vals = fe.s_values(5, 3.0)
    assert [v.source for v in vals] == [fe.SnSource.CLOSED_FORM] * 3 + [fe.SnSource.RECURRENCE] * 2


def test_s_domain_errors():
    with pytest.raises(DomainError):
        fe.s_series(2, 1.5)
    with pytest.raises(DomainError):
        fe.s_rec(2, 0.5)
    with pytest.raises(DomainError):
        fe.s_closed(3, 0.5)
    with pytest.raises(DomainError):
        fe.s_closed(1, 0.0)


def test_s_values_are_alternating_tails():
    # s_n is the tail beyond j = n of a series whose terms alternate after the first few
    x = 0.4
    for n in range(1, 8):
        assert abs(fe.s_series(n, x)) <= abs(float(oracles.g(n, n + 1, x))) * 1.0000001


# ---- bounds and partial sums ----

@pytest.mark.parametrize("N", [1, 2, 3, 4])
@pytest.mark.parametrize("lam,k", SAMPLE)
def test_partial_sum_and_bounds_against_reference(lam, k, N):
    p = EvalPoint(lam, k)
    parts = fe.first_parts(p, N)
    assert parts.partial_sum == pytest.approx(float(oracles.E_N(lam, k, N)), rel=1e-14)
    lo, up = oracles.first_interval(lam, k, N)
    assert parts.lower == pytest.approx(float(lo), rel=1e-14)
    assert parts.upper == pytest.approx(float(up), rel=1e-14)


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("lam,k", SAMPLE)
def test_refined_against_reference(lam, k, N):
    e = fe.refined_E_hat(EvalPoint(lam, k), N)
    assert e.estimate == pytest.approx(float(oracles.E_hat(lam, k, N)), rel=1e-14)
    assert e.lower <= e.estimate <= e.upper


def test_f_decreasing_in_order():
    p = EvalPoint(0.9, 0.9)
    vals = [fe.f_N(p, n) for n in (1, 1.5, 2, 3, 5, 8)]
    assert all(v > 0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_prefactor_matches_reference():
    for N in range(1, 8):
        assert fe.prefactor(N, 0.7) == pytest.approx(float(oracles.prefactor(N, 0.7)), rel=1e-15)


@given(st.floats(0.01, 0.999), st.floats(0.01, 0.999), st.integers(1, 6))
@settings(max_examples=150, deadline=None)
def test_enclosure_contains_oracle(lam, k, N):
    p = EvalPoint(lam, k)
    enc = fe.enclose_first(p, N)
    assert oracle_E(p) in enc
    parts = fe.first_parts(p, N)
    # partial sum - P f_{N+1} = upper; the difference may be below one ulp of E
    assert parts.prefactor > 0 and parts.fN > parts.fN1 > 0


def test_upto_matches_single_orders():
    p = EvalPoint(0.6, 0.85)
    many = fe.first_parts_upto(p, 5)
    for N, parts in enumerate(many, 1):
        single = fe.first_parts(p, N)
        assert parts.partial_sum == single.partial_sum
        assert parts.lower == single.lower


def test_width_shrinks_with_order():
    p = EvalPoint(0.9, 0.9)
    widths = [e.width for e in fe.enclose_first_upto(p, 6)]
    assert all(a > b for a, b in zip(widths, widths[1:]))


def test_relative_range_definition():
    p = EvalPoint(0.8, 0.8)
    parts = fe.first_parts(p, 1)
    e = oracle_E(p)
    assert fe.relative_range(parts, e) == pytest.approx((parts.upper - parts.lower) / e, rel=1e-12)


def test_errors():
    with pytest.raises(DomainError):
        fe.first_parts(EvalPoint(0.0, 0.5), 1)
    with pytest.raises(OrderTooHighError):
        fe.first_parts(EvalPoint(0.5, 0.5), fe.MAX_ORDER + 1)
    with pytest.raises(DomainError):
        fe.refined_E_hat(EvalPoint(0.5, 0.5), 1, eps=1.0)


def test_error_decreases_with_order_near_corner():
    p = EvalPoint(0.999, 0.999)
    e = oracle_E(p)
    errs = [fe.partial_sum_E_N(p, N) - e for N in range(1, 5)]
    assert all(a > b > 0 for a, b in zip(errs, errs[1:]))
    assert math.isfinite(fe.partial_sum_E_N(EvalPoint(1e-6, 1e-6), 1))


def test_s_examples():
    assert fe.s_closed(0, 3.0) == pytest.approx(1.0, rel=1e-15)
    r2 = math.sqrt(2.0)
    s1 = (-2 + 2 * r2 + (2 * math.log(2) - 1 - 2 * math.log(1 + r2))) / 4
    assert fe.s_closed(1, 1.0) == pytest.approx(s1, rel=1e-14)
    assert fe.s_closed(1, 1.0) == pytest.approx(float(oracles.s_ref(1, 1.0)), rel=1e-12)
    assert fe.s_series(0, 0.5, 1e-14) == pytest.approx(math.sqrt(1.5) - 1, rel=1e-13)
    assert fe.s_series(1, 0.5, 1e-14) == pytest.approx(fe.s_closed(1, 0.5), rel=1e-12)
    assert fe.s_rec(3, 0.3) == pytest.approx(fe.s_series(3, 0.3, 1e-14), rel=1e-10)
    assert fe.s_rec(5, 0.8) == pytest.approx(fe.s_series(5, 0.8, 1e-14), rel=1e-9)
    for n in range(3):
        assert abs(fe.s_closed(n, 1e-9)) < 1e-8


def test_s_rec_small_x_scale():
    x = 1e-6
    lead = abs(float(oracles.g(4, 5, x)))
    v = fe.s_rec(4, x)
    assert abs(v) < 1e-20
    assert v == pytest.approx(float(oracles.s_ref(4, x)), rel=1e-10)
    assert abs(v) == pytest.approx(lead, rel=1e-4)


def test_routes_agree_where_all_are_available():
    for n in (3, 4, 6):
        for x in (0.3, 0.6):
            rec, ser = fe.s_rec(n, x), fe.s_series(n, x)
            assert rec == pytest.approx(ser, rel=1e-10)


def test_bound_function_small_lambda():
    p = EvalPoint(1e-6, 0.5)
    for N in (1, 2, 3):
        assert abs(fe.f_N(p, N)) < 1e-4


def test_small_lambda_error_is_cubic():
    k = 0.5
    ratios = []
    for lam in (1e-1, 1e-2, 1e-3):
        d = float(oracles.E_N(lam, k, 1) - oracles.E(lam, k))
        ratios.append(d / lam**3)
    assert ratios[1] == pytest.approx(ratios[2], rel=0.02)
    assert ratios[0] == pytest.approx(ratios[2], rel=0.1)


def test_printed_examples():
    assert f"{fe.partial_sum_E_N(EvalPoint(0.9, 0.9), 2):.4f}" == "0.9523"
    p = EvalPoint(0.99, 0.999)
    e = oracle_E(p)
    en = fe.partial_sum_E_N(p, 1)
    from legendre_e.tables import matches_printed
    assert matches_printed(".9916", en)  # truncated: 0.99168
    assert (e - en) / e == pytest.approx(-0.3417e-4, rel=5e-4)
    p = EvalPoint(0.8, 0.8)
    assert fe.relative_range(fe.first_parts(p, 1), oracle_E(p)) == pytest.approx(0.002446, rel=5e-4)
    assert f"{fe.refined_E_hat(p, 1).estimate:.4f}" == "0.8497"  # printed .8496 (truncated)
