import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import iv, jv

from freeplate.bessel import (
    BesselOrder,
    DimensionContext,
    SeriesPolicy,
    p11,
    pl1_bracket,
    series_coeffs,
    ultra_i,
    ultra_i_deriv,
    ultra_i_scaled,
    ultra_j,
    ultra_j_deriv,
)
from freeplate.errors import DomainError, SeriesBudgetError, UnsupportedRangeError

from conftest import rel_err

D2 = DimensionContext(2)
D3 = DimensionContext(3)


# ---------------------------------------------------------------------------
# frozen high-precision oracle values


def test_oracle_value_table(bessel_oracle):
    worst = 0.0
    for rec in bessel_oracle["values"]:
        ctx = DimensionContext(rec["d"])
        z = float(rec["z"])
        m = rec["m"]
        for kind, fn in (("j", ultra_j_deriv), ("i", ultra_i_deriv)):
            got = fn(ctx, rec["l"], z, m)
            worst = max(worst, rel_err(got, float(rec[kind])))
    assert worst < 5e-15


@pytest.mark.parametrize(
    "key,args",
    [
        ("J1_at_1", (D2, 1, 1.0, 0)),
        ("I1_at_2", (D2, 1, 2.0, 0)),
        ("J1pp_at_1", (D2, 1, 1.0, 2)),
        ("I1_at_1", (D2, 0, 1.0, 1)),  # I_0'(1) = I_1(1)
    ],
)
def test_named_oracle_values(bessel_oracle, key, args):
    ctx, l, z, m = args
    fn = ultra_i_deriv if key.startswith("I") else ultra_j_deriv
    assert rel_err(fn(ctx, l, z, m), float(bessel_oracle["named"][key])) < 1e-14


# ---------------------------------------------------------------------------
# series values at z = 0 and small arguments


def test_values_at_zero():
    assert ultra_j(D2, 1, 0.0) == 0.0
    assert ultra_j(D2, 0, 0.0) == 1.0
    assert ultra_i(D3, 1, 0.0) == 0.0
    assert ultra_i(D2, 0, 0.0) == 1.0
    assert ultra_j_deriv(D2, 1, 0.0, 0) == 0.0
    assert ultra_i_deriv(D3, 1, 0.0, 0) == 0.0
    # J0''(0) = -1/2, I1'(0) = 1/2 classically
    assert ultra_j_deriv(D2, 0, 0.0, 2) == -0.5
    assert ultra_i_deriv(D2, 1, 0.0, 1) == 0.5


def test_derivative_zero_at_p11():
    for d in (2, 3, 10):
        ctx = DimensionContext(d)
        p = p11(ctx)
        assert abs(ultra_j_deriv(ctx, 1, p, 1)) < 1e-12


# ---------------------------------------------------------------------------
# classical reduction and cross-library oracle


def test_d2_reduction_matches_classical_jv():
    rng = np.random.default_rng(7)
    z = rng.uniform(0.05, 20.0, 400)
    for l in range(0, 5):
        want = jv(l, z)
        keep = np.abs(want) > 1e-2  # relative comparison away from zeros
        got = ultra_j(D2, l, z[keep])
        assert np.max(np.abs(got - want[keep]) / np.abs(want[keep])) < 1e-12


def test_d2_modified_matches_classical_iv():
    z = np.linspace(0.1, 25.0, 200)
    for l in range(0, 4):
        got = ultra_i(D2, l, z)
        want = iv(l, z)
        assert np.max(np.abs(got - want) / np.abs(want)) < 1e-12


def test_d3_reduction_matches_spherical_form():
    # for d=3, j_0(z) = sqrt(2/pi) sin(z)/z
    z = np.linspace(0.2, 15.0, 100)
    want = math.sqrt(2.0 / math.pi) * np.sin(z) / z
    got = ultra_j(D3, 0, z)
    assert np.max(np.abs(got - want)) < 1e-14


# ---------------------------------------------------------------------------
# recurrence relations and ODEs (belt version; the acceptance suite repeats
# these on 10^4 randomized samples)


def _sample_z(rng, n=120):
    return rng.uniform(1e-3, 20.0, n)


@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_j_recurrences(d):
    ctx = DimensionContext(d)
    rng = np.random.default_rng(100 + d)
    z = _sample_z(rng)
    for l in range(1, 7):
        jm = ultra_j(ctx, l - 1, z)
        j0 = ultra_j(ctx, l, z)
        jp = ultra_j(ctx, l + 1, z)
        j1 = ultra_j_deriv(ctx, l, z, 1)
        # (7): (d-2+2l)/z j_l = j_(l-1) + j_(l+1)
        lhs = (d - 2 + 2 * l) / z * j0
        scale = np.maximum(np.abs(lhs), np.maximum(np.abs(jm), np.abs(jp)))
        assert np.all(np.abs(lhs - jm - jp) <= 1e-11 * scale)
        # (8): j_l' = l/z j_l - j_(l+1)
        rhs = l / z * j0 - jp
        scale = np.maximum(np.abs(j1), np.abs(rhs))
        assert np.all(np.abs(j1 - rhs) <= 1e-11 * scale)
        # (9): j_l' = j_(l-1) - (l+d-2)/z j_l
        rhs = jm - (l + d - 2) / z * j0
        assert np.all(np.abs(j1 - rhs) <= 1e-11 * np.maximum(np.abs(j1), np.abs(rhs)))


@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_i_recurrences(d):
    ctx = DimensionContext(d)
    rng = np.random.default_rng(200 + d)
    z = _sample_z(rng)
    for l in range(1, 7):
        im = ultra_i(ctx, l - 1, z)
        i0 = ultra_i(ctx, l, z)
        ip = ultra_i(ctx, l + 1, z)
        i1 = ultra_i_deriv(ctx, l, z, 1)
        # (10): (d-2+2l)/z i_l = i_(l-1) - i_(l+1)
        lhs = (d - 2 + 2 * l) / z * i0
        scale = np.maximum(np.abs(lhs), np.maximum(np.abs(im), np.abs(ip)))
        assert np.all(np.abs(lhs - im + ip) <= 1e-11 * scale)
        # (11): i_l' = l/z i_l + i_(l+1)
        rhs = l / z * i0 + ip
        assert np.all(np.abs(i1 - rhs) <= 1e-11 * np.maximum(np.abs(i1), np.abs(rhs)))
        # (12): i_l' = i_(l-1) - (l+d-2)/z i_l
        rhs = im - (l + d - 2) / z * i0
        assert np.all(np.abs(i1 - rhs) <= 1e-11 * np.maximum(np.abs(i1), np.abs(rhs)))


@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_second_derivative_recurrences(d):
    ctx = DimensionContext(d)
    rng = np.random.default_rng(300 + d)
    z = _sample_z(rng)
    for l in range(0, 7):
        j0 = ultra_j(ctx, l, z)
        jp = ultra_j(ctx, l + 1, z)
        j2 = ultra_j_deriv(ctx, l, z, 2)
        # (13): j_l'' = ((l^2-l)/z^2 - 1) j_l + (d-1)/z j_(l+1)
        rhs = ((l * l - l) / z ** 2 - 1.0) * j0 + (d - 1) / z * jp
        assert np.all(np.abs(j2 - rhs) <= 1e-11 * np.maximum(np.abs(j2), np.abs(rhs)))
        i0 = ultra_i(ctx, l, z)
        ip = ultra_i(ctx, l + 1, z)
        i2 = ultra_i_deriv(ctx, l, z, 2)
        # (14): i_l'' = ((l^2-l)/z^2 + 1) i_l - (d-1)/z i_(l+1)
        rhs = ((l * l - l) / z ** 2 + 1.0) * i0 - (d - 1) / z * ip
        assert np.all(np.abs(i2 - rhs) <= 1e-11 * np.maximum(np.abs(i2), np.abs(rhs)))


@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_bessel_odes(d):
    ctx = DimensionContext(d)
    rng = np.random.default_rng(400 + d)
    z = _sample_z(rng)
    for l in range(0, 7):
        k = l * (l + d - 2)
        j0, j1, j2 = (ultra_j_deriv(ctx, l, z, m) for m in range(3))
        # (5): z^2 j'' + (d-1) z j' + (z^2 - k) j = 0
        terms = np.stack([z ** 2 * j2, (d - 1) * z * j1, (z ** 2 - k) * j0])
        resid = np.abs(terms.sum(axis=0))
        assert np.all(resid <= 1e-10 * np.abs(terms).max(axis=0))
        i0, i1, i2 = (ultra_i_deriv(ctx, l, z, m) for m in range(3))
        # (6): z^2 i'' + (d-1) z i' - (z^2 + k) i = 0
        terms = np.stack([z ** 2 * i2, (d - 1) * z * i1, -(z ** 2 + k) * i0])
        resid = np.abs(terms.sum(axis=0))
        assert np.all(resid <= 1e-10 * np.abs(terms).max(axis=0))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=9),
    st.integers(min_value=0, max_value=5),
    st.floats(min_value=1e-6, max_value=20.0),
)
def test_ode_property(d, l, z):
    ctx = DimensionContext(d)
    k = l * (l + d - 2)
    j0, j1, j2 = (ultra_j_deriv(ctx, l, z, m) for m in range(3))
    resid = abs(z * z * j2 + (d - 1) * z * j1 + (z * z - k) * j0)
    scale = max(abs(z * z * j2), abs((d - 1) * z * j1), abs((z * z - k) * j0))
    assert resid <= 1e-10 * max(scale, 1e-300)


def test_domination_strict():
    rng = np.random.default_rng(11)
    z = rng.uniform(1e-4, 20.0, 300)
    for d in (2, 3, 5, 11):
        ctx = DimensionContext(d)
        for l in range(0, 4):
            for m in range(5):
                jv_ = ultra_j_deriv(ctx, l, z, m)
                iv_ = ultra_i_deriv(ctx, l, z, m)
                assert np.all(np.abs(jv_) < iv_)


def test_i_derivatives_positive():
    z = np.linspace(1e-6, 40.0, 250)
    for d in (2, 3, 6):
        ctx = DimensionContext(d)
        for l in range(0, 3):
            for m in range(5):
                vals = ultra_i_deriv(ctx, l, z, m)
                assert np.all(vals > 0.0)


# ---------------------------------------------------------------------------
# scaled evaluation


def test_scaled_identity_moderate_z(bessel_oracle):
    for z in (0.5, 3.0, 12.0, 30.0):
        for l in (0, 1, 3):
            unscaled = ultra_i(D2, l, z)
            scaled = ultra_i_scaled(D2, l, z)
            assert rel_err(scaled * math.exp(z), unscaled) < 1e-13
    got = ultra_i_scaled(D2, 1, 50.0)
    assert got > 0.0
    assert rel_err(got, float(bessel_oracle["named"]["i1_scaled_at_50_d2"])) < 1e-13


def test_scaled_at_zero():
    assert ultra_i_scaled(D2, 0, 0.0, 0) == 1.0


def test_scaled_paths_agree_at_same_argument():
    # direct-series path (z <= 120) and log-domain path (z > 120) evaluated
    # at identical arguments must agree
    from freeplate.series import _i_scaled_log_scalar

    for d, l in [(2, 0), (3, 1), (5, 2)]:
        for m in range(3):
            for z in (80.0, 110.0, 119.5):
                series = ultra_i_scaled(DimensionContext(d), l, z, m)
                logdom = _i_scaled_log_scalar(d, l, z, m, -1.0)
                assert rel_err(logdom, series) < 1e-12


def test_scaled_large_arguments_finite():
    ctx = DimensionContext(2)
    z = np.array([150.0, 500.0, 1000.0, 2000.0])
    for m in range(3):
        vals = ultra_i_scaled(ctx, 1, z, m)
        assert np.all(np.isfinite(vals)) and np.all(vals > 0.0)


# ---------------------------------------------------------------------------
# p11 and Lorch-Szego brackets


def test_p11_matches_paper_approximation():
    assert abs(p11(D2) - 1.84) < 0.01


def test_p11_squared_bracket():
    for d in range(2, 16):
        sq = p11(DimensionContext(d)) ** 2
        assert d < sq < d + 2


def test_p11_against_oracle(bessel_oracle):
    for dstr, val in bessel_oracle["p11"].items():
        assert abs(p11(DimensionContext(int(dstr))) - float(val)) < 2e-12


def test_p11_sign_change():
    for d in (2, 5, 14):
        ctx = DimensionContext(d)
        p = p11(ctx)
        assert ultra_j_deriv(ctx, 1, p - 1e-6, 1) > 0
        assert ultra_j_deriv(ctx, 1, p + 1e-6, 1) < 0


@pytest.mark.parametrize(
    "d,l,lo_sq,hi_sq",
    [
        (3, 1, 35.0 / 9.0, 5.0),
        (3, 2, 126.0 / 13.0, 14.0),
        (4, 1, 4.8, 6.0),
    ],
)
def test_pl1_bracket_formula(d, l, lo_sq, hi_sq):
    lo, hi = pl1_bracket(DimensionContext(d), l)
    assert lo == pytest.approx(math.sqrt(lo_sq), rel=1e-15)
    assert hi == pytest.approx(math.sqrt(hi_sq), rel=1e-15)


def test_pl1_bracket_d2():
    lo, hi = pl1_bracket(D2, 1)
    assert (lo * lo, hi * hi) == (pytest.approx(2.0), pytest.approx(4.0))
    with pytest.raises(UnsupportedRangeError):
        pl1_bracket(D2, 2)


def test_pl1_bracket_contains_zero_of_jl_prime():
    for d, l in [(3, 1), (3, 2), (4, 3), (7, 2)]:
        ctx = DimensionContext(d)
        lo, hi = pl1_bracket(ctx, l)
        assert ultra_j_deriv(ctx, l, lo, 1) > 0
        assert ultra_j_deriv(ctx, l, hi, 1) < 0


# ---------------------------------------------------------------------------
# series coefficients d_k, c_k


def test_c1_formula():
    for d in (2, 3, 9):
        coeffs = series_coeffs(DimensionContext(d), 5)
        assert coeffs.c_k[0] == pytest.approx(5.0 / (2 * 3 * (d + 4)), rel=1e-15)


def test_c_decreasing():
    coeffs = series_coeffs(D2, 8)
    assert all(a > b for a, b in zip(coeffs.c_k, coeffs.c_k[1:]))


def test_c_is_ratio_of_d():
    for d in (2, 5):
        coeffs = series_coeffs(DimensionContext(d), 7)
        for k in range(6):
            assert coeffs.d_k[k + 1] / coeffs.d_k[k] == pytest.approx(
                coeffs.c_k[k], rel=1e-12
            )


def test_dk_series_reproduces_j1pp(bessel_oracle):
    z = 0.5
    coeffs = series_coeffs(D2, 30)
    total = sum(
        (-1) ** k * dk * z ** (2 * k - 1) for k, dk in enumerate(coeffs.d_k, start=1)
    )
    assert rel_err(total, ultra_j_deriv(D2, 1, z, 2)) < 1e-13
    assert rel_err(total, float(bessel_oracle["named"]["j1pp_sum_d2_z0.5"])) < 1e-13


def test_series_coeffs_requires_three():
    with pytest.raises(DomainError):
        series_coeffs(D2, 2)


# ---------------------------------------------------------------------------
# budget, domain, and policy errors


def test_budget_error_names_arguments():
    with pytest.raises(SeriesBudgetError) as exc:
        ultra_j(D2, 3, 61.0)
    msg = str(exc.value)
    assert "61.0" in msg and "l=3" in msg and "d=2" in msg


def test_budget_error_on_vector_input():
    with pytest.raises(SeriesBudgetError):
        ultra_i(D2, 0, np.array([1.0, 75.0]))


def test_max_terms_budget():
    tight = SeriesPolicy(rel_tol=1e-32, max_terms=50)
    with pytest.raises(SeriesBudgetError):
        ultra_j(D2, 0, 55.0, policy=tight)


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        ultra_j(D2, 0, -0.5)
    with pytest.raises(DomainError):
        ultra_i_scaled(D2, 0, -1.0)


def test_derivative_order_limit():
    with pytest.raises(DomainError):
        ultra_j_deriv(D2, 0, 1.0, 5)


def test_policy_validation():
    with pytest.raises(DomainError):
        SeriesPolicy(rel_tol=1e-9)
    with pytest.raises(DomainError):
        SeriesPolicy(max_terms=10)


def test_dimension_validation():
    with pytest.raises(DomainError):
        DimensionContext(1)
    with pytest.raises(DomainError):
        BesselOrder(-1, 1)
    with pytest.raises(DomainError):
        BesselOrder(2, 0)


# ---------------------------------------------------------------------------
# determinism and scalar/vector agreement


def test_vector_matches_scalar_bitwise():
    rng = np.random.default_rng(5)
    z = np.concatenate([[0.0, 1e-14, 1e-9], rng.uniform(0.01, 25.0, 40)])
    for d, l, m, fn in [(2, 1, 0, ultra_j_deriv), (3, 2, 2, ultra_j_deriv),
                        (4, 0, 4, ultra_i_deriv), (7, 3, 1, ultra_i_deriv)]:
        ctx = DimensionContext(d)
        vec = fn(ctx, l, z, m)
        scal = np.array([fn(ctx, l, float(x), m) for x in z])
        assert np.array_equal(vec, scal)


def test_repeat_calls_bit_identical():
    a = ultra_j_deriv(D3, 2, 7.123456, 3)
    b = ultra_j_deriv(D3, 2, 7.123456, 3)
    assert a == b


def test_order_accepts_bessel_order():
    order = D3.order(2)
    assert order.k_sep == 2 * (2 + 3 - 2)
    assert ultra_j(D3, order, 1.3) == ultra_j(D3, 2, 1.3)
