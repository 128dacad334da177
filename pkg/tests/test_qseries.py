"""Certified q-series primitives against independent oracles."""

import mpmath
import pytest
from mpmath import mp, mpf, mpc

from lambertq.arith import FunctionId, build_table, dirichlet_convolve
from lambertq.numerics import ConvergenceError, DomainError, set_precision
from lambertq.qseries import (
    E_q,
    E_q_series,
    KernelForm,
    QPoint,
    SeriesValue,
    TableTooShortError,
    dedekind_eta,
    e_q,
    e_q_series,
    lambert_sum,
    log_qpoch_inf,
    q_binomial_check,
    q_gamma,
    qpoch_inf_direct,
    qpoch_n,
    theta_sum,
    triple_product,
    weierstrass_delta,
    weighted_product_log,
)

Q_GRID = [mpf("0.1"), mpf("0.3"), mpf("0.5"), mpf("0.7")]


@pytest.fixture(autouse=True)
def _fixed_precision():
    set_precision(128)
    yield
    set_precision(128)


def budget(*svs):
    return sum(sv.err_bound for sv in svs) + mpf(2) ** (-mp.prec + 24)


# ---------------------------------------------------------------------------
# domain types

def test_qpoint_validation():
    pt = QPoint("0.5", mpc(2, 0))
    assert isinstance(pt.z, mpf)  # real-axis z is demoted to mpf
    for bad_q in ("0", "1", "1.2", "-0.1"):
        with pytest.raises(DomainError):
            QPoint(bad_q, 1)
    with pytest.raises(DomainError):
        QPoint("0.5", mpc(-1, 2))


def test_kernel_form_validation():
    with pytest.raises(DomainError):
        KernelForm("times", "over_n")
    with pytest.raises(DomainError):
        KernelForm("minus", "sqrt")


def test_series_value_rejects_bad_bounds():
    with pytest.raises(ValueError):
        SeriesValue(mpf(1), mpf(-1), 3)
    with pytest.raises(ValueError):
        SeriesValue(mpf(1), mp.inf, 3)


# ---------------------------------------------------------------------------
# q-Pochhammer primitives

@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("z", [mpf("0.3"), mpf("-0.6"), mpc("0.2", "0.4")])
def test_log_qpoch_against_mpmath(q, z):
    sv = log_qpoch_inf(z, q)
    oracle = mpmath.qp(z, q)
    assert abs(mp.exp(sv.value) - oracle) <= abs(oracle) * mp.expm1(sv.err_bound) \
        + mpf(2) ** (-mp.prec + 24)


@pytest.mark.parametrize("a", [mpf(2), mpf("-3.5"), mpc(1, 1)])
def test_qpoch_direct_against_mpmath(a):
    q = mpf("0.4")
    sv = qpoch_inf_direct(a, q)
    oracle = mpmath.qp(a, q)
    assert abs(sv.value - oracle) <= sv.err_bound + mpf(2) ** (-mp.prec + 24)


@pytest.mark.parametrize("q", Q_GRID)
def test_functional_equation(q):
    # (z;q)_inf = (1 - z)(zq;q)_inf
    z = mpf("0.45")
    left = log_qpoch_inf(z, q)
    right = log_qpoch_inf(z * q, q)
    lhs = mp.exp(left.value)
    rhs = (1 - z) * mp.exp(right.value)
    assert abs(lhs - rhs) <= abs(lhs) * mp.expm1(budget(left, right))


def test_qpoch_n_matches_finite_product():
    q, z = mpf("0.6"), mpf("0.8")
    for n in range(0, 6):
        finite = mp.fprod(1 - z * q**j for j in range(n))
        sv = qpoch_n(z, q, n)
        assert abs(sv.value - finite) <= sv.err_bound + mpf("1e-30")


def test_qpoch_n_complex_index_recursion():
    # (z;q)_{w+1} = (z;q)_w * (1 - z q^w)
    q, z, w = mpf("0.5"), mpf("0.3"), mpc("0.7", "0.2")
    a = qpoch_n(z, q, w + 1)
    b = qpoch_n(z, q, w)
    qw = mp.exp(w * mp.log(q))
    assert abs(a.value - b.value * (1 - z * qw)) <= budget(a, b)


# ---------------------------------------------------------------------------
# Euler q-exponentials

@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("z", [mpf("0.5"), mpf("-0.3"), mpc("0.2", "0.4")])
def test_e_q_product_vs_series(q, z):
    prod, ser = e_q(z, q), e_q_series(z, q)
    assert abs(prod.value - ser.value) <= budget(prod, ser)


@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("z", [mpf("0.5"), mpf(3), mpc(2, 1)])
def test_E_q_product_vs_series(q, z):
    prod, ser = E_q(z, q), E_q_series(z, q)
    assert abs(prod.value - ser.value) <= budget(prod, ser)


@pytest.mark.parametrize("q", Q_GRID)
def test_eq_Eq_reciprocal(q):
    # e_q(z) E_q(-z) = 1
    z = mpf("0.37")
    a, b = e_q(z, q), E_q(-z, q)
    assert abs(a.value * b.value - 1) <= 2 * budget(a, b)


@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("a", [mpf("0.3"), mpf(2), mpc(1, 1)])
def test_q_binomial_theorem(q, a):
    lhs, rhs = q_binomial_check(a, mpf("0.4"), q)
    assert abs(lhs.value - rhs.value) <= budget(lhs, rhs)


@pytest.mark.parametrize("q", Q_GRID)
def test_q_gamma_normalization(q):
    one = q_gamma(1, q)
    two = q_gamma(2, q)
    assert abs(one.value - 1) <= budget(one)
    assert abs(two.value - 1) <= budget(two)


def test_q_gamma_functional_equation():
    q, w = mpf("0.3"), mpf("2.6")
    a = q_gamma(w + 1, q)
    b = q_gamma(w, q)
    factor = (1 - q**w) / (1 - q)
    assert abs(a.value - factor * b.value) <= (1 + factor) * budget(a, b)


# ---------------------------------------------------------------------------
# theta functions and modular forms

@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("z", [mpf(1), mpf("0.7"), mpf(2), mpc("0.6", "0.8")])
def test_jacobi_triple_product(q, z):
    lhs, rhs = triple_product(z, q)
    assert abs(lhs.value - rhs.value) <= budget(lhs, rhs)


def test_theta_vanishes_at_product_zero():
    # the factor (sqrt(q) z;q)_inf kills the product at z = q^(-1/2)
    q = mpf("0.4")
    sv = theta_sum(1 / mp.sqrt(q), q)
    assert abs(sv.value) <= 100 * sv.err_bound + mpf("1e-30")


def test_theta_domain():
    with pytest.raises(DomainError):
        theta_sum(0, mpf("0.5"))


def test_dedekind_eta_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^(3/4))
    sv = dedekind_eta(mpc(0, 1))
    target = mp.gamma(mpf(1) / 4) / (2 * mp.pi ** mpf("0.75"))
    assert abs(sv.value - target) <= budget(sv)


def test_dedekind_eta_inversion():
    # eta(-1/tau) = sqrt(-i tau) eta(tau) at tau = 2i
    tau = mpc(0, 2)
    a = dedekind_eta(-1 / tau)
    b = dedekind_eta(tau)
    factor = mp.sqrt(-1j * tau)
    assert abs(a.value - factor * b.value) <= abs(factor) * budget(a, b)


@pytest.mark.parametrize("tau", [mpc(0, 1), mpc("0.3", "0.8")])
def test_delta_is_eta_to_the_24(tau):
    delta = weierstrass_delta(tau)
    eta = dedekind_eta(tau)
    target = (2 * mp.pi) ** 12 * eta.value ** 24
    rel = 24 * eta.err_bound / abs(eta.value)
    assert abs(delta.value - target) <= delta.err_bound + abs(target) * mp.expm1(rel)


# ---------------------------------------------------------------------------
# Lambert sums and weighted products

def table(spec, N=2048):
    return build_table(FunctionId.parse(spec), N)


@pytest.mark.parametrize("q", Q_GRID)
def test_mobius_lambert_collapses_to_q(q):
    # sum mu(n) q^n/(1-q^n) = q
    sv = lambert_sum(table("mobius"), KernelForm("minus", "plain"), QPoint(q, 1))
    assert abs(sv.value - q) <= sv.err_bound + mpf(2) ** (-mp.prec + 24)


@pytest.mark.parametrize("q", Q_GRID)
def test_unit_lambert_is_log_qpoch(q):
    # sum (1/n) q^n/(1-q^n) = -log (q;q)_inf
    sv = lambert_sum(table("one"), KernelForm("minus", "over_n"), QPoint(q, 1))
    lg = log_qpoch_inf(q, q)
    assert abs(sv.value + lg.value) <= budget(sv, lg)


@pytest.mark.parametrize("q", [mpf("0.3"), mpf("0.7")])
@pytest.mark.parametrize("z", [mpf(1), mpf("1.7"), mpc(1, "0.5")])
def test_product_series_pairing_form_a(q, z):
    # the central rearrangement: log prod (q^(nz);q^n)^(g(n)/n) equals
    # -sum (1*g)(n)/n q^(nz)/(1-q^n)
    g = table("totient")
    f = dirichlet_convolve(table("one"), g)
    pt = QPoint(q, z)
    left = weighted_product_log(g, pt, form="A", weight="over_n")
    right = lambert_sum(f, KernelForm("minus", "over_n"), pt)
    assert abs(left.value + right.value) <= budget(left, right)


@pytest.mark.parametrize("q", [mpf("0.3"), mpf("0.7")])
def test_product_series_pairing_form_b(q):
    g = table("mobius")
    f = dirichlet_convolve(table("one"), g)
    pt = QPoint(q, mpf("1.2"))
    left = weighted_product_log(g, pt, form="B", weight="over_n")
    right = lambert_sum(f, KernelForm("plus", "over_n"), pt)
    assert abs(left.value - right.value) <= budget(left, right)


def test_lambert_convergence_error_reports_side():
    with pytest.raises(ConvergenceError) as exc:
        lambert_sum(table("one"), KernelForm("minus", "over_n"),
                    QPoint("0.99", 1), max_terms=50)
    assert exc.value.side == "lambert"


def test_lambert_table_too_short():
    with pytest.raises(TableTooShortError):
        lambert_sum(table("one", N=8), KernelForm("minus", "over_n"),
                    QPoint("0.9", 1))


def test_tightening_tol_tightens_certificate():
    pt = QPoint("0.5", 1)
    loose = lambert_sum(table("divisor_d"), KernelForm("minus", "over_n"),
                        pt, tol=mpf("1e-8"))
    tight = lambert_sum(table("divisor_d"), KernelForm("minus", "over_n"),
                        pt, tol=mpf("1e-25"))
    assert tight.terms_used >= loose.terms_used
    assert tight.err_bound < loose.err_bound
    assert abs(tight.value - loose.value) <= loose.err_bound
