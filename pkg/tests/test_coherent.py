import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from exactcs import coherent as C
from exactcs import potentials as P
from exactcs.specfun import DomainError

mp.mp.dps = 30

# Frozen from mpmath: nonlinear state pFp(2;3;-0.5) e at (a,b)=(2,3), alpha=1, x=0.5.
NONLINEAR_23 = 1.9615993792708241207
# Frozen from mpmath: orthonormal Morse psi_2 at lam=3, x=1.
MORSE_PSI2_AT_1 = 0.4306652430723916342


def test_frozen_nonlinear_value():
    assert C.nonlinear_cs([2.0], [3.0], 1.0, 0.5) == pytest.approx(NONLINEAR_23, rel=1e-14)


def test_frozen_morse_eigenfunction():
    assert P.morse_eigenfunction(2, 3.0, 1.0) == pytest.approx(MORSE_PSI2_AT_1, rel=1e-14)


# --- polynomial-level states -----------------------------------------------------

@pytest.mark.parametrize("beta", [0.5, 2.0, -1.3, 1.0 + 0.8j])
@pytest.mark.parametrize("b", [0.5, 1.5, 4.0])
def test_chg_state_resums_to_bessel_type_series(beta, b):
    cs = C.chg_cs(beta, b, 60)
    for x in (0.0, 0.7, 3.0):
        got = cs.evaluate(x) / cs.norm
        want = complex(mp.e**beta * mp.hyp0f1(b, -beta * x))
        assert abs(got - want) <= 1e-12 * max(abs(want), 1.0)


@pytest.mark.parametrize("gamma", [0.5, 1.5, 0.4 - 0.9j])
def test_hg_state_resums_to_confluent(gamma):
    b, c = 8.0, 2.5
    cs = C.hg_cs(gamma, b, c, 60)
    for x in (0.0, 0.3, 0.9):
        got = cs.evaluate(x) / cs.norm
        want = complex(mp.e**gamma * mp.hyp1f1(b, c, -gamma * x))
        assert abs(got - want) <= 1e-12 * max(abs(want), 1.0)


@given(st.floats(0.05, 5.0), st.floats(-math.pi, math.pi), st.floats(0.6, 8.0))
def test_chg_ao_eigenstate(r, theta, b):
    cs = C.chg_cs(cmath.rect(r, theta), b, 60, strict=False)
    assert C.ao_residual(cs) <= 1e-10


@given(st.floats(0.05, 3.0), st.floats(-math.pi, math.pi))
def test_hg_ao_eigenstate(r, theta):
    cs = C.hg_cs(cmath.rect(r, theta), 8.0, 2.5, 60, strict=False)
    assert C.ao_residual(cs) <= 1e-10


def test_ao_residual_detects_wrong_label():
    cs = C.chg_cs(2.0, 1.5, 60)
    bad = C.CoeffSeq("chg", cs.c, 2.1 + 0j, cs.basis, cs.norm_mode, cs.norm, cs.raw)
    assert C.ao_residual(bad) > 1e-3


def test_poly_basis_guards():
    with pytest.raises(DomainError):
        C.PolyBasis("chg", -2.0)
    with pytest.raises(DomainError):
        C.PolyBasis("hg", 1.0, 0.0)
    with pytest.raises(ValueError):
        C.PolyBasis("xyz", 1.0)
    with pytest.raises(TypeError):
        C.morse_cs(1.0, 3.0).as_poly()


def test_chg_basis_negative_b_uses_series():
    basis = C.PolyBasis("chg", -2.5)
    x = np.array([0.2, 1.7])
    for n, row in enumerate(basis.basis(4, x)):
        want = [float(mp.hyp1f1(-n, -2.5, v)) for v in x]
        np.testing.assert_allclose(row, want, rtol=1e-13)


# --- phase covariance and normalization --------------------------------------------

@given(st.floats(0.05, 4.0), st.floats(-math.pi, math.pi))
def test_morse_phase_covariance(r, theta):
    a = C.morse_cs(r, 3.0, 80, strict=False).c
    b = C.morse_cs(cmath.rect(r, theta), 3.0, 80, strict=False).c
    n = np.arange(a.size)
    np.testing.assert_allclose(b, a * np.exp(1j * n * theta), rtol=1e-12, atol=1e-300)


@given(st.floats(0.1, 12.0), st.floats(-math.pi, math.pi))
def test_spt_phase_covariance(r, theta):
    a = C.spt_cs(r, 2.0).c
    b = C.spt_cs(cmath.rect(r, theta), 2.0).c
    n = np.arange(a.size)
    np.testing.assert_allclose(b, a * np.exp(1j * n * theta), rtol=1e-12, atol=1e-300)


@given(st.floats(0.0, 8.0), st.floats(0.3, 10.0))
def test_morse_analytic_norm(r, lam):
    cs = C.morse_cs(r, lam, 120)
    assert abs(cs.weights().sum() - 1.0) <= 1e-12


@given(st.floats(0.0, 12.0), st.floats(1.05, 6.0))
def test_spt_analytic_norm(g, rho):
    cs = C.spt_cs(g, rho, 120)
    assert abs(cs.weights().sum() - 1.0) <= 1e-12


def test_truncation_guard():
    with pytest.raises(C.TruncationError):
        C.morse_cs(1.5, 3.0, 5)
    # analytic norm over a short truncation cannot sum to one
    with pytest.raises(C.TruncationError):
        C.morse_cs(1.5, 3.0, 5, strict=False)
    cs = C.morse_cs(1.5, 3.0, 5, norm="numeric", strict=False)
    assert cs.weights().sum() == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        C.morse_cs(1.5, 3.0, 60, norm="other")


def test_zero_label_is_ground_state():
    cs = C.morse_cs(0.0, 3.0, 10)
    np.testing.assert_allclose(cs.weights(), np.eye(11)[0], atol=1e-15)


# --- Morse -------------------------------------------------------------------------

@pytest.mark.parametrize("x", [0.5, 2.0, 10.0])
def test_morse_series_matches_bessel_form(x):
    beta, lam = 1.5, 3.0
    series = C.morse_cs(beta, lam).evaluate(x)
    closed = C.morse_cs_closed(beta, lam, x)
    assert abs(series - closed) <= 1e-9 * abs(closed)


def test_morse_closed_form_against_mpmath():
    # independent evaluation of N^{-1} beta^{-lam/2} e^beta e^{-x/2} J_lam(2 sqrt(x beta))
    beta, lam = 2.2, 1.7
    inv_norm = mp.mpf(beta) ** (lam / 2) / mp.sqrt(mp.besseli(lam, 2 * beta))
    for x in (0.3, 4.0, 17.0):
        want = inv_norm * mp.mpf(beta) ** (-lam / 2) * mp.e ** (beta - x / 2) * mp.besselj(lam, 2 * mp.sqrt(x * beta))
        assert C.morse_cs_closed(beta, lam, x) == pytest.approx(float(want), rel=1e-12, abs=1e-15)


def test_morse_closed_form_needs_positive_real():
    with pytest.raises(DomainError):
        C.morse_cs_closed(1.0 + 1.0j, 3.0, 1.0)
    with pytest.raises(DomainError):
        C.morse_cs_closed(-1.0, 3.0, 1.0)


@pytest.mark.parametrize("beta", [0.5, 0.3 + 0.4j, -0.6j])
def test_perelomov_closed_form_matches_series(beta):
    lam = 3.0
    cs = C.morse_perelomov_coeffs(beta, lam, 200)
    state = C.morse_perelomov_cs(beta, lam)
    x = np.array([0.5, 2.0, 10.0])
    np.testing.assert_allclose(cs.evaluate(x), state(x), rtol=1e-11, atol=1e-15)
    assert state.norm_sq() == pytest.approx(1.0, rel=1e-13)


def test_perelomov_norm_by_quadrature():
    state = C.morse_perelomov_cs(0.4 - 0.3j, 2.5)
    val, _ = integrate.quad(lambda x: abs(state(x)) ** 2, 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    assert val == pytest.approx(1.0, rel=1e-10)


def test_perelomov_requires_unit_disc():
    with pytest.raises(DomainError):
        C.morse_perelomov_cs(1.0, 3.0)
    with pytest.raises(DomainError):
        C.morse_perelomov_coeffs(1.2j, 3.0)


# --- SPT -----------------------------------------------------------------------------

@pytest.mark.parametrize("g", [1.0, 5.0, 10.0])
@pytest.mark.parametrize("rho", [1.5, 2.0, 3.0])
def test_spt_s_identity(g, rho):
    assert abs(C.spt_s_sum(g, rho) - C.spt_s_integral(g, rho)) <= 1e-8 * C.spt_s_integral(g, rho)


def test_spt_s_sum_against_mpmath():
    g, rho = 4.0, 2.5
    want = mp.nsum(lambda n: mp.mpf(g) ** (2 * n) / (mp.factorial(n) * (n + rho) * mp.gamma(2 * rho + n)), [0, mp.inf])
    assert C.spt_s_sum(g, rho) == pytest.approx(float(want), rel=1e-14)


@pytest.mark.parametrize("gamma,rho", [(10.0, 2.0), (3.0, 1.5), (6.0, 3.5)])
def test_spt_series_matches_closed_form(gamma, rho):
    x = np.linspace(-0.999, 0.999, 41)
    series = C.spt_cs(gamma, rho).evaluate(x)
    closed = C.spt_cs_closed(gamma, rho, x)
    scale = np.max(np.abs(closed))
    assert np.max(np.abs(series - closed)) <= 1e-10 * scale


def test_spt_closed_form_is_normalized():
    gamma, rho = 5.0, 2.0
    spec = P.spt(rho)
    xs, w = spec.quadrature(200)
    assert np.sum(w * C.spt_cs_closed(gamma, rho, xs) ** 2) == pytest.approx(1.0, rel=1e-10)


def test_spt_weights_single_peaked():
    w = C.spt_cs(10.0, 2.0, 20, norm="numeric", strict=False).weights()
    k = int(np.argmax(w))
    assert 0 < k < 20
    assert np.all(np.diff(w[: k + 1]) > 0) and np.all(np.diff(w[k:]) < 0)


# --- PT -------------------------------------------------------------------------------

def test_pt_state_normalized_and_poch_option():
    a = C.pt_cs(10.0, 2.0, 6.0, 80)
    b = C.pt_cs(10.0, 2.0, 6.0, 80, poch=6.5)
    assert a.weights().sum() == pytest.approx(1.0, abs=1e-14)
    assert not np.allclose(a.c, b.c)
    with pytest.raises(C.TruncationError):
        C.CoeffSeq(a.family, a.c * 2, a.param, a.basis, a.norm_mode, a.norm, a.raw)


def test_pt_weight_ratio_formula():
    gamma, kappa, rho = 3.0, 2.0, 6.0
    c = C.pt_cs(gamma, kappa, rho, 40).c.real
    for n in range(5):
        # |c_{n+1}/c_n|^2 from the weight formula with (rho+1/2)_n
        want = gamma**2 * (rho + 0.5 + n) * (kappa + rho + 2 * n) / (
            (kappa + 0.5 + n) * (kappa + rho + 2 * n + 2) * (n + 1) * (kappa + rho + n))
        assert (c[n + 1] / c[n]) ** 2 == pytest.approx(want, rel=1e-13)


# --- nonlinear states -----------------------------------------------------------------------

def test_nonlinear_p1_closed_vs_series():
    got = C.nonlinear_cs([2.0], [3.0], 1.0, 0.5)
    series = C.nonlinear_cs_series([2.0], [3.0], 1.0, 0.5)
    assert abs(got - series) <= 1e-11 * abs(got)


@pytest.mark.parametrize("a,b,alpha,x", [
    ([1.5, 2.0], [3.0, 0.7], 0.8, 0.4),
    ([2.0], [3.0], 0.5 + 0.5j, 0.9),
    ([0.5, 1.0, 4.0], [2.0, 2.5, 1.5], 1.2, -0.3),
])
def test_nonlinear_general_p(a, b, alpha, x):
    closed = C.nonlinear_cs(a, b, alpha, x)
    series = C.nonlinear_cs_series(a, b, alpha, x)
    want = complex(mp.hyper(a, b, -x * alpha) * mp.e**alpha)
    assert abs(closed - want) <= 1e-13 * abs(want)
    assert abs(series - want) <= 1e-11 * abs(want)
