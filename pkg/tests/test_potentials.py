import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy import special as sp

from exactcs import potentials as P
from exactcs.specfun import DomainError


def interior_grid(spec, points=2000, margin=0.0):
    lo, hi = spec.physical_domain
    h = (hi - lo) / (points + 3)
    return np.linspace(lo + 2.5 * h + margin, hi - 2.5 * h - margin, points)


# psi ~ d^rho at a wall: for non-integer exponents the stencil sees the
# branch point, so those cases keep a small margin from the walls
def margin_for(*exponents):
    return 0.0 if all(float(e).is_integer() for e in exponents) else 0.05


# --- parameter validation ------------------------------------------------------

@pytest.mark.parametrize("factory,args", [
    (P.morse, (0.0,)), (P.spt, (1.0,)), (P.pt, (1.0, 2.0)), (P.pt, (2.0, 0.5)), (P.spt, (2.0, -1.0)),
])
def test_invalid_parameters(factory, args):
    with pytest.raises(ValueError):
        factory(*args)


def test_unknown_kind():
    with pytest.raises(ValueError):
        P.PotentialSpec("square")


def test_domains():
    assert P.spt(2).domain == (-1.0, 1.0)
    assert P.pt(2, 3).domain == pytest.approx((0.0, math.pi / 2))
    assert P.pt(2, 3, alpha=2).domain == pytest.approx((0.0, math.pi / 4))
    with pytest.raises(DomainError):
        P.spt(2).basis(3, [1.2])
    with pytest.raises(DomainError):
        P.morse(3).basis(3, [0.0])


def test_morse_has_no_spectrum():
    with pytest.raises(P.UnsupportedError):
        P.morse(3).energy(0)
    with pytest.raises(P.UnsupportedError):
        P.schrodinger_residual(P.morse(3).eigenstate(0), P.morse(3), np.linspace(0, 1, 10))


# --- spectra -------------------------------------------------------------------

@given(st.floats(1.01, 20), st.floats(0.2, 3), st.integers(0, 100))
def test_spt_second_difference(rho, alpha, n):
    e = P.spt(rho, alpha).energy([n, n + 1, n + 2])
    assert e[2] - 2 * e[1] + e[0] == pytest.approx(2 * alpha**2, rel=1e-9)


@given(st.floats(1.01, 20), st.floats(1.01, 20), st.integers(0, 100))
def test_pt_second_difference(kappa, rho, n):
    e = P.pt(kappa, rho).energy([n, n + 1, n + 2])
    assert e[2] - 2 * e[1] + e[0] == pytest.approx(8.0, rel=1e-9)


# --- orthonormality --------------------------------------------------------------

@pytest.mark.parametrize("spec,nmax", [
    (P.spt(2.0), 12), (P.spt(1.5), 12), (P.spt(3.7, 0.6), 12),
    (P.pt(2.0, 6.0), 10), (P.pt(1.3, 2.5, 1.7), 10),
    (P.morse(3.0), 12), (P.morse(0.7), 12),
])
def test_gram_matrix_identity(spec, nmax):
    g = P.gram_matrix(spec, nmax)
    assert np.max(np.abs(g - np.eye(nmax + 1))) <= 1e-8


@pytest.mark.parametrize("n", [0, 3, 8])
def test_spt_norm_against_direct_quadrature(n):
    # independent route: integrate the unnormalized function in y with scipy
    rho = 2.5
    f = lambda y: (np.cos(y) ** rho * sp.eval_gegenbauer(n, rho, np.sin(y))) ** 2
    val, _ = integrate.quad(f, -math.pi / 2, math.pi / 2, epsabs=0, epsrel=1e-13)
    assert P.spt_eigenstate(n, rho).norm_const == pytest.approx(1 / math.sqrt(val), rel=1e-10)


@pytest.mark.parametrize("n", [0, 2, 7])
def test_pt_norm_against_direct_quadrature(n):
    kappa, rho = 2.0, 6.0
    f = lambda y: (np.sin(y) ** kappa * np.cos(y) ** rho
                   * sp.eval_jacobi(n, kappa - 0.5, rho - 0.5, np.cos(2 * y))) ** 2
    val, _ = integrate.quad(f, 0, math.pi / 2, epsabs=0, epsrel=1e-13)
    assert P.pt_eigenstate(n, kappa, rho).norm_const == pytest.approx(1 / math.sqrt(val), rel=1e-10)


@pytest.mark.parametrize("n", [0, 4, 12])
def test_morse_norm_against_direct_quadrature(n):
    lam = 3.0
    f = lambda x: P.morse_eigenfunction(n, lam, x) ** 2
    val, _ = integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    assert val == pytest.approx(1.0, rel=1e-9)


# --- Schrodinger residuals ---------------------------------------------------------

@pytest.mark.parametrize("rho", [1.5, 2.0, 4.0])
def test_spt_residual(rho):
    spec = P.spt(rho)
    y = interior_grid(spec, margin=margin_for(rho))
    assert max(P.schrodinger_residual(spec.eigenstate(n), spec, y) for n in range(13)) <= 5e-6


@pytest.mark.parametrize("kappa,rho", [(2.0, 6.0), (1.5, 2.5)])
def test_pt_residual(kappa, rho):
    spec = P.pt(kappa, rho)
    y = interior_grid(spec, margin=margin_for(kappa, rho))
    assert max(P.schrodinger_residual(spec.eigenstate(n), spec, y) for n in range(11)) <= 5e-6


@pytest.mark.parametrize("lam", [0.8, 3.0, 6.0])
def test_morse_residual(lam):
    q = np.linspace(-1.5, 6.0, 2000)
    assert max(P.morse_residual(n, lam, q) for n in range(13)) <= 5e-6


def test_residual_detects_wrong_energy():
    spec = P.spt(2.0)
    st3 = spec.eigenstate(3)
    wrong = P.EigenState(3, st3.energy + 1.0, st3.evaluator, st3.norm_const, spec)
    assert P.schrodinger_residual(wrong, spec, interior_grid(spec)) > 1e-2


def test_residual_grid_guards():
    spec = P.spt(2.0)
    with pytest.raises(ValueError):
        P.schrodinger_residual(spec.eigenstate(0), spec, np.linspace(-math.pi / 2, 0, 2000))
    with pytest.raises(ValueError):
        P.schrodinger_residual(spec.eigenstate(0), spec, np.linspace(-1, 1, 50))


# --- shape properties ----------------------------------------------------------------

@pytest.mark.parametrize("spec,nmax", [(P.spt(2.0), 12), (P.pt(2.0, 6.0), 10), (P.morse(3.0), 12)])
def test_node_count(spec, nmax):
    if spec.kind == "morse":
        x = np.linspace(1e-3, 80, 20001)
    else:
        lo, hi = spec.domain
        x = np.linspace(lo, hi, 20001)[1:-1]
    b = spec.basis(nmax, x)
    assert [P.sign_changes(b[n]) for n in range(nmax + 1)] == list(range(nmax + 1))


@given(st.integers(0, 15), st.floats(1.1, 6), st.floats(-1, 1))
def test_spt_parity(n, rho, x):
    b = P.spt(rho).basis(n, np.array([x, -x]))[n]
    assert b[1] == pytest.approx((-1) ** n * b[0], rel=1e-12, abs=1e-14)


def test_eigenstate_callable_matches_basis():
    spec = P.pt(2.0, 6.0)
    y = np.linspace(0.1, 1.4, 9)
    np.testing.assert_array_equal(spec.eigenstate(4)(y), spec.basis(4, y)[4])
    assert spec.eigenstate(4).energy == spec.energy(4)
