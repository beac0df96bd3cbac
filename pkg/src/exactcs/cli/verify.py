"""Invariant suites behind ``exactcs verify``.

Each check compares an implementation path against an independent oracle
(exact rationals, a different special-function route, quadrature) and
records the worst residual next to its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .. import coherent, opalgebra, specfun
from ..opalgebra import Poly


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tol: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<24} {self.value:.3e} (tol {self.tol:.0e})  {self.detail}"

    def as_dict(self) -> dict:
        return asdict(self)


def _le(name, value, tol, detail) -> Check:
    return Check(name, bool(value <= tol), float(value), tol, detail)


def su11_chg(max_degree: int, b_values) -> Check:
    worst = 0.0
    for b in b_values:
        gens = opalgebra.chg_generators(b)
        for n in range(max_degree + 1):
            worst = max(worst, *opalgebra.su11_residuals(*gens, n).values())
    return _le("su11 closure K", worst, 1e-12, f"b in {list(b_values)}, n <= {max_degree}")


def su11_perelomov(max_degree: int, lam: float) -> Check:
    gens = opalgebra.perelomov_generators(lam)
    worst = max(max(opalgebra.su11_residuals(*gens, n).values()) for n in range(max_degree + 1))
    return _le("su11 closure L", worst, 1e-12, f"lam={lam}, n <= {max_degree}")


def hw_pairs(max_degree: int, b_values, c: float = 2.5) -> list[Check]:
    chg = max(
        opalgebra.hw_residual(opalgebra.chg_generators(b)[1], opalgebra.chg_conjugate(b), n)
        for b in b_values for n in range(max_degree + 1)
    )
    hg = max(
        opalgebra.hw_residual(opalgebra.hg_lowering(b, c), opalgebra.hg_conjugate(b, c), n)
        for b in b_values for n in range(max_degree + 1)
    )
    return [
        _le("HW [K-, K~+] = 1", chg, 1e-12, f"n <= {max_degree}"),
        _le("HW [K^-, K-bar+] = 1", hg, 1e-12, f"c={c}, n <= {max_degree}"),
    ]


def susy_nonclosure(max_degree: int, lam: float, n_fixed: int = 2) -> Check:
    """The n-dependent pair with n held fixed must violate su(1,1) somewhere."""
    k3 = opalgebra.chg_generators(lam + 1.0)[2]
    up = opalgebra.susy_ladder_op(n_fixed, lam, +1)
    down = opalgebra.susy_ladder_op(n_fixed, lam, -1)
    worst = max(
        max(opalgebra.su11_residuals(up, down, k3, m).values())
        for m in range(max_degree + 1) if m != n_fixed
    )
    return Check("SUSY pair non-closure", bool(worst > 1e-6), worst, 1e-6,
                 f"residual must exceed tol; operator n={n_fixed}")


def series_solver(max_degree: int, b_values, betas=(0.5, 2.0, 5.0)) -> Check:
    worst = 0.0
    for b in b_values:
        F = opalgebra.diag(lambda k, b=b: (k + b - 1.0) * k, "(D+b-1)D")
        for beta in betas:
            got = opalgebra.series_solve(F, beta * opalgebra.X, 0, max_degree).padded(max_degree + 1)
            fb, fbeta = Fraction(b), Fraction(beta)
            exact, poch = Fraction(1), Fraction(1)
            for n in range(max_degree + 1):
                if n:
                    poch *= fb + n - 1
                    exact = (-fbeta) ** n / (math.factorial(n) * poch)
                worst = max(worst, abs(got[n] - float(exact)) / abs(float(exact)))
    return _le("series solver", worst, 1e-13, f"beta in {list(betas)}, n <= {max_degree}")


def exp_similarity(max_degree: int, b_values) -> Check:
    worst = 0.0
    for b in b_values:
        km = opalgebra.chg_generators(b)[1]
        for n in range(min(10, max_degree) + 1):
            start = Poly.monomial(n, (-1) ** n / specfun.pochhammer(b, n))
            got = opalgebra.exp_op(-km, start, n).padded(n + 1)
            want = specfun.hyp1f1_coeffs(n, b)
            worst = max(worst, float(np.max(np.abs(got - want))))
    return _le("exp(-K-) similarity", worst, 1e-12, "Phi(-n;b;x) coefficients, n <= 10")


def ao_eigen(b: float) -> list[Check]:
    chg = coherent.ao_residual(coherent.chg_cs(2.0, b, 60, strict=False))
    hg = coherent.ao_residual(coherent.hg_cs(1.5, 8.0, 2.5, 60, strict=False))
    return [
        _le("AO eigenstate CHG", chg, 1e-10, f"beta=2, b={b}, N=60"),
        _le("AO eigenstate HG", hg, 1e-10, "gamma=1.5, (b,c)=(8,2.5), N=60"),
    ]


def s_identity() -> Check:
    worst = 0.0
    for g in (1.0, 5.0, 10.0):
        for rho in (1.5, 2.0, 3.0):
            lhs = coherent.spt_s_sum(g, rho)
            rhs = coherent.spt_s_integral(g, rho)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return _le("S(gamma) identity", worst, 1e-8, "gamma in {1,5,10}, rho in {1.5,2,3}")


def perelomov_identities(max_degree: int, lam: float) -> Check:
    rep = opalgebra.perelomov_identity_check(lam, 0.5, min(12, max_degree))
    return _le("Perelomov identities", rep.max_residual, 1e-10, f"lam={lam}, beta=0.5")


def recurrences(max_degree: int, draws: int = 50, seed: int = 0) -> Check:
    """Forward recurrences against the terminating hypergeometric sums.

    Error is measured against the sum of absolute terms of the finite series,
    the scale on which that series is itself accurate.
    """
    rng = np.random.default_rng(seed)
    nmax = min(20, max_degree)
    worst = 0.0

    def scaled(rec, coeffs, z, factor):
        terms = np.abs(coeffs) * np.abs(z) ** np.arange(coeffs.size)
        hyp = factor * np.polynomial.polynomial.polyval(z, coeffs)
        return abs(rec - hyp) / (abs(factor) * terms.sum())

    for _ in range(draws):
        lam, x = rng.uniform(0.1, 6.0), rng.uniform(0.0, 5.0)
        rho, u = rng.uniform(0.6, 5.0), rng.uniform(-1.0, 1.0)
        a, b = rng.uniform(-0.9, 6.0), rng.uniform(-0.9, 6.0)
        lag = specfun.laguerre_all(nmax, lam, x)
        geg = specfun.gegenbauer_all(nmax, rho, u)
        jac = specfun.jacobi_all(nmax, a, b, u)
        z = 0.5 * (1.0 - u)
        for n in range(nmax + 1):
            fac = specfun.pochhammer(lam + 1, n) / math.factorial(n)
            worst = max(worst, scaled(lag[n], specfun.hyp1f1_coeffs(n, lam + 1), x, fac))
            fac = specfun.pochhammer(2 * rho, n) / math.factorial(n)
            worst = max(worst, scaled(geg[n], specfun.hyp2f1_coeffs(n, n + 2 * rho, rho + 0.5), z, fac))
            fac = specfun.pochhammer(a + 1, n) / math.factorial(n)
            worst = max(worst, scaled(jac[n], specfun.hyp2f1_coeffs(n, n + a + b + 1, a + 1), z, fac))
    return _le("recurrence vs series", worst, 1e-11, f"{draws} draws, n <= {nmax}")


def run_suites(max_degree: int = 30, b_values=(1.5, 4.0, 7.2), lam: float = 3.0) -> list[Check]:
    b_values = tuple(b_values)
    checks = [
        su11_chg(max_degree, b_values),
        su11_perelomov(max_degree, lam),
        *hw_pairs(max_degree, b_values),
        susy_nonclosure(max_degree, lam),
        series_solver(max_degree, b_values),
        exp_similarity(max_degree, b_values),
        *ao_eigen(b_values[0]),
        s_identity(),
        perelomov_identities(max_degree, lam),
        recurrences(max_degree),
    ]
    return checks
