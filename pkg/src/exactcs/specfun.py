"""Special-function kernels: log-gamma, Pochhammer symbols, classical
orthogonal polynomials, terminating and convergent hypergeometric series,
and Bessel functions of the first kind.

Polynomial families are evaluated by forward three-term recurrence. The
``*_all`` variants return every degree ``0..nmax`` at once, stacked along the
first axis, which is what basis-expansion code wants.
"""

from __future__ import annotations

import cmath
import decimal
import math
from typing import Sequence

import numpy as np

__all__ = [
    "DomainError",
    "ConvergenceError",
    "BESSEL_X_MAX",
    "BESSEL_NU_MAX",
    "log_gamma",
    "pochhammer",
    "laguerre",
    "laguerre_all",
    "gegenbauer",
    "gegenbauer_all",
    "jacobi",
    "jacobi_all",
    "bessel_j",
    "bessel_i",
    "hyp1f1",
    "hyp1f1_coeffs",
    "hyp2f1_poly",
    "hyp2f1_coeffs",
    "hyp_pfq",
    "hyp_pfp",
]

# Validity window of the ascending Bessel series.
BESSEL_X_MAX = 60.0
BESSEL_NU_MAX = 50.0

_PFQ_MAX_TERMS = 500
_PFQ_RTOL = 1e-16


class DomainError(ValueError):
    """Argument outside the documented domain of a kernel."""


class ConvergenceError(ArithmeticError):
    """A series did not reach its termination criterion."""


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def pochhammer(a, n: int):
    """Rising factorial a(a+1)...(a+n-1), computed as a left-to-right product."""
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n}")
    out = 1.0
    for k in range(n):
        out = out * (a + k)
    return out


def _is_nonpos_int(v) -> bool:
    return float(v).is_integer() and v <= 0


# ---------------------------------------------------------------------------
# orthogonal polynomials
# ---------------------------------------------------------------------------

def laguerre_all(nmax: int, lam: float, x):
    """Associated Laguerre L_k^lam(x) for k = 0..nmax, shape (nmax+1, *x.shape)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1.0 + lam - x
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1 + lam - x) * out[k] - (k + lam) * out[k - 1]) / (k + 1)
    return out


def laguerre(n: int, lam: float, x):
    return laguerre_all(n, lam, x)[n]


def gegenbauer_all(nmax: int, rho: float, x):
    """Gegenbauer C_k^rho(x) for k = 0..nmax."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * rho * x
    for k in range(1, nmax):
        out[k + 1] = (2.0 * (k + rho) * x * out[k] - (k + 2 * rho - 1) * out[k - 1]) / (k + 1)
    return out


def gegenbauer(n: int, rho: float, x):
    return gegenbauer_all(n, rho, x)[n]


def jacobi_all(nmax: int, a: float, b: float, x):
    """Jacobi P_k^{(a,b)}(x) for k = 0..nmax (a, b > -1)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 0.5 * (a - b) + 0.5 * (a + b + 2) * x
    for k in range(1, nmax):
        s = 2 * k + a + b
        c1 = 2 * (k + 1) * (k + a + b + 1) * s
        c2 = (s + 1) * ((s + 2) * s * x + a * a - b * b)
        c3 = 2 * (k + a) * (k + b) * (s + 2)
        out[k + 1] = (c2 * out[k] - c3 * out[k - 1]) / c1
    return out


def jacobi(n: int, a: float, b: float, x):
    return jacobi_all(n, a, b, x)[n]


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def _check_bessel_window(nu, x):
    if not 0 <= nu <= BESSEL_NU_MAX:
        raise DomainError(f"Bessel order must lie in [0, {BESSEL_NU_MAX}], got {nu}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > BESSEL_X_MAX) or not np.all(np.isfinite(x)):
        raise DomainError(f"Bessel argument must lie in [0, {BESSEL_X_MAX}]")
    return x


def _leading_power(nu: float, x: float) -> float:
    # (x/2)^nu / Gamma(nu+1) in decimal; Gamma(nu+1) = Gamma(f+1) prod_{k<=m} (f+k)
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    m = int(nu)
    f = nu - m
    with decimal.localcontext() as ctx:
        ctx.prec = 30
        df = decimal.Decimal(f)
        gam = decimal.Decimal(math.gamma(f + 1.0))
        for k in range(1, m + 1):
            gam *= df + k
        return float((decimal.Decimal(x) / 2) ** decimal.Decimal(nu) / gam)


def _bessel_j_scalar(nu: float, x: float) -> float:
    lead = _leading_power(nu, x)
    if lead == 0.0 or x == 0.0:
        return lead
    # The alternating sum loses about x*log10(e) digits; carry them in decimal.
    digits = 24 + int(math.ceil(x * 0.4343))
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        q = decimal.Decimal(x) * decimal.Decimal(x) / 4
        nu1 = decimal.Decimal(nu) + 1
        term = decimal.Decimal(1)
        total = decimal.Decimal(1)
        tiny = decimal.Decimal(10) ** (-digits)
        k = 0
        while True:
            term = -term * q / ((k + 1) * (nu1 + k))
            total += term
            k += 1
            if k > x and abs(term) <= tiny * max(abs(total), tiny):
                break
            if k > 1000:
                raise ConvergenceError("bessel_j series did not converge")
        return lead * float(total)


def bessel_j(nu: float, x):
    """Bessel function of the first kind J_nu(x) on the window x in [0, 60]."""
    x = _check_bessel_window(nu, x)
    f = np.vectorize(lambda v: _bessel_j_scalar(float(nu), float(v)), otypes=[float])
    out = f(x)
    return out if out.ndim else float(out)


def bessel_i(nu: float, x):
    """Modified Bessel function I_nu(x) on the window x in [0, 60].

    All series terms are positive, so plain double precision suffices.
    """
    x = _check_bessel_window(nu, x)
    flat = np.atleast_1d(x).ravel()
    lead = np.array([_leading_power(nu, v) for v in flat])
    q = 0.25 * flat * flat
    term = np.ones_like(flat)
    total = np.ones_like(flat)
    for k in range(_PFQ_MAX_TERMS):
        term = term * q / ((k + 1) * (k + 1 + nu))
        total += term
        if np.all(term <= 1e-17 * total):
            break
    else:
        raise ConvergenceError("bessel_i series did not converge")
    out = (lead * total).reshape(x.shape)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# hypergeometric series
# ---------------------------------------------------------------------------

def _check_neg_n(neg_n) -> int:
    if not float(neg_n).is_integer() or neg_n > 0:
        raise DomainError(f"first parameter must be a non-positive integer, got {neg_n}")
    return -int(neg_n)


def _check_denominator(c, n: int, name: str = "b"):
    # (c)_k for k <= n vanishes iff c is in {0, -1, ..., -(n-1)}
    if _is_nonpos_int(c) and c >= -n + 1:
        raise DomainError(f"{name}={c} makes a Pochhammer denominator vanish")


def hyp1f1_coeffs(n: int, b: float) -> np.ndarray:
    """Monomial coefficients of Phi(-n; b; x), lowest degree first."""
    _check_denominator(b, n)
    out = np.empty(n + 1)
    out[0] = 1.0
    for k in range(n):
        out[k + 1] = out[k] * (k - n) / ((b + k) * (k + 1))
    return out


def hyp2f1_coeffs(n: int, b: float, c: float) -> np.ndarray:
    """Monomial coefficients of 2F1(-n, b; c; x)."""
    _check_denominator(c, n, "c")
    out = np.empty(n + 1)
    out[0] = 1.0
    for k in range(n):
        out[k + 1] = out[k] * (k - n) * (b + k) / ((c + k) * (k + 1))
    return out


def _poly_sum(coeffs: np.ndarray, x):
    # term-order summation, matching the definition of the finite series
    x = np.asarray(x)
    total = np.zeros(x.shape, dtype=np.result_type(x, float))
    power = np.ones_like(total)
    for ck in coeffs:
        total = total + ck * power
        power = power * x
    return total if total.ndim else total[()]


def hyp1f1(neg_n: int, b: float, x):
    """Terminating confluent hypergeometric series Phi(-n; b; x)."""
    n = _check_neg_n(neg_n)
    return _poly_sum(hyp1f1_coeffs(n, b), x)


def hyp2f1_poly(neg_n: int, b: float, c: float, x):
    """Terminating Gauss series 2F1(-n, b; c; x)."""
    n = _check_neg_n(neg_n)
    return _poly_sum(hyp2f1_coeffs(n, b, c), x)


def hyp_pfq(a: Sequence[float], b: Sequence[float], x):
    """Generalized series pFq(a; b; x) summed term by term.

    Stops once a term drops below 1e-16 of the partial sum (a vanishing
    numerator Pochhammer ends the series exactly). Raises ConvergenceError
    after 500 terms.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    for bj in b:
        if _is_nonpos_int(bj):
            raise DomainError(f"lower parameter {bj} is a non-positive integer")
    term = 1.0 + 0j if isinstance(x, complex) else 1.0
    total = term
    for k in range(_PFQ_MAX_TERMS):
        num = 1.0
        for ai in a:
            num *= ai + k
        den = float(k + 1)
        for bj in b:
            den *= bj + k
        term = term * num / den * x
        total = total + term
        if not cmath.isfinite(total):
            raise ConvergenceError(f"pFq series overflowed at term {k + 1} (x={x})")
        if abs(term) <= _PFQ_RTOL * abs(total):
            return total
    raise ConvergenceError(f"pFq series not converged after {_PFQ_MAX_TERMS} terms (x={x})")


def hyp_pfp(a: Sequence[float], b: Sequence[float], x):
    """pFp(a_1..a_p; b_1..b_p; x) with equally many upper and lower parameters."""
    if len(a) != len(b):
        raise DomainError(f"pFp needs len(a) == len(b), got {len(a)} and {len(b)}")
    return hyp_pfq(a, b, x)
