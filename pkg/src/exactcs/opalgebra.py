"""Operator algebra on the space of monomials.

Polynomials are dense complex coefficient vectors (``Poly``). Operators
(``LinOp``) are built from a handful of primitives (multiply by x, d/dx, the
Euler operator D = x d/dx, scalars, and functions of D acting diagonally on
x^k) and combined with ``+``, ``-``, scalar ``*`` and ``@`` (composition,
``A @ B`` applies B first).

Every LinOp carries ``shift``, an upper bound on how much it can raise the
degree. Operators with negative shift are nilpotent on polynomials, which is
what makes ``exp_op`` terminate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun

__all__ = [
    "DEFAULT_CAP",
    "CapExceededError",
    "IndicialError",
    "Poly",
    "LinOp",
    "X",
    "DX",
    "EULER",
    "IDENTITY",
    "scalar",
    "diag",
    "apply",
    "commutator_action",
    "series_solve",
    "exp_op",
    "chg_generators",
    "hg_lowering",
    "hg_conjugate",
    "chg_conjugate",
    "perelomov_generators",
    "susy_ladder_op",
    "susy_ladder_action",
    "euler_shift_annihilates",
    "su11_residuals",
    "hw_residual",
    "PerelomovReport",
    "perelomov_identity_check",
]

DEFAULT_CAP = 256


class CapExceededError(ValueError):
    """Result degree would exceed the polynomial length cap."""


class IndicialError(ValueError):
    """F(D) x^alpha != 0, or 1/F(D) hit a vanishing eigenvalue."""


class Poly:
    """Immutable dense polynomial; ``coeffs[k]`` multiplies x^k."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=(), cap: int = DEFAULT_CAP):
        c = np.array(coeffs, dtype=complex).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        if c.size > cap:
            raise CapExceededError(f"degree {c.size - 1} exceeds cap {cap}")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def monomial(cls, n: int, scale=1.0) -> "Poly":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = scale
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return self._c.size - 1

    def coeff(self, k: int) -> complex:
        return self._c[k] if 0 <= k < self._c.size else 0j

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length, dtype=complex)
        m = min(length, self._c.size)
        out[:m] = self._c[:m]
        return out

    def truncate(self, max_degree: int) -> "Poly":
        return Poly(self._c[: max_degree + 1])

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        acc = np.zeros_like(x)
        for ck in self._c[::-1]:
            acc = acc * x + ck
        return acc if acc.ndim else acc[()]

    def _binary(self, other, sign):
        if not isinstance(other, Poly):
            other = Poly([other])
        n = max(self._c.size, other._c.size)
        return Poly(self.padded(n) + sign * other.padded(n))

    def __add__(self, other):
        return self._binary(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, -1)

    def __neg__(self):
        return Poly(-self._c)

    def __mul__(self, s):
        if isinstance(s, Poly):
            return Poly(np.convolve(self._c, s._c)) if self._c.size and s._c.size else Poly()
        return Poly(self._c * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return Poly(self._c / s)

    def __eq__(self, other):
        return isinstance(other, Poly) and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    def __repr__(self):
        return f"Poly({self._c.tolist()})"


@dataclass(frozen=True)
class LinOp:
    """Linear operator on coefficient vectors.

    ``fn`` maps a coefficient array to a coefficient array (possibly of a
    different length); ``shift`` bounds the degree change from above.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    shift: int
    name: str = "op"

    def __call__(self, p: Poly) -> Poly:
        return apply(self, p)

    def __matmul__(self, other: "LinOp") -> "LinOp":
        f, g = self.fn, other.fn
        return LinOp(lambda c: f(g(c)), self.shift + other.shift, f"({self.name})({other.name})")

    def __add__(self, other) -> "LinOp":
        if not isinstance(other, LinOp):
            other = scalar(other)
        f, g = self.fn, other.fn

        def fn(c):
            u, v = f(c), g(c)
            n = max(u.size, v.size)
            out = np.zeros(n, dtype=complex)
            out[: u.size] += u
            out[: v.size] += v
            return out

        return LinOp(fn, max(self.shift, other.shift), f"{self.name} + {other.name}")

    __radd__ = __add__

    def __neg__(self) -> "LinOp":
        f = self.fn
        return LinOp(lambda c: -f(c), self.shift, f"-{self.name}")

    def __sub__(self, other) -> "LinOp":
        if not isinstance(other, LinOp):
            other = scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "LinOp":
        return (-self) + other

    def __mul__(self, s) -> "LinOp":
        f = self.fn
        return LinOp(lambda c: s * f(c), self.shift, f"{s}*{self.name}")

    __rmul__ = __mul__


@dataclass(frozen=True)
class DiagOp(LinOp):
    """Function of the Euler operator: x^k -> eigen(k) x^k."""

    eigen: Callable[[np.ndarray], np.ndarray] = None


def _mul_x(c):
    out = np.zeros(c.size + 1, dtype=complex)
    out[1:] = c
    return out


def _ddx(c):
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    return c[1:] * np.arange(1, c.size)


X = LinOp(_mul_x, 1, "x")
DX = LinOp(_ddx, -1, "d")


def diag(eigen: Callable[[np.ndarray], np.ndarray], name: str = "f(D)") -> DiagOp:
    """Operator acting on x^k by the scalar eigen(k).

    Degrees whose coefficient is zero are skipped, so a pole of eigen on an
    absent monomial is harmless; a pole on a present one raises IndicialError.
    """

    def fn(c):
        out = np.zeros_like(c, dtype=complex)
        nz = np.flatnonzero(c)
        if nz.size:
            with np.errstate(divide="raise", invalid="raise"):
                try:
                    ev = np.asarray(eigen(nz.astype(float)), dtype=complex)
                except FloatingPointError as exc:
                    raise IndicialError(f"{name} is singular on a present monomial") from exc
            if not np.all(np.isfinite(ev)):
                raise IndicialError(f"{name} is singular on a present monomial")
            out[nz] = c[nz] * ev
        return out

    return DiagOp(fn, 0, name, eigen)


def scalar(s) -> DiagOp:
    return diag(lambda k: np.full(k.shape, s, dtype=complex), f"{s}")


EULER = diag(lambda k: k, "D")
IDENTITY = scalar(1.0)


def apply(op: LinOp, p: Poly, cap: int = DEFAULT_CAP) -> Poly:
    c = p.coeffs
    if c.size + max(op.shift, 0) > cap:
        raise CapExceededError(f"{op.name} applied to degree {p.degree} exceeds cap {cap}")
    return Poly(op.fn(c.copy()), cap=cap)


def commutator_action(op_a: LinOp, op_b: LinOp, p: Poly, cap: int = DEFAULT_CAP) -> Poly:
    """(AB - BA) p."""
    return apply(op_a, apply(op_b, p, cap), cap) - apply(op_b, apply(op_a, p, cap), cap)


# ---------------------------------------------------------------------------
# series solution and exponentials
# ---------------------------------------------------------------------------

def series_solve(F: DiagOp, P: LinOp, alpha: int, n_terms: int, cap: int = DEFAULT_CAP) -> Poly:
    """Sum_{n=0}^{n_terms} (-1)^n [F(D)^{-1} P]^n x^alpha.

    F must be diagonal in the monomial basis and annihilate x^alpha.
    """
    if not isinstance(F, DiagOp):
        raise TypeError("F must be a function of the Euler operator (DiagOp)")
    f_alpha = complex(np.asarray(F.eigen(np.array([float(alpha)])))[0])
    if abs(f_alpha) > 1e-12:
        raise IndicialError(f"F(D) x^{alpha} = {f_alpha} x^{alpha}, not zero")

    def inv_f(c):
        out = np.zeros_like(c)
        nz = np.flatnonzero(c)
        if nz.size:
            ev = np.asarray(F.eigen(nz.astype(float)), dtype=complex)
            if np.any(np.abs(ev) <= 1e-12):
                raise IndicialError("1/F(D) applied to a monomial with vanishing eigenvalue")
            out[nz] = c[nz] / ev
        return out

    step = LinOp(inv_f, 0, "1/F(D)") @ P
    term = Poly.monomial(alpha)
    total = term
    for _ in range(n_terms):
        term = -apply(step, term, cap)
        total = total + term
    return total


def exp_op(op: LinOp, p: Poly, terms: int | None = None, cap: int = DEFAULT_CAP) -> Poly:
    """Sum_{k=0}^{terms} op^k p / k! for a degree-lowering op."""
    if op.shift >= 0:
        raise ValueError(f"exponential of {op.name} does not terminate (shift {op.shift} >= 0)")
    if terms is None:
        terms = max(p.degree, 0)
    if terms < p.degree:
        raise ValueError(f"terms={terms} < degree {p.degree}; exponential would be cut short")
    term, total = p, p
    for k in range(1, terms + 1):
        term = apply(op, term, cap) / k
        if term.degree < 0:
            break
        total = total + term
    return total


# ---------------------------------------------------------------------------
# realizations
# ---------------------------------------------------------------------------

def chg_generators(b: float):
    """K+ = x, K- = x d^2 + b d, K3 = D + b/2."""
    k_plus = X
    k_minus = X @ DX @ DX + b * DX
    k3 = diag(lambda k: k + 0.5 * b, "K3")
    return k_plus, k_minus, k3


def chg_conjugate(b: float) -> LinOp:
    """K~+ = (D + b - 1)^{-1} x, with [K-, K~+] = 1."""
    return diag(lambda k: 1.0 / (k + b - 1.0), "1/(D+b-1)") @ X


def hg_lowering(b: float, c: float) -> LinOp:
    """K^- = (D + b)^{-1} (x d^2 + c d)."""
    return diag(lambda k: 1.0 / (k + b), "1/(D+b)") @ (X @ DX @ DX + c * DX)


def hg_conjugate(b: float, c: float) -> LinOp:
    """K-bar+ = (D + b - 1)/(D + c - 1) x."""
    return diag(lambda k: (k + b - 1.0) / (k + c - 1.0), "(D+b-1)/(D+c-1)") @ X


def perelomov_generators(lam: float, plus_coeff: float | None = None):
    """L+ = x^2 d + 2k x, L- = d, L3 = D + k with Bargmann index k = (lam+1)/2.

    ``plus_coeff`` overrides the coefficient of x in L+ (default 2k = lam+1).
    """
    k = 0.5 * (lam + 1.0)
    pc = 2.0 * k if plus_coeff is None else plus_coeff
    l_plus = X @ X @ DX + pc * X
    l_minus = DX
    l3 = diag(lambda n: n + k, "L3")
    return l_plus, l_minus, l3


def su11_residuals(k_plus: LinOp, k_minus: LinOp, k3: LinOp, n: int) -> dict[str, float]:
    """Relative residuals of [K3,K+]=K+, [K3,K-]=-K-, [K+,K-]=-2K3 on x^n."""
    p = Poly.monomial(n)

    def rel(lhs: Poly, rhs: Poly) -> float:
        scale = max(rhs.max_abs(), lhs.max_abs(), 1.0)
        return (lhs - rhs).max_abs() / scale

    return {
        "[K3,K+]-K+": rel(commutator_action(k3, k_plus, p), k_plus(p)),
        "[K3,K-]+K-": rel(commutator_action(k3, k_minus, p), -k_minus(p)),
        "[K+,K-]+2K3": rel(commutator_action(k_plus, k_minus, p), -2.0 * k3(p)),
    }


def hw_residual(lower: LinOp, upper: LinOp, n: int) -> float:
    """Relative residual of [lower, upper] x^n = x^n."""
    p = Poly.monomial(n)
    return (commutator_action(lower, upper, p) - p).max_abs()


# ---------------------------------------------------------------------------
# n-dependent SUSY ladder pair
# ---------------------------------------------------------------------------

def susy_ladder_op(n: int, lam: float, direction: int) -> LinOp:
    """K+ + D - n (direction +1) or K- + D - n (direction -1), K- with b = lam+1."""
    k_plus, k_minus, _ = chg_generators(lam + 1.0)
    shift_n = diag(lambda k: k - n, "D-n")
    if direction > 0:
        return k_plus + shift_n
    if direction < 0:
        return k_minus + shift_n
    raise ValueError("direction must be +1 or -1")


def euler_shift_annihilates(n: int) -> bool:
    """(D - n) x^n == 0."""
    return apply(diag(lambda k: k - n), Poly.monomial(n)).degree < 0


def susy_ladder_action(n: int, lam: float, direction: int, p: Poly | None = None):
    """Map of the n-dependent SUSY operator on the monomial x^n.

    Returns ``(power, factor)`` such that the operator sends x^n to
    factor * x^power. If ``p`` is given it must be a multiple of x^n; the
    operator is applied to it and the resulting Poly is returned as well.
    """
    if direction > 0:
        power, factor = n + 1, 1.0
    elif direction < 0:
        power, factor = max(n - 1, 0), float(n * (n + lam))
    else:
        raise ValueError("direction must be +1 or -1")
    if p is None:
        return power, factor
    if p.degree != n or np.any(p.coeffs[:n] != 0):
        raise ValueError(f"operator with n={n} only acts on multiples of x^{n}")
    return power, factor, apply(susy_ladder_op(n, lam, direction), p)


# ---------------------------------------------------------------------------
# Perelomov identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerelomovReport:
    """Max coefficient residuals of the two exponential identities and of
    the L- eigenvalue relation on the truncated exponential."""

    intertwining: float
    generating: float
    eigen: float
    generating_printed_sign: float

    @property
    def max_residual(self) -> float:
        return max(self.intertwining, self.generating, self.eigen)


def _lag_coeffs(n: int, lam: float) -> np.ndarray:
    # L_n^lam = (lam+1)_n / n! * Phi(-n; lam+1; x)
    return specfun.pochhammer(lam + 1.0, n) / math.factorial(n) * specfun.hyp1f1_coeffs(n, lam + 1.0)


def perelomov_identity_check(lam: float, beta: complex, max_deg: int) -> PerelomovReport:
    """Check, on e^{beta x} truncated at degree max_deg:

    * exp(-M_{lam+2}) d = d exp(-M_{lam+1}), with M_c = x d^2 + c d;
    * exp(-M_{lam+1}) e^{-beta x} = Sum beta^n L_n^lam(x) (same truncation);
    * L- e^{beta x} = beta e^{beta x} below the top retained order.

    ``generating_printed_sign`` is the residual of the second identity with
    e^{+beta x}, which does not hold for beta != 0.
    """
    if max_deg + 1 > DEFAULT_CAP:
        raise CapExceededError(f"max_deg {max_deg} exceeds cap")
    m1 = X @ DX @ DX + (lam + 1.0) * DX
    m2 = X @ DX @ DX + (lam + 2.0) * DX

    def trunc_exp(z) -> Poly:
        return Poly([z**k / math.factorial(k) for k in range(max_deg + 1)])

    e_pos, e_neg = trunc_exp(beta), trunc_exp(-beta)

    lhs = exp_op(-m2, DX(e_pos), max_deg)
    rhs = DX(exp_op(-m1, e_pos, max_deg))
    intertwining = (lhs - rhs).max_abs()

    lag = Poly(np.zeros(1))
    for n in range(max_deg + 1):
        lag = lag + Poly(_lag_coeffs(n, lam)) * (beta**n)
    generating = (exp_op(-m1, e_neg, max_deg) - lag).max_abs()
    printed = (exp_op(-m1, e_pos, max_deg) - lag).max_abs()

    eigen = (DX(e_pos) - beta * e_pos.truncate(max_deg - 1)).max_abs()
    return PerelomovReport(intertwining, generating, eigen, printed)
