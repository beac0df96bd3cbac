"""Coherent-state constructors.

Each constructor returns a ``CoeffSeq``: normalized expansion weights over a
basis, either an abstract polynomial family (``PolyBasis``: Phi(-n; b; x) or
2F1(-n, b; c; x)) or the orthonormal eigenfunctions of a ``PotentialSpec``.
Closed forms (Bessel, pFp e^alpha) live next to the series they resum.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import opalgebra, specfun
from .opalgebra import Poly
from .potentials import PotentialSpec, morse, pt, spt

__all__ = [
    "TruncationError",
    "TRUNCATION_RTOL",
    "PolyBasis",
    "CoeffSeq",
    "chg_cs",
    "hg_cs",
    "morse_cs",
    "morse_cs_closed",
    "PerelomovState",
    "morse_perelomov_cs",
    "morse_perelomov_coeffs",
    "spt_s_sum",
    "spt_s_integral",
    "spt_cs",
    "spt_cs_closed",
    "pt_cs",
    "nonlinear_cs",
    "nonlinear_cs_series",
    "ao_residual",
]

TRUNCATION_RTOL = 1e-12
DEFAULT_N = 80


class TruncationError(ValueError):
    """The last retained weight is not negligible: raise N or pass strict=False."""


@dataclass(frozen=True)
class PolyBasis:
    """Abstract polynomial basis: Phi(-n; b; x) ("chg") or 2F1(-n, b; c; x) ("hg")."""

    kind: str
    b: float
    c: float | None = None

    def __post_init__(self):
        if self.kind not in ("chg", "hg"):
            raise ValueError(f"unknown polynomial basis {self.kind!r}")
        lower = self.b if self.kind == "chg" else self.c
        if lower is None or (float(lower).is_integer() and lower <= 0):
            raise specfun.DomainError(f"lower parameter {lower} must not be a non-positive integer")

    def coeffs(self, n: int) -> np.ndarray:
        if self.kind == "chg":
            return specfun.hyp1f1_coeffs(n, self.b)
        return specfun.hyp2f1_coeffs(n, self.b, self.c)

    def basis(self, nmax: int, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "chg" and self.b > 0:
            # Phi(-n; b; x) = n!/(b)_n L_n^{b-1}(x); the recurrence avoids cancellation
            lag = specfun.laguerre_all(nmax, self.b - 1.0, x)
            scale = np.array([
                math.exp(math.lgamma(n + 1) + math.lgamma(self.b) - math.lgamma(self.b + n))
                for n in range(nmax + 1)
            ])
            return lag * scale.reshape((-1,) + (1,) * x.ndim)
        f = specfun.hyp1f1 if self.kind == "chg" else specfun.hyp2f1_poly
        args = (self.b,) if self.kind == "chg" else (self.b, self.c)
        return np.stack([np.asarray(f(-n, *args, x), dtype=float) for n in range(nmax + 1)])

    def lowering(self) -> opalgebra.LinOp:
        if self.kind == "chg":
            return opalgebra.chg_generators(self.b)[1]
        return opalgebra.hg_lowering(self.b, self.c)

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "b": self.b}
        if self.c is not None:
            d["c"] = self.c
        return d


@dataclass(frozen=True)
class CoeffSeq:
    """Normalized expansion weights c_0..c_N of a coherent state.

    ``norm`` is the factor that maps the unnormalized weights ``raw`` to
    ``c``. With ``norm_mode == "analytic"`` it comes from a closed-form
    normalization; with ``"numeric"`` it is 1/sqrt(sum |raw|^2).
    """

    family: str
    c: np.ndarray = field(repr=False)
    param: complex
    basis: PotentialSpec | PolyBasis
    norm_mode: str
    norm: float
    raw: np.ndarray = field(repr=False)

    def __post_init__(self):
        total = float(np.sum(np.abs(self.c) ** 2))
        if abs(total - 1.0) > 1e-10:
            raise TruncationError(
                f"sum |c_n|^2 = {total!r} after {self.norm_mode} normalization; "
                "raise N or use norm='numeric'"
            )
        self.c.setflags(write=False)

    @property
    def N(self) -> int:
        return self.c.size - 1

    def weights(self) -> np.ndarray:
        return np.abs(self.c) ** 2

    def evaluate(self, x) -> np.ndarray:
        """Sum_n c_n f_n(x) over the retained basis functions."""
        b = self.basis.basis(self.N, x)
        return np.tensordot(self.c, b, axes=1)

    def as_poly(self) -> Poly:
        """Monomial form (abstract polynomial bases only)."""
        if not isinstance(self.basis, PolyBasis):
            raise TypeError("as_poly needs an abstract polynomial basis")
        out = np.zeros(self.N + 1, dtype=complex)
        for n, cn in enumerate(self.c):
            out[: n + 1] += cn * self.basis.coeffs(n)
        return Poly(out)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "param": [self.param.real, self.param.imag],
            "N": self.N,
            "norm_mode": self.norm_mode,
            "norm": self.norm,
            "basis": self.basis.as_dict(),
            "c": [[v.real, v.imag] for v in self.c.tolist()],
        }


def _phase_powers(param: complex, log_mag: np.ndarray) -> np.ndarray:
    """param^n * exp(log_mag_n) with the modulus handled in log space."""
    n = np.arange(log_mag.size)
    r = abs(param)
    if r == 0.0:
        out = np.zeros(log_mag.size, dtype=complex)
        out[0] = math.exp(log_mag[0])
        return out
    theta = cmath.phase(param)
    return np.exp(n * math.log(r) + log_mag) * np.exp(1j * n * theta)


def _finish(family, param, basis, raw, norm_mode, analytic_norm, strict) -> CoeffSeq:
    w = np.abs(raw) ** 2
    if strict and w.size > 1 and w[-1] > TRUNCATION_RTOL * w.max():
        raise TruncationError(
            f"|c_N|^2 / max |c_n|^2 = {w[-1] / w.max():.3e} > {TRUNCATION_RTOL} at N={w.size - 1}"
        )
    if norm_mode == "analytic":
        if analytic_norm is None:
            raise ValueError(f"{family} has no analytic normalization; use norm='numeric'")
        norm = float(analytic_norm)
    elif norm_mode == "numeric":
        norm = 1.0 / math.sqrt(float(np.sum(w)))
    else:
        raise ValueError(f"norm must be 'analytic' or 'numeric', got {norm_mode!r}")
    return CoeffSeq(family, raw * norm, complex(param), basis, norm_mode, norm, raw)


# ---------------------------------------------------------------------------
# polynomial-level states
# ---------------------------------------------------------------------------

def _poisson_like_raw(param: complex, N: int) -> np.ndarray:
    log_mag = -np.array([math.lgamma(n + 1) for n in range(N + 1)])
    return _phase_powers(param, log_mag)


def _i0_norm(param: complex):
    # sum |p|^{2n}/(n!)^2 = I_0(2|p|)
    z = 2 * abs(param)
    return None if z > specfun.BESSEL_X_MAX else 1.0 / math.sqrt(specfun.bessel_i(0, z))


def chg_cs(beta: complex, b: float, N: int = DEFAULT_N, norm: str = "analytic", strict: bool = True) -> CoeffSeq:
    """Sum beta^n/n! Phi(-n; b; x): eigenstate of K- = x d^2 + b d with eigenvalue -beta."""
    basis = PolyBasis("chg", b)
    return _finish("chg", beta, basis, _poisson_like_raw(beta, N), norm, _i0_norm(beta), strict)


def hg_cs(gamma: complex, b: float, c: float, N: int = DEFAULT_N, norm: str = "analytic", strict: bool = True) -> CoeffSeq:
    """Sum gamma^n/n! 2F1(-n, b; c; x): eigenstate of (D+b)^{-1}(x d^2 + c d)."""
    basis = PolyBasis("hg", b, c)
    return _finish("hg", gamma, basis, _poisson_like_raw(gamma, N), norm, _i0_norm(gamma), strict)


def ao_residual(cs: CoeffSeq) -> float:
    """||K phi_N + p phi_N|| / ||phi_N|| on degrees 0..N-1 in the monomial basis.

    K is the basis' lowering operator and p the CS label; the top degree is
    a truncation artifact and is excluded.
    """
    poly = cs.as_poly()
    lowered = opalgebra.apply(cs.basis.lowering(), poly)
    diff = (lowered + cs.param * poly).padded(cs.N)
    return float(np.linalg.norm(diff) / np.linalg.norm(poly.coeffs))


# ---------------------------------------------------------------------------
# Morse
# ---------------------------------------------------------------------------

def morse_cs(beta: complex, lam: float, N: int = DEFAULT_N, norm: str = "analytic", strict: bool = True) -> CoeffSeq:
    """Weights beta^n / sqrt(n! Gamma(lam+n+1)) over the fixed-lam Morse basis.

    Analytic normalization |beta|^{lam/2} / sqrt(I_lam(2|beta|)).
    """
    spec = morse(lam)
    log_mag = np.array([-0.5 * (math.lgamma(n + 1) + math.lgamma(lam + n + 1)) for n in range(N + 1)])
    raw = _phase_powers(beta, log_mag)
    r = abs(beta)
    if r ** lam < 1e-200:
        # I_lam(2r)/r^lam = sum_k r^{2k}/(k! Gamma(lam+k+1)); two terms are exact here
        scaled = math.exp(-math.lgamma(lam + 1)) * (1.0 + r * r / (lam + 1))
        analytic = 1.0 / math.sqrt(scaled)
    elif 2 * r <= specfun.BESSEL_X_MAX and lam <= specfun.BESSEL_NU_MAX:
        analytic = r ** (0.5 * lam) / math.sqrt(specfun.bessel_i(lam, 2 * r))
    else:
        analytic = None
    return _finish("morse", beta, spec, raw, norm, analytic, strict)


def morse_cs_closed(beta: float, lam: float, x):
    """N^{-1} beta^{-lam/2} e^beta e^{-x/2} J_lam(2 sqrt(x beta)), real beta > 0."""
    if isinstance(beta, complex) or not beta > 0:
        raise specfun.DomainError("Bessel closed form only for real beta > 0")
    x = morse(lam).check_domain(x)
    inv_norm = beta ** (0.5 * lam) / math.sqrt(specfun.bessel_i(lam, 2 * beta))
    return inv_norm * beta ** (-0.5 * lam) * math.exp(beta) * np.exp(-0.5 * x) * specfun.bessel_j(
        lam, 2 * np.sqrt(x * beta)
    )


@dataclass(frozen=True)
class PerelomovState:
    """Perelomov coherent state of the Morse basis, |beta| < 1."""

    beta: complex
    lam: float

    @property
    def _w(self) -> complex:
        return (1 + self.beta) / (1 - self.beta)

    @property
    def _prefactor(self) -> complex:
        b, lam = self.beta, self.lam
        return (1 - abs(b) ** 2) ** (0.5 * (lam + 1)) / math.sqrt(math.gamma(lam + 1)) * (1 - b) ** (-(lam + 1))

    def __call__(self, x):
        x = morse(self.lam).check_domain(x)
        return self._prefactor * x ** (0.5 * self.lam) * np.exp(-0.5 * x * self._w)

    def norm_sq(self) -> float:
        """int_0^inf |phi|^2 dx = |pref|^2 Gamma(lam+1) / Re(w)^(lam+1)."""
        return abs(self._prefactor) ** 2 * math.gamma(self.lam + 1) / self._w.real ** (self.lam + 1)


def morse_perelomov_cs(beta: complex, lam: float) -> PerelomovState:
    if not abs(beta) < 1:
        raise specfun.DomainError("Perelomov state needs |beta| < 1")
    if not lam > 0:
        raise ValueError("lam must be positive")
    return PerelomovState(complex(beta), float(lam))


def morse_perelomov_coeffs(beta: complex, lam: float, N: int = DEFAULT_N, strict: bool = True) -> CoeffSeq:
    """Perelomov weights (1-|beta|^2)^{(lam+1)/2} beta^n sqrt((lam+1)_n / n!)."""
    if not abs(beta) < 1:
        raise specfun.DomainError("Perelomov state needs |beta| < 1")
    log_mag = np.array([
        0.5 * (math.lgamma(lam + 1 + n) - math.lgamma(lam + 1) - math.lgamma(n + 1)) for n in range(N + 1)
    ])
    raw = _phase_powers(beta, log_mag)
    analytic = (1 - abs(beta) ** 2) ** (0.5 * (lam + 1))
    return _finish("morse-perelomov", beta, morse(lam), raw, "analytic", analytic, strict)


# ---------------------------------------------------------------------------
# symmetric Poschl-Teller
# ---------------------------------------------------------------------------

def spt_s_sum(g: float, rho: float) -> float:
    """S(g) = sum_n g^{2n} / (n! (n+rho) Gamma(2 rho + n)), summed to 1e-17."""
    g = abs(g)
    total = 0.0
    for n in range(2000):
        lt = -math.lgamma(n + 1) - math.log(n + rho) - math.lgamma(2 * rho + n)
        if g == 0.0:
            return math.exp(lt)
        term = math.exp(2 * n * math.log(g) + lt)
        total += term
        if n > g and term <= 1e-17 * total:
            return total
    raise specfun.ConvergenceError("S(|gamma|) sum did not converge")


def spt_s_integral(g: float, rho: float) -> float:
    """g^{-2 rho} int_0^{2g} I_{2 rho - 1}(x) dx by adaptive quadrature."""
    from scipy.integrate import quad

    g = abs(g)
    val, _ = quad(lambda t: specfun.bessel_i(2 * rho - 1, t), 0.0, 2 * g, epsabs=0.0, epsrel=1e-13, limit=200)
    return val / g ** (2 * rho)


def _spt_log_bracket(n: int, rho: float, alpha: float) -> float:
    lg = math.lgamma
    return 0.5 * (
        0.5 * math.log(math.pi) + lg(2 * rho) + lg(rho + 0.5)
        - math.log(alpha) - lg(n + 1) - math.log(n + rho) - lg(rho) - lg(2 * rho + n)
    )


def spt_cs(gamma: complex, rho: float, N: int = DEFAULT_N, alpha: float = 1.0,
           norm: str = "analytic", strict: bool = True) -> CoeffSeq:
    """SPT coherent state over the orthonormal SPT eigenfunctions."""
    spec = spt(rho, alpha)
    log_mag = np.array([_spt_log_bracket(n, rho, alpha) for n in range(N + 1)])
    raw = _phase_powers(gamma, log_mag)
    lg = math.lgamma
    analytic = math.sqrt(
        alpha * math.exp(lg(rho) - lg(rho + 0.5) - lg(2 * rho)) / (math.sqrt(math.pi) * spt_s_sum(gamma, rho))
    )
    return _finish("spt", gamma, spec, raw, norm, analytic, strict)


def spt_cs_closed(gamma: float, rho: float, x, alpha: float = 1.0):
    """Bessel resummation of the SPT state, real gamma > 0, x = sin(alpha y).

    N^{-1} Gamma(rho+1/2) e^{gamma x} (gamma/2)^{1/2-rho} (1-x^2)^{1/4}
    J_{rho-1/2}(gamma sqrt(1-x^2)).
    """
    if isinstance(gamma, complex) or not gamma > 0:
        raise specfun.DomainError("Bessel closed form only for real gamma > 0")
    x = spt(rho, alpha).check_domain(x)
    lg = math.lgamma
    inv_norm = math.sqrt(
        alpha * math.exp(lg(rho) - lg(rho + 0.5) - lg(2 * rho)) / (math.sqrt(math.pi) * spt_s_sum(gamma, rho))
    )
    r = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    return (
        inv_norm * math.gamma(rho + 0.5) * np.exp(gamma * x) * (0.5 * gamma) ** (0.5 - rho)
        * np.sqrt(r) * specfun.bessel_j(rho - 0.5, gamma * r)
    )


# ---------------------------------------------------------------------------
# Poschl-Teller
# ---------------------------------------------------------------------------

def pt_cs(gamma: complex, kappa: float, rho: float, N: int = DEFAULT_N, alpha: float = 1.0,
          poch: float | None = None, strict: bool = True) -> CoeffSeq:
    """PT coherent state, normalized numerically.

    Weights gamma^n [Gamma(kappa+1/2) (poch+1/2)_n /
    (2 alpha (kappa+1/2)_n (kappa+rho+2n) n! Gamma(kappa+rho+n))]^{1/2},
    with ``poch`` defaulting to rho.
    """
    spec = pt(kappa, rho, alpha)
    p = rho if poch is None else poch
    lg = math.lgamma

    def log_bracket(n):
        return 0.5 * (
            lg(kappa + 0.5) + lg(p + 0.5 + n) - lg(p + 0.5)
            - math.log(2 * alpha) - (lg(kappa + 0.5 + n) - lg(kappa + 0.5))
            - math.log(kappa + rho + 2 * n) - lg(n + 1) - lg(kappa + rho + n)
        )

    raw = _phase_powers(gamma, np.array([log_bracket(n) for n in range(N + 1)]))
    return _finish("pt", gamma, spec, raw, "numeric", None, strict)


# ---------------------------------------------------------------------------
# generalized nonlinear states
# ---------------------------------------------------------------------------

def nonlinear_cs(a, b, alpha: complex, x: float) -> complex:
    """Closed form pFp(a; b; -x alpha) e^alpha."""
    z = -x * alpha
    return specfun.hyp_pfp(a, b, complex(z) if isinstance(z, complex) else z) * cmath.exp(alpha)


def nonlinear_cs_series(a, b, alpha: complex, x: float, N: int = 60) -> complex:
    """Truncated sum_{n<=N} alpha^n/n! (p+1)F(p)(a, -n; b; x)."""
    total = 0j
    weight = 1.0 + 0j
    for n in range(N + 1):
        if n:
            weight = weight * alpha / n
        total += weight * specfun.hyp_pfq(list(a) + [-n], b, x)
    return total
