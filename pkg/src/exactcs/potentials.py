"""Morse, symmetric Poschl-Teller (SPT) and Poschl-Teller (PT) bound states.

Units: hbar = 2m = 1, so energies are alpha^2 (n+rho)^2 (SPT) and
alpha^2 (kappa+rho+2n)^2 (PT). Each potential has a *natural variable* in
which its eigenfunctions are evaluated:

* Morse: x = 2 mu exp(-a y) on (0, inf), basis at fixed lam, measure dx;
* SPT:   x = sin(alpha y) on [-1, 1], measure dy = dx / (alpha sqrt(1-x^2));
* PT:    the position y itself on [0, pi/(2 alpha)], measure dy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_genlaguerre, roots_legendre

from . import specfun

__all__ = [
    "UnsupportedError",
    "PotentialSpec",
    "EigenState",
    "morse",
    "spt",
    "pt",
    "morse_eigenfunction",
    "spt_eigenstate",
    "pt_eigenstate",
    "schrodinger_residual",
    "gram_matrix",
    "sign_changes",
]

MORSE, SPT, PT = "morse", "spt", "pt"


class UnsupportedError(ValueError):
    """Quantity not defined for this potential (e.g. the Morse spectrum)."""


@dataclass(frozen=True)
class PotentialSpec:
    kind: str
    lam: float | None = None
    rho: float | None = None
    kappa: float | None = None
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind == MORSE:
            if self.lam is None or not self.lam > 0:
                raise ValueError("Morse requires lam > 0")
        elif self.kind == SPT:
            if self.rho is None or not self.rho > 1:
                raise ValueError("SPT requires rho > 1")
        elif self.kind == PT:
            if self.kappa is None or self.rho is None or not (self.kappa > 1 and self.rho > 1):
                raise ValueError("PT requires kappa, rho > 1")
        else:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    # -- spectrum -----------------------------------------------------------
    def energy(self, n):
        n = np.asarray(n, dtype=float)
        if self.kind == SPT:
            return self.alpha**2 * (n + self.rho) ** 2
        if self.kind == PT:
            return self.alpha**2 * (self.kappa + self.rho + 2 * n) ** 2
        raise UnsupportedError("no Morse spectrum is used; Morse dynamics are excluded")

    # -- natural variable ---------------------------------------------------
    @property
    def domain(self) -> tuple[float, float]:
        if self.kind == MORSE:
            return (0.0, math.inf)
        if self.kind == SPT:
            return (-1.0, 1.0)
        return (0.0, 0.5 * math.pi / self.alpha)

    def check_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if self.kind == MORSE:
            bad = ~(x > 0) | ~np.isfinite(x)
        else:
            bad = (x < lo) | (x > hi) | ~np.isfinite(x)
        if np.any(bad):
            raise specfun.DomainError(f"points outside the {self.kind} domain {self.domain}")
        return x

    def basis(self, nmax: int, x) -> np.ndarray:
        """Orthonormal eigenfunctions 0..nmax at x, shape (nmax+1, *x.shape)."""
        x = self.check_domain(x)
        if self.kind == MORSE:
            return _morse_basis(nmax, self.lam, x)
        if self.kind == SPT:
            return _spt_basis(nmax, self.rho, self.alpha, x)
        return _pt_basis(nmax, self.kappa, self.rho, self.alpha, x)

    def eigenstate(self, n: int) -> "EigenState":
        if self.kind == MORSE:
            return EigenState(n, None, lambda x: self.basis(n, x)[n], _morse_norm(n, self.lam), self)
        if self.kind == SPT:
            return spt_eigenstate(n, self.rho, self.alpha)
        return pt_eigenstate(n, self.kappa, self.rho, self.alpha)

    def quadrature(self, nodes: int = 128) -> tuple[np.ndarray, np.ndarray]:
        """Nodes in the natural variable and weights for the physical measure.

        Morse nodes carry the weight x^lam e^{-x} folded out of the integrand:
        use ``basis_reduced`` with them.
        """
        if self.kind == MORSE:
            return roots_genlaguerre(nodes, self.lam)
        t, w = roots_legendre(nodes)
        if self.kind == SPT:
            half = 0.5 * math.pi / self.alpha
            y = half * t
            return np.sin(self.alpha * y), half * w
        half = 0.25 * math.pi / self.alpha
        return half * (t + 1.0), half * w

    def basis_reduced(self, nmax: int, x) -> np.ndarray:
        """Basis divided by the square root of the quadrature weight function.

        Equal to ``basis`` except for Morse, where e^{-x/2} x^{lam/2} is removed.
        """
        if self.kind == MORSE:
            x = self.check_domain(x)
            lag = specfun.laguerre_all(nmax, self.lam, x)
            return lag * np.array([_morse_norm(k, self.lam) for k in range(nmax + 1)])[:, None]
        return self.basis(nmax, x)

    # -- physical coordinate ------------------------------------------------
    def to_natural(self, y):
        """Map the physical coordinate y to the natural variable."""
        y = np.asarray(y, dtype=float)
        if self.kind == SPT:
            return np.sin(self.alpha * y)
        if self.kind == PT:
            return y
        raise UnsupportedError("Morse physical coordinate needs mu; use morse_residual")

    def potential(self, y):
        y = np.asarray(y, dtype=float)
        a2 = self.alpha**2
        if self.kind == SPT:
            return a2 * self.rho * (self.rho - 1) / np.cos(self.alpha * y) ** 2
        if self.kind == PT:
            s = np.sin(self.alpha * y) ** 2
            return a2 * (self.kappa * (self.kappa - 1) / s + self.rho * (self.rho - 1) / (1 - s))
        raise UnsupportedError("Morse potential depends on mu; use morse_residual")

    @property
    def physical_domain(self) -> tuple[float, float]:
        half = 0.5 * math.pi / self.alpha
        if self.kind == SPT:
            return (-half, half)
        if self.kind == PT:
            return (0.0, half)
        raise UnsupportedError("Morse physical domain needs mu")

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "alpha": self.alpha}
        for key in ("lam", "rho", "kappa"):
            v = getattr(self, key)
            if v is not None:
                d[key] = v
        return d


def morse(lam: float) -> PotentialSpec:
    return PotentialSpec(MORSE, lam=lam)


def spt(rho: float, alpha: float = 1.0) -> PotentialSpec:
    return PotentialSpec(SPT, rho=rho, alpha=alpha)


def pt(kappa: float, rho: float, alpha: float = 1.0) -> PotentialSpec:
    return PotentialSpec(PT, kappa=kappa, rho=rho, alpha=alpha)


@dataclass(frozen=True)
class EigenState:
    n: int
    energy: float | None
    evaluator: Callable = field(repr=False)
    norm_const: float
    spec: PotentialSpec | None = field(default=None, repr=False)

    def __call__(self, x):
        return self.evaluator(x)


# ---------------------------------------------------------------------------
# Morse
# ---------------------------------------------------------------------------

def _morse_norm(n: int, lam: float) -> float:
    return math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(lam + n + 1)))


def _morse_basis(nmax, lam, x):
    envelope = np.exp(-0.5 * x + 0.5 * lam * np.log(x))
    lag = specfun.laguerre_all(nmax, lam, x)
    norms = np.array([_morse_norm(k, lam) for k in range(nmax + 1)])
    return lag * (norms.reshape((-1,) + (1,) * x.ndim) * envelope)


def morse_eigenfunction(n: int, lam: float, x):
    """Orthonormal (measure dx) fixed-lam Morse function e^{-x/2} x^{lam/2} L_n^lam(x)."""
    x = morse(lam).check_domain(x)
    out = _morse_basis(n, lam, x)[n]
    return out if out.ndim else float(out)


def morse_residual(n: int, lam: float, q) -> float:
    """Schrodinger residual of the n-th fixed-lam Morse function in q = a y.

    With mu = (lam + 2n + 1)/2 the state solves
    -psi'' + mu^2 (1 - e^{-q})^2 psi = (mu^2 - lam^2/4) psi.
    """
    q = np.asarray(q, dtype=float)
    mu = 0.5 * (lam + 2 * n + 1)
    psi = lambda qq: _morse_basis(n, lam, 2 * mu * np.exp(-qq))[n]
    v = mu**2 * (1 - np.exp(-q)) ** 2
    return _fd_residual(psi, v, mu**2 - 0.25 * lam**2, q)


# ---------------------------------------------------------------------------
# SPT
# ---------------------------------------------------------------------------

def _spt_norm(n: int, rho: float, alpha: float) -> float:
    lg = math.lgamma
    log_sq = (
        math.log(alpha) + lg(n + 1) + math.log(n + rho) + lg(rho) + lg(2 * rho)
        - 0.5 * math.log(math.pi) - lg(rho + 0.5) - lg(n + 2 * rho)
    )
    return math.exp(0.5 * log_sq)


def _spt_basis(nmax, rho, alpha, x):
    geg = specfun.gegenbauer_all(nmax, rho, x)
    norms = np.array([_spt_norm(k, rho, alpha) for k in range(nmax + 1)])
    envelope = np.clip(1.0 - x * x, 0.0, None) ** (0.5 * rho)
    return geg * (norms.reshape((-1,) + (1,) * x.ndim) * envelope)


def spt_eigenstate(n: int, rho: float, alpha: float = 1.0) -> EigenState:
    spec = spt(rho, alpha)
    return EigenState(
        n,
        float(spec.energy(n)),
        lambda x: spec.basis(n, x)[n],
        _spt_norm(n, rho, alpha),
        spec,
    )


# ---------------------------------------------------------------------------
# PT
# ---------------------------------------------------------------------------

def _pt_norm(n: int, kappa: float, rho: float, alpha: float) -> float:
    lg = math.lgamma
    log_sq = (
        math.log(2 * alpha * (kappa + rho + 2 * n)) + lg(n + 1) + lg(kappa + rho + n)
        - lg(kappa + n + 0.5) - lg(rho + n + 0.5)
    )
    return math.exp(0.5 * log_sq)


def _pt_basis(nmax, kappa, rho, alpha, y):
    s = np.sin(alpha * y)
    c = np.cos(alpha * y)
    jac = specfun.jacobi_all(nmax, kappa - 0.5, rho - 0.5, 1.0 - 2.0 * s * s)
    norms = np.array([_pt_norm(k, kappa, rho, alpha) for k in range(nmax + 1)])
    envelope = np.abs(c) ** rho * np.abs(s) ** kappa
    return jac * (norms.reshape((-1,) + (1,) * y.ndim) * envelope)


def pt_eigenstate(n: int, kappa: float, rho: float, alpha: float = 1.0) -> EigenState:
    spec = pt(kappa, rho, alpha)
    return EigenState(
        n,
        float(spec.energy(n)),
        lambda y: spec.basis(n, y)[n],
        _pt_norm(n, kappa, rho, alpha),
        spec,
    )


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def _fd_residual(psi: Callable, v: np.ndarray, energy: float, grid: np.ndarray) -> float:
    h = grid[1] - grid[0]
    if h > 1e-2:
        raise ValueError(f"grid spacing {h} too coarse (> 1e-2)")
    if not np.allclose(np.diff(grid), h, rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    # fourth-order central stencil
    f = [psi(grid + k * h) for k in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    resid = -d2 + v * f[2] - energy * f[2]
    return float(np.max(np.abs(resid)) / np.max(np.abs(energy * f[2])))


def schrodinger_residual(state: EigenState, spec: PotentialSpec, grid) -> float:
    """max |-psi'' + V psi - E psi| / max |E psi| on a uniform interior grid in y.

    Derivatives use a five-point central difference; the grid must keep two
    spacings away from the domain edges.
    """
    grid = np.asarray(grid, dtype=float)
    if spec.kind == MORSE:
        raise UnsupportedError("use morse_residual for the Morse family")
    lo, hi = spec.physical_domain
    h = grid[1] - grid[0]
    if grid[0] - 2 * h <= lo or grid[-1] + 2 * h >= hi:
        raise ValueError("grid (plus stencil) must be interior to the domain")
    psi = lambda y: state(spec.to_natural(y))
    return _fd_residual(psi, spec.potential(grid), state.energy, grid)


def gram_matrix(spec: PotentialSpec, nmax: int, nodes: int = 128) -> np.ndarray:
    """<psi_m|psi_n> by Gauss quadrature in the physical measure."""
    x, w = spec.quadrature(nodes)
    b = spec.basis_reduced(nmax, x)
    return (b * w) @ b.T


def sign_changes(values) -> int:
    v = np.asarray(values, dtype=float)
    v = v[np.abs(v) > 1e-300]
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))
