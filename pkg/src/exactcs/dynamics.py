"""Time evolution over a discrete spectrum: density carpets, autocorrelation,
revival detection and weighting distributions.

A coherent state sum_n c_n psi_n evolves as sum_n c_n psi_n e^{-i E_n t}; its
autocorrelation with the initial state is A(t) = sum_n |c_n|^2 e^{-i E_n t}.
Only the SPT and PT families carry a spectrum here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .coherent import CoeffSeq
from .potentials import MORSE, PotentialSpec

__all__ = [
    "BasisMismatchError",
    "UnsupportedBasisError",
    "NormDriftError",
    "NORM_TOL",
    "FULL_REVIVAL",
    "Marker",
    "AutocorrSeries",
    "EvolutionGrid",
    "default_x_grid",
    "default_t_grid",
    "evolve",
    "autocorrelation",
    "autocorrelation_from_levels",
    "revival_scan",
    "weight_distribution",
]

NORM_TOL = 1e-6
FULL_REVIVAL = 0.99
DEFAULT_THRESHOLD = 0.3
_PLATEAU_TOL = 1e-12


class BasisMismatchError(ValueError):
    pass


class UnsupportedBasisError(ValueError):
    pass


class NormDriftError(ArithmeticError):
    pass


class Marker(NamedTuple):
    t: float
    value: float
    label: str


@dataclass(frozen=True)
class AutocorrSeries:
    t: np.ndarray
    A: np.ndarray
    markers: tuple[Marker, ...] = ()

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.A) ** 2


@dataclass(frozen=True)
class EvolutionGrid:
    """|psi(x_j, t_k)|^2 stored as density[j, k]."""

    x: np.ndarray
    t: np.ndarray
    density: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)


def _check(cs: CoeffSeq, spec: PotentialSpec):
    if not isinstance(cs.basis, PotentialSpec):
        raise UnsupportedBasisError(f"{cs.family} state has no potential spectrum")
    if cs.basis.kind == MORSE or spec.kind == MORSE:
        raise UnsupportedBasisError("Morse dynamics are not supported (no spectrum)")
    if cs.basis != spec:
        raise BasisMismatchError(f"state basis {cs.basis} differs from {spec}")


def default_x_grid(spec: PotentialSpec, points: int = 512) -> np.ndarray:
    lo, hi = spec.domain
    return np.linspace(lo, hi, points)


def default_t_grid(points: int = 2048, tmax: float = 2 * math.pi) -> np.ndarray:
    if points == 1:
        return np.zeros(1)
    return np.linspace(0.0, tmax, points)


def evolve(cs: CoeffSeq, spec: PotentialSpec, x_grid, t_grid, quad_nodes: int | None = None) -> EvolutionGrid:
    """Density |sum_n c_n psi_n(x) e^{-i E_n t}|^2 on the (x, t) lattice.

    The norm of each time slice is computed by Gauss quadrature in the
    physical measure (through the Gram matrix of the retained basis); a
    drift beyond 1e-6 raises NormDriftError.
    """
    _check(cs, spec)
    x = np.asarray(x_grid, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    if x.size == 0 or t.size == 0:
        raise ValueError("grids must be nonempty")
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    energies = spec.energy(np.arange(cs.N + 1))
    phases = np.exp(-1j * np.outer(energies, t))          # (N+1, nt)
    amps = cs.c[:, None] * phases
    basis = spec.basis(cs.N, x)                            # (N+1, nx)
    density = np.abs(basis.T @ amps) ** 2                  # (nx, nt)

    nodes = quad_nodes or max(128, 2 * cs.N + 64)
    qx, qw = spec.quadrature(nodes)
    qb = spec.basis(cs.N, qx)
    gram = (qb * qw) @ qb.T
    norms = np.einsum("mk,mn,nk->k", amps.conj(), gram, amps).real
    drift = float(np.max(np.abs(norms - 1.0)))
    if drift > NORM_TOL:
        raise NormDriftError(f"slice norm drift {drift:.3e} exceeds {NORM_TOL}")
    meta = {
        "potential": spec.as_dict(),
        "family": cs.family,
        "param": [cs.param.real, cs.param.imag],
        "N": cs.N,
        "norm_mode": cs.norm_mode,
        "max_norm_drift": drift,
    }
    return EvolutionGrid(x, t, density, norms, meta)


def autocorrelation_from_levels(weights, energies, t_grid, threshold: float = DEFAULT_THRESHOLD) -> AutocorrSeries:
    """A(t) = sum_n w_n e^{-i E_n t} for explicit weights and levels."""
    w = np.asarray(weights, dtype=float)
    e = np.asarray(energies, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    A = np.exp(-1j * np.outer(t, e)) @ w
    series = AutocorrSeries(t, A)
    if np.any(np.abs(A) > 1 + 1e-12):
        raise NormDriftError("|A(t)| exceeds 1; weights are not normalized")

    def intensity(tt: float) -> float:
        return float(abs(np.dot(w, np.exp(-1j * e * tt))) ** 2)

    markers = revival_scan(series, threshold, refine=intensity) if t.size >= 3 else []
    return AutocorrSeries(t, A, tuple(markers))


def autocorrelation(cs: CoeffSeq, spec: PotentialSpec, t_grid, threshold: float = DEFAULT_THRESHOLD) -> AutocorrSeries:
    _check(cs, spec)
    energies = spec.energy(np.arange(cs.N + 1))
    return autocorrelation_from_levels(cs.weights(), energies, t_grid, threshold)


def revival_scan(series: AutocorrSeries, threshold: float = DEFAULT_THRESHOLD,
                 refine: Callable[[float], float] | None = None) -> list[Marker]:
    """Strict interior local maxima of |A|^2 above ``threshold``.

    Runs of equal samples (within 1e-12) count as one candidate, reported at
    their first time. Peaks with |A|^2 >= 0.99 are labelled "full", the rest
    "fractional".

    If ``refine`` (t -> |A(t)|^2) is given, each grid peak is replaced by the
    maximum of ``refine`` between its two neighbouring samples.
    """
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    p = series.intensity
    if p.size < 3:
        raise ValueError("revival scan needs at least three samples")
    markers = []
    i = 1
    while i < p.size - 1:
        j = i
        while j + 1 < p.size and abs(p[j + 1] - p[i]) <= _PLATEAU_TOL:
            j += 1
        left_lower = p[i] - p[i - 1] > _PLATEAU_TOL
        right_lower = j + 1 < p.size and p[i] - p[j + 1] > _PLATEAU_TOL
        if left_lower and right_lower:
            t_peak, v_peak = float(series.t[i]), float(p[i])
            if refine is not None:
                t_peak, v_peak = _refine_peak(refine, series.t[i - 1], series.t[j + 1], t_peak, v_peak)
            if v_peak > threshold:
                label = "full" if v_peak >= FULL_REVIVAL else "fractional"
                markers.append(Marker(t_peak, v_peak, label))
        i = j + 1
    return markers


def _refine_peak(f, lo, hi, t0, v0):
    res = minimize_scalar(lambda tt: -f(tt), bounds=(float(lo), float(hi)), method="bounded",
                          options={"xatol": 1e-12})
    if res.success and -res.fun >= v0:
        return float(res.x), float(-res.fun)
    return t0, v0


def weight_distribution(cs: CoeffSeq) -> list[tuple[int, float]]:
    """(n, |c_n|^2) for n = 0..N."""
    return [(n, float(w)) for n, w in enumerate(cs.weights())]
