"""Closed forms valid for weak pumping and weak dissipation."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AtCriticalCoupling, NearResonance, XiOutOfRange
from .exact_prep import SystemParams
from .fock import DensityMatrix, Observables, diagonal_rho

VALIDITY_LIMIT = 0.1
RESONANCE_GUARD = 0.1


@dataclass(frozen=True)
class WeakDriveParams:
    """Drive, loss and interaction measured in units of the detuning."""

    epsilon: float
    eta: float
    u: float

    def __post_init__(self):
        if self.epsilon > VALIDITY_LIMIT or self.eta > VALIDITY_LIMIT:
            warnings.warn("weak-drive formulas used outside epsilon, eta << 1",
                          RuntimeWarning, stacklevel=2)

    @classmethod
    def from_params(cls, p: SystemParams) -> "WeakDriveParams":
        dw = p.delta_omega
        return cls(abs(p.f) / dw, p.gamma / dw, p.u / dw)


def resonance_detuning(n: int) -> float:
    """U/dw at which n pump photons match n interacting cavity photons."""
    if n < 2:
        raise ValueError("multiphoton resonance needs n >= 2")
    return 2.0 / (n - 1)


def critical_coupling(n: int, delta_omega: float = 1.0) -> float:
    if n < 2:
        raise ValueError("n must be >= 2")
    return delta_omega / (n - 1)


def xi(epsilon: float, eta: float) -> float:
    if epsilon <= 0 or eta <= 0:
        raise ValueError("epsilon and eta must be positive")
    return 1.0 / (1.0 + 8 * epsilon**4 / eta**2)


def two_photon_coherence(p: SystemParams, xi_value: float) -> complex:
    if abs(p.f) <= 0:
        raise ValueError("needs a nonzero drive")
    f = abs(p.f)
    return f / p.delta_omega * (2 * xi_value - 1) + 1j * p.gamma / (2 * f) * (xi_value - 1)


def two_photon_observables(xi_value: float, p: SystemParams | None = None) -> Observables:
    """Density and g2 at two-photon resonance as functions of xi.

    The coherence is filled in only when the physical parameters are given.
    """
    if not 0 <= xi_value < 1:
        raise XiOutOfRange(f"xi={xi_value} outside [0, 1)")
    coh = two_photon_coherence(p, xi_value) if p is not None else complex("nan")
    return Observables(n_mean=1 - xi_value, g2=1 / (2 * (1 - xi_value)), coherence=coh)


def binomial_mixture(n: int) -> DensityMatrix:
    """Diagonal state with binomial(n, 1/2) photon-number distribution."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pops = [math.comb(n, k) / 2**n for k in range(n + 1)]
    return diagonal_rho(pops)


def offres_density_matrix(w: WeakDriveParams, guard: float = RESONANCE_GUARD) -> DensityMatrix:
    """Three-level perturbative steady state away from the 1- and 2-photon resonances."""
    if abs(2 - w.u) < guard or abs(1 - w.u) < guard:
        raise NearResonance(f"u={w.u} within {guard} of a resonance")
    e, h, u = w.epsilon, w.eta, w.u
    r2 = math.sqrt(2)
    r10 = e * (1 - 0.5j * h)
    r20 = r2 * e**2 / (2 - u) * (1 - 0.5j * h * (4 - u) / (2 - u))
    r21 = r2 * e**3 / (2 - u) * (1 - 1j * h / (2 - u))
    rho = np.array([
        [1.0, np.conj(r10), np.conj(r20)],
        [r10, e**2, np.conj(r21)],
        [r20, r21, 2 * e**4 / (2 - u) ** 2],
    ], dtype=complex)
    return DensityMatrix(rho / np.trace(rho).real)


def mf_coherence(n: int, p: SystemParams, resonant: bool = True) -> complex:
    """Weak-drive self-consistent coherence on (or away from) the n-photon resonance."""
    eps = p.f / p.delta_omega
    jr = p.j / p.delta_omega
    if not resonant:
        return eps / (1 + jr)
    if n < 2:
        raise ValueError("resonant branch needs n >= 2")
    den = 1 - (n - 1) * jr
    if abs(den) < 1e-12:
        raise AtCriticalCoupling(f"J equals the critical coupling dw/{n - 1}")
    return -(n - 1) * eps / den
