"""Exact single-cavity steady state from the complex P-representation.

All closed forms share the complex constant ``c = 2(-dw - i gamma/2)/U`` and
the two-lower-parameter series of :mod:`ddbh.numerics`. Lattice coupling never
enters here: the mean-field layer substitutes the effective drive before
calling in.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationTooSmall
from .fock import DensityMatrix, Observables, coherent_vector, hermitize
from .numerics import (DEFAULT_SERIES, SeriesConfig, hyper_ratio, hyper_series_scaled,
                       pochhammer)


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters in common frequency units.

    ``j`` is the tunneling amplitude J and ``z`` the lattice coordination
    number; ``f`` is the (complex) pump amplitude.
    """

    u: float
    f: complex
    gamma: float
    j: float = 0.0
    delta_omega: float = 1.0
    z: int = 4

    def __post_init__(self):
        object.__setattr__(self, "f", complex(self.f))
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.j < 0:
            raise ValueError("j must be >= 0")
        if self.u < 0:
            raise ValueError("u must be >= 0")
        if self.z < 1:
            raise ValueError("z must be >= 1")

    @property
    def c(self) -> complex:
        return 2 * (-self.delta_omega - 0.5j * self.gamma) / self.u

    def with_drive(self, f: complex) -> "SystemParams":
        return dataclasses.replace(self, f=complex(f))

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def as_ratios(self) -> dict:
        dw = self.delta_omega
        return {"u": self.u / dw, "j": self.j / dw, "f": self.f / dw,
                "gamma": self.gamma / dw}


def linear_coherence(p: SystemParams) -> complex:
    """Steady coherent amplitude of the driven linear cavity (U = 0)."""
    return p.f / (p.delta_omega + 0.5j * p.gamma)


def correlation(j_order: int, p: SystemParams, cfg: SeriesConfig = DEFAULT_SERIES) -> complex:
    """Normally ordered moment <(b^dag)^j b^j> of the steady state."""
    if j_order < 1:
        raise ValueError("j_order must be a positive integer")
    if p.u == 0:
        return complex(abs(linear_coherence(p)) ** (2 * j_order))
    c = p.c
    x = 8 * abs(p.f / p.u) ** 2
    y = 4 * abs(p.f / p.u) ** 2
    pref = y**j_order / (pochhammer(c, j_order) * pochhammer(c.conjugate(), j_order))
    if pref == 0:
        return 0j
    ratio = hyper_ratio((c + j_order, c.conjugate() + j_order, x), (c, c.conjugate(), x), cfg)
    return pref * ratio


def coherence(p: SystemParams, cfg: SeriesConfig = DEFAULT_SERIES) -> complex:
    """Steady-state bosonic coherence <b>."""
    lin = linear_coherence(p)
    if p.u == 0:
        return lin
    c = p.c
    x = 8 * abs(p.f / p.u) ** 2
    return lin * hyper_ratio((1 + c, c.conjugate(), x), (c, c.conjugate(), x), cfg)


def exact_observables(p: SystemParams, cfg: SeriesConfig = DEFAULT_SERIES) -> Observables:
    n = correlation(1, p, cfg).real
    b = coherence(p, cfg)
    if n < 1e-12:
        g2 = math.nan
    else:
        g2 = correlation(2, p, cfg).real / n**2
    return Observables(n_mean=n, g2=g2, coherence=b)


def density_matrix(p: SystemParams, n_max: int, cfg: SeriesConfig = DEFAULT_SERIES, *,
                   numerator_scale: float = 4.0, top_tol: float = 1e-10) -> DensityMatrix:
    """Fock-basis steady state on photon numbers 0..n_max, trace renormalized.

    ``numerator_scale`` is the factor s in the numerator series argument
    s |F/U|^2. The value 4 is the one that reproduces the brute-force
    master-equation steady state (and sums to the unit-trace identity);
    the keyword exists so that claim stays testable.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dim = n_max + 1
    if p.u == 0:
        vec = coherent_vector(linear_coherence(p), n_max)
        rho = np.outer(vec, vec.conj())
    else:
        c = p.c
        cc = c.conjugate()
        ratio2 = abs(p.f / p.u) ** 2
        y = -2 * p.f / p.u
        pref = np.empty(dim, dtype=complex)
        pref[0] = 1.0
        for n in range(1, dim):
            pref[n] = pref[n - 1] * y / (math.sqrt(n) * (c + n - 1))
        m_den, e_den = hyper_series_scaled(c, cc, 8 * ratio2, cfg)
        rho = np.empty((dim, dim), dtype=complex)
        for n in range(dim):
            for m in range(n, dim):
                m_num, e_num = hyper_series_scaled(c + n, cc + m, numerator_scale * ratio2, cfg)
                val = pref[n] * pref[m].conjugate() * (m_num / m_den) * 10.0 ** (e_num - e_den)
                rho[n, m] = val
                rho[m, n] = val.conjugate()
    top = rho[n_max, n_max].real
    if top >= top_tol:
        raise TruncationTooSmall(
            f"population {top:.3g} at n_max={n_max} exceeds {top_tol:g}")
    return DensityMatrix(hermitize(rho))


def default_n_max(p: SystemParams, cfg: SeriesConfig = DEFAULT_SERIES) -> int:
    """Rough truncation estimate from the exact mean density.

    Near bistability the population has a faint second hump around the
    high semiclassical density, so the largest semiclassical root also
    counts toward the estimate.
    """
    from .gross_pitaevskii import gp_density_roots

    n = correlation(1, p, cfg).real
    n = max([n] + [s.n for s in gp_density_roots(p)])
    return int(math.ceil(n + 8 * math.sqrt(n + 1) + 8))
