"""Semiclassical (coherent-field) sector of the mean-field model."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import StepTooLarge
from .exact_prep import SystemParams
from .lattice import TK_CONVENTION, ExcitationSpectrum, hopping
from .numerics import solve_cubic

MONOSTABLE = "monostable"
BISTABLE = "bistable"


@dataclass(frozen=True)
class GPState:
    beta: complex
    n: float


def _shifted_detuning(p: SystemParams) -> float:
    return p.delta_omega + p.j


def density_cubic(p: SystemParams) -> tuple[float, float, float, float]:
    """Coefficients of  n((dw + J - nU)^2 + gamma^2/4) - |F|^2  in powers of n."""
    a = _shifted_detuning(p)
    u = p.u
    return (u * u, -2 * a * u, a * a + 0.25 * p.gamma**2, -abs(p.f) ** 2)


def gp_beta(p: SystemParams, n: float) -> complex:
    return p.f / (_shifted_detuning(p) - p.u * n + 0.5j * p.gamma)


def gp_density_roots(p: SystemParams) -> list[GPState]:
    """Physical steady states, sorted by density."""
    if p.u == 0:
        n = abs(p.f) ** 2 / (_shifted_detuning(p) ** 2 + 0.25 * p.gamma**2)
        return [GPState(gp_beta(p, n), n)]
    roots = solve_cubic(*density_cubic(p))
    states = []
    for n, _mult in roots:
        if n < 0:
            continue
        beta = gp_beta(p, n)
        # recompute n from beta so that n == |beta|^2 holds to rounding
        states.append(GPState(beta, abs(beta) ** 2))
    return states


def gp_discriminant(p: SystemParams) -> float:
    """Discriminant of the density cubic written for x = nU; > 0 means three real roots.

    With the monic form x^3 + Bx^2 + Cx + D, B = -2a, C = a^2 + gamma^2/4,
    the B^2C^2 - 4C^3 part collapses to -gamma^2 C^2, which avoids the
    cancellation of the textbook expression.
    """
    a = _shifted_detuning(p)
    cc = a * a + 0.25 * p.gamma**2
    d = -abs(p.f) ** 2 * p.u
    return d * (32 * a**3 - 36 * a * cc) - 27 * d * d - p.gamma**2 * cc * cc


def gp_bistable(p: SystemParams) -> str:
    if p.u == 0:
        return MONOSTABLE
    if gp_discriminant(p) <= 0:
        return MONOSTABLE
    roots = [s for s in gp_density_roots(p) if s.n > 0]
    return BISTABLE if len(roots) == 3 else MONOSTABLE


def critical_U(p: SystemParams, order: str = "next") -> tuple[float, float]:
    """Lower and upper bistability boundaries in U from the small-drive expansion."""
    if abs(p.f) <= 0:
        raise ValueError("critical_U needs a nonzero drive")
    dw = p.delta_omega
    eps2 = (abs(p.f) / dw) ** 2
    eta2 = (p.gamma / dw) ** 2
    a = 1 + p.j / dw
    uc1 = eta2 / (4 * eps2) * a
    uc2 = 4 * a**3 / (27 * eps2)
    if order == "next":
        uc1 -= eta2**2 / (64 * eps2 * a)
        uc2 += eta2 * a / (12 * eps2)
    elif order != "leading":
        raise ValueError("order must be 'leading' or 'next'")
    return uc1 * dw, uc2 * dw


def critical_U_numeric(p: SystemParams) -> tuple[float, float]:
    """Boundaries located by root bracketing on the discriminant sign."""
    def disc(u):
        return gp_discriminant(p.replace(u=u))

    out = []
    for guess in critical_U(p, "next"):
        lo, hi = 0.5 * guess, 2.0 * guess
        for _ in range(60):
            if disc(lo) * disc(hi) < 0:
                break
            lo, hi = 0.5 * lo, 2.0 * hi
        else:
            raise ArithmeticError("could not bracket the bistability boundary")
        out.append(brentq(disc, lo, hi, xtol=1e-14 * guess, rtol=1e-14, maxiter=500))
    return out[0], out[1]


def gp_frequencies(p: SystemParams, n: float, t_k: float) -> tuple[complex, complex]:
    rad = (-p.delta_omega - t_k + 2 * p.u * n) ** 2 - (p.u * n) ** 2
    root = cmath.sqrt(complex(rad))
    return root - 0.5j * p.gamma, -root - 0.5j * p.gamma


def gp_spectrum(p: SystemParams, state: GPState, k_path, *,
                convention: str = TK_CONVENTION) -> ExcitationSpectrum:
    """Two-branch Bogoliubov spectrum of the coherent field ``state``.

    ``k_path`` items are ``(kx, ky)`` or ``(s, kx, ky)``.
    """
    ks = [(k[-2], k[-1]) for k in k_path]
    branches, low = [], []
    for kx, ky in ks:
        t = hopping(p.j, kx, ky, p.z, convention)
        wp, wm = gp_frequencies(p, state.n, t)
        branches.append(np.array([wp, wm]))
        low.append((wp, wm))
    return ExcitationSpectrum(ks, branches, low)


def _gp_rhs(p: SystemParams, beta: complex) -> complex:
    lin = -_shifted_detuning(p) - 0.5j * p.gamma + p.u * abs(beta) ** 2
    return -1j * (lin * beta + p.f)


def gp_evolve(p: SystemParams, beta0: complex, t_end: float, dt: float) -> GPState:
    """Fixed-step RK4 integration of the single-mode field equation."""
    scale = max(p.gamma, abs(_shifted_detuning(p)), p.u * abs(beta0) ** 2)
    if scale > 0 and dt > 0.1 / scale:
        raise StepTooLarge(f"dt={dt:g} exceeds 0.1/{scale:g}")
    steps = int(math.ceil(t_end / dt))
    h = t_end / steps if steps else 0.0
    beta = complex(beta0)
    for _ in range(steps):
        k1 = _gp_rhs(p, beta)
        k2 = _gp_rhs(p, beta + 0.5 * h * k1)
        k3 = _gp_rhs(p, beta + 0.5 * h * k2)
        k4 = _gp_rhs(p, beta + h * k3)
        beta += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return GPState(beta, abs(beta) ** 2)
