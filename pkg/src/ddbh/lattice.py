"""Square-lattice tunneling dispersion, momentum paths and spectrum records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# t_k = (2J/z)(cos kx + cos ky), so that t_{k=0} = J as the mean-field frequency
# shift dw -> dw + J requires. "printed" halves it: t_k = (J/z)(cos kx + cos ky).
CORRECTED = "corrected"
PRINTED = "printed"
TK_CONVENTION = CORRECTED


def hopping(j: float, kx: float, ky: float, z: int = 4,
            convention: str = TK_CONVENTION) -> float:
    if convention == CORRECTED:
        pref = 2.0 * j / z
    elif convention == PRINTED:
        pref = j / z
    else:
        raise ValueError(f"unknown t_k convention {convention!r}")
    return pref * (math.cos(kx) + math.cos(ky))


def gxmg_path(points_per_segment: int = 20) -> list[tuple[float, float, float]]:
    """Gamma -> X -> M -> Gamma as ``(s, kx, ky)`` with s the arc length (a = 1)."""
    corners = [(0.0, 0.0), (math.pi, 0.0), (math.pi, math.pi), (0.0, 0.0)]
    out = []
    s = 0.0
    for seg, (start, stop) in enumerate(zip(corners[:-1], corners[1:])):
        length = math.dist(start, stop)
        n = points_per_segment
        first = 0 if seg == 0 else 1
        for i in range(first, n + 1):
            f = i / n
            kx = start[0] + f * (stop[0] - start[0])
            ky = start[1] + f * (stop[1] - start[1])
            out.append((s + f * length, kx, ky))
        s += length
    return out


def bz_grid(n: int = 8) -> list[tuple[float, float]]:
    """Uniform n x n grid over [0, pi]^2 (the irreducible quarter zone)."""
    ks = np.linspace(0.0, math.pi, n)
    return [(float(kx), float(ky)) for kx in ks for ky in ks]


@dataclass
class ExcitationSpectrum:
    """Complex eigenfrequencies per momentum.

    ``branches[i]`` holds every retained eigenfrequency at ``k_points[i]``
    sorted by decay rate; ``low_energy[i]`` is the selected pair
    ``(omega_plus, omega_minus)`` with omega_plus the one of larger real part.
    """

    k_points: list[tuple[float, float]]
    branches: list[np.ndarray]
    low_energy: list[tuple[complex, complex]] = field(default_factory=list)

    def low_energy_array(self) -> np.ndarray:
        return np.array(self.low_energy, dtype=complex)


def sort_by_decay(vals: np.ndarray) -> np.ndarray:
    vals = np.asarray(vals, dtype=complex)
    order = np.lexsort((vals.real, -vals.imag))
    return vals[order]


def order_pair(w1: complex, w2: complex) -> tuple[complex, complex]:
    if (w1.real, w1.imag) >= (w2.real, w2.imag):
        return w1, w2
    return w2, w1
