"""Cross-checks of the closed forms against the brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact_prep import SystemParams, exact_observables
from .fock import observables_from
from .lindblad_oracle import adaptive_steady_state
from .numerics import DEFAULT_SERIES, SeriesConfig

GRID_BOUNDS = {"u": (0.1, 4.0), "f": (0.05, 0.5), "gamma": (0.05, 0.5)}


def random_grid(seed: int, points: int = 50) -> list[SystemParams]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(points):
        vals = {k: float(rng.uniform(*b)) for k, b in GRID_BOUNDS.items()}
        out.append(SystemParams(u=vals["u"], f=vals["f"], gamma=vals["gamma"]))
    return out


@dataclass(frozen=True)
class Comparison:
    params: SystemParams
    n_max: int
    rel_n: float
    rel_g2: float
    rel_b: float


def compare_point(p: SystemParams, leak_tol: float = 1e-14,
                  cfg: SeriesConfig = DEFAULT_SERIES, n_cap: int = 60,
                  confirm: int = 3) -> Comparison:
    exact = exact_observables(p, cfg)
    rho = adaptive_steady_state(p, p.f, leak_tol, n_cap=n_cap, confirm=confirm)
    ora = observables_from(rho)
    return Comparison(
        params=p, n_max=rho.n_max,
        rel_n=abs(exact.n_mean - ora.n_mean) / abs(ora.n_mean),
        rel_g2=abs(exact.g2 - ora.g2) / abs(ora.g2),
        rel_b=abs(exact.coherence - ora.coherence) / abs(ora.coherence),
    )
