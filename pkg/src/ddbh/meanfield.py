"""Self-consistent mean-field steady states of the driven-dissipative lattice.

A homogeneous lattice reduces to one driven site whose drive is
``F - J <b>``; the coherence must reproduce itself through the exact
single-cavity formula. Several fixed points may coexist (bistability).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DDBHError, NoneFound
from .exact_prep import SystemParams, coherence, exact_observables, linear_coherence
from .fock import Observables
from .gross_pitaevskii import gp_bistable, gp_density_roots
from .numerics import DEFAULT_SERIES, SeriesConfig, find_fixed_points

AXES = ("j", "u", "f", "gamma")


class Stability(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class MeanFieldSolution:
    b: complex
    f_eff: complex
    obs: Observables
    stable: Stability = Stability.UNDETERMINED
    residual: float = 0.0


@dataclass(frozen=True)
class MeanFieldConfig:
    tol: float = 1e-10
    dedup_radius: float = 1e-7
    series: SeriesConfig = DEFAULT_SERIES
    ring_points: int = 8
    check_stability: bool = False
    k_grid_n: int = 8
    leak_tol: float = 1e-6
    n_cap: int = 40


def self_consistent_map(b: complex, p: SystemParams,
                        cfg: SeriesConfig = DEFAULT_SERIES) -> complex:
    """Single-cavity coherence evaluated at the effective drive F - J b."""
    return coherence(p.with_drive(p.f - p.j * b), cfg)


def default_seeds(p: SystemParams, ring_points: int = 8) -> list[complex]:
    base = [0j, linear_coherence(p)]
    base += [s.beta for s in gp_density_roots(p)]
    radius = max(abs(s) for s in base)
    if radius == 0:
        radius = abs(p.f) / p.delta_omega or 1.0
    ring = [radius * np.exp(2j * math.pi * k / ring_points) for k in range(ring_points)]
    return base + [complex(r) for r in ring]


def make_solution(p: SystemParams, b: complex,
                  cfg: SeriesConfig = DEFAULT_SERIES) -> MeanFieldSolution:
    f_eff = p.f - p.j * b
    obs = exact_observables(p.with_drive(f_eff), cfg)
    obs = Observables(obs.n_mean, obs.g2, b)
    resid = abs(self_consistent_map(b, p, cfg) - b)
    return MeanFieldSolution(b=b, f_eff=f_eff, obs=obs, residual=resid)


def solve(p: SystemParams, config: MeanFieldConfig = MeanFieldConfig(),
          extra_seeds=()) -> list[MeanFieldSolution]:
    """All distinct self-consistent solutions reachable from the seed set, by density."""
    seeds = list(extra_seeds) + default_seeds(p, config.ring_points)
    points = find_fixed_points(lambda b: self_consistent_map(b, p, config.series), seeds,
                               config.tol, dedup_radius=config.dedup_radius)
    sols = [make_solution(p, b, config.series) for b in points]
    sols = [s for s in sols if s.residual <= config.tol]
    if not sols:
        raise NoneFound("no fixed point met the residual bound")
    sols.sort(key=lambda s: s.obs.n_mean)
    if config.check_stability:
        from .bogoliubov import stability
        from .lattice import bz_grid
        grid = bz_grid(config.k_grid_n)
        sols = [_with_stability(s, stability(p, s, grid, leak_tol=config.leak_tol,
                                             n_cap=config.n_cap)) for s in sols]
    return sols


def _with_stability(sol: MeanFieldSolution, verdict: Stability) -> MeanFieldSolution:
    return MeanFieldSolution(sol.b, sol.f_eff, sol.obs, verdict, sol.residual)


def high_density(sols: list[MeanFieldSolution]) -> MeanFieldSolution:
    return max(sols, key=lambda s: s.obs.n_mean)


@dataclass
class SweepPoint:
    value: float
    solutions: list[MeanFieldSolution] = field(default_factory=list)
    error: str | None = None


def sweep(p_base: SystemParams, axis: str, grid, config: MeanFieldConfig = MeanFieldConfig()
          ) -> list[SweepPoint]:
    """Solve along one parameter axis, seeding each point with the previous solutions."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}")
    grid = [float(v) for v in grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted")
    out: list[SweepPoint] = []
    prev: list[complex] = []
    for value in grid:
        p = p_base.replace(**{axis: value})
        try:
            sols = solve(p, config, extra_seeds=prev)
        except DDBHError as exc:
            out.append(SweepPoint(value, [], f"{type(exc).__name__}: {exc}"))
            continue
        prev = [s.b for s in sols]
        out.append(SweepPoint(value, sols))
    return out


def track_branch(points: list[SweepPoint], start: complex | None = None
                 ) -> list[tuple[float, MeanFieldSolution | None]]:
    """Follow one branch through a sweep by nearest coherence.

    Starts from the solution closest to ``start`` (default: the lowest
    density solution of the first point). Where the followed branch
    ends, the nearest surviving solution is taken, which reproduces the
    jump of a hysteresis loop.
    """
    out = []
    current = start
    for pt in points:
        if not pt.solutions:
            out.append((pt.value, None))
            continue
        if current is None:
            chosen = pt.solutions[0]
        else:
            chosen = min(pt.solutions, key=lambda s: abs(s.b - current))
        current = chosen.b
        out.append((pt.value, chosen))
    return out


@dataclass(frozen=True)
class PhaseCell:
    u_over_dw: float
    j_over_dw: float
    n_solutions: int
    n_solutions_stable: int
    classification: str
    gp_classification: str
    converged: bool = True


def classify_cell(p: SystemParams, config: MeanFieldConfig) -> PhaseCell:
    from .gross_pitaevskii import BISTABLE, MONOSTABLE
    cfg = MeanFieldConfig(**{**config.__dict__, "check_stability": True})
    gp = gp_bistable(p)
    u, j = p.u / p.delta_omega, p.j / p.delta_omega
    try:
        sols = solve(p, cfg)
    except DDBHError:
        return PhaseCell(u, j, 0, 0, MONOSTABLE, gp, converged=False)
    n_stable = sum(s.stable == Stability.STABLE for s in sols)
    cls = BISTABLE if n_stable >= 2 else MONOSTABLE
    return PhaseCell(u, j, len(sols), n_stable, cls, gp, converged=n_stable >= 1)


def _row(args):
    p_base, u_grid, j, config = args
    return [classify_cell(p_base.replace(u=u, j=j), config) for u in u_grid]


def phase_diagram(p_base: SystemParams, u_grid, j_grid,
                  config: MeanFieldConfig = MeanFieldConfig(), workers: int = 1
                  ) -> list[list[PhaseCell]]:
    """Grid of cells indexed ``[j_index][u_index]``.

    Rows (fixed J) are independent work items; with ``workers > 1`` they run
    in a process pool and are gathered in grid order.
    """
    u_grid = [float(v) for v in u_grid]
    j_grid = [float(v) for v in j_grid]
    for g in (u_grid, j_grid):
        if any(b < a for a, b in zip(g, g[1:])):
            raise ValueError("grids must be sorted")
    tasks = [(p_base, u_grid, j, config) for j in j_grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row, tasks))
    return [_row(t) for t in tasks]
