import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddbh.exact_prep import SystemParams, coherence, exact_observables
from ddbh.gross_pitaevskii import BISTABLE, MONOSTABLE
from ddbh.meanfield import (MeanFieldConfig, Stability, classify_cell, default_seeds,
                            high_density, phase_diagram, self_consistent_map, solve, sweep,
                            track_branch)
from ddbh.weak_drive import critical_coupling, resonance_detuning

BISTABLE_POINT = SystemParams(u=0.5, f=0.4, gamma=0.2, j=3)


def test_map_at_zero_coupling_is_constant():
    p = SystemParams(u=1.2, f=0.3, gamma=0.2)
    ref = coherence(p)
    for b in (0, 1 + 1j, -3):
        assert self_consistent_map(b, p) == ref


@given(st.floats(0.1, 4), st.floats(0.05, 0.5), st.floats(0.05, 0.5))
@settings(max_examples=15)
def test_zero_coupling_reduces_to_single_cavity(u, f, g):
    p = SystemParams(u=u, f=f, gamma=g)
    (sol,) = solve(p)
    ref = exact_observables(p)
    assert abs(sol.b - ref.coherence) <= 1e-10 * abs(ref.coherence)
    assert sol.obs.n_mean == pytest.approx(ref.n_mean, rel=1e-10)
    assert sol.obs.g2 == pytest.approx(ref.g2, rel=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_weak_drive_resonant_fixed_point(n):
    f = 1e-3
    jc = critical_coupling(n)
    p = SystemParams(u=resonance_detuning(n), f=f, gamma=f**n / 10, j=0.5 * jc)
    sol = solve(p)[0]
    assert sol.b.real == pytest.approx(-(n - 1) * f / (1 - (n - 1) * p.j), rel=0.02)


def test_weak_drive_offresonant_fixed_point():
    f = 1e-3
    p = SystemParams(u=0.5, f=f, gamma=1e-4, j=1.0)
    # weak-drive branch is the low-density one; a strongly driven pair coexists
    sol = solve(p)[0]
    assert sol.b.real == pytest.approx(f / 2, rel=0.01)


def test_solutions_satisfy_fixed_point_bound():
    cfg = MeanFieldConfig()
    for sol in solve(BISTABLE_POINT, cfg):
        assert abs(self_consistent_map(sol.b, BISTABLE_POINT) - sol.b) <= cfg.tol
        assert sol.f_eff == BISTABLE_POINT.f - BISTABLE_POINT.j * sol.b


def test_bistable_point():
    sols = solve(BISTABLE_POINT, MeanFieldConfig(check_stability=True))
    assert len(sols) == 3
    low, mid, high = sols
    assert [s.stable for s in sols] == [Stability.STABLE, Stability.UNSTABLE, Stability.STABLE]
    assert low.obs.n_mean < 0.1 and high.obs.n_mean > 5
    # branch-sign dichotomy
    assert low.b.real > 0 and high.b.real < 0
    assert high_density(sols) is high


def test_reference_g2_point():
    sols = solve(SystemParams(u=2, f=0.4, gamma=0.2, j=1))
    assert any(abs(s.obs.g2 - 0.69) <= 0.02 for s in sols)


def test_default_seeds_contents():
    seeds = default_seeds(BISTABLE_POINT)
    assert seeds[0] == 0 and len(seeds) == 2 + 3 + 8


def test_sweep_rejects_unsorted_and_bad_axis():
    with pytest.raises(ValueError):
        sweep(BISTABLE_POINT, "u", [1.0, 0.5])
    with pytest.raises(ValueError):
        sweep(BISTABLE_POINT, "dw", [1.0])


def test_sweep_density_decreases_with_u():
    grid = np.linspace(0.3, 1.0, 5)  # above the lower GP boundary U_c1 = 0.25
    pts = sweep(BISTABLE_POINT, "u", grid)
    highs = [high_density(pt.solutions).obs.n_mean for pt in pts]
    assert all(a > b for a, b in zip(highs, highs[1:]))


def test_sweep_two_photon_plateau():
    f = 1e-2
    p = SystemParams(u=2, f=f, gamma=f**2 / 10)
    branch = track_branch(sweep(p, "j", np.linspace(0, 0.5, 6)))
    for _, sol in branch:
        assert sol.obs.n_mean == pytest.approx(1, abs=0.02)
        assert sol.obs.g2 == pytest.approx(0.5, abs=0.02)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_resonant_branch_mixed_state(n):
    f = 1e-2
    p = SystemParams(u=resonance_detuning(n), f=f, gamma=f**n / 10)
    grid = np.linspace(0, 0.8 * critical_coupling(n), 5)
    for _, sol in track_branch(sweep(p, "j", grid)):
        assert abs(sol.obs.g2 - (1 - 1 / n)) < 0.1
        assert abs(sol.obs.n_mean - n / 2) < 0.1 * n


def test_sweep_records_errors():
    p = SystemParams(u=1e-3, f=50.0, gamma=0.2)
    cfg = MeanFieldConfig(series=__import__("ddbh").SeriesConfig(max_terms=3))
    pts = sweep(p, "f", [50.0], cfg)
    assert pts[0].solutions == [] and pts[0].error


def test_classify_cells():
    cfg = MeanFieldConfig()
    small = classify_cell(SystemParams(u=0.1, f=0.4, gamma=0.2, j=0.0), cfg)
    assert small.classification == MONOSTABLE and small.n_solutions_stable >= 1
    bi = classify_cell(BISTABLE_POINT, cfg)
    assert bi.classification == BISTABLE and bi.gp_classification == BISTABLE
    assert (bi.u_over_dw, bi.j_over_dw) == (0.5, 3)


def test_phase_diagram_layout_and_workers():
    p = SystemParams(u=1, f=0.4, gamma=0.2)
    serial = phase_diagram(p, [0.1, 0.5], [0.0, 3.0])
    assert [[(c.u_over_dw, c.j_over_dw) for c in row] for row in serial] == \
        [[(0.1, 0.0), (0.5, 0.0)], [(0.1, 3.0), (0.5, 3.0)]]
    pooled = phase_diagram(p, [0.1, 0.5], [0.0, 3.0], workers=2)
    assert pooled == serial
    with pytest.raises(ValueError):
        phase_diagram(p, [0.5, 0.1], [0.0])
