import math

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from ddbh.bogoliubov import (build_fluctuation_operator, fluctuation_model, growth_rate,
                             mean_field_rho, relative_deviation, spectrum, stability,
                             traceless_restriction)
from ddbh.exact_prep import SystemParams
from ddbh.gross_pitaevskii import gp_spectrum
from ddbh.lattice import bz_grid, gxmg_path, hopping
from ddbh.lindblad_oracle import build_liouvillian, field_operator
from ddbh.meanfield import MeanFieldSolution, Stability, high_density, make_solution, solve

def multiset_gap(a, b) -> float:
    """Largest distance under the best one-to-one matching of two eigenvalue lists."""
    a, b = np.asarray(a), np.asarray(b)
    assert a.shape == b.shape
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


MODERATE = SystemParams(u=1.0, f=0.3, gamma=0.3, j=0.6)


@pytest.fixture(scope="module")
def moderate():
    sol = solve(MODERATE)[0]
    rho = mean_field_rho(MODERATE, sol, leak_tol=1e-10)
    return sol, rho


def test_zero_coupling_spectrum_is_k_independent():
    p = SystemParams(u=1.0, f=0.3, gamma=0.3)
    (sol,) = solve(p)
    rho = mean_field_rho(p, sol, leak_tol=1e-10)
    ref = 1j * np.linalg.eigvals(build_liouvillian(p, sol.f_eff, rho.n_max, rho.shift).matrix)
    for kx, ky in [(0, 0), (1.0, 2.0), (math.pi, math.pi)]:
        mat = build_fluctuation_operator(p, sol, (kx, ky), rho=rho)
        assert multiset_gap(np.linalg.eigvals(mat), ref) < 1e-10 * np.max(np.abs(ref))


def test_coupling_linear_in_j(moderate):
    sol, rho = moderate
    p2 = MODERATE.replace(j=2 * MODERATE.j)
    k = (0.7, 0.2)
    base = 1j * build_liouvillian(MODERATE, sol.f_eff, rho.n_max, rho.shift).matrix
    m1 = build_fluctuation_operator(MODERATE, sol, k, rho=rho) - base
    m2 = build_fluctuation_operator(p2, sol, k, rho=rho) - base
    assert np.max(np.abs(m2 - 2 * m1)) < 1e-12


def test_traceless_subspace_invariant(moderate):
    sol, rho = moderate
    d = rho.dim
    trace = np.eye(d).reshape(-1)
    mat = build_fluctuation_operator(MODERATE, sol, (0.3, 1.1), rho=rho)
    # every output of the operator is traceless
    assert np.max(np.abs(trace @ mat)) < 1e-10


def test_restriction_drops_only_the_zero_mode(moderate):
    sol, rho = moderate
    d = rho.dim
    model = fluctuation_model(MODERATE, sol, rho)
    full = np.linalg.eigvals(model.base)
    restricted = np.linalg.eigvals(traceless_restriction(model.base, d))
    assert len(restricted) == len(full) - 1
    zero = full[np.argmin(np.abs(full))]
    assert abs(zero) < 1e-8
    remaining = np.delete(full, np.argmin(np.abs(full)))
    assert multiset_gap(restricted, remaining) < 1e-8


def test_linearization_matches_finite_differences(moderate):
    # k = 0 fluctuations are the linearization of the nonlinear mean-field flow
    sol, _ = moderate
    p = MODERATE
    rho = mean_field_rho(p, sol, leak_tol=1e-10, displaced=False)
    d = rho.dim
    a = field_operator(rho.n_max)
    ad = a.conj().T
    l0 = build_liouvillian(p, 0, rho.n_max).matrix
    eye = np.eye(d)
    dp = -1j * (np.kron(ad, eye) - np.kron(eye, ad.T))
    dm = -1j * (np.kron(a, eye) - np.kron(eye, a.T))

    def flow(x):
        xm = x.reshape(d, d)
        fp = p.f - p.j * np.trace(a @ xm)
        fm = np.conj(p.f) - p.j * np.trace(ad @ xm)
        return (l0 + fp * dp + fm * dm) @ x

    x0 = rho.entries.reshape(-1)
    h = 1e-6
    jac = np.empty((d * d, d * d), complex)
    for i in range(d * d):
        e = np.zeros(d * d, complex)
        e[i] = h
        jac[:, i] = (flow(x0 + e) - flow(x0 - e)) / (2 * h)
    op = build_fluctuation_operator(p, sol, (0.0, 0.0), rho=rho, displaced=False)
    assert np.max(np.abs(jac - (-1j) * op)) < 1e-7


def test_displaced_basis_same_spectrum(moderate):
    sol, _ = moderate
    path = [(0.0, 0.0), (math.pi, 0.0)]
    a = spectrum(MODERATE, sol, path, displaced=True, leak_tol=1e-12)
    b = spectrum(MODERATE, sol, path, displaced=False, leak_tol=1e-12)
    assert np.max(np.abs(a.low_energy_array() - b.low_energy_array())) < 1e-7


def test_least_damped_pair_tie_break():
    from ddbh.bogoliubov import least_damped_pair
    vals = np.array([-2 - 1j, 1.5 - 0.2j, -1.5 - 0.2j + 1e-14j, 0.3 - 0.1j])
    assert least_damped_pair(vals) == [0.3 - 0.1j, 1.5 - 0.2j]


def test_large_gamma_decay_rates():
    p = SystemParams(u=0.2, f=0.05, gamma=2.0)
    (sol,) = solve(p)
    spec = spectrum(p, sol, [(0.0, 0.0)], leak_tol=1e-12)
    rates = -spec.branches[0].imag / (p.gamma / 2)
    assert np.max(np.abs(rates - np.round(rates))) < 0.05


def test_k_symmetries(moderate):
    sol, rho = moderate
    ks = [(0.4, 1.3), (-0.4, -1.3), (0.4 + 2 * math.pi, 1.3), (1.3, 0.4)]
    spec = spectrum(MODERATE, sol, ks, rho=rho)
    for vals in spec.branches[1:]:
        assert multiset_gap(vals, spec.branches[0]) < 1e-9


def test_hermiticity_pairing(moderate):
    # delta rho -> delta rho^dagger maps omega to -omega^* (t_k is even in k)
    sol, rho = moderate
    vals = spectrum(MODERATE, sol, [(0.4, 1.3)], rho=rho).branches[0]
    assert multiset_gap(vals, -vals.conj()) < 1e-9


def test_spectrum_selectors(moderate):
    sol, rho = moderate
    path = gxmg_path(2)
    for sel in ("decay", "gp"):
        spec = spectrum(MODERATE, sol, path, selector=sel, rho=rho)
        assert len(spec.low_energy) == len(path)
        for wp, wm in spec.low_energy:
            assert wp.real >= wm.real
    with pytest.raises(ValueError):
        spectrum(MODERATE, sol, path, selector="nearest", rho=rho)


def test_stability_of_bistable_branches():
    p = SystemParams(u=0.5, f=0.4, gamma=0.2, j=3)
    low, mid, high = solve(p)
    grid = bz_grid(4)
    assert stability(p, low, grid, leak_tol=1e-6) == Stability.STABLE
    assert stability(p, mid, grid, leak_tol=1e-6) == Stability.UNSTABLE
    assert stability(p, high, grid, leak_tol=1e-6) == Stability.STABLE


def test_monostable_is_stable(moderate):
    sol, rho = moderate
    assert growth_rate(MODERATE, sol, bz_grid(4), rho=rho) < -1e-3
    assert stability(MODERATE, sol, bz_grid(4), rho=rho) == Stability.STABLE


def test_relative_deviation_pairs_branches():
    from ddbh.lattice import ExcitationSpectrum
    g = ExcitationSpectrum([(0, 0)], [], [(1 - 0.1j, -1 - 0.1j)])
    a = ExcitationSpectrum([(0, 0)], [], [(-1.01 - 0.1j, 1.0 - 0.1j)])
    dev = relative_deviation(a, g)
    assert np.max(dev) < 0.02
