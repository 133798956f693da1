import numpy as np
import pytest
from hypothesis import given, strategies as st

from ddbh.errors import TruncationCeiling
from ddbh.exact_prep import SystemParams, exact_observables
from ddbh.fock import coherent_rho, observables_from
from ddbh.lindblad_oracle import (adaptive_steady_state, build_liouvillian, hamiltonian,
                                  kernel_dimension, solve_steady_state, steady_state,
                                  steady_state_eig, trace_row)

params = st.builds(
    lambda u, f, g: SystemParams(u=u, f=f, gamma=g),
    st.floats(0.1, 4), st.floats(0.05, 0.5), st.floats(0.05, 0.5))


def test_closed_system_is_unitary():
    p = SystemParams(u=1.0, f=0.0, gamma=0.0)
    liou = build_liouvillian(p, 0.0, 5)
    h = hamiltonian(p, 0.0, 5)
    eye = np.eye(6)
    assert np.allclose(liou.matrix, -1j * (np.kron(h, eye) - np.kron(eye, h.T)))
    assert np.allclose(np.linalg.eigvals(liou.matrix).real, 0, atol=1e-12)


def test_vacuum_steady_without_drive():
    liou = build_liouvillian(SystemParams(u=1, f=0, gamma=0.3), 0, 4)
    vac = np.zeros((5, 5))
    vac[0, 0] = 1
    assert np.allclose(liou.matrix @ vac.reshape(-1), 0)


@given(params, st.integers(2, 8))
def test_trace_preserved(p, n_max):
    liou = build_liouvillian(p, p.f, n_max)
    assert np.max(np.abs(trace_row(n_max + 1) @ liou.matrix)) < 1e-10


def test_rejects_tiny_truncation():
    with pytest.raises(ValueError):
        build_liouvillian(SystemParams(u=1, f=0.1, gamma=0.1), 0.1, 1)


def test_linear_cavity_is_coherent():
    p = SystemParams(u=0, f=0.3, gamma=0.4)
    rho = adaptive_steady_state(p, p.f, 1e-14)
    beta = 0.3 / (1 + 0.2j)
    assert np.max(np.abs(rho.entries - coherent_rho(beta, rho.n_max).entries)) < 1e-8


def test_two_photon_mixture():
    f = 1e-2
    p = SystemParams(u=2, f=f, gamma=f**2 / 1000)
    rho = adaptive_steady_state(p, p.f, 1e-10)
    assert rho.populations[:3] == pytest.approx([0.25, 0.5, 0.25], abs=0.01)


@given(params)
def test_oracle_matches_exact(p):
    ora = observables_from(adaptive_steady_state(p, p.f, 1e-13, confirm=3))
    ex = exact_observables(p)
    assert ora.n_mean == pytest.approx(ex.n_mean, rel=1e-6)
    assert ora.g2 == pytest.approx(ex.g2, rel=1e-6)
    assert abs(ora.coherence - ex.coherence) <= 1e-6 * abs(ex.coherence)


@given(params)
def test_steady_state_diagnostics(p):
    ss = solve_steady_state(build_liouvillian(p, p.f, 10))
    assert ss.residual <= 1e-10 * max(1, np.max(np.abs(build_liouvillian(p, p.f, 10).matrix)))
    assert ss.hermiticity_defect < 1e-9 and ss.trace_defect < 1e-9
    assert ss.rho.is_positive()


@given(params)
def test_truncation_converged(p):
    # settings used for validation; near bistability the n error can exceed leak_tol by 1e4
    rho = adaptive_steady_state(p, p.f, 1e-14, confirm=3)
    n1 = observables_from(rho).n_mean
    n2 = observables_from(steady_state(build_liouvillian(p, p.f, rho.n_max + 5))).n_mean
    assert abs(n2 - n1) <= 1e-8 * n1


@pytest.mark.parametrize("seed", range(5))
def test_unique_kernel(seed):
    rng = np.random.default_rng(seed)
    p = SystemParams(u=rng.uniform(0.1, 4), f=rng.uniform(0.05, 0.5), gamma=rng.uniform(0.05, 0.5))
    liou = build_liouvillian(p, p.f, 8)
    assert kernel_dimension(liou) == 1
    a = steady_state(liou).entries
    b = steady_state_eig(liou).entries
    assert np.max(np.abs(a - b)) < 1e-9


def test_weak_drive_minimal_truncation():
    p = SystemParams(u=1, f=1e-9, gamma=0.5)
    rho = adaptive_steady_state(p, p.f, 1e-10)
    assert rho.n_max == 2 and rho.populations[0] == pytest.approx(1)


def test_leak_tolerance_monotone():
    p = SystemParams(u=0.7, f=0.4, gamma=0.2)
    sizes = [adaptive_steady_state(p, p.f, tol).n_max for tol in (1e-6, 5e-7, 1e-8, 5e-9)]
    assert sizes == sorted(sizes)


def test_high_density_truncation_growth():
    from ddbh.meanfield import high_density, solve
    p = SystemParams(u=0.5, f=0.4, gamma=0.2, j=3)
    sol = high_density(solve(p))
    rho = adaptive_steady_state(p, sol.f_eff, 1e-8)
    assert observables_from(rho).n_mean > 5
    assert rho.n_max > 20


def test_confirmation_catches_second_hump():
    # the populations have a faint hump near n ~ 18 that n_max = 12 cuts off
    p = SystemParams(u=0.1, f=0.4375, gamma=0.0625)
    quick = adaptive_steady_state(p, p.f, 1e-13)
    safe = adaptive_steady_state(p, p.f, 1e-13, confirm=3)
    exact = exact_observables(p).n_mean
    assert safe.n_max > quick.n_max
    assert observables_from(safe).n_mean == pytest.approx(exact, rel=1e-9)


def test_truncation_ceiling():
    p = SystemParams(u=0.05, f=2.0, gamma=0.1)
    with pytest.raises(TruncationCeiling):
        adaptive_steady_state(p, p.f, 1e-10, n_cap=6)


def test_displaced_basis_same_physics():
    p = SystemParams(u=0.8, f=0.5, gamma=0.3)
    plain = observables_from(adaptive_steady_state(p, p.f, 1e-13))
    shift = plain.coherence
    disp = observables_from(adaptive_steady_state(p, p.f, 1e-13, shift=shift))
    assert disp.n_mean == pytest.approx(plain.n_mean, rel=1e-9)
    assert disp.g2 == pytest.approx(plain.g2, rel=1e-9)



@pytest.mark.parametrize("u,f,gamma", [(0.1015625, 0.5, 0.0625), (0.125, 0.5, 0.125)])
def test_near_bistable_truncation_at_validation_settings(u, f, gamma):
    # at leak 1e-12 these points were off by 4e-8 and 1e-8 relative in n
    p = SystemParams(u=u, f=f, gamma=gamma)
    rho = adaptive_steady_state(p, p.f, 1e-14, confirm=3)
    assert observables_from(rho).n_mean == pytest.approx(exact_observables(p).n_mean, rel=1e-9)
