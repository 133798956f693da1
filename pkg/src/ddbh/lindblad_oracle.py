"""Brute-force steady state of the single-site master equation.

The Liouvillian acts on row-major vectorized density matrices, so that
vec(A X B) = (A kron B^T) vec(X). Every operator is built from a field
matrix ``a = b + shift``: a nonzero ``shift`` expresses the same dynamics
in a coherently displaced Fock basis, which needs far fewer levels for
near-classical high-density states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKernel, TruncationCeiling
from .exact_prep import SystemParams
from .fock import DensityMatrix, annihilation, hermitize

DEFAULT_N_CAP = 60
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Liouvillian:
    matrix: np.ndarray
    dim: int
    shift: complex = 0j

    @property
    def n_max(self) -> int:
        return self.dim - 1


def field_operator(n_max: int, shift: complex = 0j) -> np.ndarray:
    return annihilation(n_max) + shift * np.eye(n_max + 1)


def hamiltonian(p: SystemParams, f_eff: complex, n_max: int, shift: complex = 0j) -> np.ndarray:
    """Single-site mean-field Hamiltonian in the frame rotating with the pump."""
    a = field_operator(n_max, shift)
    ad = a.conj().T
    return (-p.delta_omega * ad @ a + 0.5 * p.u * ad @ ad @ a @ a
            + f_eff * ad + np.conj(f_eff) * a)


def build_liouvillian(p: SystemParams, f_eff: complex, n_max: int,
                      shift: complex = 0j) -> Liouvillian:
    """Generator of d(rho)/dt with drive ``f_eff`` and loss rate gamma."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    d = n_max + 1
    eye = np.eye(d)
    a = field_operator(n_max, shift)
    ad = a.conj().T
    h = hamiltonian(p, f_eff, n_max, shift)
    num = ad @ a
    mat = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    mat += 0.5 * p.gamma * (2 * np.kron(a, ad.T) - np.kron(num, eye) - np.kron(eye, num.T))
    return Liouvillian(mat, d, complex(shift))


def trace_row(dim: int) -> np.ndarray:
    return np.eye(dim).reshape(-1).astype(complex)


def _kernel_vector(liou: Liouvillian) -> np.ndarray:
    d = liou.dim
    mat = liou.matrix.copy()
    mat[0, :] = trace_row(d)
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    try:
        return np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateKernel("bordered Liouvillian is singular") from exc


@dataclass(frozen=True, eq=False)
class SteadyState:
    rho: DensityMatrix
    residual: float
    hermiticity_defect: float
    trace_defect: float


def solve_steady_state(liou: Liouvillian) -> SteadyState:
    """Kernel of the Liouvillian with diagnostics on the raw solution."""
    d = liou.dim
    vec = _kernel_vector(liou)
    raw = vec.reshape(d, d)
    herm = float(np.max(np.abs(raw - raw.conj().T)))
    tr = float(abs(np.trace(raw) - 1.0))
    rho = hermitize(raw)
    residual = float(np.linalg.norm(liou.matrix @ rho.reshape(-1)))
    scale = max(1.0, float(np.max(np.abs(liou.matrix))))
    if not np.all(np.isfinite(rho)) or residual > RESIDUAL_TOL * scale:
        raise DegenerateKernel(f"steady-state residual {residual:.3g} too large")
    return SteadyState(DensityMatrix(rho, liou.shift), residual, herm, tr)


def steady_state(liou: Liouvillian) -> DensityMatrix:
    """Unique steady state by a linear solve with one row set to the trace."""
    return solve_steady_state(liou).rho


def kernel_dimension(liou: Liouvillian, tol: float = 1e-9) -> int:
    """Number of eigenvalues of the Liouvillian within ``tol`` of zero."""
    vals = np.linalg.eigvals(liou.matrix)
    scale = max(1.0, float(np.max(np.abs(vals))))
    return int(np.sum(np.abs(vals) < tol * scale))


def steady_state_eig(liou: Liouvillian) -> DensityMatrix:
    """Eigensolver route to the steady state, kept as a cross-check."""
    vals, vecs = np.linalg.eig(liou.matrix)
    order = np.argsort(np.abs(vals))
    if len(vals) > 1 and abs(vals[order[1]]) < 1e-9 * max(1.0, float(np.max(np.abs(vals)))):
        raise DegenerateKernel("second kernel direction detected")
    d = liou.dim
    raw = vecs[:, order[0]].reshape(d, d)
    raw = raw / np.trace(raw)
    return DensityMatrix(hermitize(raw), liou.shift)


def adaptive_steady_state(p: SystemParams, f_eff: complex, leak_tol: float = 1e-10, *,
                          n_start: int = 2, n_cap: int = DEFAULT_N_CAP,
                          shift: complex = 0j, confirm: int = 1) -> DensityMatrix:
    """Smallest truncation from ``n_start`` upward whose top population is below ``leak_tol``.

    With ``confirm > 1`` the test must pass for that many consecutive
    truncations and the largest of them is returned. This guards against
    distributions with a faint second hump (near bistability) that a
    too-small truncation cuts off while still showing a tiny top level.
    """
    if not leak_tol > 0:
        raise ValueError("leak_tol must be positive")
    if confirm < 1:
        raise ValueError("confirm must be >= 1")
    n_max = max(2, n_start)
    passed = 0
    while n_max <= n_cap:
        rho = steady_state(build_liouvillian(p, f_eff, n_max, shift))
        passed = passed + 1 if rho.populations[-1] < leak_tol else 0
        if passed >= confirm:
            return rho
        n_max += 1
    raise TruncationCeiling(
        f"top population stays above {leak_tol:g} up to n_max={n_cap}")
