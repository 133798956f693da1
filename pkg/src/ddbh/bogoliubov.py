"""Linearized fluctuation spectrum around a mean-field steady state.

For a fluctuation of lattice momentum k the generator of ``i d/dt`` is the
single-site Liouvillian (times i) plus a rank-two term through which the
fluctuating coherence Tr(b drho) re-drives the site with strength -t_k.
Every output of that operator is traceless, so the traceless subspace is
invariant and carries all modes except the steady-state zero mode; the
spectra below are computed on that subspace, which removes the zero mode
exactly instead of by eigenvector matching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EigenFailure
from .exact_prep import SystemParams
from .fock import DensityMatrix
from .gross_pitaevskii import GPState, gp_density_roots, gp_frequencies
from .lattice import TK_CONVENTION, ExcitationSpectrum, hopping, order_pair, sort_by_decay
from .lindblad_oracle import adaptive_steady_state, build_liouvillian, field_operator
from .meanfield import MeanFieldSolution, Stability

GROWTH_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class FluctuationModel:
    """Pieces of the fluctuation operator that do not depend on k."""

    base: np.ndarray      # i * Liouvillian
    coupling: np.ndarray  # operator multiplying -t_k
    rho: DensityMatrix

    @property
    def dim(self) -> int:
        return self.rho.dim

    def operator(self, t_k: float) -> np.ndarray:
        return self.base - t_k * self.coupling


def mean_field_rho(p: SystemParams, sol: MeanFieldSolution, *, leak_tol: float = 1e-8,
                   n_cap: int = 40, displaced: bool = True) -> DensityMatrix:
    """Steady state of the effective site, optionally in the basis displaced by <b>."""
    shift = sol.b if displaced else 0j
    return adaptive_steady_state(p, sol.f_eff, leak_tol, n_start=4, n_cap=n_cap, shift=shift)


def fluctuation_model(p: SystemParams, sol: MeanFieldSolution, rho: DensityMatrix
                      ) -> FluctuationModel:
    n_max, shift = rho.n_max, rho.shift
    a = field_operator(n_max, shift)
    ad = a.conj().T
    r = rho.entries
    liou = build_liouvillian(p, sol.f_eff, n_max, shift).matrix
    # Tr(a X) = sum_ij a_ji X_ij, i.e. a row vector vec(a^T) in row-major order
    w1 = a.T.reshape(-1)
    w2 = ad.T.reshape(-1)
    u1 = (ad @ r - r @ ad).reshape(-1)
    u2 = (a @ r - r @ a).reshape(-1)
    coupling = np.outer(u1, w1) + np.outer(u2, w2)
    return FluctuationModel(1j * liou, coupling, rho)


def build_fluctuation_operator(p: SystemParams, sol: MeanFieldSolution, k, n_max: int | None = None,
                               *, rho: DensityMatrix | None = None, displaced: bool = True,
                               convention: str = TK_CONVENTION) -> np.ndarray:
    """Dense matrix of the ``i d/dt`` fluctuation generator at momentum ``k``."""
    if rho is None:
        if n_max is None:
            rho = mean_field_rho(p, sol, displaced=displaced)
        else:
            from .lindblad_oracle import steady_state
            shift = sol.b if displaced else 0j
            rho = steady_state(build_liouvillian(p, sol.f_eff, n_max, shift))
    model = fluctuation_model(p, sol, rho)
    return model.operator(hopping(p.j, k[0], k[1], p.z, convention))


def traceless_restriction(mat: np.ndarray, dim: int) -> np.ndarray:
    """Matrix of ``mat`` on the traceless subspace, coordinates = all entries but (0, 0)."""
    diag_idx = np.arange(1, dim) * (dim + 1) - 1
    out = mat[1:, 1:].copy()
    out[:, diag_idx] -= mat[1:, 0][:, None]
    return out


def nonsteady_eigenvalues(model: FluctuationModel, t_k: float) -> np.ndarray:
    mat = traceless_restriction(model.operator(t_k), model.dim)
    try:
        vals = np.linalg.eigvals(mat)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigenvalue solver failed at t_k={t_k}") from exc
    if not np.all(np.isfinite(vals)):
        raise EigenFailure(f"non-finite eigenvalues at t_k={t_k}")
    return vals


def _unique_t(p: SystemParams, ks, convention: str) -> tuple[list[float], list[int]]:
    """Distinct t_k values (to 1e-12) and the index of each k into them."""
    values: list[float] = []
    index = []
    for kx, ky in ks:
        t = hopping(p.j, kx, ky, p.z, convention)
        for i, v in enumerate(values):
            if abs(v - t) <= 1e-12 * max(1.0, abs(t)):
                index.append(i)
                break
        else:
            values.append(t)
            index.append(len(values) - 1)
    return values, index


def least_damped_pair(vals: np.ndarray, tol: float = 1e-9) -> list[complex]:
    """The two eigenfrequencies with the smallest decay magnitude.

    Decay rates equal within ``tol`` (relative to the spectral scale) count
    as tied, and ties go to the larger real part, so that a degenerate
    +/- pair is never split by rounding noise.
    """
    rest = list(np.asarray(vals, dtype=complex))
    scale = tol * max(1.0, max(abs(v) for v in rest))
    out = []
    for _ in range(2):
        floor = min(abs(v.imag) for v in rest)
        tied = [i for i, v in enumerate(rest) if abs(v.imag) <= floor + scale]
        best = max(tied, key=lambda i: rest[i].real)
        out.append(rest.pop(best))
    return out


def nearest_gp_state(p: SystemParams, sol: MeanFieldSolution) -> GPState:
    return min(gp_density_roots(p), key=lambda s: abs(s.n - sol.obs.n_mean))


def spectrum(p: SystemParams, sol: MeanFieldSolution, k_path, *, selector: str = "decay",
             rho: DensityMatrix | None = None, leak_tol: float = 1e-8, n_cap: int = 40,
             displaced: bool = True, convention: str = TK_CONVENTION) -> ExcitationSpectrum:
    """Full fluctuation spectrum along ``k_path`` (items ``(kx, ky)`` or ``(s, kx, ky)``).

    ``selector`` picks the two low-energy branches: "decay" takes the two
    modes with the smallest decay rate, "gp" the two modes nearest to the
    coherent-field prediction at the closest semiclassical root.
    """
    if selector not in ("decay", "gp"):
        raise ValueError("selector must be 'decay' or 'gp'")
    if rho is None:
        rho = mean_field_rho(p, sol, leak_tol=leak_tol, n_cap=n_cap, displaced=displaced)
    model = fluctuation_model(p, sol, rho)
    ks = [(float(k[-2]), float(k[-1])) for k in k_path]
    t_values, index = _unique_t(p, ks, convention)
    spectra = [sort_by_decay(nonsteady_eigenvalues(model, t)) for t in t_values]
    gp_state = nearest_gp_state(p, sol) if selector == "gp" else None
    branches, low = [], []
    for i in index:
        vals = spectra[i]
        branches.append(vals)
        if selector == "decay":
            pair = least_damped_pair(vals)
        else:
            wp, wm = gp_frequencies(p, gp_state.n, t_values[i])
            ip = int(np.argmin(np.abs(vals - wp)))
            rest = np.delete(vals, ip)
            pair = [vals[ip], rest[int(np.argmin(np.abs(rest - wm)))]]
        low.append(order_pair(complex(pair[0]), complex(pair[1])))
    return ExcitationSpectrum(ks, branches, low)


def growth_rate(p: SystemParams, sol: MeanFieldSolution, k_grid, *,
                rho: DensityMatrix | None = None, leak_tol: float = 1e-8, n_cap: int = 40,
                displaced: bool = True, convention: str = TK_CONVENTION,
                early_exit: bool = False) -> float:
    """Largest real part of the d/dt generator over the grid (zero mode excluded).

    With ``early_exit`` the scan stops at the first momentum showing growth,
    so the returned value is then only a lower bound.
    """
    if rho is None:
        rho = mean_field_rho(p, sol, leak_tol=leak_tol, n_cap=n_cap, displaced=displaced)
    model = fluctuation_model(p, sol, rho)
    ks = [(float(k[-2]), float(k[-1])) for k in k_grid]
    t_values, _ = _unique_t(p, ks, convention)
    # zone center and corner first: that is where growth usually shows up
    t_values.sort(key=lambda t: -abs(t))
    rate = -math.inf
    for t in t_values:
        # generator d/dt = -i * (i d/dt), so Re(lambda) = Im(omega)
        rate = max(rate, float(np.max(nonsteady_eigenvalues(model, t).imag)))
        if early_exit and rate > GROWTH_TOL:
            break
    return rate


def stability(p: SystemParams, sol: MeanFieldSolution, k_grid, **kwargs) -> Stability:
    rate = growth_rate(p, sol, k_grid, early_exit=True, **kwargs)
    if rate < -GROWTH_TOL:
        return Stability.STABLE
    if rate > GROWTH_TOL:
        return Stability.UNSTABLE
    return Stability.UNDETERMINED


def relative_deviation(full: ExcitationSpectrum, gp: ExcitationSpectrum) -> np.ndarray:
    """Pointwise |w_full - w_gp| / |w_gp| for both low-energy branches, shape (nk, 2).

    The two branches are paired with whichever assignment is closer, since
    the real-part ordering is ambiguous where the GP radicand is negative.
    """
    a = full.low_energy_array()
    g = gp.low_energy_array()
    straight = np.abs(a - g) / np.abs(g)
    swapped = np.abs(a[:, ::-1] - g) / np.abs(g)
    pick = straight.max(axis=1) <= swapped.max(axis=1)
    return np.where(pick[:, None], straight, swapped)
