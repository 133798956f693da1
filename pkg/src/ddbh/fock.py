"""Truncated Fock-space operators, density matrices and observables."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import G2Undefined, TruncationTooSmall

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = -1e-8
N_MEAN_FLOOR = 1e-12


def annihilation(n_max: int) -> np.ndarray:
    """Matrix of b on photon numbers 0..n_max, entries [k-1, k] = sqrt(k)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


def number_op(n_max: int) -> np.ndarray:
    return np.diag(np.arange(n_max + 1, dtype=float)).astype(complex)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace density matrix on a truncated Fock space.

    ``shift`` is the coherent displacement of the basis: the matrix is
    written in the displaced Fock basis D(shift)|k>, so that the field
    operator acting on it is ``b + shift``. A plain Fock-basis matrix has
    ``shift == 0``.
    """

    entries: np.ndarray
    shift: complex = 0j

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
            raise ValueError("density matrix must be square with dim >= 2")
        if not np.all(np.isfinite(rho)):
            raise ValueError("density matrix has non-finite entries")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not hermitian")
        if abs(np.trace(rho) - 1.0) > TRACE_TOL:
            raise ValueError("density matrix trace differs from 1")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_max(self) -> int:
        return self.dim - 1

    @property
    def populations(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])

    def is_positive(self, tol: float = POSITIVITY_TOL) -> bool:
        return self.min_eigenvalue() >= tol

    def field_operator(self) -> np.ndarray:
        return annihilation(self.n_max) + self.shift * np.eye(self.dim)

    def to_dict(self) -> dict:
        out = {"dim": self.dim, "re": self.entries.real.tolist(),
               "im": self.entries.imag.tolist()}
        if self.shift != 0:
            out["shift"] = [self.shift.real, self.shift.imag]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "DensityMatrix":
        rho = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        if rho.shape != (data["dim"], data["dim"]):
            raise ValueError("dim does not match the matrix shape")
        shift = complex(*data["shift"]) if "shift" in data else 0j
        return cls(rho, shift)

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        return cls.from_dict(json.loads(text))


def hermitize(rho: np.ndarray) -> np.ndarray:
    """Symmetrize numerical noise and renormalize the trace."""
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class Observables:
    n_mean: float
    g2: float  # nan when the density is too small for g2 to be meaningful
    coherence: complex

    @property
    def g2_defined(self) -> bool:
        return not math.isnan(self.g2)


def observables_from(rho: DensityMatrix, strict: bool = False) -> Observables:
    """Mean density, g2(0) and coherence <b> of a density matrix.

    g2 is returned as nan when the density is below 1e-12; with
    ``strict=True`` that case raises G2Undefined instead.
    """
    a = rho.field_operator()
    ad = a.conj().T
    r = rho.entries
    n_mean = float(np.trace(ad @ a @ r).real)
    pair = float(np.trace(ad @ ad @ a @ a @ r).real)
    coherence = complex(np.trace(a @ r))
    if n_mean < N_MEAN_FLOOR:
        if strict:
            raise G2Undefined(f"mean density {n_mean:.3g} below threshold")
        g2 = math.nan
    else:
        g2 = pair / n_mean**2
    return Observables(n_mean=n_mean, g2=g2, coherence=coherence)


def diagonal_rho(populations) -> DensityMatrix:
    pops = np.asarray(populations, dtype=float)
    if pops.size < 2:
        pops = np.concatenate([pops, np.zeros(2 - pops.size)])
    return DensityMatrix(np.diag(pops / pops.sum()).astype(complex))


def coherent_vector(alpha: complex, n_max: int) -> np.ndarray:
    vec = np.empty(n_max + 1, dtype=complex)
    vec[0] = 1.0
    for k in range(1, n_max + 1):
        vec[k] = vec[k - 1] * alpha / math.sqrt(k)
    return vec / np.linalg.norm(vec)


def coherent_rho(alpha: complex, n_max: int) -> DensityMatrix:
    """Projector onto the truncated, renormalized coherent state |alpha>."""
    if abs(alpha) ** 2 > n_max / 4:
        raise TruncationTooSmall(
            f"|alpha|^2 = {abs(alpha) ** 2:.3g} exceeds n_max/4 = {n_max / 4:.3g}")
    vec = coherent_vector(alpha, n_max)
    return DensityMatrix(np.outer(vec, vec.conj()))
