"""Driven-dissipative Bose-Hubbard lattice: exact single-site steady states,
mean-field lattice solutions, semiclassical limits and fluctuation spectra."""

from .errors import DDBHError
from .exact_prep import (SystemParams, coherence, correlation, density_matrix,
                         exact_observables)
from .fock import DensityMatrix, Observables, observables_from
from .gross_pitaevskii import critical_U, gp_bistable, gp_density_roots, gp_spectrum
from .lindblad_oracle import adaptive_steady_state, build_liouvillian, steady_state
from .meanfield import MeanFieldConfig, MeanFieldSolution, Stability, phase_diagram, solve, sweep
from .numerics import SeriesConfig, hyper_series, solve_cubic

__all__ = [
    "DDBHError", "SystemParams", "coherence", "correlation", "density_matrix",
    "exact_observables", "DensityMatrix", "Observables", "observables_from", "critical_U",
    "gp_bistable", "gp_density_roots", "gp_spectrum", "adaptive_steady_state",
    "build_liouvillian", "steady_state", "MeanFieldConfig", "MeanFieldSolution", "Stability",
    "phase_diagram", "solve", "sweep", "SeriesConfig", "hyper_series", "solve_cubic",
]
__version__ = "0.1.0"
