"""Exact spectra and band topology of delta combs in a hard-wall box.

Natural units m = hbar = 1: energies are E = k^2/2 and a scatterer of
strength h jumps the log-derivative by 2h.
"""

__version__ = "0.1.0"

from .model import (ModelError, NonMonotonePositions, NonPositiveLength,
                    PositionOutOfBox, Region, ScattererSet, SplitMix64,
                    make_scatterer_set, modulated_lattice, random_heights,
                    regions, scatterer_set_from_config, scatterer_set_to_config,
                    uniform_lattice)
from .bethe import (RecursionPole, SubsetBlowup, bethe_mismatch,
                    bethe_polynomial_form, reflection_coefficients,
                    scattering_coefficients, transfer_matrix)
from .solve import (BracketExhaustion, QuasimomentumRoot, SolverOptions,
                    count_states_below, find_roots)
from .wavefunction import (EigenState, InvalidRoot, OutOfDomain, build_state,
                           density_grid, edge_weight, edge_weights_sided,
                           evaluate, integrate_density, norm_constant, overlap)
from .topology import (BandNotFound, BerryGrid, BlochState, GapClosure,
                       GaugePinFailure, UnitCell, band_intervals, bloch_bands,
                       bloch_state, build_berry_grid, bulk_gaps, chern_number,
                       discriminant, plaquette_field)
from .oracle import (CountMismatch, FdSpectrum, GridTooCoarse, compare,
                     fd_ring_spectrum, fd_spectrum)
from .sweeps import SweepRow, SweepTable, resolve_heights, sweep_flux, sweep_shift

__all__ = [
    "__version__",
    # model
    "ScattererSet", "Region", "regions", "make_scatterer_set",
    "uniform_lattice", "modulated_lattice", "random_heights", "SplitMix64",
    "scatterer_set_from_config", "scatterer_set_to_config",
    "ModelError", "NonMonotonePositions", "NonPositiveLength", "PositionOutOfBox",
    # quantization condition
    "bethe_mismatch", "bethe_polynomial_form", "transfer_matrix",
    "reflection_coefficients", "scattering_coefficients",
    "RecursionPole", "SubsetBlowup",
    # solver
    "find_roots", "count_states_below", "QuasimomentumRoot", "SolverOptions",
    "BracketExhaustion",
    # states
    "EigenState", "build_state", "evaluate", "density_grid", "edge_weight",
    "edge_weights_sided", "integrate_density", "norm_constant", "overlap",
    "InvalidRoot", "OutOfDomain",
    # topology
    "UnitCell", "BlochState", "BerryGrid", "band_intervals", "bloch_bands",
    "bloch_state", "build_berry_grid", "chern_number", "bulk_gaps",
    "discriminant", "plaquette_field", "BandNotFound", "GapClosure",
    "GaugePinFailure",
    # oracle
    "fd_spectrum", "fd_ring_spectrum", "compare", "FdSpectrum",
    "GridTooCoarse", "CountMismatch",
    # sweeps
    "SweepTable", "SweepRow", "sweep_shift", "sweep_flux", "resolve_heights",
]
