"""Spin-chain state transfer under engineered couplings and perturbations.

The package models an XY chain whose nearest-neighbour couplings are
engineered for perfect mirror transfer, then studies how fidelity and
two-site entanglement of formation degrade under five perturbations:
static site energies, excitation-excitation interaction, next-nearest
neighbour hopping, fabrication noise on the engineered couplings and
random long-range couplings.  Random perturbations are averaged over
seeded realisations; chain-length sweeps and trend fits quantify the
scaling.
"""

__version__ = "0.1.0"

from .ensemble import (EnsembleSummary, ExperimentConfig, ProbeTime,
                       SweepPoint, SweepResult, TrendFit, TrendModel,
                       fit_trend, run_ensemble, run_realization,
                       sweep_chain_length)
from .errors import (ConfigurationError, DomainError, FitError,
                     NoExactRevivalError, NumericalError, PstChainError)
from .evolution import (Spectrum, TimeGrid, eigendecompose, evolve,
                        sample_trajectory, system_time)
from .hamiltonian import (DEFAULT_SEED, CouplingProfile, PerturbationSpec,
                          add_excitation_interaction, add_next_nearest,
                          add_site_energies, apply_long_range,
                          apply_offdiagonal_noise, build_base,
                          build_perturbed, pst_couplings, uniform_couplings)
from .hilbert import (Basis, InputKind, StateVector, enumerate_basis,
                      make_custom_state, make_input_state, mirror_state)
from .observables import (ObservableSeries, TwoQubitDensity, concurrence,
                          eof, eof_from_concurrence, evaluate_series,
                          fidelity, reduced_density_two_qubit)

__all__ = [
    "Basis", "ConfigurationError", "CouplingProfile", "DEFAULT_SEED",
    "DomainError", "EnsembleSummary", "ExperimentConfig", "FitError",
    "InputKind", "NoExactRevivalError", "NumericalError",
    "ObservableSeries", "PerturbationSpec", "ProbeTime", "PstChainError",
    "Spectrum", "StateVector", "SweepPoint", "SweepResult", "TimeGrid",
    "TrendFit", "TrendModel", "TwoQubitDensity",
    "add_excitation_interaction", "add_next_nearest", "add_site_energies",
    "apply_long_range", "apply_offdiagonal_noise", "build_base",
    "build_perturbed", "concurrence", "eigendecompose", "enumerate_basis",
    "eof", "eof_from_concurrence", "evaluate_series", "evolve", "fidelity",
    "fit_trend", "make_custom_state", "make_input_state", "mirror_state",
    "pst_couplings", "reduced_density_two_qubit", "run_ensemble",
    "run_realization", "sample_trajectory", "sweep_chain_length",
    "system_time", "uniform_couplings",
]
