"""Monte Carlo ensembles, chain-length sweeps and trend fits.

A single experiment is described by ExperimentConfig.  Random
perturbations get one realisation per index r, keyed by
``seed XOR r``, so ensembles are reproducible and any member can be
re-run on its own.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, DomainError, FitError
from .evolution import TimeGrid, eigendecompose, sample_trajectory, system_time
from .hamiltonian import (CouplingProfile, PerturbationSpec, build_perturbed,
                          pst_couplings, uniform_couplings)
from .hilbert import (Basis, InputKind, StateVector, enumerate_basis,
                      make_custom_state, make_input_state, mirror_state)
from .observables import ObservableSeries, evaluate_series

_PROFILES = ("pst", "uniform")
_FIDELITY_TARGETS = ("initial", "mirror")


class ProbeTime(enum.Enum):
    """Which single time a sweep samples.

    FIRST_REVIVAL reads each input's own observable at its first
    expected recurrence: fidelity at the revival time for a two-site
    excitation, EoF of the far pair at half the revival time for the
    shared single excitation, EoF of the end pair at half the revival
    time for the plus-state ends.  FIRST_TRANSFER reads everything at
    half the revival time, with fidelity taken against the mirrored
    state.
    """

    FIRST_REVIVAL = "revival"
    FIRST_TRANSFER = "transfer"


class TrendModel(enum.Enum):
    EXPONENTIAL_IN_N = "exponential"
    GAUSSIAN_IN_PARAMETER = "gaussian"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    ``grid_times_over_ts`` overrides the uniform grid with explicit
    multiples of the revival time; sweeps use it to sample a single
    probe instant.
    """

    chain_length: int
    input_kind: InputKind | None = InputKind.TYPE_I
    custom_terms: tuple | None = None
    max_excitations: int = 2
    j0: float = 1.0
    profile: str = "pst"
    perturbation: PerturbationSpec = field(default_factory=PerturbationSpec)
    grid_points: int = 801
    t_max_over_ts: float = 4.0
    grid_times_over_ts: tuple[float, ...] | None = None
    fidelity_target: str = "initial"
    eof_sites: tuple[int, int] | None = None
    realisations: int = 100
    sweep_lengths: tuple[int, ...] | None = None
    probe: ProbeTime = ProbeTime.FIRST_REVIVAL

    def __post_init__(self):
        if (self.input_kind is None) == (self.custom_terms is None):
            raise ConfigurationError(
                "exactly one of input_kind and custom_terms must be given")
        if self.profile not in _PROFILES:
            raise ConfigurationError(
                f"profile must be one of {_PROFILES}, got {self.profile!r}")
        if self.fidelity_target not in _FIDELITY_TARGETS:
            raise ConfigurationError(
                f"fidelity_target must be one of {_FIDELITY_TARGETS}, "
                f"got {self.fidelity_target!r}")
        if self.realisations < 1:
            raise ConfigurationError(
                f"realisations must be >= 1, got {self.realisations}")
        if self.input_kind is not None:
            needed = 1 if self.input_kind is InputKind.TYPE_II else 2
            if self.max_excitations < needed:
                raise ConfigurationError(
                    f"input {self.input_kind.value} needs max_excitations >= {needed}")
        if self.eof_sites is not None:
            a, b = self.eof_sites
            if a == b or not all(1 <= s <= self.chain_length for s in (a, b)):
                raise ConfigurationError(
                    f"eof_sites must be two distinct sites in 1..{self.chain_length}")
        if self.sweep_lengths is not None and len(self.sweep_lengths) == 0:
            raise ConfigurationError("sweep_lengths must not be empty")

    def make_basis(self) -> Basis:
        return enumerate_basis(self.chain_length, self.max_excitations)

    def make_profile(self) -> CouplingProfile:
        if self.profile == "pst":
            return pst_couplings(self.chain_length, self.j0)
        return uniform_couplings(self.chain_length, self.j0)

    def make_input(self, basis: Basis) -> StateVector:
        if self.input_kind is not None:
            return make_input_state(basis, self.input_kind)
        terms = [(tuple(bits), complex(amp)) for bits, amp in self.custom_terms]
        return make_custom_state(basis, terms)

    def resolve_eof_sites(self) -> tuple[int, int]:
        """Explicit sites, or the natural pair for the input kind."""
        if self.eof_sites is not None:
            return self.eof_sites
        n = self.chain_length
        if self.input_kind is InputKind.TYPE_II:
            return (n - 1, n)
        if self.input_kind is InputKind.TYPE_III:
            return (1, n)
        return (1, 2)


@dataclass(frozen=True)
class _Prepared:
    basis: Basis
    profile: CouplingProfile
    psi0: StateVector
    target: StateVector
    grid: TimeGrid
    eof_sites: tuple[int, int]


def _prepare(config: ExperimentConfig) -> _Prepared:
    basis = config.make_basis()
    profile = config.make_profile()
    psi0 = config.make_input(basis)
    t_s = system_time(profile)
    if config.grid_times_over_ts is not None:
        grid = TimeGrid.from_fractions(t_s, config.grid_times_over_ts)
    else:
        grid = TimeGrid.uniform(t_s, config.grid_points, config.t_max_over_ts)
    target = psi0 if config.fidelity_target == "initial" else mirror_state(basis, psi0)
    return _Prepared(basis, profile, psi0, target, grid, config.resolve_eof_sites())


def _run_one(prep: _Prepared, config: ExperimentConfig,
             realization: int) -> ObservableSeries:
    h = build_perturbed(prep.basis, prep.profile, config.perturbation, realization)
    spectrum = eigendecompose(h, prep.basis)
    trajectory = sample_trajectory(spectrum, prep.psi0, prep.grid)
    return evaluate_series(prep.basis, trajectory, prep.grid, prep.target,
                           prep.eof_sites, config.fidelity_target)


def run_realization(config: ExperimentConfig, realization: int = 0) -> ObservableSeries:
    """Time series for a single realisation of the perturbations."""
    return _run_one(_prepare(config), config, realization)


@dataclass(frozen=True)
class EnsembleSummary:
    """Pointwise mean and sample standard deviation over realisations."""

    grid: TimeGrid
    mean_fidelity: np.ndarray = field(repr=False)
    std_fidelity: np.ndarray = field(repr=False)
    mean_eof: np.ndarray = field(repr=False)
    std_eof: np.ndarray = field(repr=False)
    realisations: int = 0
    master_seed: int = 0
    realization_keys: tuple[int, ...] = ()
    eof_sites: tuple[int, int] = (1, 2)
    fidelity_target: str = "initial"


def run_ensemble(config: ExperimentConfig) -> EnsembleSummary:
    """Run every realisation and aggregate pointwise statistics."""
    prep = _prepare(config)
    n_real = config.realisations
    n_times = len(prep.grid)
    fids = np.empty((n_real, n_times))
    ents = np.empty((n_real, n_times))
    for r in range(n_real):
        series = _run_one(prep, config, r)
        fids[r] = series.fidelity
        ents[r] = series.eof
    ddof = 1 if n_real > 1 else 0
    seed = config.perturbation.seed
    keys = tuple((seed ^ r) % 2 ** 64 for r in range(n_real))
    return EnsembleSummary(
        grid=prep.grid,
        mean_fidelity=fids.mean(axis=0),
        std_fidelity=fids.std(axis=0, ddof=ddof),
        mean_eof=ents.mean(axis=0),
        std_eof=ents.std(axis=0, ddof=ddof),
        realisations=n_real,
        master_seed=seed,
        realization_keys=keys,
        eof_sites=prep.eof_sites,
        fidelity_target=config.fidelity_target,
    )


@dataclass(frozen=True)
class SweepPoint:
    chain_length: int
    mean: float
    std: float


@dataclass(frozen=True)
class SweepResult:
    """Probe statistics against chain length for one input kind."""

    points: tuple[SweepPoint, ...]
    observable: str
    probe: ProbeTime
    input_kind: InputKind
    realisations: int
    master_seed: int

    def lengths(self) -> np.ndarray:
        return np.array([p.chain_length for p in self.points])

    def means(self) -> np.ndarray:
        return np.array([p.mean for p in self.points])

    def stds(self) -> np.ndarray:
        return np.array([p.std for p in self.points])


def _probe_settings(kind: InputKind, probe: ProbeTime):
    """(time fraction, use_eof, fidelity_target) for one sweep point."""
    if kind is InputKind.TYPE_I:
        if probe is ProbeTime.FIRST_REVIVAL:
            return 1.0, False, "initial"
        return 0.5, False, "mirror"
    # Both entangled inputs peak at half the revival time, on the far
    # pair for TYPE_II and on the end pair for TYPE_III.
    return 0.5, True, "initial"


def sweep_chain_length(config: ExperimentConfig, lengths,
                       probe: ProbeTime = ProbeTime.FIRST_REVIVAL) -> SweepResult:
    """Ensemble probe statistics for a list of chain lengths.

    All lengths reuse the master seed, so realisation r sees the same
    random stream regardless of N.
    """
    if config.input_kind is None:
        raise ConfigurationError("sweeps need one of the canonical input kinds")
    lengths = [int(n) for n in lengths]
    if not lengths:
        raise ConfigurationError("sweep needs at least one chain length")
    fraction, use_eof, fid_target = _probe_settings(config.input_kind, probe)
    points = []
    for n in lengths:
        cfg = replace(config, chain_length=n, eof_sites=None,
                      grid_times_over_ts=(fraction,), fidelity_target=fid_target)
        summary = run_ensemble(cfg)
        if use_eof:
            points.append(SweepPoint(n, float(summary.mean_eof[0]),
                                     float(summary.std_eof[0])))
        else:
            points.append(SweepPoint(n, float(summary.mean_fidelity[0]),
                                     float(summary.std_fidelity[0])))
    if use_eof:
        sites = "end pair" if config.input_kind is InputKind.TYPE_III else "far pair"
        observable = f"eof[{sites}] at t_S/2"
    elif probe is ProbeTime.FIRST_REVIVAL:
        observable = "fidelity vs initial at t_S"
    else:
        observable = "fidelity vs mirror at t_S/2"
    return SweepResult(tuple(points), observable, probe, config.input_kind,
                       config.realisations, config.perturbation.seed)


@dataclass(frozen=True)
class TrendFit:
    """Least-squares fit of a decaying trend, done in log space.

    For EXPONENTIAL_IN_N the model is amplitude * exp(-scale * x) with
    x the chain length; for GAUSSIAN_IN_PARAMETER it is
    amplitude * exp(-(x / scale)^2).  ``rss`` is the residual sum of
    squares in the original (not log) values.
    """

    model: TrendModel
    amplitude: float
    scale: float
    rss: float

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.model is TrendModel.EXPONENTIAL_IN_N:
            return self.amplitude * np.exp(-self.scale * x)
        return self.amplitude * np.exp(-((x / self.scale) ** 2))


def fit_trend(x, y, model: TrendModel) -> TrendFit:
    """Fit a decaying exponential or Gaussian to positive data."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError(f"x and y must be 1-d and equal length, got {x.shape}, {y.shape}")
    if x.size < 3:
        raise FitError(f"need at least 3 points to fit a trend, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise FitError("fit data must be finite")
    if np.any(y <= 0.0):
        raise FitError("fit data must be positive for a log-space fit")

    feature = x if model is TrendModel.EXPONENTIAL_IN_N else x ** 2
    if np.ptp(feature) == 0.0:
        raise FitError("fit is singular: feature values are all equal")
    design = np.column_stack([np.ones_like(feature), feature])
    coeffs, *_ = np.linalg.lstsq(design, np.log(y), rcond=None)
    intercept, slope = coeffs
    if slope >= 0.0:
        raise FitError("data do not decay; refusing to report a decaying trend")

    amplitude = float(np.exp(intercept))
    if model is TrendModel.EXPONENTIAL_IN_N:
        scale = float(-slope)
    else:
        scale = float(1.0 / np.sqrt(-slope))
    fit = TrendFit(model, amplitude, scale, 0.0)
    rss = float(np.sum((y - fit.predict(x)) ** 2))
    return TrendFit(model, amplitude, scale, rss)
