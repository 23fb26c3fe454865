"""Seeded Monte Carlo experiments comparing CS and IDFT detectors.

A sweep runs n_trials trials for every (detector, pulse count, SNR) cell.
Each trial draws a random sparse scene, synthesizes the measurement, adds
noise, runs the detector, and scores exact support recovery. All trial
seeds derive deterministically from the master seed, so equal configs
yield identical reports regardless of execution order.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import idft_baseline, recovery
from .dictionary import Dictionary, build_dictionary
from .recovery import RecoveryError, SolverConfig
from .signal_model import (Grid, Measurement, RadarParams, Scene, Target,
                           add_noise, default_grid, synthesize)

CS_DETECTORS = ("dantzig", "omp", "bpdn")
ALL_DETECTORS = CS_DETECTORS + ("idft",)


class ExperimentError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of a Monte Carlo sweep.

    params.n_pulses acts as the base pulse count; each sweep cell replaces
    it with one entry of pulse_counts. snr_values entries are dB figures or
    None for noiseless cells. Grid bounds, when given, override the default
    grid construction with linspace(M or L points).
    """

    params: RadarParams
    n_ranges: int
    n_speeds: int = 1
    k_targets: int = 1
    adjacency_constraint: bool = False
    n_trials: int = 100
    snr_values: tuple[float | None, ...] = (None,)
    pulse_counts: tuple[int, ...] = ()
    detectors: tuple[str, ...] = ("dantzig",)
    solver: SolverConfig = field(default_factory=SolverConfig)
    master_seed: int = 0
    amplitude_mode: str = "unit"
    range_bounds: tuple[float, float] | None = None
    speed_bounds: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.pulse_counts:
            object.__setattr__(self, "pulse_counts", (self.params.n_pulses,))
        if self.n_ranges < 1 or self.n_speeds < 1:
            raise ExperimentError("grid dimensions must be >= 1")
        if not 1 <= self.k_targets <= self.n_ranges * self.n_speeds:
            raise ExperimentError(
                f"k_targets {self.k_targets} outside [1, {self.n_ranges * self.n_speeds}]"
            )
        if self.adjacency_constraint and self.k_targets < 2:
            raise ExperimentError("adjacency_constraint needs k_targets >= 2")
        if self.n_trials < 1:
            raise ExperimentError("n_trials must be >= 1")
        if any(n < 1 for n in self.pulse_counts):
            raise ExperimentError("pulse counts must all be >= 1")
        if not self.detectors:
            raise ExperimentError("at least one detector required")
        for det in self.detectors:
            if det not in ALL_DETECTORS:
                raise ExperimentError(f"unknown detector {det!r}")
        if self.amplitude_mode not in ("unit", "uniform"):
            raise ExperimentError(f"unknown amplitude_mode {self.amplitude_mode!r}")

    def cell_params(self, n_pulses: int) -> RadarParams:
        return replace(self.params, n_pulses=n_pulses)

    def cell_grid(self, n_pulses: int) -> Grid:
        params = self.cell_params(n_pulses)
        base = default_grid(params, self.n_ranges, self.n_speeds)
        ranges, speeds = base.ranges, base.speeds
        if self.range_bounds is not None:
            ranges = np.linspace(*self.range_bounds, self.n_ranges)
        if self.speed_bounds is not None:
            speeds = np.linspace(*self.speed_bounds, self.n_speeds)
        return Grid(ranges=ranges, speeds=speeds)


def hash64(*parts) -> int:
    """Deterministic 64-bit seed from a tuple of primitives.

    Floats contribute their exact hex form, so platforms agree bit for bit.
    """
    tokens = []
    for p in parts:
        if isinstance(p, float):
            tokens.append(p.hex())
        elif p is None:
            tokens.append("noiseless")
        else:
            tokens.append(str(p))
    digest = hashlib.blake2b("|".join(tokens).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def trial_seed(master_seed: int, detector: str, n_pulses: int,
               snr_db: float | None, trial_index: int) -> int:
    snr = float(snr_db) if snr_db is not None else None
    return hash64(master_seed, detector, n_pulses, snr, trial_index)


def generate_scene(cfg: ExperimentConfig, grid: Grid, seed: int) -> Scene:
    """Random sparse scene, deterministic per seed.

    Draws k_targets distinct grid points uniformly. With the adjacency
    constraint, target 2 is redrawn as a uniformly chosen free in-bounds
    neighbor of target 1 (range +-1 at equal speed, or speed +-1 at equal
    range); the whole draw is retried in the rare case every neighbor of
    target 1 is occupied.
    """
    if cfg.k_targets > grid.size:
        raise ExperimentError(f"k_targets {cfg.k_targets} exceeds grid size {grid.size}")
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        flat = rng.choice(grid.size, size=cfg.k_targets, replace=False)
        if cfg.adjacency_constraint:
            m1, l1 = grid.unflatten(int(flat[0]))
            occupied = set(int(i) for i in flat[2:]) | {int(flat[0])}
            candidates = []
            for dm, dl in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                m2, l2 = m1 + dm, l1 + dl
                if 0 <= m2 < grid.n_ranges and 0 <= l2 < grid.n_speeds:
                    i2 = grid.flat_index(m2, l2)
                    if i2 not in occupied:
                        candidates.append(i2)
            if not candidates:
                continue
            flat[1] = candidates[rng.integers(len(candidates))]
        if cfg.amplitude_mode == "uniform":
            amps = rng.uniform(0.5, 1.5, size=cfg.k_targets)
        else:
            amps = np.ones(cfg.k_targets)
        targets = []
        for i, a in zip(flat, amps):
            m, l = grid.unflatten(int(i))
            targets.append(Target(range_index=m, speed_index=l, amplitude=complex(a)))
        return Scene(targets=tuple(targets))
    raise ExperimentError("could not place an adjacent target pair")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    seed: int
    true_support: tuple[int, ...]
    detected_support: tuple[int, ...]
    correct: bool
    solve_time_s: float
    error: str | None = None


@dataclass(frozen=True)
class CellResult:
    """Aggregated outcome of one (detector, pulse count, SNR) cell."""

    detector: str
    n_pulses: int
    snr_db: float | None
    records: tuple[TrialRecord, ...]

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def correct_count(self) -> int:
        return sum(r.correct for r in self.records)

    @property
    def accuracy(self) -> float:
        return self.correct_count / self.trials

    @property
    def mean_solve_time_s(self) -> float:
        return float(np.mean([r.solve_time_s for r in self.records]))


@dataclass(frozen=True)
class AccuracyReport:
    cells: tuple[CellResult, ...]

    def cell(self, detector: str, n_pulses: int, snr_db: float | None) -> CellResult:
        for c in self.cells:
            if (c.detector, c.n_pulses, c.snr_db) == (detector, n_pulses, snr_db):
                return c
        raise KeyError((detector, n_pulses, snr_db))


@dataclass(frozen=True)
class CellContext:
    """Per-pulse-count objects shared by every trial of a cell."""

    params: RadarParams
    grid: Grid
    dictionary: Dictionary


def make_context(cfg: ExperimentConfig, n_pulses: int) -> CellContext:
    params = cfg.cell_params(n_pulses)
    grid = cfg.cell_grid(n_pulses)
    return CellContext(params=params, grid=grid,
                       dictionary=build_dictionary(params, grid))


def _detect(detector: str, ctx: CellContext, measurement: Measurement,
            solver: SolverConfig, k: int) -> frozenset[int]:
    if detector == "idft":
        if ctx.grid.n_speeds > 1:
            det = idft_baseline.idft_detect_moving(measurement, ctx.params, ctx.grid, k)
        else:
            det = idft_baseline.idft_detect_stationary(measurement, ctx.params, k)
        return idft_baseline.bins_to_grid_support(det, ctx.grid)
    cfg = replace(solver, method=detector, sparsity_k=k)
    result = recovery.solve(ctx.dictionary, measurement, cfg)
    return frozenset(result.support)


def run_trial(cfg: ExperimentConfig, n_pulses: int, snr_db: float | None,
              detector: str, seed: int, trial_index: int = 0,
              ctx: CellContext | None = None) -> TrialRecord:
    """One seeded trial: scene -> measurement -> noise -> detect -> score.

    Solver errors count as missed detections, not failures of the sweep.
    The Dantzig threshold consumes the true injected noise variance.
    """
    if ctx is None:
        ctx = make_context(cfg, n_pulses)
    scene = generate_scene(cfg, ctx.grid, seed)
    clean = synthesize(ctx.params, ctx.grid, scene)
    measurement = add_noise(clean, snr_db, hash64(seed, "noise"))
    true_support = scene.support(ctx.grid)
    start = time.perf_counter()
    error = None
    try:
        detected = _detect(detector, ctx, measurement, cfg.solver, cfg.k_targets)
    except RecoveryError as exc:
        detected = frozenset()
        error = str(exc)
    elapsed = time.perf_counter() - start
    return TrialRecord(
        trial_index=trial_index,
        seed=seed,
        true_support=tuple(sorted(true_support)),
        detected_support=tuple(sorted(detected)),
        correct=detected == true_support,
        solve_time_s=elapsed,
        error=error,
    )


def run_cell(cfg: ExperimentConfig, detector: str, n_pulses: int,
             snr_db: float | None, ctx: CellContext | None = None) -> CellResult:
    if ctx is None:
        ctx = make_context(cfg, n_pulses)
    records = []
    for t in range(cfg.n_trials):
        seed = trial_seed(cfg.master_seed, detector, n_pulses, snr_db, t)
        records.append(run_trial(cfg, n_pulses, snr_db, detector, seed,
                                 trial_index=t, ctx=ctx))
    return CellResult(detector=detector, n_pulses=n_pulses, snr_db=snr_db,
                      records=tuple(records))


def sweep(cfg: ExperimentConfig, max_workers: int = 1) -> AccuracyReport:
    """Run every (detector, pulse count, SNR) cell of the config.

    Cells are independent; with max_workers > 1 they run in a process
    pool. The report ordering is fixed by the config regardless of
    execution order.
    """
    if not cfg.pulse_counts or not cfg.snr_values or not cfg.detectors:
        raise ExperimentError("sweep axes must be non-empty")
    keys = [(det, n, snr)
            for det in cfg.detectors
            for n in cfg.pulse_counts
            for snr in cfg.snr_values]
    if max_workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            cells = list(pool.map(_run_cell_task, [(cfg,) + k for k in keys]))
    else:
        contexts = {n: make_context(cfg, n) for n in cfg.pulse_counts}
        cells = [run_cell(cfg, det, n, snr, ctx=contexts[n]) for det, n, snr in keys]
    return AccuracyReport(cells=tuple(cells))


def _run_cell_task(args):
    cfg, det, n, snr = args
    return run_cell(cfg, det, n, snr)


def stationary_paper_preset(**overrides) -> ExperimentConfig:
    """Stationary benchmark: f0=1 MHz, df=10 kHz, M=100, K=5, 100 trials."""
    defaults = dict(
        params=RadarParams(f0=1e6, delta_f=1e4, n_pulses=70),
        n_ranges=100,
        n_speeds=1,
        k_targets=5,
        adjacency_constraint=False,
        n_trials=100,
        snr_values=(None,),
        pulse_counts=(70,),
        detectors=("dantzig", "idft"),
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def moving_paper_preset(**overrides) -> ExperimentConfig:
    """Moving benchmark: f0=100 MHz, df=100 kHz, M=40, L=6, K=4 adjacent pair."""
    defaults = dict(
        params=RadarParams(f0=1e8, delta_f=1e5, n_pulses=100),
        n_ranges=40,
        n_speeds=6,
        k_targets=4,
        adjacency_constraint=True,
        n_trials=100,
        snr_values=(15.0,),
        pulse_counts=(100,),
        detectors=("dantzig", "idft"),
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


PRESETS = {
    "stationary-paper": stationary_paper_preset,
    "moving-paper": moving_paper_preset,
}
