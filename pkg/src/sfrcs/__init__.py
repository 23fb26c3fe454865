"""Step-frequency radar with compressive sampling: simulation and recovery."""

__version__ = "0.1.0"

from .dictionary import (Dictionary, adjacent_column_correlation, build_dictionary,
                         coherence)
from .experiments import (AccuracyReport, ExperimentConfig, generate_scene,
                          moving_paper_preset, run_trial, stationary_paper_preset,
                          sweep)
from .idft_baseline import idft_detect_moving, idft_detect_stationary, range_profile
from .recovery import (RecoveryResult, SolverConfig, bpdn, dantzig_select, mu_bounds,
                       omp)
from .signal_model import (Grid, Measurement, RadarParams, Scene, Target, add_noise,
                           default_grid, phase_terms, synthesize)

__all__ = [
    "AccuracyReport", "Dictionary", "ExperimentConfig", "Grid", "Measurement",
    "RadarParams", "RecoveryResult", "Scene", "SolverConfig", "Target",
    "add_noise", "adjacent_column_correlation", "bpdn", "build_dictionary",
    "coherence", "dantzig_select", "default_grid", "generate_scene",
    "idft_detect_moving", "idft_detect_stationary", "moving_paper_preset",
    "mu_bounds", "omp", "phase_terms", "range_profile", "run_trial",
    "stationary_paper_preset", "sweep", "synthesize",
]
