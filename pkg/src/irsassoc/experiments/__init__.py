"""Scenario generation, Monte-Carlo sweeps and result emission."""
from .config import ExperimentConfig, load_config, parse_config
from .output import CSV_HEADER, emit_csv, emit_plot, plot_series
from .runner import (
    ALGORITHMS,
    AlgoOutcome,
    SweepSpec,
    TrialResult,
    aggregate,
    parse_algorithms,
    run_trial,
    sweep,
    trial_seed,
)
from .scenario import ScenarioSpec, generate_scenario
