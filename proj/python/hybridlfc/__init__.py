"""Hybrid microgrid load-frequency control toolkit."""

from ._core import (
    Error,
    Scenario,
    bs3_step,
    ensemble_metrics,
    flc,
    fractional_response,
    fuzzify,
    henon_sequence,
    logistic_sequence,
    oustaloup_zpk,
    parameter_names,
    performance_decrease,
    robustness_disconnect,
    robustness_uc,
    run_experiment,
    simulate,
    tune,
)

__all__ = [
    "Error",
    "Scenario",
    "bs3_step",
    "ensemble_metrics",
    "flc",
    "fractional_response",
    "fuzzify",
    "henon_sequence",
    "logistic_sequence",
    "oustaloup_zpk",
    "parameter_names",
    "performance_decrease",
    "robustness_disconnect",
    "robustness_uc",
    "run_experiment",
    "simulate",
    "tune",
]
