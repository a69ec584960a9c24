"""Kernel-based conditional independence tests for time series."""

from ._npci import (
    NpciError,
    bandwidth,
    bootstrap_test,
    default_hac_lag,
    lag_embed,
    linear_granger_test,
    mammen_weights,
    mc_stderr,
    newey_west_se,
    num_threads,
    ols_fit,
    process_on_sample,
    residual_matrix,
    run_experiment,
    set_num_threads,
    simulate,
    simulate_sample,
    statistics,
)

__version__ = "0.1.0"

__all__ = [
    "NpciError",
    "bandwidth",
    "bootstrap_test",
    "default_hac_lag",
    "lag_embed",
    "linear_granger_test",
    "mammen_weights",
    "mc_stderr",
    "newey_west_se",
    "num_threads",
    "ols_fit",
    "process_on_sample",
    "residual_matrix",
    "run_experiment",
    "set_num_threads",
    "simulate",
    "simulate_sample",
    "statistics",
]
