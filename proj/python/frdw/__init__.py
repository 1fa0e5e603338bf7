"""Python bindings for the frdw redirected-walking simulator."""

from ._core import (  # noqa: F401
    SUMMARY_CSV_HEADER,
    SWEEP_CSV_HEADER,
    TRIAL_CSV_HEADER,
    ConfigError,
    clearance,
    compute_mdbr,
    config_keys,
    paired_t_test,
    physical_space,
    raycast,
    render_svg,
    run_experiment,
    run_trial,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"
