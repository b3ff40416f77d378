"""Predictive-density risk of sparse priors and the hard-threshold plug-in."""

from ._core import (
    CRITICAL_RATIO,
    DEFAULT_QUAD_ORDER,
    DEFAULT_SCAN_POINTS,
    BiGridSpec,
    ModelConfig,
    NumericalError,
    SparsePrior,
    K_of_b,
    b_of_r,
    bayes_risk,
    benchmark,
    bigrid_prior,
    e_log_N,
    gap_argmin,
    grid_prior,
    h_r,
    log_mean_N,
    log_N,
    make_config,
    mc_e_log_N,
    point_prior,
    predictive_density,
    prior_json,
    rho_plugin,
    risk,
    risk_curve,
    run_cli,
    selftest,
    sigma_surface,
    spike_slab_prior,
    table1_row,
)

__all__ = [name for name in dir() if not name.startswith("_")]
