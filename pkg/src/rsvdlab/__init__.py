"""Randomized low-rank approximation with exact asymptotic error predictions.

The library bundles four layers:

* randomized SVD, plain and with odd polynomial (power-iteration) spectral
  filters, over a minimal seeded dense kernel set;
* fixed-point solvers that predict the expected squared-Frobenius
  approximation error from the singular values alone, with closed forms for
  bilevel and power-law spectra;
* deterministic lower/upper bounds for gap quantification;
* a reproducible Monte-Carlo sweep harness that emits plot-ready .dat
  tables, plus a small CLI (``python -m rsvdlab``).
"""

from .bounds import (
    BoundReport,
    bound_report,
    eckart_young_lower,
    halko_tropp_upper,
    prop1_best,
    prop1_upper,
    prop2_upper,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    ExperimentError,
    SweepTable,
    derive_seed,
    emit_dat,
    load_config,
    parse_config,
    read_dat,
    run_sweep,
    run_trial,
)
from .filters import (
    IDENTITY,
    FilterSpec,
    apply_filter_sketch,
    eval_filter,
    eval_filter_log_sq,
    parse_filter,
    poly_filter,
    power_filter,
)
from .kernels import (
    RankDeficiencyError,
    RngStream,
    frobenius_sq,
    gaussian_matrix,
    make_rng,
    svd,
    thin_qr,
)
from .lowrank import (
    ApproxResult,
    NormCheckReport,
    approximate_with_sketch,
    least_squares_oracle,
    rsvd,
    rsvd_filtered,
    solution_norm_check,
)
from .predict import (
    FixedPointError,
    Prediction,
    bilevel_closed_form,
    bilevel_filtered_theta0,
    powerlaw_asymptotic,
    powerlaw_filtered_limit,
    solve_filtered,
    solve_theta_tilde,
)
from .spectra import (
    ProfileParseError,
    SpectralProfile,
    SyntheticMatrix,
    bilevel_profile,
    load_profile,
    powerlaw_profile,
    synthesize_matrix,
    uniform_profile,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "BoundReport",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentError",
    "FilterSpec",
    "FixedPointError",
    "IDENTITY",
    "NormCheckReport",
    "Prediction",
    "ProfileParseError",
    "RankDeficiencyError",
    "RngStream",
    "SpectralProfile",
    "SweepTable",
    "SyntheticMatrix",
    "apply_filter_sketch",
    "approximate_with_sketch",
    "bilevel_closed_form",
    "bilevel_filtered_theta0",
    "bilevel_profile",
    "bound_report",
    "derive_seed",
    "eckart_young_lower",
    "emit_dat",
    "eval_filter",
    "eval_filter_log_sq",
    "frobenius_sq",
    "gaussian_matrix",
    "halko_tropp_upper",
    "least_squares_oracle",
    "load_config",
    "load_profile",
    "make_rng",
    "parse_config",
    "parse_filter",
    "poly_filter",
    "power_filter",
    "powerlaw_asymptotic",
    "powerlaw_filtered_limit",
    "powerlaw_profile",
    "prop1_best",
    "prop1_upper",
    "prop2_upper",
    "read_dat",
    "rsvd",
    "rsvd_filtered",
    "run_sweep",
    "run_trial",
    "solution_norm_check",
    "solve_filtered",
    "solve_theta_tilde",
    "svd",
    "synthesize_matrix",
    "thin_qr",
    "uniform_profile",
]
