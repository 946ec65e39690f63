"""Sampling, uniqueness and interpolation on unions of intervals."""

from ._sgl import (
    SglError,
    SpectrumSet,
    build_blocks,
    build_lambda,
    certify_sup,
    choose_steps,
    dirichlet_value,
    find_progressions,
    flattening_poly,
    frame_report,
    gap_report,
    gram,
    least_norm_interpolant,
    mc_hit_probability,
    neumann_interpolate,
    normalize,
    parse_spectrum,
    periodized_coefficients,
    periodized_l2,
    perturbed_integers,
    poisson_gap_series,
    project,
    random_pipeline,
    residual,
    sample_gamma,
    separation_rho,
    set_thread_count,
    sobolev_norm,
    vdc_alphas,
    window_phi,
)

__all__ = [name for name in dir() if not name.startswith("_")]
