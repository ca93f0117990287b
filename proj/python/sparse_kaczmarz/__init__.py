"""Randomized and sparse randomized Kaczmarz solvers."""

from ._core import (
    KaczmarzError,
    gaussian_matrix,
    gen_sparse_signal,
    read_matrix_market,
    relative_error,
    rk_step,
    run_experiment,
    scaled_condition_number,
    singular_values,
    solve_rk,
    solve_rk_reduced,
    solve_srk,
    srk_step,
    support_estimate,
    support_size,
    weight_vector,
    write_matrix_market,
)

__all__ = [
    "KaczmarzError",
    "gaussian_matrix",
    "gen_sparse_signal",
    "read_matrix_market",
    "relative_error",
    "rk_step",
    "run_experiment",
    "scaled_condition_number",
    "singular_values",
    "solve_rk",
    "solve_rk_reduced",
    "solve_srk",
    "srk_step",
    "support_estimate",
    "support_size",
    "weight_vector",
    "write_matrix_market",
]
