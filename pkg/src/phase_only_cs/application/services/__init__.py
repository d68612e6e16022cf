"""Application services: sensing, reformulation, solvers, recovery, diagnostics, reports."""

from .admm_solver_service import (
    AffineProjector,
    GramFactor,
    ResidualBallProjector,
    basis_pursuit,
    basis_pursuit_denoise,
    nuclear_min,
    nuclear_norm,
    singular_value_threshold,
    soft_threshold,
)
from .diagnostics_service import (
    count_near_vanishing,
    estimate_kappa,
    estimate_matrix_ric_sampled,
    estimate_ric_exact,
    estimate_ric_sampled,
    kappa_standard_error,
    l1_concentration,
    near_vanishing_probability,
    ric_t_hat_sweep,
    spe_deviation,
    truth_supports,
)
from .recovery_service import RecoveryService, direction_error
from .reformulation_service import (
    T_HAT_COMPLEX,
    T_HAT_REAL,
    build_complex,
    build_dithered,
    build_linear_cs,
    build_lowrank,
    build_real,
    embed_lowrank,
    extended_signal,
    rescaled_lowrank_truth,
    rescaled_truth,
    residual_phase_consistency,
)
from .report_generator_service import DiagnosticRow, ReportGeneratorService
from .sensing_service import (
    corrupt_phases,
    extend_ensemble,
    gen_lowrank_signal,
    gen_sparse_signal,
    measure_lowrank_phases,
    measure_phases,
    measure_phases_dithered,
    quantize_phases,
    sample_dither,
    sample_dithered_ensemble,
    sample_ensemble,
    sample_lowrank_map,
)

__all__ = [
    # Sensing
    "sample_ensemble",
    "sample_dithered_ensemble",
    "sample_dither",
    "sample_lowrank_map",
    "extend_ensemble",
    "gen_sparse_signal",
    "gen_lowrank_signal",
    "measure_phases",
    "measure_phases_dithered",
    "measure_lowrank_phases",
    "corrupt_phases",
    "quantize_phases",
    # Reformulation
    "T_HAT_REAL",
    "T_HAT_COMPLEX",
    "build_real",
    "build_complex",
    "build_dithered",
    "build_linear_cs",
    "build_lowrank",
    "embed_lowrank",
    "extended_signal",
    "rescaled_truth",
    "rescaled_lowrank_truth",
    "residual_phase_consistency",
    # Solvers
    "AffineProjector",
    "GramFactor",
    "ResidualBallProjector",
    "basis_pursuit",
    "basis_pursuit_denoise",
    "nuclear_min",
    "nuclear_norm",
    "singular_value_threshold",
    "soft_threshold",
    # Recovery
    "RecoveryService",
    "direction_error",
    # Diagnostics
    "estimate_ric_exact",
    "estimate_ric_sampled",
    "estimate_matrix_ric_sampled",
    "ric_t_hat_sweep",
    "truth_supports",
    "count_near_vanishing",
    "near_vanishing_probability",
    "l1_concentration",
    "spe_deviation",
    "estimate_kappa",
    "kappa_standard_error",
    # Reports
    "ReportGeneratorService",
    "DiagnosticRow",
]
