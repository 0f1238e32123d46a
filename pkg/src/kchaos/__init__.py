"""Krylov-space chaos diagnostics.

Builds spin-chain and banded random-matrix Hamiltonians, runs the Lanczos
recursion with full orthogonalization, and measures how the saturation of
spread complexity and the dispersion of the Lanczos coefficients track the
integrability-to-chaos transition alongside level-spacing statistics.
"""

from .errors import (
    ConfigError,
    DegenerateSpectrumError,
    NumericalError,
    OrthogonalityLossError,
)
from .hamiltonians import (
    Hamiltonian,
    ParityBasis,
    SpectralData,
    build_banded_random,
    build_goe,
    build_ising_full,
    eigendecompose,
    hamiltonian_from_matrix,
    parity_basis,
    project_to_sector,
)
from .krylov import (
    ComplexityCurve,
    LanczosResult,
    SaturationReport,
    complexity_curve,
    complexity_values,
    default_time_grid,
    krylov_amplitudes,
    lanczos_full_orth,
    saturation,
    tight_binding_propagate,
    time_average_complexity,
)
from .measures import (
    MEAN_R_GOE,
    MEAN_R_POISSON,
    DispersionConfig,
    EtaCurve,
    eta,
    normalize_to_eta,
    r_ratio_mean,
    sigma_log,
    sigma_moving,
    spearman_rank_correlation,
)
from .perturbation import (
    BoundSweep,
    ScalingReport,
    bound_rhs,
    overlap_scaling_check,
    run_bound_sweep,
)
from .states import (
    GaussianProfile,
    StateVector,
    UniformComplement,
    energy_coefficients,
    select_center_states,
    state_all_up,
    state_eigenstate,
    state_perturbed,
    state_random,
    state_uniform_eigenbasis,
)
from .sweeps import (
    AllUpFamily,
    BorderFamily,
    EigenstatesFamily,
    FamilyStats,
    RandomFamily,
    SweepConfig,
    SweepRecord,
    UniformFamily,
    default_hz_grid,
    default_k_grid,
    derive_seed,
    extract_eta_curve,
    postprocess_normalize,
    run_banded_sweep,
    run_ising_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateSpectrumError",
    "NumericalError",
    "OrthogonalityLossError",
    "Hamiltonian",
    "ParityBasis",
    "SpectralData",
    "build_banded_random",
    "build_goe",
    "build_ising_full",
    "eigendecompose",
    "hamiltonian_from_matrix",
    "parity_basis",
    "project_to_sector",
    "ComplexityCurve",
    "LanczosResult",
    "SaturationReport",
    "complexity_curve",
    "complexity_values",
    "default_time_grid",
    "krylov_amplitudes",
    "lanczos_full_orth",
    "saturation",
    "tight_binding_propagate",
    "time_average_complexity",
    "MEAN_R_GOE",
    "MEAN_R_POISSON",
    "DispersionConfig",
    "EtaCurve",
    "eta",
    "normalize_to_eta",
    "r_ratio_mean",
    "sigma_log",
    "sigma_moving",
    "spearman_rank_correlation",
    "BoundSweep",
    "ScalingReport",
    "bound_rhs",
    "overlap_scaling_check",
    "run_bound_sweep",
    "GaussianProfile",
    "StateVector",
    "UniformComplement",
    "energy_coefficients",
    "select_center_states",
    "state_all_up",
    "state_eigenstate",
    "state_perturbed",
    "state_random",
    "state_uniform_eigenbasis",
    "AllUpFamily",
    "BorderFamily",
    "EigenstatesFamily",
    "FamilyStats",
    "RandomFamily",
    "SweepConfig",
    "SweepRecord",
    "UniformFamily",
    "default_hz_grid",
    "default_k_grid",
    "derive_seed",
    "extract_eta_curve",
    "postprocess_normalize",
    "run_banded_sweep",
    "run_ising_sweep",
]
