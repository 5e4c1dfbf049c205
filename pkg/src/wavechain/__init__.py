"""Exact analysis of time-inhomogeneous finite Markov chains driven by a
base kernel and a bijection of the state space.

The step kernels are the base kernel transported along powers of the map;
all long-run questions reduce to a single homogeneous "shifted" kernel,
whose invariant measure, singular values, and merging bounds this package
computes exactly at desk scale.
"""

from . import errors
from .core import (
    DENSE_LIMIT,
    Distribution,
    MarkovKernel,
    Permutation,
    StateSpace,
    WaveIdentityReport,
    WaveSystem,
    compose_window,
    evolve,
    kernel_at,
    make_kernel,
    make_permutation,
    make_wave_system,
    permutation_order,
    shift_kernel,
    transport_kernel,
    verify_wave_identity,
    wave_measures,
)
from .interchange import (
    kernel_document,
    kernel_from_document,
    load_kernel,
    permutation_document,
    permutation_from_document,
    save_kernel,
)
from .merging import (
    BoundaryAnalysis,
    MergingReport,
    NashParams,
    StabilityCertificate,
    boundary_analysis,
    certify_stability,
    chi_square_distance,
    merging_time,
    minmax_ratio_bound,
    nash_bound,
    pairwise_merging_measure,
    relative_sup_distance,
    sticky_stability_check,
    sv_product_bound,
    tv_distance,
    wave_bound,
    wave_bound_grid,
)
from .models import (
    GroupWalkSpec,
    PerturbationSpec,
    binary_cycling_system,
    circle_kernel,
    circle_nash_params,
    circle_perturbation_spec,
    circle_shift,
    conjugation_map,
    cyclic_to_random_system,
    deck_reversal_system,
    four_point_example,
    group_walk_kernel,
    lazy_circle_kernel,
    periodic_class_example,
    random_regular_graph_walk,
    single_point_perturbation,
    sn_space,
    sticky_permutation_system,
    tilde_pi_closed_form_shift_minus1,
)
from .sim import (
    PathSample,
    empirical_distribution,
    empirical_wave_profile,
    profile_to_csv,
    sample_path,
)
from .spectral import (
    DirichletForm,
    EigenDecomposition,
    SpectralDecomposition,
    adjoint_kernel,
    check_nash_inequality,
    composite_form,
    dirichlet_energy,
    eigenvalues,
    is_irreducible,
    period,
    second_singular_value_bound_gap,
    spectral_report_document,
    stationary_distribution,
    weighted_singular_values,
)

__version__ = "0.1.0"

__all__ = [
    "DENSE_LIMIT",
    "BoundaryAnalysis",
    "DirichletForm",
    "Distribution",
    "EigenDecomposition",
    "GroupWalkSpec",
    "MarkovKernel",
    "MergingReport",
    "NashParams",
    "PathSample",
    "Permutation",
    "PerturbationSpec",
    "SpectralDecomposition",
    "StabilityCertificate",
    "StateSpace",
    "WaveIdentityReport",
    "WaveSystem",
    "adjoint_kernel",
    "binary_cycling_system",
    "boundary_analysis",
    "certify_stability",
    "check_nash_inequality",
    "chi_square_distance",
    "circle_kernel",
    "circle_nash_params",
    "circle_perturbation_spec",
    "circle_shift",
    "compose_window",
    "composite_form",
    "conjugation_map",
    "cyclic_to_random_system",
    "deck_reversal_system",
    "dirichlet_energy",
    "eigenvalues",
    "empirical_distribution",
    "empirical_wave_profile",
    "errors",
    "evolve",
    "four_point_example",
    "group_walk_kernel",
    "is_irreducible",
    "kernel_at",
    "kernel_document",
    "kernel_from_document",
    "lazy_circle_kernel",
    "load_kernel",
    "make_kernel",
    "make_permutation",
    "make_wave_system",
    "merging_time",
    "minmax_ratio_bound",
    "nash_bound",
    "pairwise_merging_measure",
    "period",
    "periodic_class_example",
    "permutation_document",
    "permutation_from_document",
    "permutation_order",
    "profile_to_csv",
    "random_regular_graph_walk",
    "relative_sup_distance",
    "sample_path",
    "save_kernel",
    "second_singular_value_bound_gap",
    "shift_kernel",
    "single_point_perturbation",
    "sn_space",
    "spectral_report_document",
    "stationary_distribution",
    "sticky_permutation_system",
    "sticky_stability_check",
    "sv_product_bound",
    "tilde_pi_closed_form_shift_minus1",
    "transport_kernel",
    "tv_distance",
    "verify_wave_identity",
    "wave_bound",
    "wave_bound_grid",
    "wave_measures",
    "weighted_singular_values",
]
