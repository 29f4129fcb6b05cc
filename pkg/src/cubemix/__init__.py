"""Exact mixing analysis of k-flip walks on the hypercube and (Z/mZ)^n.

The package computes eigenvalue tables, exact total-variation and l^2
distance curves, coupling coalescence tails (exact and Monte Carlo), and
closed-form step bounds, all with a rational backend below
EXACT_BACKEND_MAX_N coordinates and a log-space float backend above it.
"""

from .bounds import (
    BoundReport,
    MomentPair,
    REPORTED_MIXING_TIME_EXAMPLES,
    chebyshev_lower_bound,
    comparison_step_bound,
    coupling_upper_bound_steps,
    cyclic_step_bound,
    exact_weight_statistic_moments,
    half_flip_step_bound,
    reported_steps_comparison,
    second_moment_lower_bound,
    weight_eigenfunction,
    weight_statistic_moments,
)
from .coupling import (
    CoupledState,
    CouplingTailReport,
    HalfPickCertificate,
    MarginalCheckReport,
    PickBoundsCertificate,
    coupled_move_even,
    coupled_step,
    coupling_tail_curve,
    coupling_tail_exact,
    coupling_weight_kernel,
    expected_coupling_time,
    marginal_check,
    partner_assignment,
    simulate_coupling,
    verify_half_flip_pick_bounds,
    verify_pick_fraction_bounds,
)
from .exactdist import (
    FullDistribution,
    WeightDistribution,
    WeightKernel,
    brute_force_curve,
    brute_force_dist,
    evolve,
    flip_weight_kernel,
    full_transition_matrix,
    l2_to_uniform,
    separation_tail,
    spectral_dist,
    touched_weight_kernel,
    tv_to_uniform,
    zmn_exact_tv,
)
from .krawtchouk import (
    kraw_eval,
    kraw_half,
    kraw_integer_table,
    kraw_symmetry_holds,
    kraw_table,
    verify_symmetry_sweep,
)
from .numerics import EXACT_BACKEND_MAX_N, LogProb, binom, hypergeom_pmf, log_binom
from .spectrum import (
    CyclicWalkSpec,
    EigenvalueCertificate,
    SpectrumTable,
    WalkSpec,
    cube_eigenvalue,
    cube_spectrum,
    l2_lower_bound_odd_levels,
    l2_upper_bound,
    max_nontrivial_eigenvalue_magnitude,
    verify_eigenvalue_three_quarters,
    zmn_eigenvalue,
    zmn_l2_upper_bound,
    zmn_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CoupledState",
    "CouplingTailReport",
    "CyclicWalkSpec",
    "EXACT_BACKEND_MAX_N",
    "EigenvalueCertificate",
    "FullDistribution",
    "HalfPickCertificate",
    "LogProb",
    "MarginalCheckReport",
    "MomentPair",
    "PickBoundsCertificate",
    "REPORTED_MIXING_TIME_EXAMPLES",
    "SpectrumTable",
    "WalkSpec",
    "WeightDistribution",
    "WeightKernel",
    "binom",
    "brute_force_curve",
    "brute_force_dist",
    "chebyshev_lower_bound",
    "comparison_step_bound",
    "coupled_move_even",
    "coupled_step",
    "coupling_tail_curve",
    "coupling_tail_exact",
    "coupling_upper_bound_steps",
    "coupling_weight_kernel",
    "cube_eigenvalue",
    "cube_spectrum",
    "cyclic_step_bound",
    "evolve",
    "exact_weight_statistic_moments",
    "expected_coupling_time",
    "flip_weight_kernel",
    "full_transition_matrix",
    "half_flip_step_bound",
    "hypergeom_pmf",
    "kraw_eval",
    "kraw_half",
    "kraw_integer_table",
    "kraw_symmetry_holds",
    "kraw_table",
    "l2_lower_bound_odd_levels",
    "l2_to_uniform",
    "l2_upper_bound",
    "log_binom",
    "marginal_check",
    "max_nontrivial_eigenvalue_magnitude",
    "partner_assignment",
    "reported_steps_comparison",
    "second_moment_lower_bound",
    "separation_tail",
    "simulate_coupling",
    "spectral_dist",
    "touched_weight_kernel",
    "tv_to_uniform",
    "verify_eigenvalue_three_quarters",
    "verify_half_flip_pick_bounds",
    "verify_pick_fraction_bounds",
    "verify_symmetry_sweep",
    "weight_eigenfunction",
    "weight_statistic_moments",
    "zmn_eigenvalue",
    "zmn_exact_tv",
    "zmn_l2_upper_bound",
    "zmn_spectrum",
]
