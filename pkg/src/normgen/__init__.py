"""Projective spectral profiles of unitaries and conjugacy-generation
certificates.

The package computes trace-normalized singular value profiles, their
projective refinements (minimized over a global phase), and constructive
certificates writing a target unitary as a product of conjugates of a base
unitary within explicit length budgets.
"""

from ._kernels import BACKEND
from .config import TOL, Tolerances
from .errors import (
    BudgetInfeasibleError,
    CertificateFormatError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    EmbeddingBlowupError,
    HypothesisError,
    NumericalDegeneracyError,
    PreconditionError,
    ValidationError,
)
from .spectral import (
    CircleSpectrum,
    RankDistance,
    SpectralProfile,
    UnitaryRep,
    canon_angle,
    chord,
    diagonalize_normal,
    one_norm,
    profile_mean,
    proj_distance,
    projective_residual,
    projective_one_norm,
    projective_profile,
    projective_rank,
    projective_s_number,
    rank_distance,
    s_number,
    singular_values,
    two_norm,
)

from .orderings import (
    AngleSumOrdering,
    OptimalOrdering,
    angle_sum_optimalize,
    center_phase,
    gap_sandwich_check,
    leading_gap_check,
    optimalize,
    product_decompose,
    torus_decompose,
)
from .su2 import (
    Su2Step,
    conjugator_to_reference,
    reference_rotation,
    rotation_class_angle,
    su2_step_matrix,
    su2_walk,
)
from .generation import (
    CertStep,
    Certificate,
    HypothesisReport,
    certificate_product,
    counterexample_pair,
    generate_block,
    generate_full,
    generate_rank_dependent,
    generate_rank_independent,
    generate_simultaneous,
    hypothesis_check,
    swap_commutator,
    theorem_budgets,
    verify_certificate,
)
from .symmetries import (
    Symmetry,
    block_symmetry_factors,
    broise_kernel_certificate,
    sqrt_unitary,
    symmetry_conjugator,
)
from .commutator import (
    aux_inequality_check,
    commutator_norm_search,
    cyclic_commutator_partner,
    llbound_diagnostic,
)
from .rational import (
    RationalSpectrum,
    approx_stability_check,
    lcm_embed,
    pipeline_generate,
    rational_approximate,
)
from .corpus import (
    admissible_pair,
    admissible_rational_pair,
    haar_unitary,
    random_spectrum,
    run_corpus,
)

__version__ = "0.1.0"

__all__ = [
    "AngleSumOrdering",
    "OptimalOrdering",
    "angle_sum_optimalize",
    "center_phase",
    "gap_sandwich_check",
    "leading_gap_check",
    "optimalize",
    "product_decompose",
    "torus_decompose",
    "Su2Step",
    "conjugator_to_reference",
    "reference_rotation",
    "rotation_class_angle",
    "su2_step_matrix",
    "su2_walk",
    "CertStep",
    "Certificate",
    "HypothesisReport",
    "certificate_product",
    "counterexample_pair",
    "generate_block",
    "generate_full",
    "generate_rank_dependent",
    "generate_rank_independent",
    "generate_simultaneous",
    "hypothesis_check",
    "swap_commutator",
    "theorem_budgets",
    "verify_certificate",
    "Symmetry",
    "block_symmetry_factors",
    "broise_kernel_certificate",
    "sqrt_unitary",
    "symmetry_conjugator",
    "aux_inequality_check",
    "commutator_norm_search",
    "cyclic_commutator_partner",
    "llbound_diagnostic",
    "RationalSpectrum",
    "approx_stability_check",
    "lcm_embed",
    "pipeline_generate",
    "rational_approximate",
    "admissible_pair",
    "admissible_rational_pair",
    "haar_unitary",
    "random_spectrum",
    "run_corpus",
    "BACKEND",
    "TOL",
    "Tolerances",
    "BudgetInfeasibleError",
    "CertificateFormatError",
    "DegenerateInputError",
    "DimensionError",
    "DomainError",
    "EmbeddingBlowupError",
    "HypothesisError",
    "NumericalDegeneracyError",
    "PreconditionError",
    "ValidationError",
    "CircleSpectrum",
    "RankDistance",
    "SpectralProfile",
    "UnitaryRep",
    "canon_angle",
    "chord",
    "diagonalize_normal",
    "one_norm",
    "profile_mean",
    "proj_distance",
    "projective_residual",
    "projective_one_norm",
    "projective_profile",
    "projective_rank",
    "projective_s_number",
    "rank_distance",
    "s_number",
    "singular_values",
    "two_norm",
    "__version__",
]
