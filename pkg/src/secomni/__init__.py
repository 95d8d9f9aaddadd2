"""Exact construction and verification of secure omniscience schemes.

Finite-field linear algebra, linear source models with a wiretapper,
tree-PIN analysis and scheme builders, and classical pmf certificates.
File formats and figures live in secomni.io; the command line in
secomni.cli.
"""

from .classical import (
    JointPMF,
    binary_entropy,
    block_swap_bound,
    block_swap_search,
    bsc_convolve,
    condition_source,
    delta_threshold,
    dsbe,
    f_curve,
    more_capable_check,
    not_less_noisy_check,
    oneway_capacity_lb,
    oneway_capacity_search,
    oneway_leakage_report,
    pmf_entropy,
    pmf_mutual_information,
    positivity_condition_check,
    positivity_search,
    renyi_half,
    tv_distance,
    two_msg_report,
)
from .errors import (
    ContextMismatchError,
    InternalCheckError,
    InvalidArgumentError,
    ResourceLimitError,
    SchemeSearchError,
)
from .fls import (
    EntropyValue,
    FLSModel,
    McfResult,
    TwoUserReport,
    brute_force_entropy,
    complement,
    fls_entropy,
    fls_mutual_information,
    mcf,
    rank_entropy,
    rank_mutual_information,
    two_user_analyze,
    two_user_discussion,
)
from .gf import FieldContext, GFElement, embed, embed_array, gf_context
from .gfmatrix import (
    MatrixGF,
    column_space_basis,
    column_space_intersection,
    complete_basis,
    hstack,
    inverse,
    left_nullspace_basis,
    random_matrix,
    rank,
    right_kernel_basis,
    rref,
    solve_right,
    vstack,
)
from .ratlp import simplex_max
from .schemes import (
    CommScheme,
    build_general_scheme,
    build_path_scheme,
    build_tree_scheme,
    build_unit_scheme,
    communication_rate,
    corner_point_scheme,
    default_block_length,
    extract_key,
    leakage_rate,
    sample_alignment_rows,
    two_user_scheme,
    verify_alignment,
    verify_noninteractive,
    verify_omniscience,
)
from .treepin import (
    AnalysisReport,
    Edge,
    RcoResult,
    ReductionStep,
    TreePinModel,
    analyze,
    compile_model,
    constrained_capacity,
    irreducible_check,
    rco_lp,
    reduce_model,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "CommScheme",
    "ContextMismatchError",
    "Edge",
    "EntropyValue",
    "FLSModel",
    "FieldContext",
    "GFElement",
    "InternalCheckError",
    "InvalidArgumentError",
    "JointPMF",
    "MatrixGF",
    "McfResult",
    "RcoResult",
    "ReductionStep",
    "ResourceLimitError",
    "SchemeSearchError",
    "TreePinModel",
    "TwoUserReport",
    "analyze",
    "binary_entropy",
    "block_swap_bound",
    "block_swap_search",
    "brute_force_entropy",
    "bsc_convolve",
    "build_general_scheme",
    "build_path_scheme",
    "build_tree_scheme",
    "build_unit_scheme",
    "column_space_basis",
    "column_space_intersection",
    "communication_rate",
    "compile_model",
    "complement",
    "complete_basis",
    "condition_source",
    "constrained_capacity",
    "corner_point_scheme",
    "default_block_length",
    "delta_threshold",
    "dsbe",
    "embed",
    "embed_array",
    "extract_key",
    "f_curve",
    "fls_entropy",
    "fls_mutual_information",
    "gf_context",
    "hstack",
    "inverse",
    "irreducible_check",
    "leakage_rate",
    "left_nullspace_basis",
    "mcf",
    "more_capable_check",
    "not_less_noisy_check",
    "oneway_capacity_lb",
    "oneway_capacity_search",
    "oneway_leakage_report",
    "pmf_entropy",
    "pmf_mutual_information",
    "positivity_condition_check",
    "positivity_search",
    "random_matrix",
    "rank",
    "rank_entropy",
    "rank_mutual_information",
    "rco_lp",
    "reduce_model",
    "renyi_half",
    "right_kernel_basis",
    "rref",
    "sample_alignment_rows",
    "simplex_max",
    "solve_right",
    "tv_distance",
    "two_msg_report",
    "two_user_analyze",
    "two_user_discussion",
    "two_user_scheme",
    "verify_alignment",
    "verify_noninteractive",
    "verify_omniscience",
    "vstack",
]
