"""framepick: subset selection for rank-one frame decompositions.

Given vectors u_1..u_m in complex d-space whose rank-one sums stay below the
identity and whose squared norms are at most eps, the solvers here pick index
subsets S so that sum_{i in S} u_i u_i* lands near a prescribed target (t * I,
t * B, or sum t_i u_i u_i*) in operator norm, with explicit certified error
bounds in terms of eps.
"""

from .errors import BoundViolationError, FramepickError, ValidationError
from .frames import (
    FrameSystem,
    ProjectionSystem,
    build_frame,
    build_projection,
    complete_to_tight,
    frame_from_json,
    frame_to_json,
    frame_to_projection,
    gram_matrix,
    projection_from_json,
    projection_to_frame,
    projection_to_json,
    subframe,
)
from .generators import GeneratorSpec, counterexample, random_tight, subtight_random
from .linalg import (
    SpectralDecomposition,
    as_hermitian,
    eigh_sorted,
    inv_sqrt_on_range,
    operator_norm,
    psd_leq,
    spectral_decomposition,
    spectral_projector,
)
from .pipeline import (
    BucketPlan,
    ScalingContext,
    TruncationReport,
    bucket_coefficients,
    bucket_count,
    certified_combination_bound,
    certified_scalar_bound,
    compact_truncation,
    convex_combination_subset,
    delta_tail,
    scalar_target_subset,
)
from .projection_view import (
    DiagonalProjection,
    diagonal_projection_select,
    pqp,
    two_partition_projection,
)
from .solvers import (
    IndexPartition,
    LocalSearchConfig,
    PartitionResult,
    SelectionResult,
    SolverConfig,
    TwoPartitionResult,
    best_subset_oracle,
    centered_deviation,
    lift_assignment,
    local_search_subset,
    r_partition,
    two_partition,
)
from .sweep import SweepReport, fit_exponent, run_sweep, write_csv

__version__ = "0.1.0"

__all__ = [
    "BoundViolationError",
    "BucketPlan",
    "DiagonalProjection",
    "FramepickError",
    "FrameSystem",
    "GeneratorSpec",
    "IndexPartition",
    "LocalSearchConfig",
    "PartitionResult",
    "ProjectionSystem",
    "ScalingContext",
    "SelectionResult",
    "SolverConfig",
    "SpectralDecomposition",
    "SweepReport",
    "TruncationReport",
    "TwoPartitionResult",
    "ValidationError",
    "as_hermitian",
    "best_subset_oracle",
    "bucket_coefficients",
    "bucket_count",
    "build_frame",
    "build_projection",
    "centered_deviation",
    "certified_combination_bound",
    "certified_scalar_bound",
    "compact_truncation",
    "complete_to_tight",
    "convex_combination_subset",
    "counterexample",
    "delta_tail",
    "diagonal_projection_select",
    "eigh_sorted",
    "fit_exponent",
    "frame_from_json",
    "frame_to_json",
    "frame_to_projection",
    "gram_matrix",
    "inv_sqrt_on_range",
    "lift_assignment",
    "local_search_subset",
    "operator_norm",
    "pqp",
    "projection_from_json",
    "projection_to_frame",
    "projection_to_json",
    "psd_leq",
    "r_partition",
    "random_tight",
    "run_sweep",
    "scalar_target_subset",
    "spectral_decomposition",
    "spectral_projector",
    "subframe",
    "subtight_random",
    "two_partition",
    "two_partition_projection",
    "write_csv",
]
