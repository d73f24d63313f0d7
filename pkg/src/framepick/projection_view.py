"""Selection implemented directly on projection matrices.

An m x m projection P with small diagonal is the Gram picture of a tight
family: compressing the columns P e_i onto the range of P recovers vectors
whose rank-one sums match P Q P for any diagonal 0/1 matrix Q.  The adapters
here convert to that frame picture, run the frame-side solvers (which work in
the much smaller range dimension), and lift the chosen index masks back.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .frames import ProjectionSystem, build_frame, projection_to_frame
from .linalg import as_hermitian, operator_norm
from .pipeline import convex_combination_subset
from .solvers import SolverConfig, two_partition


@dataclass(frozen=True, eq=False)
class DiagonalProjection:
    """Diagonal 0/1 matrix represented by its boolean mask."""

    m: int
    mask: np.ndarray

    @classmethod
    def from_indices(cls, m: int, indices) -> "DiagonalProjection":
        mask = np.zeros(m, dtype=bool)
        for i in indices:
            if not (0 <= int(i) < m):
                raise ValidationError(f"index {i} out of range for size {m}")
            mask[int(i)] = True
        mask.setflags(write=False)
        return cls(m=m, mask=mask)

    @classmethod
    def full(cls, m: int) -> "DiagonalProjection":
        mask = np.ones(m, dtype=bool)
        mask.setflags(write=False)
        return cls(m=m, mask=mask)

    @property
    def indices(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(self.mask))

    def contains(self, other: "DiagonalProjection") -> bool:
        return bool(self.m == other.m and (self.mask | ~other.mask).all())


@dataclass(frozen=True, eq=False)
class ProjectionSplitResult:
    mask: DiagonalProjection
    norms: tuple
    bound: float
    meets_bound: bool
    half_deviation: float


@dataclass(frozen=True, eq=False)
class DiagonalSelectResult:
    mask: DiagonalProjection
    error: float
    certified_bound: float


def pqp(ps: ProjectionSystem, q: DiagonalProjection) -> np.ndarray:
    """Compression P Q P, equal to the rank-one sum over the masked columns of P."""
    if q.m != ps.m:
        raise ValidationError(f"mask size {q.m} does not match projection size {ps.m}")
    idx = list(q.indices)
    if not idx:
        return np.zeros((ps.m, ps.m), dtype=complex)
    p = ps.matrix
    return as_hermitian(p[:, idx] @ p[idx, :])


def two_partition_projection(
    ps: ProjectionSystem, cfg: SolverConfig | None = None
) -> ProjectionSplitResult:
    """Two-way split in the projection picture, delegated to the frame solver."""
    frame = projection_to_frame(ps)
    result = two_partition(frame, cfg)
    mask = DiagonalProjection.from_indices(ps.m, result.partition.blocks[0])
    half_dev = operator_norm(pqp(ps, mask) - 0.5 * ps.matrix)
    return ProjectionSplitResult(
        mask=mask,
        norms=result.norms,
        bound=result.bound,
        meets_bound=result.meets_bound,
        half_deviation=half_dev,
    )


def diagonal_projection_select(
    ps: ProjectionSystem,
    q: DiagonalProjection,
    b_diag,
    cfg: SolverConfig | None = None,
) -> DiagonalSelectResult:
    """Diagonal projection Q' <= Q with P Q' P near P diag(b) P.

    ``b_diag`` must be a length-m vector with entries in [0, 1] supported on
    the mask of Q.  The selection itself runs frame-side on the compressed
    columns of P indexed by Q.
    """
    if q.m != ps.m:
        raise ValidationError(f"mask size {q.m} does not match projection size {ps.m}")
    b = np.asarray(b_diag, dtype=float)
    if b.shape != (ps.m,):
        raise ValidationError(f"expected {ps.m} diagonal values, got shape {b.shape}")
    if b.min() < -1e-12 or b.max() > 1.0 + 1e-12:
        bad = int(np.argmax((b < -1e-12) | (b > 1.0 + 1e-12)))
        raise ValidationError(f"diagonal value {b[bad]:.6g} at index {bad} is outside [0, 1]")
    outside = np.flatnonzero(~q.mask & (b > 1e-12))
    if outside.size:
        raise ValidationError(
            f"diagonal value at index {int(outside[0])} lies outside the support of Q"
        )

    support = list(q.indices)
    target = as_hermitian(ps.matrix @ np.diag(b) @ ps.matrix)
    if not support:
        return DiagonalSelectResult(
            mask=DiagonalProjection.from_indices(ps.m, ()),
            error=operator_norm(target),
            certified_bound=0.0,
        )
    full_frame = projection_to_frame(ps)
    sub_frame = build_frame(full_frame.vectors[support], tol=ps.tol)
    selection = convex_combination_subset(sub_frame, b[support], cfg)
    chosen = [support[j] for j in selection.subset]
    mask = DiagonalProjection.from_indices(ps.m, chosen)
    error = operator_norm(pqp(ps, mask) - target)
    return DiagonalSelectResult(
        mask=mask,
        error=error,
        certified_bound=float(selection.certified_bound),
    )
