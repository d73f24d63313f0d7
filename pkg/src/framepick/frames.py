"""Frame systems and their projection-matrix counterparts.

A frame system is a finite family u_1..u_m of vectors in complex d-space whose
rank-one sums B = sum u_i u_i* stay below the identity.  The family is *tight*
when B equals the identity.  Tight families correspond one-to-one (up to a
unitary gauge) with m x m projection matrices via the Gram matrix; the
conversion functions here implement that dictionary.

Gram convention used throughout: P(i, j) = <u_j, u_i> with the inner product
conjugate-linear in the second argument, so diag(P) carries the squared vector
norms.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import as_hermitian, eigh_sorted, operator_norm

# A frame operator within this distance of the identity counts as tight.
TIGHT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FrameSystem:
    """Validated vector family with cached frame operator.

    ``vectors`` has shape (m, d) with row i holding u_i.  ``epsilon`` is the
    max squared Euclidean norm over the family, the small parameter all error
    bounds are expressed in.  ``tol`` records the sub-tightness tolerance the
    family was validated against.
    """

    d: int
    m: int
    vectors: np.ndarray
    epsilon: float
    frame_operator: np.ndarray
    tight: bool
    tol: float

    def subset_operator(self, indices) -> np.ndarray:
        """Sum of u_i u_i* over the given index set."""
        idx = list(indices)
        if not idx:
            return np.zeros((self.d, self.d), dtype=complex)
        rows = self.vectors[idx]
        return as_hermitian(rows.T @ rows.conj())

    def coefficient_operator(self, t) -> np.ndarray:
        """Weighted sum of t_i u_i u_i* for real coefficients t."""
        t = np.asarray(t, dtype=float)
        if t.shape != (self.m,):
            raise ValidationError(f"expected {self.m} coefficients, got shape {t.shape}")
        return as_hermitian((self.vectors * t[:, None]).T @ self.vectors.conj())


@dataclass(frozen=True, eq=False)
class ProjectionSystem:
    """Validated m x m Hermitian projection with its max diagonal entry."""

    m: int
    matrix: np.ndarray
    diag_bound: float
    tol: float


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_frame(vectors, tol: float = 1e-9) -> FrameSystem:
    """Validate a vector family and classify it as tight or sub-tight.

    Rejects families whose frame operator exceeds the identity by more than
    ``tol`` in the semidefinite order.
    """
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] < 1:
        raise ValidationError(f"expected a nonempty (m, d) vector array, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValidationError("vectors have non-finite entries")
    m, d = v.shape
    if d < 1:
        raise ValidationError("ambient dimension must be at least 1")
    b = as_hermitian(v.T @ v.conj())
    w = np.linalg.eigvalsh(b)
    if w[-1] > 1.0 + tol:
        raise ValidationError(
            f"family is not sub-tight: frame operator has eigenvalue {w[-1]:.12g} > 1 + {tol:g}"
        )
    epsilon = float((np.abs(v) ** 2).sum(axis=1).max())
    tight = operator_norm(b - np.eye(d)) <= TIGHT_TOL
    return FrameSystem(
        d=d,
        m=m,
        vectors=_freeze(v.copy()),
        epsilon=epsilon,
        frame_operator=_freeze(b),
        tight=tight,
        tol=float(tol),
    )


def subframe(frame: FrameSystem, indices) -> FrameSystem:
    """Frame formed by the selected rows of ``frame`` (always sub-tight)."""
    idx = list(indices)
    if not idx:
        raise ValidationError("subframe needs at least one index")
    return build_frame(frame.vectors[idx], tol=frame.tol)


def complete_to_tight(frame: FrameSystem, eps_budget: float) -> FrameSystem:
    """Append rank-one pieces of I - B so the family becomes tight.

    Each eigenpair (lam, w) of I - B with lam above the rank cutoff is split
    into K = ceil(lam / eps_budget) equal copies sqrt(lam / K) * w, so every
    appended vector has squared norm at most ``eps_budget``.  The original
    vectors are kept unchanged at the front.
    """
    if eps_budget < frame.epsilon - 1e-12:
        raise ValidationError(
            f"budget {eps_budget:g} is below the family's epsilon {frame.epsilon:g}"
        )
    if frame.tight:
        return frame
    residual = np.eye(frame.d) - frame.frame_operator
    w, u = eigh_sorted(residual)
    appended = []
    for lam, col in zip(w, u.T):
        if lam <= 1e-12:
            continue
        copies = int(np.ceil(lam / eps_budget))
        appended.extend([np.sqrt(lam / copies) * col] * copies)
    return build_frame(np.vstack([frame.vectors, np.array(appended)]), tol=frame.tol)


def gram_matrix(frame: FrameSystem) -> np.ndarray:
    """m x m Gram matrix P(i, j) = <u_j, u_i> of the family."""
    v = frame.vectors
    return as_hermitian(v.conj() @ v.T)


def build_projection(matrix, tol: float = 1e-9) -> ProjectionSystem:
    """Validate an m x m matrix as an orthogonal projection."""
    p = as_hermitian(matrix)
    m = p.shape[0]
    defect = operator_norm(p @ p - p)
    if defect > tol:
        raise ValidationError(f"matrix is not idempotent: ||P^2 - P|| = {defect:.3e} > {tol:g}")
    diag = p.diagonal().real
    if diag.min() < -tol or diag.max() > 1.0 + tol:
        raise ValidationError("projection diagonal entries must lie in [0, 1]")
    return ProjectionSystem(m=m, matrix=_freeze(p), diag_bound=float(diag.max()), tol=float(tol))


def frame_to_projection(frame: FrameSystem) -> ProjectionSystem:
    """Gram matrix of a tight frame, as a rank-d projection with diag = squared norms."""
    if not frame.tight:
        raise ValidationError(
            "only tight frames convert to projections; complete the family first"
        )
    return build_projection(gram_matrix(frame), tol=frame.tol)


def projection_to_frame(ps: ProjectionSystem) -> FrameSystem:
    """Tight frame realizing ``ps`` as its Gram matrix.

    Factor P = W W* over the eigenvalue-1 eigenspace and take u_i = conjugated
    i-th row of W; then sum u_i u_i* = I_d and ||u_i||^2 = P(i, i).
    """
    trace = float(ps.matrix.trace().real)
    d = round(trace)
    if abs(trace - d) > 1e-6:
        raise ValidationError(f"projection trace {trace:.9g} is not within 1e-6 of an integer")
    if d < 1:
        raise ValidationError("projection has rank zero; no frame to extract")
    w, u = eigh_sorted(ps.matrix)
    # P is certified idempotent, so the spectrum clusters at {0, 1}.
    cols = u[:, w > 0.5]
    if cols.shape[1] != d:
        raise ValidationError(
            f"eigenvalue-1 eigenspace has dimension {cols.shape[1]}, expected rank {d}"
        )
    return build_frame(cols.conj(), tol=ps.tol)


# ---------------------------------------------------------------------------
# JSON interchange.
#
# Frame files:      {"d": int, "vectors": [[[re, im], ... d], ... m]}
# Projection files: {"m": int, "entries": [[[re, im], ... m], ... m]}
# ---------------------------------------------------------------------------


def _complex_grid(rows: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in rows]


def _parse_complex_grid(obj, what: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed {what}: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValidationError(f"malformed {what}: expected [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def frame_to_json(frame: FrameSystem) -> dict:
    return {"d": frame.d, "vectors": _complex_grid(frame.vectors)}


def frame_from_json(obj, tol: float = 1e-9) -> FrameSystem:
    if not isinstance(obj, dict) or set(obj) != {"d", "vectors"}:
        raise ValidationError("frame JSON must have exactly the keys 'd' and 'vectors'")
    vectors = _parse_complex_grid(obj["vectors"], "frame vectors")
    if vectors.shape[1] != int(obj["d"]):
        raise ValidationError(
            f"declared dimension {obj['d']} does not match vectors of length {vectors.shape[1]}"
        )
    return build_frame(vectors, tol=tol)


def projection_to_json(ps: ProjectionSystem) -> dict:
    return {"m": ps.m, "entries": _complex_grid(ps.matrix)}


def projection_from_json(obj, tol: float = 1e-9) -> ProjectionSystem:
    if not isinstance(obj, dict) or set(obj) != {"m", "entries"}:
        raise ValidationError("projection JSON must have exactly the keys 'm' and 'entries'")
    entries = _parse_complex_grid(obj["entries"], "projection entries")
    if entries.shape[0] != entries.shape[1] or entries.shape[0] != int(obj["m"]):
        raise ValidationError(
            f"declared size {obj['m']} does not match an entries grid of shape {entries.shape[:2]}"
        )
    return projection_system_checked(entries, tol)


def projection_system_checked(entries: np.ndarray, tol: float) -> ProjectionSystem:
    hermitian_defect = float(np.abs(entries - entries.conj().T).max())
    if hermitian_defect > tol:
        raise ValidationError(f"projection entries are not Hermitian (defect {hermitian_defect:.3e})")
    return build_projection(entries, tol=tol)


def save_json(obj: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_document(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected a JSON object at top level")
    return obj


def load_any(path, tol: float = 1e-9):
    """Load a frame or projection file, returning ('frame'|'projection', system)."""
    obj = load_document(path)
    keys = set(obj)
    if keys == {"d", "vectors"}:
        return "frame", frame_from_json(obj, tol=tol)
    if keys == {"m", "entries"}:
        return "projection", projection_from_json(obj, tol=tol)
    raise ValidationError(f"{path}: keys {sorted(keys)} match neither the frame nor the projection schema")
