"""Dense complex Hermitian matrix services: norms, order checks, spectral calculus.

Everything here works on plain numpy arrays.  Inputs are symmetrized to
(A + A*)/2 before any eigenwork so downstream callers never see asymmetric
drift from accumulated float error.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# Eigenvalues within this absolute tolerance of an interval endpoint count as
# inside the interval; borderline values err toward inclusion so that spectral
# restrictions stay invertible.
EIG_TOL = 1e-12


def as_hermitian(a) -> np.ndarray:
    """Validate a square, finite matrix and return its Hermitian part (A + A*)/2."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValidationError("matrix has non-finite entries")
    return (a + a.conj().T) / 2.0


def eigh_sorted(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian part of ``a``."""
    return np.linalg.eigh(as_hermitian(a))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigendecomposition A = U diag(w) U* with ``w`` ascending and ``U`` unitary."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def spectral_decomposition(a) -> SpectralDecomposition:
    w, u = eigh_sorted(a)
    w.setflags(write=False)
    u.setflags(write=False)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=u)


def operator_norm(a) -> float:
    """Spectral norm of a Hermitian matrix: the largest eigenvalue magnitude."""
    w = np.linalg.eigvalsh(as_hermitian(a))
    return float(np.abs(w).max())


def psd_leq(a, b, tol: float = 1e-9) -> bool:
    """True iff B - A is positive semidefinite up to ``tol`` (min eigenvalue >= -tol)."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    w = np.linalg.eigvalsh(b - a)
    return bool(w[0] >= -tol)


def spectral_projector(b, lo: float, hi: float) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors of ``b`` with eigenvalue in [lo, hi].

    Membership uses closed intervals widened by ``EIG_TOL`` on both ends.
    """
    if not (lo <= hi):
        raise ValidationError(f"empty interval [{lo}, {hi}]")
    w, u = eigh_sorted(b)
    sel = (w >= lo - EIG_TOL) & (w <= hi + EIG_TOL)
    cols = u[:, sel]
    return as_hermitian(cols @ cols.conj().T)


def inv_sqrt_on_range(b, lo: float) -> np.ndarray:
    """Inverse square root of ``b`` restricted to its spectral subspace above ``lo``.

    Returns C = sum over eigenpairs with eigenvalue >= lo of w^(-1/2) * (outer
    product), so that C b C equals the spectral projector for [lo, inf) and
    P <= C <= lo^(-1/2) P in the semidefinite order.
    """
    if lo <= 0:
        raise ValidationError(f"spectral cut must be positive, got {lo}")
    w, u = eigh_sorted(b)
    sel = (w >= lo - EIG_TOL) & (w > 0)
    cols = u[:, sel]
    return as_hermitian((cols * (w[sel] ** -0.5)) @ cols.conj().T)
