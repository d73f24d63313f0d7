"""Seeded instance generators for experiments and tests."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .frames import FrameSystem, build_frame
from .linalg import eigh_sorted

KINDS = ("random-tight", "counterexample", "subtight-random")


def random_tight(d: int, m: int, seed: int) -> FrameSystem:
    """Tight family of m complex Gaussian directions in dimension d.

    Samples g_1..g_m i.i.d. complex normal and whitens them by the inverse
    square root of their rank-one sum, which makes the family exactly tight.
    Needs m >= d so the sample covariance is invertible.
    """
    if m < d:
        raise ValidationError(f"random tight family needs m >= d, got m = {m}, d = {d}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    b0 = g.T @ g.conj()
    w, u = eigh_sorted(b0)
    if w[0] <= 1e-10 * w[-1]:
        raise ValidationError("sampled family is numerically singular; pick another seed")
    whitener = (u * (w**-0.5)) @ u.conj().T
    return build_frame(g @ whitener.T)


def counterexample(m_per_axis: int) -> FrameSystem:
    """Axis-aligned tight family: m copies of e1/sqrt(m) and m copies of e2/sqrt(m).

    Every subset sum is diagonal, so off-diagonal targets stay at distance at
    least their largest off-diagonal entry no matter which subset is chosen.
    """
    if m_per_axis < 1:
        raise ValidationError("need at least one vector per axis")
    scale = 1.0 / np.sqrt(m_per_axis)
    vectors = np.zeros((2 * m_per_axis, 2), dtype=complex)
    vectors[:m_per_axis, 0] = scale
    vectors[m_per_axis:, 1] = scale
    return build_frame(vectors)


def subtight_random(
    d: int, m: int, seed: int, spectrum_range: tuple = (0.3, 0.95)
) -> FrameSystem:
    """Strictly sub-tight family: a random tight family compressed by a random contraction.

    The contraction has eigenvalues drawn uniformly from ``spectrum_range`` in
    a Haar-ish random basis, so the frame operator has a spread spectrum
    strictly below the identity.
    """
    lo, hi = spectrum_range
    if not (0.0 < lo <= hi < 1.0 + 1e-12):
        raise ValidationError(f"spectrum range must satisfy 0 < lo <= hi <= 1, got {spectrum_range}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    if m < d:
        raise ValidationError(f"sub-tight generator needs m >= d, got m = {m}, d = {d}")
    b0 = g.T @ g.conj()
    w, u = eigh_sorted(b0)
    if w[0] <= 1e-10 * w[-1]:
        raise ValidationError("sampled family is numerically singular; pick another seed")
    whitener = (u * (w**-0.5)) @ u.conj().T
    tight_vectors = g @ whitener.T
    basis, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    eigenvalues = rng.uniform(lo, hi, size=d)
    half = (basis * np.sqrt(eigenvalues)) @ basis.conj().T
    return build_frame(tight_vectors @ half.T)


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative description of an instance, as used by the CLI."""

    kind: str
    d: int = 2
    m: int = 8
    seed: int = 0
    m_per_axis: int = 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")

    def build(self) -> FrameSystem:
        if self.kind == "random-tight":
            return random_tight(self.d, self.m, self.seed)
        if self.kind == "counterexample":
            return counterexample(self.m_per_axis)
        return subtight_random(self.d, self.m, self.seed)
