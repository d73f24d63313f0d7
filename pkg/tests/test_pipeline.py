"""Pipeline tests: rescaling invariants, bucketing, certified bounds, truncation."""

import math

import numpy as np
import pytest

from framepick import (
    SolverConfig,
    ValidationError,
    best_subset_oracle,
    bucket_coefficients,
    bucket_count,
    build_frame,
    certified_combination_bound,
    certified_scalar_bound,
    compact_truncation,
    convex_combination_subset,
    counterexample,
    delta_tail,
    operator_norm,
    random_tight,
    scalar_target_subset,
    subtight_random,
)


# ---------------------------------------------------------------------------
# Certified bound function.
# ---------------------------------------------------------------------------


def test_scalar_bound_at_one():
    assert certified_scalar_bound(1.0) == pytest.approx(2.0 * math.sqrt(2.0) + 5.0, abs=1e-12)


def test_scalar_bound_small_eps():
    # (2 sqrt(2) + 1) * 1e-2 + 4e-4, computed by hand.
    assert certified_scalar_bound(1e-8) == pytest.approx(0.038684271247461904, abs=1e-12)


def test_scalar_bound_leading_coefficient():
    eps = 1e-28
    ratio = certified_scalar_bound(eps) / eps**0.25
    assert ratio == pytest.approx(2.0 * math.sqrt(2.0) + 1.0, rel=1e-6)


def test_scalar_bound_monotone():
    grid = np.logspace(-12, 0, 200)
    values = [certified_scalar_bound(e) for e in grid]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_scalar_bound_domain():
    with pytest.raises(ValidationError):
        certified_scalar_bound(0.0)
    with pytest.raises(ValidationError):
        certified_scalar_bound(1.5)


# ---------------------------------------------------------------------------
# Coefficient bucketing.
# ---------------------------------------------------------------------------


def test_bucket_count_examples():
    assert bucket_count(1e-8) == 10
    assert bucket_count(1.0) == 1


def test_bucket_rounding_example():
    plan = bucket_coefficients([0.37], 1e-8)
    assert plan.n == 10
    assert plan.rounded[0] == pytest.approx(0.4, abs=1e-15)
    assert 0 in plan.buckets[4]
    assert abs(0.37 - 0.4) <= 1.0 / plan.n


def test_bucket_single_level_rounds_to_zero_or_one():
    plan = bucket_coefficients([0.0, 0.3, 0.49, 0.5, 0.8, 1.0], 1.0)
    assert plan.n == 1
    assert list(plan.rounded) == [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]


def test_bucket_grid_points_are_fixed():
    plan = bucket_coefficients([0.0, 0.2, 0.4, 1.0], 1e-8)
    for t, r in zip([0.0, 0.2, 0.4, 1.0], plan.rounded):
        assert r == pytest.approx(t, abs=1e-12)


def test_bucket_error_within_grid_spacing():
    rng = np.random.default_rng(17)
    for _ in range(50):
        eps = float(rng.uniform(1e-8, 1.0))
        t = rng.uniform(0.0, 1.0, size=20)
        plan = bucket_coefficients(t, eps)
        assert np.abs(t - plan.rounded).max() <= 1.0 / plan.n + 1e-15
        covered = sorted(i for bucket in plan.buckets for i in bucket)
        assert covered == list(range(20))


def test_bucket_rejects_out_of_range():
    with pytest.raises(ValidationError):
        bucket_coefficients([1.2], 0.5)
    with pytest.raises(ValidationError):
        bucket_coefficients([-0.1], 0.5)


# ---------------------------------------------------------------------------
# Scalar pipeline.
# ---------------------------------------------------------------------------


def test_scalar_shortcuts():
    f = random_tight(2, 9, 0)
    res0, _ = scalar_target_subset(f, 0.0)
    assert res0.subset == ()
    assert res0.error == 0.0
    res1, _ = scalar_target_subset(f, 1.0)
    assert res1.subset == tuple(range(9))
    assert res1.error <= 1e-12


def test_scaling_context_invariants():
    rng = np.random.default_rng(23)
    for _ in range(30):
        d = int(rng.integers(2, 5))
        m = int(rng.integers(d, 13))
        f = subtight_random(d, m, int(rng.integers(0, 2**31)))
        _, ctx = scalar_target_subset(f, 0.4)
        total = ctx.scaled_vectors.T @ ctx.scaled_vectors.conj()
        assert operator_norm(total - ctx.projector) <= 1e-9
        assert ctx.eps_scaled <= math.sqrt(f.epsilon) + 1e-12
        # inv_sqrt is pinched between the projector and its eps^(-1/4) multiple
        from framepick import psd_leq

        assert psd_leq(ctx.projector, ctx.inv_sqrt, 1e-9)
        assert psd_leq(ctx.inv_sqrt, f.epsilon**-0.25 * ctx.projector, 1e-9)


def test_scalar_block_estimates():
    # The two proof-level block estimates hold for every returned selection:
    # the off-diagonal compression stays below eps^(1/4) and the complement
    # corner below sqrt(eps).
    rng = np.random.default_rng(29)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        m = int(rng.integers(d, 13))
        f = subtight_random(d, m, int(rng.integers(0, 2**31)))
        t = float(rng.uniform(0.0, 1.0))
        res, ctx = scalar_target_subset(f, t)
        p = ctx.projector
        q = np.eye(f.d) - p
        d_mat = res.achieved
        assert operator_norm(p @ d_mat @ q) <= f.epsilon**0.25 + 1e-9
        assert operator_norm(q @ d_mat @ q) <= math.sqrt(f.epsilon) + 1e-9


def test_scalar_tight_frames_meet_refined_bound():
    # On tight families the rescaling is trivial, so the error obeys the
    # sharper two-block estimate sqrt(2 eps) + eps + |t' - t| directly.
    rng = np.random.default_rng(31)
    for _ in range(15):
        m = int(rng.integers(6, 13))
        f = random_tight(2, m, int(rng.integers(0, 2**31)))
        t = float(rng.uniform(0.05, 0.95))
        res, ctx = scalar_target_subset(f, t)
        eps_v = ctx.eps_scaled
        shift = abs(t - 0.5) * (2.0 * math.sqrt(2.0 * eps_v) + 2.0 * eps_v)
        refined = math.sqrt(2.0 * eps_v) + eps_v + shift
        assert res.error <= refined + 1e-9
        assert refined <= res.certified_bound + 1e-9
        oracle = best_subset_oracle(f, res.target)
        assert res.error >= oracle.error - 1e-12


def test_scalar_certified_bound_holds():
    rng = np.random.default_rng(37)
    for _ in range(25):
        d = int(rng.integers(2, 4))
        m = int(rng.integers(d, 13))
        f = subtight_random(d, m, int(rng.integers(0, 2**31)))
        t = float(rng.uniform(0.0, 1.0))
        res, _ = scalar_target_subset(f, t)
        assert res.error <= res.certified_bound
        assert res.certified_bound == pytest.approx(certified_scalar_bound(f.epsilon), abs=1e-12)


def test_scalar_rejects_bad_t():
    f = random_tight(2, 6, 0)
    with pytest.raises(ValidationError):
        scalar_target_subset(f, 1.5)


def test_scalar_spectral_floor_returns_empty_subset():
    # When every eigenvalue of the frame operator sits below sqrt(eps) the
    # rescaled subspace is empty; the empty pick is then within sqrt(eps).
    rng = np.random.default_rng(53)
    g = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    f = build_frame(g * 0.2)  # eps = 0.04, trace(B) = 0.16 < sqrt(eps)
    res, ctx = scalar_target_subset(f, 0.8)
    assert res.subset == ()
    assert operator_norm(ctx.projector) == 0.0
    assert res.error <= math.sqrt(f.epsilon) + 1e-12
    assert res.error <= res.certified_bound


def test_scalar_all_zero_family():
    f = build_frame(np.zeros((3, 2)))
    res, ctx = scalar_target_subset(f, 0.7)
    assert res.error == 0.0
    assert ctx.eps_scaled == 0.0


# ---------------------------------------------------------------------------
# Convex combination pipeline.
# ---------------------------------------------------------------------------


def test_combination_all_zero_and_all_one():
    f = random_tight(2, 10, 3)
    res0 = convex_combination_subset(f, np.zeros(10))
    assert res0.subset == ()
    assert res0.error == 0.0
    res1 = convex_combination_subset(f, np.ones(10))
    assert res1.subset == tuple(range(10))
    assert res1.error <= 1e-12


def test_combination_certified_bound_and_oracle_dominance():
    rng = np.random.default_rng(41)
    for _ in range(15):
        f = random_tight(2, 12, int(rng.integers(0, 2**31)))
        t = rng.uniform(0.0, 1.0, size=12)
        res = convex_combination_subset(f, t)
        assert res.error <= res.certified_bound
        assert res.certified_bound == pytest.approx(
            certified_combination_bound(f.epsilon), abs=1e-12
        )
        oracle = best_subset_oracle(f, res.target)
        assert res.error >= oracle.error - 1e-12


def test_combination_subset_stays_inside_active_buckets():
    rng = np.random.default_rng(43)
    f = random_tight(3, 12, 77)
    t = rng.uniform(0.0, 1.0, size=12)
    plan = bucket_coefficients(t, f.epsilon)
    res = convex_combination_subset(f, t)
    active = {i for k in range(1, plan.n + 1) for i in plan.buckets[k]}
    assert set(res.subset) <= active


def test_combination_on_axis_family_reaches_diagonal_targets():
    f = counterexample(4)
    t = np.array([1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0])
    res = convex_combination_subset(f, t)
    assert res.error <= certified_combination_bound(f.epsilon)
    oracle = best_subset_oracle(f, res.target)
    assert res.error >= oracle.error - 1e-12


def test_combination_rejects_bad_coefficients():
    f = random_tight(2, 5, 0)
    with pytest.raises(ValidationError):
        convex_combination_subset(f, [0.5, 0.5, 0.5, 0.5, 1.5])
    with pytest.raises(ValidationError):
        convex_combination_subset(f, [0.5] * 4)


# ---------------------------------------------------------------------------
# Dyadic truncation.
# ---------------------------------------------------------------------------


def axis_block(scale, copies=1):
    """Block frame with `copies` vectors per axis of squared norm `scale`."""
    rows = []
    for _ in range(copies):
        rows.append([math.sqrt(scale), 0.0])
        rows.append([0.0, math.sqrt(scale)])
    return build_frame(np.array(rows, dtype=complex))


def test_delta_tail_closed_form_matches_partial_sums():
    for level in range(0, 33):
        partial = math.fsum(2.0 ** (-n / 8.0) for n in range(level + 1, level + 1 + 10_000))
        assert abs(delta_tail(level) - partial) <= 1e-12


def test_delta_tail_at_zero():
    assert delta_tail(0) == pytest.approx(2.0 ** (-1 / 8) / (1 - 2.0 ** (-1 / 8)), abs=1e-15)
    assert delta_tail(0) == pytest.approx(11.0488, abs=5e-5)


def test_single_block_truncation_reduces_to_combination():
    f = axis_block(0.5)
    t = [0.4, 0.9]
    report = compact_truncation([f], [t], 0)
    direct = convex_combination_subset(f, t)
    assert report.blocks[0].subset == direct.subset
    assert report.blocks[0].error == pytest.approx(direct.error, abs=1e-15)
    assert report.tails[0].delta == pytest.approx(delta_tail(0), abs=1e-15)
    assert report.tails[0].remainder == 0.0


def test_three_block_truncation_triangle_inequality():
    blocks = [axis_block(0.5), axis_block(0.25), axis_block(0.125)]
    ts = [[0.5, 0.5], [0.3, 0.8], [0.6, 0.1]]
    report = compact_truncation(blocks, ts, 2)
    e = [b.error for b in report.blocks]
    assert report.tails[0].remainder <= e[1] + e[2] + 1e-12
    assert report.tails[1].remainder <= e[2] + 1e-12
    assert report.tails[2].remainder == 0.0
    for b in report.blocks:
        assert b.meets_budget


def test_truncation_rejects_budget_violation():
    blocks = [axis_block(0.5), axis_block(0.9)]
    with pytest.raises(ValidationError, match="block 1"):
        compact_truncation(blocks, [[0.5, 0.5], [0.5, 0.5]], 1)


def test_truncation_rejects_oversized_total():
    blocks = [axis_block(0.9), axis_block(0.4)]
    with pytest.raises(ValidationError, match="identity"):
        compact_truncation(blocks, [[0.5, 0.5], [0.5, 0.5]], 1)
