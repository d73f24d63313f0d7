"""Acceptance suite: one test per exit criterion, each printing a pass/fail line.

Run with ``pytest -v tests/test_acceptance.py`` (add ``-s`` to stream the
per-criterion lines; they also appear in the -rA summary).
"""

import math
import time

import numpy as np
import pytest

from framepick import (
    DiagonalProjection,
    best_subset_oracle,
    build_frame,
    certified_combination_bound,
    certified_scalar_bound,
    convex_combination_subset,
    counterexample,
    delta_tail,
    diagonal_projection_select,
    frame_to_projection,
    gram_matrix,
    local_search_subset,
    operator_norm,
    projection_to_frame,
    random_tight,
    run_sweep,
    scalar_target_subset,
    subtight_random,
    two_partition,
)


def report(name: str, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


def uniform_norm_subtight(d: int, m: int, squared_norm: float, seed: int):
    """Random directions rescaled to a common squared norm (small-eps regime)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return build_frame(g * math.sqrt(squared_norm))


def test_criterion_1_two_partition_bound_certification():
    rng = np.random.default_rng(20260808)
    start = time.perf_counter()
    hits = 0
    total = 200
    for _ in range(total):
        d = int(rng.choice([2, 3]))
        m = int(rng.integers(8, 17))
        frame = random_tight(d, m, int(rng.integers(0, 2**31)))
        result = two_partition(frame)
        bound = 0.5 + math.sqrt(2.0 * frame.epsilon) + frame.epsilon
        if max(result.norms) <= bound and result.meets_bound:
            hits += 1
    elapsed = time.perf_counter() - start
    report(
        "1 two-partition bound",
        hits == total and elapsed < 120.0,
        f"{hits}/{total} within 1/2 + sqrt(2 eps) + eps, {elapsed:.1f} s (target < 120 s)",
    )


def test_criterion_2_axis_family_exactness():
    worst_split = 0.0
    worst_oracle = math.inf
    for m_per_axis in (2, 4, 8):
        frame = counterexample(m_per_axis)
        result = two_partition(frame)
        worst_split = max(worst_split, max(abs(n - 0.5) for n in result.norms))
        target = np.full((2, 2), 0.5)
        oracle = best_subset_oracle(frame, target)
        worst_oracle = min(worst_oracle, oracle.error)
    passed = worst_split <= 1e-12 and worst_oracle >= 0.5 - 1e-12
    report(
        "2 axis-family exactness",
        passed,
        f"max |norm - 1/2| = {worst_split:.2e}, min oracle error for the "
        f"off-diagonal target = {worst_oracle:.12f} >= 0.5 - 1e-12",
    )


def test_criterion_3_rescaling_invariants():
    rng = np.random.default_rng(314159)
    total = 100
    hits = 0
    for i in range(total):
        d = int(rng.integers(2, 5))
        m = int(rng.integers(d, 15))
        if i % 3 == 0:
            frame = uniform_norm_subtight(d, max(m, 2 * d), 0.03, int(rng.integers(0, 2**31)))
        else:
            frame = subtight_random(d, m, int(rng.integers(0, 2**31)))
        t = float(rng.uniform(0.0, 1.0))
        selection, ctx = scalar_target_subset(frame, t)
        eps = frame.epsilon
        total_scaled = ctx.scaled_vectors.T @ ctx.scaled_vectors.conj()
        ok = operator_norm(total_scaled - ctx.projector) <= 1e-9
        ok &= ctx.eps_scaled <= math.sqrt(eps) + 1e-12
        complement = np.eye(frame.d) - ctx.projector
        ok &= operator_norm(ctx.projector @ selection.achieved @ complement) <= eps**0.25 + 1e-9
        ok &= operator_norm(complement @ selection.achieved @ complement) <= math.sqrt(eps) + 1e-9
        hits += ok
    report(
        "3 rescaling invariants",
        hits == total,
        f"{hits}/{total} frames satisfy the whitening identity, the sqrt(eps) "
        "norm cap, and both block estimates",
    )


def test_criterion_4_certified_bounds_hold():
    rng = np.random.default_rng(271828)
    scalar_total = combo_total = 100
    scalar_hits = combo_hits = 0
    for i in range(scalar_total):
        d = int(rng.integers(2, 4))
        m = int(rng.integers(8, 14))
        if i % 4 == 0:
            frame = uniform_norm_subtight(d, 12, 0.03, int(rng.integers(0, 2**31)))
        elif i % 4 == 1:
            frame = subtight_random(d, m, int(rng.integers(0, 2**31)))
        else:
            frame = random_tight(d, m, int(rng.integers(0, 2**31)))
        t = float(rng.uniform(0.0, 1.0))
        selection, _ = scalar_target_subset(frame, t)
        scalar_hits += selection.error <= certified_scalar_bound(frame.epsilon)
    for i in range(combo_total):
        d = 2
        m = int(rng.integers(8, 13))
        if i % 4 == 0:
            frame = uniform_norm_subtight(d, 12, 0.03, int(rng.integers(0, 2**31)))
        else:
            frame = random_tight(d, m, int(rng.integers(0, 2**31)))
        coeffs = rng.uniform(0.0, 1.0, size=frame.m)
        selection = convex_combination_subset(frame, coeffs)
        combo_hits += selection.error <= certified_combination_bound(frame.epsilon)
    report(
        "4 certified bounds",
        scalar_hits == scalar_total and combo_hits == combo_total,
        f"scalar {scalar_hits}/{scalar_total} within (2 sqrt(2) + 1) eps^(1/4) + 4 sqrt(eps); "
        f"combination {combo_hits}/{combo_total} within n * scalar_bound + 1/n "
        "(a violation raises the exit-code-4 error and fails this suite)",
    )


def test_criterion_5_oracle_dominance():
    rng = np.random.default_rng(161803)
    total = 40
    ok = True
    equalities = []
    for i in range(total):
        m = int(rng.integers(8, 15))
        frame = random_tight(2, m, int(rng.integers(0, 2**31)))
        t = float(rng.uniform(0.0, 1.0))
        pipeline, _ = scalar_target_subset(frame, t)
        oracle = best_subset_oracle(frame, pipeline.target)
        local = local_search_subset(frame, pipeline.target)
        ok &= pipeline.error >= oracle.error - 1e-12
        ok &= local.error >= oracle.error - 1e-12
        if abs(pipeline.error - oracle.error) <= 1e-12:
            equalities.append(("pipeline", i))
        if abs(local.error - oracle.error) <= 1e-12:
            equalities.append(("local", i))
    report(
        "5 oracle dominance",
        ok,
        f"{total} instances; pipeline and local-search errors never beat the "
        f"oracle; {len(equalities)} equality cases: {equalities[:8]}{'...' if len(equalities) > 8 else ''}",
    )


def test_criterion_6_dictionary_roundtrip():
    rng = np.random.default_rng(577215)
    total = 100
    gram_hits = 0
    select_hits = 0
    worst_gap = 0.0
    for _ in range(total):
        frame = random_tight(2, 10, int(rng.integers(0, 2**31)))
        ps = frame_to_projection(frame)
        back = projection_to_frame(ps)
        gram_hits += operator_norm(gram_matrix(back) - ps.matrix) <= 1e-9
        coeffs = rng.uniform(0.0, 1.0, size=frame.m)
        frame_side = convex_combination_subset(frame, coeffs)
        proj_side = diagonal_projection_select(ps, DiagonalProjection.full(ps.m), coeffs)
        gap = abs(proj_side.error - frame_side.error)
        worst_gap = max(worst_gap, gap)
        select_hits += gap <= 1e-12
    report(
        "6 dictionary round-trip",
        gram_hits == total and select_hits == total,
        f"{gram_hits}/{total} Gram matrices preserved to 1e-9; "
        f"{select_hits}/{total} projection-side selections match the frame side "
        f"(worst gap {worst_gap:.2e})",
    )


def test_criterion_7_tail_closed_form():
    worst = 0.0
    for level in range(0, 33):
        partial = math.fsum(2.0 ** (-n / 8.0) for n in range(level + 1, level + 1 + 10_000))
        worst = max(worst, abs(delta_tail(level) - partial))
    anchored = abs(delta_tail(0) - 11.048779707016793) <= 1e-12
    report(
        "7 geometric tail closed form",
        worst <= 1e-12 and anchored,
        f"max |closed form - 10^4-term sum| = {worst:.2e} over N in [0, 32]; "
        f"delta_0 = {delta_tail(0):.6f}",
    )


def test_criterion_8_scaling_trend():
    seeds = list(range(21))
    rungs = [6, 10, 16]
    passed = True
    details = []
    for pipeline in ("scalar", "coeffs"):
        report_obj = run_sweep(
            "random-tight", 2, rungs, seeds, pipeline=pipeline, t_scalar=0.3
        )
        stats = []
        for rung in rungs:
            rows = [row for row in report_obj.rows if row.m == rung]
            stats.append(
                (float(np.median([r.eps for r in rows])), float(np.median([r.achieved for r in rows])))
            )
        stats.sort(key=lambda s: -s[0])  # decreasing eps
        monotone = all(b[1] <= a[1] + 1e-12 for a, b in zip(stats, stats[1:]))
        passed &= monotone
        fit = report_obj.fit
        details.append(
            f"{pipeline}: medians {[(round(e, 3), round(err, 4)) for e, err in stats]}"
            + (f", fitted exponent {fit.slope:.3f} (reported, not asserted)" if fit else "")
        )
    report("8 scaling trend", passed, "; ".join(details))
