"""Sweep harness tests: CSV schema, determinism, bound assertions, figure."""

import csv

import numpy as np
import pytest

from framepick import SolverConfig, ValidationError, run_sweep, write_csv
from framepick.sweep import CSV_HEADER, render_figure


def test_csv_header_and_schema(tmp_path):
    report = run_sweep("counterexample", 2, [2, 4], seeds=[0, 1], pipeline="scalar", t_scalar=0.5)
    out = tmp_path / "sweep.csv"
    write_csv(report, out)
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 1 + 4
    for row in rows[1:]:
        assert len(row) == 8
        float(row[0])
        int(row[1])


def test_axis_family_scalar_half_is_exact():
    # The last rung (m = 32) runs past the exhaustive limit on the local-search
    # path; the exact balanced split still exists at every size.
    report = run_sweep(
        "counterexample", 2, [2, 4, 8, 16], seeds=[0], pipeline="scalar", t_scalar=0.5
    )
    for row in report.rows:
        assert row.achieved == pytest.approx(0.0, abs=1e-12)
        if row.m <= 22:
            assert row.oracle == pytest.approx(0.0, abs=1e-12)
        else:
            assert row.oracle is None


def test_rows_sorted_by_eps_then_seed():
    report = run_sweep("random-tight", 2, [6, 9], seeds=[0, 1, 2], pipeline="scalar")
    keys = [(row.eps, row.seed) for row in report.rows]
    assert keys == sorted(keys)


def test_exhaustive_rows_meet_bound_and_track_oracle():
    report = run_sweep(
        "random-tight", 2, [8, 12], seeds=[0, 1, 2], pipeline="scalar", t_scalar=0.3
    )
    for row in report.rows:
        assert row.achieved <= row.bound
        assert row.oracle is not None
        assert row.achieved >= row.oracle - 1e-12


def test_coeffs_pipeline_rows(tmp_path):
    report = run_sweep("random-tight", 2, [8, 10], seeds=[0, 1], pipeline="coeffs")
    for row in report.rows:
        assert row.achieved <= row.bound
    out = tmp_path / "coeffs.csv"
    write_csv(report, out)
    assert out.exists()


def test_empty_ladder_writes_header_only(tmp_path):
    report = run_sweep("random-tight", 2, [], seeds=[0, 1], pipeline="scalar")
    out = tmp_path / "empty.csv"
    write_csv(report, out)
    assert out.read_text().strip() == ",".join(CSV_HEADER)
    assert report.fit is None


def test_ladder_must_increase():
    with pytest.raises(ValidationError):
        run_sweep("random-tight", 2, [10, 8], seeds=[0], pipeline="scalar")


def test_forced_exhaustive_rejects_oversized_ladder():
    cfg = SolverConfig(strategy="exhaustive", exhaustive_limit=12)
    with pytest.raises(ValidationError):
        run_sweep("random-tight", 2, [8, 16], seeds=[0], pipeline="scalar", cfg=cfg)


def test_determinism_ignoring_runtime(tmp_path):
    kwargs = dict(kind="random-tight", d=2, rungs=[6, 8], seeds=[0, 1], pipeline="coeffs")
    a = run_sweep(**kwargs)
    b = run_sweep(**kwargs)
    strip = lambda rows: [(r.eps, r.seed, r.d, r.m, r.achieved, r.bound, r.oracle) for r in rows]
    assert strip(a.rows) == strip(b.rows)


def test_worker_pool_matches_serial():
    serial = run_sweep("random-tight", 2, [6, 8], seeds=[0, 1, 2], pipeline="scalar")
    pooled = run_sweep("random-tight", 2, [6, 8], seeds=[0, 1, 2], pipeline="scalar", workers=4)
    strip = lambda rows: [(r.eps, r.seed, r.d, r.m, r.achieved, r.bound, r.oracle) for r in rows]
    assert strip(serial.rows) == strip(pooled.rows)


def test_fit_exponent_on_synthetic_power_law():
    from framepick.sweep import SweepRow, fit_exponent

    rows = [
        SweepRow(eps=e, seed=0, d=2, m=8, achieved=2.0 * e**0.25, bound=1.0, oracle=None, ms=0.0)
        for e in np.logspace(-6, -1, 12)
    ]
    fit = fit_exponent(rows)
    assert fit.slope == pytest.approx(0.25, abs=1e-9)
    assert fit.ci_low <= 0.25 <= fit.ci_high


def test_render_figure_writes_file(tmp_path):
    report = run_sweep("random-tight", 2, [6, 8], seeds=[0, 1], pipeline="scalar", t_scalar=0.3)
    fig = tmp_path / "trend.png"
    render_figure(report, fig)
    assert fig.stat().st_size > 0
