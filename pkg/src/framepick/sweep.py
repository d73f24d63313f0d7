"""Epsilon sweeps: run a pipeline across a ladder of instances and report scaling.

Realized epsilon is controlled indirectly (more vectors per dimension means
smaller max squared norm for tight families), so each row records the epsilon
it actually got.  Rows are written in deterministic (eps, seed) order; the
report path emits a CSV and, by default, a log-log matplotlib figure next to
it.
"""

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BoundViolationError, ValidationError
from .generators import counterexample, random_tight
from .pipeline import convex_combination_subset, scalar_target_subset
from .solvers import SolverConfig, best_subset_oracle

CSV_HEADER = ("eps", "seed", "d", "m", "achieved", "bound", "oracle", "ms")

PIPELINES = ("scalar", "coeffs")


@dataclass(frozen=True)
class SweepRow:
    eps: float
    seed: int
    d: int
    m: int
    achieved: float
    bound: float
    oracle: float | None
    ms: float


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope of log(error) against log(eps) with a 95% interval."""

    slope: float
    ci_low: float
    ci_high: float
    points: int


@dataclass(frozen=True, eq=False)
class SweepReport:
    kind: str
    pipeline: str
    rows: tuple
    fit: ExponentFit | None


def _solve_row(kind: str, pipeline: str, d: int, rung: int, seed: int, t_scalar: float, cfg):
    if kind == "random-tight":
        frame = random_tight(d, rung, seed)
    else:
        frame = counterexample(rung)
    start = time.perf_counter()
    if pipeline == "scalar":
        result, _ = scalar_target_subset(frame, t_scalar, cfg)
    else:
        rng = np.random.default_rng([seed, 0xC0EF])
        coeffs = rng.uniform(0.0, 1.0, size=frame.m)
        result = convex_combination_subset(frame, coeffs, cfg)
    ms = (time.perf_counter() - start) * 1000.0
    oracle_error = None
    if frame.m <= cfg.exhaustive_limit:
        oracle_error = best_subset_oracle(frame, result.target, cfg).error
    exhaustive = cfg.strategy == "exhaustive" or (
        cfg.strategy == "auto" and frame.m <= cfg.exhaustive_limit
    )
    if exhaustive and result.error > result.certified_bound:
        raise BoundViolationError(
            f"exhaustive sweep row (m={frame.m}, seed={seed}) exceeded its certified "
            f"bound: {result.error:.12g} > {result.certified_bound:.12g}"
        )
    return SweepRow(
        eps=frame.epsilon,
        seed=seed,
        d=frame.d,
        m=frame.m,
        achieved=result.error,
        bound=float(result.certified_bound),
        oracle=oracle_error,
        ms=ms,
    )


def run_sweep(
    kind: str,
    d: int,
    rungs,
    seeds,
    pipeline: str = "scalar",
    t_scalar: float = 0.5,
    cfg: SolverConfig | None = None,
    workers: int = 1,
) -> SweepReport:
    """Solve every (rung, seed) cell of the ladder and fit the observed exponent.

    ``rungs`` is a strictly increasing list of m (random-tight) or vectors per
    axis (counterexample); realized epsilon then decreases along the ladder.
    """
    cfg = cfg or SolverConfig()
    if kind not in ("random-tight", "counterexample"):
        raise ValidationError(f"unknown sweep kind {kind!r}")
    if pipeline not in PIPELINES:
        raise ValidationError(f"unknown pipeline {pipeline!r}; expected one of {PIPELINES}")
    rungs = [int(r) for r in rungs]
    if any(b <= a for a, b in zip(rungs, rungs[1:])):
        raise ValidationError("ladder must be strictly increasing so epsilon decreases")
    if cfg.strategy == "exhaustive":
        for rung in rungs:
            m = rung if kind == "random-tight" else 2 * rung
            if m > cfg.exhaustive_limit:
                raise ValidationError(
                    f"infeasible ladder: rung with m = {m} exceeds the exhaustive "
                    f"limit {cfg.exhaustive_limit}"
                )
    cells = [(rung, int(seed)) for rung in rungs for seed in seeds]
    if workers > 1 and cells:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(
                    lambda cell: _solve_row(kind, pipeline, d, cell[0], cell[1], t_scalar, cfg),
                    cells,
                )
            )
    else:
        rows = [_solve_row(kind, pipeline, d, rung, seed, t_scalar, cfg) for rung, seed in cells]
    rows.sort(key=lambda row: (row.eps, row.seed))
    return SweepReport(kind=kind, pipeline=pipeline, rows=tuple(rows), fit=fit_exponent(rows))


def fit_exponent(rows) -> ExponentFit | None:
    """Slope of log(achieved) vs log(eps) over rows with nonzero error."""
    pts = [(row.eps, row.achieved) for row in rows if row.achieved > 0.0 and row.eps > 0.0]
    if len(pts) < 3:
        return None
    x = np.log(np.array([p[0] for p in pts]))
    y = np.log(np.array([p[1] for p in pts]))
    if np.allclose(x, x[0]):
        return None
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = len(pts) - 2
    if dof > 0 and float(np.var(x)) > 0:
        stderr = math.sqrt(float(resid @ resid) / dof / (len(pts) * float(np.var(x))))
    else:
        stderr = 0.0
    return ExponentFit(
        slope=float(slope),
        ci_low=float(slope - 1.96 * stderr),
        ci_high=float(slope + 1.96 * stderr),
        points=len(pts),
    )


def write_csv(report: SweepReport, path) -> None:
    """Write rows with the fixed header; the oracle column is blank past the limit."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in report.rows:
            writer.writerow(
                [
                    repr(row.eps),
                    row.seed,
                    row.d,
                    row.m,
                    repr(row.achieved),
                    repr(row.bound),
                    "" if row.oracle is None else repr(row.oracle),
                    f"{row.ms:.3f}",
                ]
            )


def render_figure(report: SweepReport, path) -> None:
    """Log-log scatter of achieved error and certified bound against realized eps."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    eps = [row.eps for row in report.rows]
    achieved = [row.achieved if row.achieved > 0 else np.nan for row in report.rows]
    ax.plot(eps, achieved, "o", ms=4, alpha=0.7, label="achieved error")
    order = np.argsort(eps)
    ax.plot(
        np.array(eps)[order],
        np.array([row.bound for row in report.rows])[order],
        "-",
        lw=1.2,
        color="tab:red",
        label="certified bound",
    )
    oracle_pts = [(row.eps, row.oracle) for row in report.rows if row.oracle]
    if oracle_pts:
        ax.plot(*zip(*oracle_pts), "x", ms=4, color="tab:green", label="oracle error")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("realized epsilon")
    ax.set_ylabel("operator-norm error")
    title = f"{report.pipeline} pipeline on {report.kind}"
    if report.fit is not None:
        title += f"  (fitted exponent {report.fit.slope:.3f})"
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
