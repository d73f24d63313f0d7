"""Command-line front end.

Subcommands: ``gen`` (emit instance files), ``solve`` (run a solver or
pipeline on a frame file), ``sweep`` (ladder experiments to CSV + figure),
``convert`` (frame <-> projection), ``verify`` (invariant checks on a file).

Exit codes: 0 success, 2 usage error, 3 validation failure, 4 certified-bound
violation.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import frames
from .errors import BoundViolationError, ValidationError
from .generators import GeneratorSpec
from .linalg import operator_norm, psd_leq
from .pipeline import convex_combination_subset, scalar_target_subset
from .solvers import LocalSearchConfig, SolverConfig, best_subset_oracle, two_partition
from .sweep import run_sweep, render_figure, write_csv


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="seed for any randomized step")
    parser.add_argument(
        "--strategy",
        choices=("exhaustive", "local", "auto"),
        default="auto",
        help="subset search strategy (default: auto)",
    )
    parser.add_argument(
        "--exhaustive-limit",
        type=int,
        default=22,
        help="largest m the exhaustive solvers will enumerate (default: 22)",
    )
    parser.add_argument("--restarts", type=int, default=8, help="local-search restarts")
    parser.add_argument("--max-iters", type=int, default=4000, help="local-search flip budget")


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        strategy=args.strategy,
        exhaustive_limit=args.exhaustive_limit,
        local_search=LocalSearchConfig(
            restarts=args.restarts, max_iters=args.max_iters, seed=args.seed
        ),
    )


def _emit(doc: dict, args) -> None:
    text = json.dumps(doc, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if args.json or not args.out:
        print(text)
    else:
        print(f"wrote {args.out}")


def cmd_gen(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind, d=args.d, m=args.m, seed=args.seed, m_per_axis=args.m_per_axis
    )
    frame = spec.build()
    doc = frames.frame_to_json(frame)
    if args.out:
        frames.save_json(doc, args.out)
        if args.json:
            print(json.dumps(doc, sort_keys=True))
        else:
            print(
                f"wrote {args.out}: {frame.m} vectors in dimension {frame.d}, "
                f"eps = {frame.epsilon:.6g}, {'tight' if frame.tight else 'sub-tight'}"
            )
    else:
        print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_solve(args) -> int:
    frame = frames.frame_from_json(frames.load_document(args.frame))
    cfg = _solver_config(args)
    if args.half:
        result = two_partition(frame, cfg)
        doc = {
            "mode": "half",
            "blocks": [list(block) for block in result.partition.blocks],
            "norms": list(result.norms),
            "bound": result.bound,
            "meets_bound": result.meets_bound,
            "solver": result.solver,
            "eps": frame.epsilon,
            "d": frame.d,
            "m": frame.m,
        }
        _emit(doc, args)
        return 0
    if args.t is not None:
        selection, _ = scalar_target_subset(frame, args.t, cfg)
        mode = "scalar"
    else:
        coeffs = _load_coefficients(args.coeffs, frame.m)
        selection = convex_combination_subset(frame, coeffs, cfg)
        mode = "coeffs"
    doc = {
        "mode": mode,
        "subset": list(selection.subset),
        "error": selection.error,
        "certified_bound": selection.certified_bound,
        "meets_bound": selection.error <= selection.certified_bound,
        "solver": selection.solver,
        "seed": selection.seed,
        "iterations": selection.iterations,
        "eps": frame.epsilon,
        "d": frame.d,
        "m": frame.m,
    }
    if args.oracle:
        oracle = best_subset_oracle(frame, selection.target, cfg)
        doc["oracle_error"] = oracle.error
        doc["oracle_gap"] = selection.error - oracle.error
    _emit(doc, args)
    return 0


def _load_coefficients(path, m: int) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(obj, list):
        raise ValidationError(f"{path}: expected a JSON array of {m} reals")
    arr = np.asarray(obj, dtype=float)
    if arr.shape != (m,):
        raise ValidationError(f"{path}: expected {m} coefficients, got {arr.shape}")
    return arr


def cmd_sweep(args) -> int:
    rungs = [int(x) for x in args.ladder.split(",") if x.strip() != ""]
    seeds = range(args.seed, args.seed + args.seeds)
    cfg = _solver_config(args)
    report = run_sweep(
        kind=args.kind,
        d=args.d,
        rungs=rungs,
        seeds=seeds,
        pipeline=args.pipeline,
        t_scalar=args.t,
        cfg=cfg,
        workers=args.workers,
    )
    write_csv(report, args.out)
    messages = [f"wrote {args.out} ({len(report.rows)} rows)"]
    if not args.no_fig and report.rows:
        fig_path = args.fig or str(Path(args.out).with_suffix(".png"))
        render_figure(report, fig_path)
        messages.append(f"wrote {fig_path}")
    if report.fit is not None:
        messages.append(
            f"fitted exponent of error vs eps: {report.fit.slope:.4f} "
            f"(95% CI [{report.fit.ci_low:.4f}, {report.fit.ci_high:.4f}], "
            f"{report.fit.points} points)"
        )
    else:
        messages.append("fitted exponent: not enough nonzero rows")
    print("\n".join(messages))
    return 0


def cmd_convert(args) -> int:
    kind, system = frames.load_any(args.input)
    if kind == "frame":
        frame = system
        if not frame.tight:
            if not args.complete:
                raise ValidationError(
                    "input frame is sub-tight; pass --complete --eps-budget B to "
                    "append completion vectors first"
                )
            budget = args.eps_budget if args.eps_budget is not None else frame.epsilon
            frame = frames.complete_to_tight(frame, budget)
        doc = frames.projection_to_json(frames.frame_to_projection(frame))
    else:
        doc = frames.frame_to_json(frames.projection_to_frame(system))
    if args.out:
        frames.save_json(doc, args.out)
        if args.json:
            print(json.dumps(doc, sort_keys=True))
        else:
            print(f"wrote {args.out}")
    else:
        print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    kind, system = frames.load_any(args.input)
    checks = []
    if kind == "frame":
        frame = system
        v = frame.vectors
        checks.append(("epsilon matches recomputed max squared norm",
                       frame.epsilon == float((np.abs(v) ** 2).sum(axis=1).max())))
        checks.append(("frame operator below identity",
                       psd_leq(frame.frame_operator, np.eye(frame.d), 1e-9)))
        checks.append(("frame operator PSD",
                       psd_leq(np.zeros((frame.d, frame.d)), frame.frame_operator, 1e-9)))
        tight_defect = operator_norm(frame.frame_operator - np.eye(frame.d))
        checks.append((f"tightness classification (defect {tight_defect:.3e})",
                       frame.tight == (tight_defect <= 1e-9)))
        rng = np.random.default_rng(args.seed)
        ok = True
        for _ in range(8):
            subset = [i for i in range(frame.m) if rng.random() < 0.5]
            d_mat = frame.subset_operator(subset)
            ok &= psd_leq(np.zeros_like(d_mat), d_mat, 1e-9)
            ok &= psd_leq(d_mat, frame.frame_operator, 1e-9)
        checks.append(("random subset sums between 0 and the frame operator", ok))
    else:
        ps = system
        checks.append(("projection idempotent", operator_norm(ps.matrix @ ps.matrix - ps.matrix) <= 1e-9))
        checks.append(("diag bound matches recomputed max diagonal",
                       ps.diag_bound == float(ps.matrix.diagonal().real.max())))
        trace = float(ps.matrix.trace().real)
        checks.append((f"trace {trace:.9g} within 1e-6 of an integer",
                       abs(trace - round(trace)) <= 1e-6))
    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
    if failed:
        print(f"{len(failed)} check(s) failed", file=sys.stderr)
        return 3
    print(f"all {len(checks)} checks passed for {kind} file {args.input}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framepick",
        description="Subset selection for rank-one frame decompositions with certified bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("--kind", choices=("random-tight", "counterexample", "subtight-random"),
                       required=True)
    p_gen.add_argument("--d", type=int, default=2, help="ambient dimension")
    p_gen.add_argument("--m", type=int, default=8, help="number of vectors")
    p_gen.add_argument("--M", dest="m_per_axis", type=int, default=2,
                       help="vectors per axis for the counterexample kind")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", type=str, default=None)
    p_gen.add_argument("--json", action="store_true", help="also print the JSON document")
    p_gen.set_defaults(func=cmd_gen)

    p_solve = sub.add_parser("solve", help="select a subset for a target")
    p_solve.add_argument("frame", type=str, help="frame JSON file")
    target = p_solve.add_mutually_exclusive_group(required=True)
    target.add_argument("--half", action="store_true", help="two-way split with both norms near 1/2")
    target.add_argument("--t", type=float, default=None, help="scalar target t * B")
    target.add_argument("--coeffs", type=str, default=None,
                        help="JSON array of per-vector coefficients in [0, 1]")
    p_solve.add_argument("--oracle", action="store_true",
                         help="also report the exhaustive-oracle error for the same target")
    p_solve.add_argument("--out", type=str, default=None)
    p_solve.add_argument("--json", action="store_true")
    _add_solver_flags(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="ladder experiment to CSV (+ figure)")
    p_sweep.add_argument("--kind", choices=("random-tight", "counterexample"), required=True)
    p_sweep.add_argument("--d", type=int, default=2)
    p_sweep.add_argument("--ladder", type=str, required=True,
                         help="comma-separated increasing m values (or vectors per axis)")
    p_sweep.add_argument("--seeds", type=int, default=5, help="seeds per rung")
    p_sweep.add_argument("--pipeline", choices=("scalar", "coeffs"), default="scalar")
    p_sweep.add_argument("--t", type=float, default=0.5, help="scalar target for the scalar pipeline")
    p_sweep.add_argument("--out", type=str, required=True, help="CSV output path")
    p_sweep.add_argument("--fig", type=str, default=None, help="figure path (default: CSV with .png)")
    p_sweep.add_argument("--no-fig", action="store_true", help="skip the figure")
    p_sweep.add_argument("--workers", type=int, default=1)
    _add_solver_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_convert = sub.add_parser("convert", help="convert between frame and projection files")
    p_convert.add_argument("input", type=str)
    p_convert.add_argument("--out", type=str, default=None)
    p_convert.add_argument("--complete", action="store_true",
                           help="complete a sub-tight frame before converting")
    p_convert.add_argument("--eps-budget", type=float, default=None,
                           help="squared-norm budget for completion vectors")
    p_convert.add_argument("--json", action="store_true")
    p_convert.set_defaults(func=cmd_convert)

    p_verify = sub.add_parser("verify", help="run the invariant suite on a file")
    p_verify.add_argument("input", type=str)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BoundViolationError as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return 4
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
