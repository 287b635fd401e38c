"""Command line entry point.

    switchreg solve|mpc|enumerate|validate-reg --problem FILE --out DIR [overrides]

Exit codes: 0 success, 1 validation error, 2 solver failure, 3 oracle
budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import euler_rollout
from .errors import BudgetError, RegularizerError, SolverError, SwitchRegError, ValidationError
from .io import load_problem, write_trace_csv
from .model import to_one_hot
from .mpc import MpcConfig, MpcTrace, run_mpc
from .oracle import DEFAULT_MAX_EVALS, EnumerationResult, enumerate_discrete
from .regularizers import AssumptionReport, PNorm, from_name, validate_assumption1
from .solver import SolveReport, SolverConfig, solve_relaxed

COMMANDS = ("solve", "mpc", "enumerate", "validate-reg")
EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunManifest:
    command: str
    problem_file: str | None
    output_dir: str | None
    overrides: dict = field(default_factory=dict)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchreg",
        description="Design discrete switching signals by regularized relaxation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, problem_required=True):
        p.add_argument("--problem", required=problem_required, help="problem JSON file or bundled name")
        p.add_argument("--out", default=None, help="output directory for CSV traces")
        p.add_argument("--lambda", dest="lam", type=_positive_float)
        p.add_argument("--K", type=_positive_int)
        p.add_argument("--h", type=_positive_float)
        p.add_argument("--seed", type=_nonneg_int)
        p.add_argument("--restarts", type=_positive_int)
        p.add_argument("--sim-steps", type=_positive_int)
        p.add_argument("--discreteness-tol", type=_positive_float)
        p.add_argument("--plant", choices=("rk4", "euler"))

    common(sub.add_parser("solve", help="open-loop relaxed solve and rounding"))
    p = sub.add_parser("mpc", help="receding-horizon closed loop")
    common(p)
    p.add_argument("--cold-start", action="store_true", help="disable warm starting")
    p = sub.add_parser("enumerate", help="exhaustive search over all mode sequences")
    common(p)
    p.add_argument("--max-evals", type=_positive_int, default=DEFAULT_MAX_EVALS)
    p.add_argument("--compare", action="store_true", help="also run the solver and report the gap")
    p = sub.add_parser("validate-reg", help="check a regularizer against the discreteness assumption")
    common(p, problem_required=False)
    p.add_argument("--regularizer", help="quadratic, pnorm, soav or soav-shifted")
    p.add_argument("--p", type=float, default=None, help="exponent for pnorm")
    p.add_argument("--samples", type=int, default=99)
    return parser


def _manifest(args) -> RunManifest:
    keys = ("lam", "K", "h", "seed", "restarts", "sim_steps", "discreteness_tol", "plant")
    overrides = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    return RunManifest(args.command, args.problem, args.out, overrides)


def emit(pairs, stream=None):
    stream = stream or sys.stdout
    for key, value in pairs:
        if isinstance(value, float):
            value = f"{value:.10g}"
        elif isinstance(value, (list, tuple)):
            value = " ".join(str(v) for v in value)
        print(f"{key}: {value}", file=stream)


def run_summary(result, command: str, params: dict | None = None, extra: dict | None = None):
    """Key/value lines describing a run, in print order."""
    pairs = [("command", command)]
    pairs += list((params or {}).items())
    if isinstance(result, SolveReport):
        pairs += [
            ("relaxed_cost", result.relaxed_cost),
            ("relaxed_terminal_cost", result.relaxed_terminal_cost),
            ("rounded_terminal_cost", result.rounded_terminal_cost),
            ("discreteness_residual", result.discreteness_residual),
            ("discrete", "yes" if result.is_discrete else "no"),
            ("rounded_modes", list(result.best_rounded)),
            ("best_restart", result.best_restart),
            ("iterations", result.iterations_per_restart),
            ("converged", sum(result.converged)),
        ]
    elif isinstance(result, MpcTrace):
        res = [r.discreteness_residual for r in result.per_step_reports]
        pairs += [
            ("sim_steps", len(result.applied_modes)),
            ("final_time", float(result.times[-1])),
            ("initial_norm", float(result.state_norms[0])),
            ("final_norm", float(result.state_norms[-1])),
            ("final_terminal_cost", float(result.plant_states[-1] @ result.plant_states[-1])),
            ("discreteness_residual", max(res) if res else 0.0),
            ("nondiscrete_steps", sum(r >= result.discreteness_tol for r in res)),
            ("applied_modes", list(result.applied_modes)),
        ]
        if result.times[-1] >= 5.0 - 1e-9:
            pairs.insert(len(pairs) - 3, ("norm_at_5s", result.norm_at(5.0)))
    elif isinstance(result, EnumerationResult):
        pairs += [
            ("evaluated", result.evaluated),
            ("best_terminal_cost", result.best_terminal_cost),
            ("best_modes", list(result.best_modes)),
        ]
    elif isinstance(result, AssumptionReport):
        pairs += list(_report_pairs(result))
    pairs += list((extra or {}).items())
    return pairs


def _report_pairs(report: AssumptionReport):
    for line in report.lines():
        k, v = line.split(": ", 1)
        yield k, v


def _solver_config(doc, ov, default_restarts=10):
    return SolverConfig(
        restarts=ov.get("restarts", default_restarts),
        rng_seed=doc.seed,
        discreteness_tol=ov.get("discreteness_tol", SolverConfig.discreteness_tol),
        continuation=doc.continuation,
    )


def _params(doc, extra=()):
    spec = doc.spec
    out = {
        "problem": doc.name,
        "lambda": spec.lam,
        "K": spec.K,
        "h": spec.h,
        "seed": doc.seed,
        "regularizer": spec.regularizer.describe(),
    }
    if doc.continuation:
        out["continuation"] = list(doc.continuation)
    out.update(extra)
    return out


def _outdir(m: RunManifest):
    if m.output_dir is None:
        return None
    out = Path(m.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_solve(m: RunManifest):
    doc = load_problem(m.problem_file, **m.overrides)
    cfg = _solver_config(doc, m.overrides)
    t0 = time.perf_counter()
    rep = solve_relaxed(doc.spec, cfg)
    wall = time.perf_counter() - t0
    out = _outdir(m)
    files = []
    if out is not None:
        relaxed_roll = euler_rollout(doc.spec, rep.best_relaxed)
        files.append(write_trace_csv(relaxed_roll, out / "solve_relaxed.csv", rep.best_relaxed))
        onehot = to_one_hot(rep.best_rounded, doc.spec.N)
        files.append(write_trace_csv(euler_rollout(doc.spec, onehot), out / "solve_rounded.csv", onehot))
    emit(run_summary(rep, "solve", _params(doc, {"restarts": cfg.restarts}), _tail(files, wall)))
    return EXIT_OK


def cmd_mpc(m: RunManifest, cold=False):
    doc = load_problem(m.problem_file, **m.overrides)
    cfg = MpcConfig(
        spec=doc.spec,
        sim_steps=m.overrides.get("sim_steps", 80),
        solver=_solver_config(doc, m.overrides),
        warm_start=not cold,
        plant=doc.plant,
    )
    t0 = time.perf_counter()
    trace = run_mpc(cfg)
    wall = time.perf_counter() - t0
    files = []
    out = _outdir(m)
    if out is not None:
        files.append(write_trace_csv(trace, out / "mpc_trace.csv"))
    params = _params(doc, {"restarts": cfg.solver.restarts, "plant": cfg.plant, "warm_start": cfg.warm_start})
    emit(run_summary(trace, "mpc", params, _tail(files, wall)))
    return EXIT_OK


def cmd_enumerate(m: RunManifest, max_evals, compare):
    doc = load_problem(m.problem_file, **m.overrides)
    t0 = time.perf_counter()
    res = enumerate_discrete(doc.spec, max_evals)
    extra = {}
    if compare:
        rep = solve_relaxed(doc.spec, _solver_config(doc, m.overrides))
        gap = rep.rounded_terminal_cost - res.best_terminal_cost
        extra = {
            "solver_rounded_terminal_cost": rep.rounded_terminal_cost,
            "solver_discreteness_residual": rep.discreteness_residual,
            "gap": gap,
            "relative_gap": gap / max(abs(res.best_terminal_cost), np.finfo(float).tiny),
        }
    wall = time.perf_counter() - t0
    files = []
    out = _outdir(m)
    if out is not None:
        onehot = to_one_hot(res.best_modes, doc.spec.N)
        files.append(write_trace_csv(euler_rollout(doc.spec, onehot), out / "enumerate_best.csv", onehot))
    extra.update(_tail(files, wall))
    emit(run_summary(res, "enumerate", _params(doc), extra))
    return EXIT_OK


def cmd_validate(m: RunManifest, name, p, samples):
    if name is not None:
        reg = from_name(name, p)
    elif m.problem_file is not None:
        reg = load_problem(m.problem_file, **m.overrides).spec.regularizer
        if p is not None and isinstance(reg, PNorm):
            reg = PNorm(p)
    else:
        raise ValidationError("validate-reg needs --regularizer or --problem")
    report = validate_assumption1(reg, samples)
    emit(run_summary(report, "validate-reg", {"samples": samples}))
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _tail(files, wall):
    out = {}
    if files:
        out["outputs"] = [str(f) for f in files]
    out["wall_time_s"] = round(wall, 3)
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    m = _manifest(args)
    try:
        if m.command == "solve":
            return cmd_solve(m)
        if m.command == "mpc":
            return cmd_mpc(m, cold=args.cold_start)
        if m.command == "enumerate":
            return cmd_enumerate(m, args.max_evals, args.compare)
        return cmd_validate(m, args.regularizer, args.p, args.samples)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValidationError, RegularizerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SwitchRegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
