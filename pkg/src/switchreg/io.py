"""Problem files (JSON) and trace files (CSV)."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .dynamics import RolloutResult
from .errors import ValidationError
from .model import ControlSequence, ProblemSpec, SwitchedSystem
from .mpc import PLANTS, MpcTrace, applied_controls
from .regularizers import PNorm, QuadraticConcave, from_name

BUNDLED = ("two_mode.json", "three_mode.json")


@dataclass(frozen=True)
class ProblemDocument:
    """A parsed problem file: the problem plus run settings that live beside it."""

    spec: ProblemSpec
    seed: int = 0
    plant: str = "rk4"
    name: str = ""
    path: str = ""
    continuation: tuple = ()


def resolve_problem_path(path) -> Path:
    """Accept a filesystem path or the name of a bundled example."""
    p = Path(path)
    if p.exists():
        return p
    name = p.name if p.suffix else p.name + ".json"
    if name in BUNDLED:
        return Path(str(resources.files("switchreg") / "examples" / name))
    raise ValidationError(f"problem file not found: {path}")


def _field(doc, key):
    if key not in doc:
        raise ValidationError(f"problem file: missing field '{key}'")
    return doc[key]


def _matrix(value, key, shape):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"problem file: field '{key}' is not a numeric matrix") from None
    if arr.shape != shape:
        raise ValidationError(f"problem file: field '{key}' has shape {arr.shape}, expected {shape}")
    return arr


def _regularizer(value):
    if value is None:
        return QuadraticConcave()
    if isinstance(value, str):
        return from_name(value)
    if isinstance(value, dict):
        name = value.get("name", "")
        if str(name).lower() in ("pnorm", "lp"):
            return PNorm(float(value.get("p", 0.5)))
        return from_name(str(name))
    raise ValidationError("problem file: field 'regularizer' must be a name or an object")


def _horizon(doc):
    has_T, has_K, has_h = ("T" in doc), ("K" in doc), ("h" in doc)
    if not has_K:
        raise ValidationError("problem file: missing field 'K'")
    K = doc["K"]
    if isinstance(K, bool) or not isinstance(K, int) or K < 1:
        raise ValidationError(f"problem file: field 'K' must be a positive integer, got {K!r}")
    if has_T and has_h:
        T, h = float(doc["T"]), float(doc["h"])
        if abs(T - K * h) > 1e-12 * abs(T):
            raise ValidationError(f"problem file: fields 'T', 'K', 'h' inconsistent: K*h = {K * h} != T = {T}")
    elif has_h:
        h = float(doc["h"])
        T = K * h
    elif has_T:
        T = float(doc["T"])
        h = T / K
    else:
        raise ValidationError("problem file: need 'h' or 'T' alongside 'K'")
    if not (T > 0 and h > 0):
        raise ValidationError("problem file: fields 'T' and 'h' must be positive")
    return T, K, h


def load_problem(path, **overrides) -> ProblemDocument:
    """Read and validate a problem file.

    ``overrides`` may set ``lam``, ``K``, ``h``, ``seed`` or ``plant``; a
    changed ``K`` or ``h`` recomputes ``T = K * h``.
    """
    p = resolve_problem_path(path)
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"problem file {p}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"problem file {p}: top level must be an object")

    n = _field(doc, "n")
    N = _field(doc, "N")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("problem file: field 'n' must be a positive integer")
    if not isinstance(N, int) or N < 2:
        raise ValidationError("problem file: field 'N' must be an integer >= 2")
    modes = _field(doc, "modes")
    if not isinstance(modes, list) or len(modes) != N:
        raise ValidationError(f"problem file: field 'modes' must list {N} matrices")
    mats = [_matrix(m, f"modes[{i}]", (n, n)) for i, m in enumerate(modes)]
    xi = _matrix(_field(doc, "xi"), "xi", (n,))
    Q = _field(doc, "Q")
    if isinstance(Q, str):
        if Q.lower() != "identity":
            raise ValidationError(f"problem file: field 'Q' must be a matrix or \"identity\", got {Q!r}")
        Q = np.eye(n)
    else:
        Q = _matrix(Q, "Q", (n, n))
        if not np.allclose(Q, Q.T, rtol=1e-10, atol=0) or np.min(np.linalg.eigvalsh(0.5 * (Q + Q.T))) <= 0:
            raise ValidationError("problem file: field 'Q' must be symmetric positive definite")

    hdoc = {k: doc[k] for k in ("T", "K", "h") if k in doc}
    if overrides.get("K") is not None or overrides.get("h") is not None:
        hdoc.pop("T", None)
        if overrides.get("K") is not None:
            hdoc["K"] = int(overrides["K"])
        if overrides.get("h") is not None:
            hdoc["h"] = float(overrides["h"])
        if "h" not in hdoc:
            hdoc["h"] = float(doc["T"]) / doc["K"]
    T, K, h = _horizon(hdoc)

    lam = overrides.get("lam")
    if lam is None:
        lam = _field(doc, "lambda")
    try:
        lam = float(lam)
    except (TypeError, ValueError):
        raise ValidationError("problem file: field 'lambda' must be a number") from None
    if not lam > 0:
        raise ValidationError(f"problem file: field 'lambda' must be positive, got {lam}")

    seed = overrides.get("seed")
    if seed is None:
        seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ValidationError("problem file: field 'seed' must be a non-negative integer")
    plant = overrides.get("plant") or doc.get("plant", "rk4")
    if plant not in PLANTS:
        raise ValidationError(f"problem file: field 'plant' must be one of {PLANTS}")

    cont = doc.get("continuation", [])
    if not isinstance(cont, list) or not all(isinstance(f, (int, float)) and 0 < f < 1 for f in cont) or \
            any(a >= b for a, b in zip(cont, cont[1:])):
        raise ValidationError("problem file: field 'continuation' must list increasing fractions in (0, 1)")

    spec = ProblemSpec(
        system=SwitchedSystem(mats),
        xi=xi,
        T=T,
        K=K,
        h=h,
        Q=Q,
        lam=lam,
        regularizer=_regularizer(doc.get("regularizer")),
    )
    return ProblemDocument(spec=spec, seed=seed, plant=plant, name=doc.get("name", p.stem), path=str(p),
                           continuation=tuple(float(f) for f in cont))


def parse_problem_file(path) -> ProblemSpec:
    return load_problem(path).spec


def _fmt(x) -> str:
    return f"{x:.12g}"


def trace_rows(times, states, controls, modes):
    """Rows ``t, x..., u..., mode``; the last state reuses the last control."""
    K = len(controls)
    for k in range(len(times)):
        j = min(k, K - 1)
        yield [_fmt(times[k]), *(_fmt(v) for v in states[k]), *(_fmt(v) for v in controls[j]), str(int(modes[j]))]


def write_trace_csv(trace, path, controls: ControlSequence | None = None) -> Path:
    """Write an MPC trace, or a rollout with its controls, as CSV.

    Header is ``t,x1..xn,u1..uN,mode`` with 12 significant digits per value.
    """
    if isinstance(trace, MpcTrace):
        times, states = trace.times, trace.plant_states
        modes = list(trace.applied_modes)
        u = applied_controls(trace).values
    elif isinstance(trace, RolloutResult):
        if controls is None:
            raise ValidationError("a rollout needs its control sequence to be written")
        times, states = trace.trajectory.times, trace.trajectory.states
        u = controls.values
        modes = np.argmax(u, axis=1) + 1
    else:
        raise ValidationError(f"cannot write {type(trace).__name__} as a trace")
    n, N = states.shape[1], u.shape[1]
    header = ["t", *(f"x{i + 1}" for i in range(n)), *(f"u{i + 1}" for i in range(N)), "mode"]
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(trace_rows(times, states, u, modes))
    return path


def read_trace_csv(path):
    """Inverse of :func:`write_trace_csv`: returns ``(header, float array)``."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)
