"""Euler rollout of the relaxed switched system, costs, adjoint gradients and an RK4 plant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidModeError, ValidationError
from .model import ControlSequence, ProblemSpec, SwitchedSystem, Trajectory
from .regularizers import psi_gradient, psi_rows


@dataclass(frozen=True)
class RolloutResult:
    trajectory: Trajectory
    terminal_cost: float
    reg_cost: float
    total_cost: float


def phi(system: SwitchedSystem, x) -> np.ndarray:
    """``n x N`` matrix whose column ``i`` is ``A_i x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (system.n,):
        raise ValidationError(f"state must have length {system.n}, got shape {x.shape}")
    return (system.modes @ x).T


def _values(spec: ProblemSpec, u) -> np.ndarray:
    vals = u.values if isinstance(u, ControlSequence) else ControlSequence(u).values
    if vals.shape != (spec.K, spec.N):
        raise ValidationError(f"control must be {spec.K} x {spec.N}, got {vals.shape}")
    return vals


def _states(spec: ProblemSpec, vals: np.ndarray) -> np.ndarray:
    # x[k+1] = x[k] + h * (sum_i u_i[k] A_i) x[k]
    mats = np.einsum("kn,nij->kij", vals, spec.system.modes)
    xs = np.empty((spec.K + 1, spec.n))
    xs[0] = spec.xi
    h = spec.h
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(spec.K):
            xs[k + 1] = xs[k] + h * (mats[k] @ xs[k])
    return xs


def _costs(spec: ProblemSpec, vals: np.ndarray, xs: np.ndarray):
    xK = xs[-1]
    with np.errstate(over="ignore", invalid="ignore"):
        terminal = float(xK @ spec.Q @ xK)
    reg = float(spec.lam * spec.h * np.sum(psi_rows(spec.regularizer, vals)))
    return terminal, reg


def total_cost(spec: ProblemSpec, vals) -> float:
    """Objective value for a raw ``K x N`` array; skips simplex validation.

    Returns ``inf`` when the rollout overflows.
    """
    vals = np.asarray(vals, dtype=float)
    xs = _states(spec, vals)
    terminal, reg = _costs(spec, vals, xs)
    out = terminal + reg
    return out if np.isfinite(out) else np.inf


def euler_rollout(spec: ProblemSpec, u) -> RolloutResult:
    """Integrate the relaxed system with forward Euler and evaluate the cost."""
    vals = _values(spec, u)
    xs = _states(spec, vals)
    terminal, reg = _costs(spec, vals, xs)
    times = spec.h * np.arange(spec.K + 1)
    return RolloutResult(Trajectory(times, xs), terminal, reg, terminal + reg)


def adjoint_gradient(spec: ProblemSpec, u) -> np.ndarray:
    """Exact gradient of the discretized cost w.r.t. every control entry.

    Backward recursion on the Euler scheme: ``p[K] = 2 Q x[K]``,
    ``p[k] = p[k+1] + h M_k' p[k+1]`` with ``M_k = sum_i u_i[k] A_i``; row
    ``k`` of the result is ``h Phi(x[k])' p[k+1] + lam h psi'(u[k])``.
    """
    vals = _values(spec, u)
    return _gradient(spec, vals)


def _gradient(spec: ProblemSpec, vals: np.ndarray, xs: np.ndarray | None = None) -> np.ndarray:
    A = spec.system.modes
    h = spec.h
    if xs is None:
        xs = _states(spec, vals)
    mats = np.einsum("kn,nij->kij", vals, A)
    grad = np.empty_like(vals)
    p = 2.0 * (spec.Q @ xs[-1])
    for k in range(spec.K - 1, -1, -1):
        # column i of Phi(x[k]) is A_i x[k]; its inner product with p
        grad[k] = h * ((A @ xs[k]) @ p)
        p = p + h * (mats[k].T @ p)
    grad += spec.lam * h * psi_gradient(spec.regularizer, vals)
    return grad


def simulate_plant(system: SwitchedSystem, x0, mode: int, duration: float, substeps: int = 16):
    """Integrate ``dx/dt = A_mode x`` over ``duration`` with classical RK4.

    ``mode`` is 1-based.
    """
    if isinstance(mode, bool) or not 1 <= int(mode) <= system.N:
        raise InvalidModeError(f"mode {mode} out of range 1..{system.N}")
    if not duration > 0:
        raise ValidationError("duration must be positive")
    if substeps < 1:
        raise ValidationError("substeps must be positive")
    A = system.modes[int(mode) - 1]
    x = np.array(x0, dtype=float)
    if x.shape != (system.n,):
        raise ValidationError(f"state must have length {system.n}")
    dt = duration / substeps
    for _ in range(substeps):
        k1 = A @ x
        k2 = A @ (x + 0.5 * dt * k1)
        k3 = A @ (x + 0.5 * dt * k2)
        k4 = A @ (x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x
