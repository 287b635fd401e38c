"""Receding-horizon switching control on the continuous plant."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .dynamics import simulate_plant
from .errors import InvalidModeError, MpcError, SwitchRegError, ValidationError
from .model import ControlSequence, ModeSequence, ProblemSpec, to_one_hot
from .solver import SolverConfig, solve_relaxed


PLANTS = ("rk4", "euler")


def advance_plant(system, x, mode, h, plant="rk4", substeps=16):
    """Move the plant forward one sampling period under ``mode`` (1-based).

    ``rk4`` integrates the continuous system; ``euler`` applies the same
    one-step Euler map the optimizer predicts with.
    """
    if plant == "euler":
        if not 1 <= int(mode) <= system.N:
            raise InvalidModeError(f"mode {mode} out of range 1..{system.N}")
        x = np.asarray(x, dtype=float)
        return x + h * (system.modes[int(mode) - 1] @ x)
    return simulate_plant(system, x, mode, h, substeps)


@dataclass(frozen=True)
class MpcConfig:
    """Closed-loop settings.  ``spec.xi`` is the initial plant state."""

    spec: ProblemSpec
    sim_steps: int = 80
    solver: SolverConfig = field(default_factory=lambda: SolverConfig(restarts=10))
    warm_start: bool = True
    plant_substeps: int = 16
    plant: str = "rk4"

    def __post_init__(self):
        if self.plant not in PLANTS:
            raise ValidationError(f"plant must be one of {PLANTS}, got {self.plant!r}")
        if self.sim_steps < 1:
            raise ValidationError("sim_steps must be at least 1")
        if self.plant_substeps < 1:
            raise ValidationError("plant_substeps must be at least 1")


@dataclass(frozen=True)
class StepSummary:
    step: int
    mode: int
    relaxed_cost: float
    rounded_terminal_cost: float
    discreteness_residual: float
    iterations: int
    first_control: np.ndarray


@dataclass(frozen=True)
class MpcTrace:
    times: np.ndarray
    plant_states: np.ndarray
    applied_modes: ModeSequence
    per_step_reports: list
    state_norms: np.ndarray
    n_modes: int = 2
    discreteness_tol: float = 1e-3

    @property
    def max_residual(self) -> float:
        if not self.per_step_reports:
            return 0.0
        return max(r.discreteness_residual for r in self.per_step_reports)

    def norm_at(self, t: float) -> float:
        """State norm at the sample closest to time ``t``."""
        return float(self.state_norms[int(np.argmin(np.abs(self.times - t)))])


def _build_trace(h, states, modes, reports, N, tol):
    states = np.array(states)
    return MpcTrace(
        times=h * np.arange(len(states)),
        plant_states=states,
        applied_modes=ModeSequence(modes, N=N),
        per_step_reports=list(reports),
        state_norms=np.linalg.norm(states, axis=1),
        n_modes=N,
        discreteness_tol=tol,
    )


def shift_warm_start(values: np.ndarray) -> np.ndarray:
    """Drop the first row, repeat the last one."""
    return np.vstack([values[1:], values[-1:]])


def run_mpc(config: MpcConfig) -> MpcTrace:
    """Solve from the measured state, apply the first rounded mode for one period, repeat.

    Raises
    ------
    MpcError
        When the solver fails; ``err.trace`` holds the steps completed so far.
    """
    spec = config.spec
    system, h = spec.system, spec.h
    x = np.array(spec.xi, dtype=float)
    states = [x.copy()]
    modes, reports = [], []
    prev = None
    for k in range(config.sim_steps):
        step_spec = dataclasses.replace(spec, xi=x)
        init = None
        if config.warm_start and prev is not None:
            init = shift_warm_start(prev)
        try:
            rep = solve_relaxed(step_spec, config.solver, init=init)
        except SwitchRegError as exc:
            trace = _build_trace(h, states, modes, reports, spec.N, config.solver.discreteness_tol)
            raise MpcError(f"solver failed at MPC step {k}: {exc}", k, trace) from exc
        prev = rep.best_relaxed.values
        mode = rep.best_rounded[0]
        reports.append(
            StepSummary(
                step=k,
                mode=mode,
                relaxed_cost=rep.relaxed_cost,
                rounded_terminal_cost=rep.rounded_terminal_cost,
                discreteness_residual=rep.discreteness_residual,
                iterations=rep.total_iterations,
                first_control=rep.best_relaxed.values[0].copy(),
            )
        )
        x = advance_plant(system, x, mode, h, config.plant, config.plant_substeps)
        states.append(x.copy())
        modes.append(mode)
    return _build_trace(h, states, modes, reports, spec.N, config.solver.discreteness_tol)


def applied_controls(trace: MpcTrace) -> ControlSequence:
    """One-hot rows of the modes actually applied to the plant."""
    return to_one_hot(trace.applied_modes, trace.n_modes)
