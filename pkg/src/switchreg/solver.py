"""Projected gradient descent with Armijo backtracking over a product of simplices.

Each restart descends on the regularized objective; the best restart is
rounded to its nearest one-hot vertices and re-simulated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import _gradient, _states, _costs, euler_rollout
from .errors import SolverError, ValidationError
from .model import ControlSequence, ModeSequence, ProblemSpec, to_one_hot
from .regularizers import psi_rows, require_assumption1
from .simplex import project_rows

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 2000
    grad_tol: float = 1e-8
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    initial_step: float = 1.0
    restarts: int = 10
    rng_seed: int = 0
    discreteness_tol: float = 1e-3
    max_backtracks: int = 60
    # fractions of lambda solved first, each warm-starting the next; empty disables
    continuation: tuple = ()
    continuation_iters: int = 200

    def __post_init__(self):
        object.__setattr__(self, "continuation", tuple(float(f) for f in self.continuation))
        fr = self.continuation
        if any(not 0 < f < 1 for f in fr) or any(a >= b for a, b in zip(fr, fr[1:])):
            raise ValidationError("continuation must be increasing fractions in (0, 1)")
        if self.continuation_iters < 1:
            raise ValidationError("continuation_iters must be positive")
        if self.max_iters < 1 or self.restarts < 1 or self.max_backtracks < 1:
            raise ValidationError("max_iters, restarts and max_backtracks must be positive")
        if not 0 < self.armijo_c < 1:
            raise ValidationError("armijo_c must lie in (0, 1)")
        if not 0 < self.backtrack_factor < 1:
            raise ValidationError("backtrack_factor must lie in (0, 1)")
        if not self.initial_step > 0 or not self.grad_tol > 0 or not self.discreteness_tol > 0:
            raise ValidationError("initial_step, grad_tol and discreteness_tol must be positive")
        if int(self.rng_seed) != self.rng_seed or self.rng_seed < 0:
            raise ValidationError("rng_seed must be a non-negative integer")


@dataclass(frozen=True)
class RestartResult:
    values: np.ndarray
    total_cost: float
    iterations: int
    converged: bool
    history: tuple = field(repr=False, default=())


@dataclass(frozen=True)
class SolveReport:
    """Outcome of :func:`solve_relaxed`.

    ``discreteness_residual`` is ``max_k psi(u[k])`` of the relaxed optimum,
    before rounding; ``rounded_terminal_cost`` comes from re-rolling the
    rounded one-hot sequence.
    """

    best_relaxed: ControlSequence
    best_rounded: ModeSequence
    relaxed_cost: float
    relaxed_terminal_cost: float
    rounded_terminal_cost: float
    discreteness_residual: float
    iterations_per_restart: list
    converged: list
    best_restart: int
    discreteness_tol: float

    @property
    def is_discrete(self) -> bool:
        return self.discreteness_residual < self.discreteness_tol

    @property
    def total_iterations(self) -> int:
        return int(sum(self.iterations_per_restart))


def _objective(spec, vals):
    xs = _states(spec, vals)
    terminal, reg = _costs(spec, vals, xs)
    f = terminal + reg
    return (f if np.isfinite(f) else np.inf), xs


def descend(spec: ProblemSpec, u0: np.ndarray, config: SolverConfig, record=False) -> RestartResult:
    """One projected-gradient run from ``u0``.

    With ``config.continuation`` set, the run first descends at each listed
    fraction of ``lambda`` (at most ``continuation_iters`` iterations each)
    and hands its end point to the next stage.  Only the final stage at the
    full ``lambda`` is recorded and decides convergence.
    """
    u, spent = u0, 0
    staged = replace(config, max_iters=config.continuation_iters)
    for frac in config.continuation:
        r = _descend(replace(spec, lam=spec.lam * frac), u, staged)
        spent += r.iterations
        if not np.isfinite(r.total_cost):
            return replace(r, iterations=spent)
        u = r.values
    r = _descend(spec, u, config, record)
    return replace(r, iterations=r.iterations + spent) if spent else r


def _descend(spec, u0, config, record=False) -> RestartResult:
    """Single-stage projected-gradient run.

    Stops when ``||u - P(u - a g)||_inf / a < grad_tol`` at the accepted
    step ``a``, or after ``max_iters`` iterations.  An overflowing rollout
    marks the run non-converged.
    """
    u = project_rows(u0)
    f, xs = _objective(spec, u)
    history = [f] if record else None
    if not np.isfinite(f):
        return RestartResult(u, np.inf, 0, False)
    c, beta = config.armijo_c, config.backtrack_factor
    step = config.initial_step
    it = 0
    converged = False
    while it < config.max_iters:
        g = _gradient(spec, u, xs)
        if not np.all(np.isfinite(g)):
            return RestartResult(u, np.inf, it, False)
        alpha = step
        accepted = False
        for _ in range(config.max_backtracks):
            cand = project_rows(u - alpha * g)
            d = cand - u
            if np.max(np.abs(d)) / alpha < config.grad_tol:
                converged = True
                break
            f_new, xs_new = _objective(spec, cand)
            if f_new <= f + c * float(np.sum(g * d)):
                accepted = True
                break
            alpha *= beta
        if converged:
            break
        it += 1
        if not accepted:
            # step collapsed below resolution: stationary to working precision
            converged = True
            break
        u, f, xs = cand, f_new, xs_new
        if record:
            history.append(f)
        # let the step grow back after successful iterations
        step = min(alpha / beta, config.initial_step) if alpha < step else alpha
    return RestartResult(u, f, it, converged, tuple(history) if record else ())


def dirichlet_init(rng: np.random.Generator, K: int, N: int) -> np.ndarray:
    """Rows uniform on the simplex: normalized i.i.d. exponentials."""
    e = rng.exponential(1.0, size=(K, N))
    return e / e.sum(axis=1, keepdims=True)


def round_rows(vals: np.ndarray) -> ModeSequence:
    """Nearest-vertex rounding, ties to the smallest mode index."""
    return ModeSequence(np.argmax(vals, axis=1) + 1, N=vals.shape[1])


def solve_relaxed(spec: ProblemSpec, config: SolverConfig | None = None, init=None) -> SolveReport:
    """Multistart projected gradient on the relaxed problem, then round.

    Restart 0 starts from ``init`` when given, else from the simplex
    barycenter; later restarts start from seeded uniform-Dirichlet rows.

    Raises
    ------
    RegularizerError
        For a custom regularizer that fails the discreteness assumption.
    SolverError
        If every restart diverged.
    """
    config = config or SolverConfig()
    require_assumption1(spec.regularizer)
    K, N = spec.K, spec.N
    rng = np.random.default_rng(config.rng_seed)
    starts = []
    if init is not None:
        vals = init.values if isinstance(init, ControlSequence) else np.asarray(init, dtype=float)
        if vals.shape != (K, N):
            raise ValidationError(f"init must be {K} x {N}, got {vals.shape}")
        starts.append(vals)
    else:
        starts.append(np.full((K, N), 1.0 / N))
    for _ in range(config.restarts - 1):
        starts.append(dirichlet_init(rng, K, N))

    results = [descend(spec, u0, config) for u0 in starts]
    # min by cost, ties to the lowest restart index
    best = min(range(len(results)), key=lambda r: (results[r].total_cost, r))
    res = results[best]
    if not np.isfinite(res.total_cost):
        raise SolverError("all restarts diverged (non-finite cost)")

    relaxed = ControlSequence(res.values)
    relaxed_roll = euler_rollout(spec, relaxed)
    rounded = round_rows(res.values)
    rounded_roll = euler_rollout(spec, to_one_hot(rounded, N))
    residual = float(np.max(psi_rows(spec.regularizer, res.values)))
    log.debug("best restart %d cost %.6g residual %.3g", best, res.total_cost, residual)
    return SolveReport(
        best_relaxed=relaxed,
        best_rounded=rounded,
        relaxed_cost=relaxed_roll.total_cost,
        relaxed_terminal_cost=relaxed_roll.terminal_cost,
        rounded_terminal_cost=rounded_roll.terminal_cost,
        discreteness_residual=residual,
        iterations_per_restart=[r.iterations for r in results],
        converged=[r.converged for r in results],
        best_restart=best,
        discreteness_tol=config.discreteness_tol,
    )


def inner_maximize(rho, lam: float, reg=None) -> np.ndarray:
    """Maximizer over the simplex of ``sum_i (rho_i u_i - lam psi_i(u_i))``.

    Always the vertex ``e_i`` with ``i = argmax rho`` (first index on ties);
    ``lam`` and ``reg`` do not change the answer for admissible regularizers.
    """
    rho = np.asarray(rho, dtype=float)
    if not lam > 0:
        raise ValidationError("lambda must be positive")
    e = np.zeros_like(rho)
    e[int(np.argmax(rho))] = 1.0
    return e
