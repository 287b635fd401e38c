"""Brute-force references: exhaustive mode enumeration and simplex grid search."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetError, ValidationError
from .model import ModeSequence, ProblemSpec
from .regularizers import QuadraticConcave, Regularizer

DEFAULT_MAX_EVALS = 10**6
HISTOGRAM_LIMIT = 4096


@dataclass(frozen=True)
class EnumerationResult:
    best_modes: ModeSequence
    best_terminal_cost: float
    evaluated: int
    cost_histogram: list | None = None


def enumerate_discrete(spec: ProblemSpec, max_evals: int = DEFAULT_MAX_EVALS) -> EnumerationResult:
    """Minimize the terminal cost over all ``N**K`` one-hot sequences.

    Depth-first in lexicographic order with the prefix state reused, so each
    sequence costs one Euler step.  Costs are only replaced on strict
    improvement, which leaves ties at the lexicographically smallest sequence.
    """
    N, K = spec.N, spec.K
    required = N**K
    if required > max_evals:
        raise BudgetError(required, max_evals)
    # one Euler step per mode: x + h A_i x = (I + h A_i) x
    steps = np.eye(spec.n)[None] + spec.h * spec.system.modes
    Q = spec.Q
    keep = required <= HISTOGRAM_LIMIT
    costs = [] if keep else None
    best_cost = np.inf
    best_seq = None
    seq = [0] * K
    xs = np.empty((K + 1, spec.n))
    xs[0] = spec.xi

    def visit(k):
        nonlocal best_cost, best_seq
        if k == K:
            x = xs[K]
            c = float(x @ Q @ x)
            if keep:
                costs.append(c)
            if c < best_cost or best_seq is None:
                best_cost, best_seq = c, list(seq)
            return
        for i in range(N):
            seq[k] = i
            xs[k + 1] = steps[i] @ xs[k]
            visit(k + 1)

    with np.errstate(over="ignore", invalid="ignore"):
        visit(0)
    return EnumerationResult(
        best_modes=ModeSequence([i + 1 for i in best_seq], N=N),
        best_terminal_cost=best_cost,
        evaluated=required,
        cost_histogram=costs,
    )


@lru_cache(maxsize=8)
def simplex_grid(N: int, step: float) -> np.ndarray:
    """Barycentric grid on the ``(N-1)``-simplex with spacing ``step`` (``N <= 3``)."""
    m = int(round(1.0 / step))
    if N == 1:
        pts = np.ones((1, 1))
    elif N == 2:
        a = np.arange(m + 1) / m
        pts = np.stack([a, 1.0 - a], axis=1)
    else:
        i, j = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
        mask = i + j <= m
        i, j = i[mask], j[mask]
        pts = np.stack([i / m, j / m, (m - i - j) / m], axis=1)
    pts.setflags(write=False)
    return pts


def grid_search_inner(rho, lam: float, reg: Regularizer | None = None, step: float = 1e-3):
    """Dense-grid maximum of ``sum_i (rho_i u_i - lam psi_i(u_i))`` over the simplex.

    Returns ``(point, value)``.  Only ``N <= 3`` is supported.
    """
    rho = np.asarray(rho, dtype=float)
    N = rho.size
    if N > 3:
        raise ValidationError(f"grid search supports N <= 3, got N={N}")
    if not 0 < step <= 0.1:
        raise ValidationError("step must lie in (0, 0.1]")
    reg = reg or QuadraticConcave()
    pts = simplex_grid(N, step)
    vals = pts @ rho - lam * np.sum(reg.scalar(pts), axis=1)
    j = int(np.argmax(vals))
    return pts[j].copy(), float(vals[j])
