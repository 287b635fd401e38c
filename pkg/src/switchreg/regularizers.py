"""Discreteness-promoting regularizers.

A regularizer is a separable function ``psi(u) = sum_i psi_i(u_i)`` with
``psi_i(0) = psi_i(1) = 0`` and ``psi_i > 0`` on ``(0, 1)``.  Penalizing it
drives relaxed simplex controls toward one-hot vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, RegularizerError, ValidationError

CLAMP_TOL = 1e-9
GRAD_CLAMP = 1e6
VERTEX_TOL = 1e-12


class Regularizer:
    """Scalar pair ``psi_i`` / ``dpsi_i`` applied to every coordinate."""

    name = "regularizer"
    builtin = False

    def scalar(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def scalar_derivative(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> str:
        return self.name


@dataclass(frozen=True)
class QuadraticConcave(Regularizer):
    """``psi_i(u) = u (1 - u)``; summed over a simplex point this is L1 minus squared L2."""

    name = "quadratic"
    builtin = True

    def scalar(self, u):
        return u * (1.0 - u)

    def scalar_derivative(self, u):
        return 1.0 - 2.0 * u


@dataclass(frozen=True)
class PNorm(Regularizer):
    """``psi_i(u) = (u (1 - u))**p`` with ``0 < p < 1``."""

    p: float = 0.5
    name = "pnorm"
    builtin = True

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValidationError(f"PNorm requires 0 < p < 1, got {self.p}")

    def scalar(self, u):
        return (u * (1.0 - u)) ** self.p

    def scalar_derivative(self, u):
        base = u * (1.0 - u)
        out = np.zeros_like(base)
        inner = base > 0
        out[inner] = self.p * base[inner] ** (self.p - 1.0) * (1.0 - 2.0 * u[inner])
        return np.clip(out, -GRAD_CLAMP, GRAD_CLAMP)

    def describe(self):
        return f"pnorm(p={self.p:g})"


@dataclass(frozen=True)
class CustomRegularizer(Regularizer):
    """User-supplied scalar value/derivative pair, vectorized over numpy arrays.

    The solver refuses custom regularizers that fail
    :func:`validate_assumption1`.
    """

    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "custom"

    def scalar(self, u):
        return np.asarray(self.value(u), dtype=float)

    def scalar_derivative(self, u):
        if self.derivative is None:
            raise RegularizerError(f"custom regularizer {self.name!r} has no derivative")
        return np.asarray(self.derivative(u), dtype=float)


def _clamped(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise DomainError("regularizer argument must be finite")
    if np.any(u < -CLAMP_TOL) or np.any(u > 1.0 + CLAMP_TOL):
        raise DomainError(f"regularizer argument outside [0, 1]: {u}")
    return np.clip(u, 0.0, 1.0)


def psi_value(reg: Regularizer, u) -> float:
    """``sum_i psi_i(u_i)`` after clamping ``u`` into ``[0, 1]``."""
    return float(np.sum(reg.scalar(_clamped(u))))


def psi_rows(reg: Regularizer, u) -> np.ndarray:
    """Row-wise ``psi`` of a ``K x N`` control matrix."""
    return np.sum(reg.scalar(_clamped(u)), axis=-1)


def psi_gradient(reg: Regularizer, u) -> np.ndarray:
    """Componentwise derivative ``dpsi_i/du_i``; works on vectors or ``K x N`` matrices."""
    return reg.scalar_derivative(_clamped(u))


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the vanishing-at-endpoints and interior-positivity checks."""

    regularizer: str
    endpoints_ok: bool
    endpoint_violation: float
    positivity_ok: bool
    worst_interior: float
    worst_interior_at: float

    @property
    def passed(self) -> bool:
        return self.endpoints_ok and self.positivity_ok

    def lines(self):
        yield f"regularizer: {self.regularizer}"
        yield f"endpoints_vanish: {'pass' if self.endpoints_ok else 'fail'}"
        yield f"endpoint_violation: {self.endpoint_violation:.6g}"
        yield f"interior_positive: {'pass' if self.positivity_ok else 'fail'}"
        yield f"min_interior_value: {self.worst_interior:.6g}"
        yield f"min_interior_at: {self.worst_interior_at:.6g}"
        yield f"assumption1: {'pass' if self.passed else 'fail'}"


def validate_assumption1(reg: Regularizer, samples: int = 99) -> AssumptionReport:
    """Check ``psi_i(0) = psi_i(1) = 0`` and ``psi_i > 0`` on an interior grid.

    The interior grid is ``samples`` uniformly spaced points strictly inside
    ``(0, 1)``.  Failures are reported, never raised.
    """
    if samples < 3:
        raise ValidationError("samples must be at least 3")
    ends = np.asarray(reg.scalar(np.array([0.0, 1.0])), dtype=float)
    endpoint_violation = float(np.max(np.abs(ends))) if np.all(np.isfinite(ends)) else np.inf
    grid = np.arange(1, samples + 1) / (samples + 1)
    vals = np.asarray(reg.scalar(grid), dtype=float)
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    j = int(np.argmin(vals))
    return AssumptionReport(
        regularizer=reg.describe(),
        endpoints_ok=endpoint_violation <= 1e-12,
        endpoint_violation=endpoint_violation,
        positivity_ok=bool(vals[j] > 0),
        worst_interior=float(vals[j]),
        worst_interior_at=float(grid[j]),
    )


def require_assumption1(reg: Regularizer, samples: int = 99) -> None:
    """Raise :class:`RegularizerError` unless ``reg`` passes the check."""
    if reg.builtin:
        return
    report = validate_assumption1(reg, samples)
    if not report.passed:
        raise RegularizerError(f"regularizer {reg.describe()} violates the discreteness assumption", report)


def soav(u):
    """Sum-of-absolute-values term ``|u| + |1 - u|``; constant on the simplex."""
    return np.abs(u) + np.abs(1.0 - u)


def soav_shifted(u):
    return np.abs(u) + np.abs(1.0 - u) - 1.0


def from_name(name: str, p: float | None = None) -> Regularizer:
    key = name.strip().lower().replace("-", "").replace("_", "")
    if key in ("quadratic", "quadraticconcave", "l1l2"):
        return QuadraticConcave()
    if key in ("pnorm", "lp"):
        return PNorm(0.5 if p is None else p)
    if key == "soav":
        return CustomRegularizer(soav, name="soav")
    if key in ("soavshifted", "shiftedsoav"):
        return CustomRegularizer(soav_shifted, name="soav-shifted")
    raise ValidationError(f"unknown regularizer {name!r}")
