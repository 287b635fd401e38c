"""Core value types: switched systems, problem descriptions, controls and trajectories.

Mode indices are 1-based wherever a user sees them (``ModeSequence``, CSV
files, summaries) and 0-based in array storage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidModeError, NotDiscreteError, ValidationError
from .regularizers import QuadraticConcave, Regularizer

SIMPLEX_TOL = 1e-9


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SwitchedSystem:
    """Linear switched plant ``dx/dt = A_sigma x`` with ``N >= 2`` modes.

    Parameters
    ----------
    modes : sequence of array_like
        The mode matrices ``A_1, ..., A_N``, each ``n x n``.
    """

    modes: np.ndarray

    def __init__(self, modes):
        try:
            arr = np.array(modes, dtype=float)
        except ValueError as exc:
            raise ValidationError(f"mode matrices have inconsistent shapes: {exc}") from None
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2] or arr.shape[1] < 1:
            raise ValidationError(
                f"modes must be a list of square n x n matrices, got shape {arr.shape}"
            )
        if arr.shape[0] < 2:
            raise ValidationError("a switched system needs at least 2 modes")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("mode matrices must be finite")
        object.__setattr__(self, "modes", _frozen(arr))

    @property
    def n(self) -> int:
        return self.modes.shape[1]

    @property
    def N(self) -> int:
        return self.modes.shape[0]

    def __repr__(self):
        return f"SwitchedSystem(n={self.n}, N={self.N})"


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Finite-horizon switching design problem on a zero-order-hold grid.

    Minimizes ``x[K]' Q x[K] + lam * h * sum_k psi(u[k])`` over controls on
    the simplex.  ``T`` must equal ``K * h``.
    """

    system: SwitchedSystem
    xi: np.ndarray
    T: float
    K: int
    h: float
    Q: np.ndarray
    lam: float
    regularizer: Regularizer = field(default_factory=QuadraticConcave)

    def __post_init__(self):
        sys_ = self.system
        if not isinstance(sys_, SwitchedSystem):
            raise ValidationError("system must be a SwitchedSystem")
        xi = np.array(self.xi, dtype=float).reshape(-1)
        if xi.shape != (sys_.n,):
            raise ValidationError(f"xi must have length {sys_.n}, got {xi.size}")
        if not np.all(np.isfinite(xi)):
            raise ValidationError("xi must be finite")
        if isinstance(self.K, bool) or int(self.K) != self.K or self.K < 1:
            raise ValidationError(f"K must be a positive integer, got {self.K!r}")
        T, h = float(self.T), float(self.h)
        if not (T > 0 and h > 0):
            raise ValidationError("T and h must be positive")
        if abs(T - self.K * h) > 1e-12 * T:
            raise ValidationError(f"inconsistent horizon: T={T} but K*h={self.K * h}")
        Q = np.array(self.Q, dtype=float)
        if Q.shape != (sys_.n, sys_.n):
            raise ValidationError(f"Q must be {sys_.n} x {sys_.n}, got shape {Q.shape}")
        scale = max(np.max(np.abs(Q)), np.finfo(float).tiny)
        if np.max(np.abs(Q - Q.T)) > 1e-10 * scale:
            raise ValidationError("Q must be symmetric")
        if np.min(np.linalg.eigvalsh(0.5 * (Q + Q.T))) <= 0:
            raise ValidationError("Q must be positive definite")
        if not float(self.lam) > 0:
            raise ValidationError(f"lambda must be positive, got {self.lam}")
        object.__setattr__(self, "xi", _frozen(xi))
        object.__setattr__(self, "Q", _frozen(Q))
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "lam", float(self.lam))

    @classmethod
    def from_steps(cls, system, xi, K, h, Q=None, lam=1.0, regularizer=None):
        """Build a spec from ``K`` and ``h``; ``Q`` defaults to the identity."""
        system = system if isinstance(system, SwitchedSystem) else SwitchedSystem(system)
        if Q is None:
            Q = np.eye(system.n)
        return cls(
            system=system,
            xi=xi,
            T=K * h,
            K=K,
            h=h,
            Q=Q,
            lam=lam,
            regularizer=regularizer if regularizer is not None else QuadraticConcave(),
        )

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def N(self) -> int:
        return self.system.N


@dataclass(frozen=True, eq=False)
class ControlSequence:
    """``K x N`` matrix whose rows lie on the probability simplex."""

    values: np.ndarray

    def __init__(self, values):
        arr = np.array(values, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"control values must be a K x N matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("control values must be finite")
        if np.any(arr < -SIMPLEX_TOL) or np.any(arr > 1 + SIMPLEX_TOL):
            raise ValidationError("control entries must lie in [0, 1]")
        sums = arr.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > SIMPLEX_TOL)
        if bad.size:
            raise ValidationError(f"control row {bad[0]} sums to {sums[bad[0]]!r}, not 1")
        object.__setattr__(self, "values", _frozen(arr))

    @property
    def steps(self) -> int:
        return self.values.shape[0]

    @property
    def modes(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.steps


@dataclass(frozen=True, eq=False)
class ModeSequence:
    """Switching signal sampled on the grid, 1-based mode indices."""

    indices: tuple

    def __init__(self, indices: Sequence[int], N: int | None = None):
        idx = tuple(int(i) for i in indices)
        if any(i < 1 for i in idx) or (N is not None and any(i > N for i in idx)):
            raise InvalidModeError(f"mode indices out of range 1..{N}: {list(idx)}")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, k):
        return self.indices[k]

    def __eq__(self, other):
        if isinstance(other, ModeSequence):
            return self.indices == other.indices
        if isinstance(other, (list, tuple)):
            return self.indices == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"ModeSequence({list(self.indices)})"


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray

    def __init__(self, times, states):
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "states", _frozen(states))

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def to_one_hot(sigma, N: int) -> ControlSequence:
    """Encode a 1-based mode sequence as one-hot control rows."""
    idx = np.asarray(list(sigma), dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise ValidationError("mode sequence must be a non-empty 1-D sequence")
    if np.any(idx < 1) or np.any(idx > N):
        raise InvalidModeError(f"mode indices out of range 1..{N}: {idx.tolist()}")
    u = np.zeros((idx.size, N))
    u[np.arange(idx.size), idx - 1] = 1.0
    return ControlSequence(u)


def to_mode_sequence(u: ControlSequence, tol: float) -> ModeSequence:
    """Decode near-vertex control rows into 1-based modes.

    Raises
    ------
    NotDiscreteError
        If some row's largest entry is below ``1 - tol``.
    """
    vals = u.values if isinstance(u, ControlSequence) else np.asarray(u, dtype=float)
    top = vals.max(axis=1)
    for k, t in enumerate(top):
        if t < 1.0 - tol:
            raise NotDiscreteError(k, float(1.0 - t), tol)
    return ModeSequence(np.argmax(vals, axis=1) + 1, N=vals.shape[1])
