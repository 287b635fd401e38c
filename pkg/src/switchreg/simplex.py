"""Euclidean projection onto the probability simplex and vertex rounding."""

import numpy as np

from .errors import ValidationError


def project_simplex(v):
    """Project ``v`` onto ``{u : u >= 0, sum(u) = 1}``.

    Sort-and-threshold method: with ``s`` the values sorted descending, take
    the largest ``rho`` such that ``s_rho + (1 - sum_{j<=rho} s_j) / rho > 0``
    and shift every entry down by ``theta = (sum_{j<=rho} s_j - 1) / rho``.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError("project_simplex expects a non-empty vector")
    if not np.all(np.isfinite(v)):
        raise ValidationError("project_simplex input must be finite")
    s = np.sort(v)[::-1]
    css = np.cumsum(s)
    ks = np.arange(1, v.size + 1)
    rho = np.flatnonzero(s + (1.0 - css) / ks > 0)[-1]
    theta = (css[rho] - 1.0) / (rho + 1)
    return np.maximum(v - theta, 0.0)


def project_rows(V):
    """Row-wise simplex projection of a ``K x N`` matrix."""
    V = np.asarray(V, dtype=float)
    if not np.all(np.isfinite(V)):
        raise ValidationError("project_rows input must be finite")
    K, N = V.shape
    S = -np.sort(-V, axis=1)
    css = np.cumsum(S, axis=1)
    ks = np.arange(1, N + 1)
    ok = S + (1.0 - css) / ks > 0
    rho = N - 1 - np.argmax(ok[:, ::-1], axis=1)
    theta = (css[np.arange(K), rho] - 1.0) / (rho + 1)
    return np.maximum(V - theta[:, None], 0.0)


def nearest_vertex(u, tol=1e-6):
    """Closest one-hot vertex to a simplex point.

    Returns ``(index, residual)`` with a 1-based index (smallest on ties) and
    ``residual = ||u - e_index||_1``.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or np.any(u < -tol) or abs(u.sum() - 1.0) > tol:
        raise ValidationError(f"point is not on the simplex: {u}")
    i = int(np.argmax(u))
    e = np.zeros_like(u)
    e[i] = 1.0
    return i + 1, float(np.abs(u - e).sum())
