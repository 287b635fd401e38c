import numpy as np
import pytest

from switchreg import ProblemSpec, SwitchedSystem

A1 = [[-3.0, 1.0], [1.0, 2.0]]
A2 = [[1.0, -0.5], [-3.0, -5.0]]
B2 = [[7.0, 1.0], [7.0, -15.0]]
B3 = [[-5.0, 2.0], [4.0, 6.0]]
XI = [-3.0, 3.0]


@pytest.fixture
def two_mode_spec():
    return ProblemSpec.from_steps([A1, A2], XI, K=10, h=0.1, lam=1.0)


@pytest.fixture
def three_mode_spec():
    return ProblemSpec.from_steps([A1, B2, B3], XI, K=10, h=0.1, lam=1e4)


def random_simplex(rng, K, N, floor=0.0):
    """Uniform simplex rows, optionally pulled toward the barycenter to stay interior."""
    e = rng.exponential(size=(K, N))
    u = e / e.sum(axis=1, keepdims=True)
    return (1 - floor * N) * u + floor


def central_difference(f, u, step=1e-6):
    g = np.zeros_like(u)
    for idx in np.ndindex(u.shape):
        up, dn = u.copy(), u.copy()
        up[idx] += step
        dn[idx] -= step
        g[idx] = (f(up) - f(dn)) / (2 * step)
    return g
