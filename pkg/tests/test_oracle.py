import itertools

import numpy as np
import pytest

from switchreg import (
    BudgetError,
    PNorm,
    ProblemSpec,
    QuadraticConcave,
    ValidationError,
    enumerate_discrete,
    euler_rollout,
    grid_search_inner,
    to_one_hot,
)

from conftest import A1, A2, XI


def test_identical_modes_tie_break():
    A = [[0.3, -1.0], [2.0, -0.5]]
    spec = ProblemSpec.from_steps([A, A], XI, K=3, h=0.1)
    res = enumerate_discrete(spec)
    assert res.evaluated == 8
    assert res.best_modes == [1, 1, 1]
    assert len(set(np.round(res.cost_histogram, 12))) == 1


def test_scalar_contracting_mode_wins():
    spec = ProblemSpec.from_steps([[[-1.0]], [[1.0]]], [1.0], K=4, h=0.1, Q=[[1.0]])
    res = enumerate_discrete(spec)
    assert res.best_modes == [1, 1, 1, 1]
    assert res.best_terminal_cost == pytest.approx(0.9**8, rel=1e-14)


def test_matches_naive_rollouts():
    spec = ProblemSpec.from_steps([A1, A2], XI, K=6, h=0.1)
    res = enumerate_discrete(spec)
    costs = {}
    for seq in itertools.product((1, 2), repeat=6):
        r = euler_rollout(spec, to_one_hot(seq, 2))
        assert r.reg_cost == 0.0
        costs[seq] = r.terminal_cost
    best = min(costs.values())
    assert res.best_terminal_cost == pytest.approx(best, rel=1e-12)
    assert all(c >= res.best_terminal_cost for c in res.cost_histogram)
    assert res.evaluated == 64
    ties = sorted(s for s, c in costs.items() if abs(c - best) <= 1e-12 * best)
    assert tuple(res.best_modes) == ties[0]


def test_budget_error():
    spec = ProblemSpec.from_steps([A1, A2], XI, K=12, h=0.1)
    with pytest.raises(BudgetError) as err:
        enumerate_discrete(spec, max_evals=1000)
    assert err.value.required == 4096


def test_histogram_only_for_small_problems():
    spec = ProblemSpec.from_steps([A1, A2], XI, K=13, h=0.1)
    assert enumerate_discrete(spec).cost_histogram is None


def test_prefix_suffix_consistency():
    # best over K1+K2 steps is no worse than chaining a best K1 prefix with a best suffix from its end state
    spec = ProblemSpec.from_steps([A1, A2], XI, K=6, h=0.1)
    pre = enumerate_discrete(ProblemSpec.from_steps([A1, A2], XI, K=3, h=0.1))
    x_mid = euler_rollout(ProblemSpec.from_steps([A1, A2], XI, K=3, h=0.1), to_one_hot(pre.best_modes, 2)).trajectory.final
    suf = enumerate_discrete(ProblemSpec.from_steps([A1, A2], x_mid, K=3, h=0.1))
    chained = euler_rollout(spec, to_one_hot(list(pre.best_modes) + list(suf.best_modes), 2)).terminal_cost
    assert enumerate_discrete(spec).best_terminal_cost <= chained + 1e-12


def test_grid_search_examples():
    pt, val = grid_search_inner([3, 1], 1.0, QuadraticConcave(), 1e-3)
    assert np.abs(pt - [1, 0]).sum() <= 1e-2
    pt, val = grid_search_inner([0, 0], 1.0, QuadraticConcave(), 1e-3)
    assert val == 0.0
    assert np.max(pt) == 1.0
    pt, val = grid_search_inner([1, 5], 0.5, QuadraticConcave(), 1e-3)
    assert abs(val - 5) <= 1e-3


def test_grid_search_bounded_by_max_rho():
    rng = np.random.default_rng(9)
    for _ in range(30):
        N = rng.integers(2, 4)
        rho = rng.normal(size=N)
        for reg in (QuadraticConcave(), PNorm(0.5)):
            _, val = grid_search_inner(rho, rng.uniform(0.1, 5), reg, 1e-2)
            assert val <= rho.max() + 1e-12


def test_grid_search_guards():
    with pytest.raises(ValidationError):
        grid_search_inner([1, 2, 3, 4], 1.0)
    with pytest.raises(ValidationError):
        grid_search_inner([1, 2], 1.0, step=0.5)
