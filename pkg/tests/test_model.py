import numpy as np
import pytest
from hypothesis import given, strategies as st

from switchreg import (
    ControlSequence,
    InvalidModeError,
    ModeSequence,
    NotDiscreteError,
    ProblemSpec,
    SwitchedSystem,
    ValidationError,
    to_mode_sequence,
    to_one_hot,
)


def test_one_hot_examples():
    np.testing.assert_array_equal(to_one_hot([1, 2, 2], 2).values, [[1, 0], [0, 1], [0, 1]])
    np.testing.assert_array_equal(to_one_hot([3], 3).values, [[0, 0, 1]])
    with pytest.raises(InvalidModeError):
        to_one_hot([1, 4], 3)
    with pytest.raises(InvalidModeError):
        to_one_hot([0], 3)


def test_mode_sequence_examples():
    assert to_mode_sequence(ControlSequence([[1, 0], [0, 1]]), 1e-6) == [1, 2]
    assert to_mode_sequence(ControlSequence([[0.999999, 0.000001]]), 1e-4) == [1]
    with pytest.raises(NotDiscreteError) as err:
        to_mode_sequence(ControlSequence([[0.6, 0.4]]), 1e-4)
    assert err.value.step == 0
    assert err.value.residual == pytest.approx(0.4)


@given(st.integers(2, 5).flatmap(lambda N: st.tuples(st.just(N), st.lists(st.integers(1, N), min_size=1, max_size=20))))
def test_one_hot_round_trip(case):
    N, sigma = case
    u = to_one_hot(sigma, N)
    assert np.all(u.values.sum(axis=1) == 1.0)
    assert set(np.unique(u.values)) <= {0.0, 1.0}
    assert to_mode_sequence(u, 1e-9) == sigma


def test_switched_system_guards():
    with pytest.raises(ValidationError):
        SwitchedSystem([np.eye(2)])
    with pytest.raises(ValidationError):
        SwitchedSystem([np.eye(2), np.eye(3)])
    with pytest.raises(ValidationError):
        SwitchedSystem([np.ones((2, 3)), np.ones((2, 3))])
    s = SwitchedSystem([np.eye(2), -np.eye(2)])
    assert (s.n, s.N) == (2, 2)
    with pytest.raises(ValueError):
        s.modes[0, 0, 0] = 5.0


def test_problem_spec_invariants():
    sys_ = SwitchedSystem([np.eye(2), -np.eye(2)])
    base = dict(system=sys_, xi=[1, 0], T=1.0, K=10, h=0.1, Q=np.eye(2), lam=1.0)
    ProblemSpec(**base)
    with pytest.raises(ValidationError, match="horizon"):
        ProblemSpec(**{**base, "T": 2.0})
    with pytest.raises(ValidationError, match="symmetric"):
        ProblemSpec(**{**base, "Q": [[1, 0.5], [0, 1]]})
    with pytest.raises(ValidationError, match="positive definite"):
        ProblemSpec(**{**base, "Q": [[1, 0], [0, -1]]})
    with pytest.raises(ValidationError, match="lambda"):
        ProblemSpec(**{**base, "lam": 0.0})
    with pytest.raises(ValidationError, match="xi"):
        ProblemSpec(**{**base, "xi": [1, 0, 0]})


def test_control_sequence_rejects_off_simplex():
    ControlSequence([[0.5, 0.5 + 5e-10]])
    with pytest.raises(ValidationError):
        ControlSequence([[0.5, 0.6]])
    with pytest.raises(ValidationError):
        ControlSequence([[1.1, -0.1]])


def test_mode_sequence_equality():
    assert ModeSequence([1, 2]) == ModeSequence((1, 2))
    assert ModeSequence([1, 2]) != [2, 1]
    with pytest.raises(InvalidModeError):
        ModeSequence([1, 3], N=2)
