import numpy as np
import pytest

from switchreg import CustomRegularizer, MpcConfig, MpcError, ProblemSpec, SolverConfig, run_mpc, simulate_plant
from switchreg.mpc import advance_plant, applied_controls, shift_warm_start
from switchreg.regularizers import soav

from conftest import XI


def hurwitz_spec():
    # A + A' is negative definite for both modes, so V = |x|^2 decreases under any switching
    A1 = [[-1.0, 0.0], [0.0, -2.0]]
    A2 = [[-1.0, 1.0], [-1.0, -1.0]]
    return ProblemSpec.from_steps([A1, A2], XI, K=5, h=0.1, lam=1.0)


def test_common_lyapunov_norms_decrease():
    trace = run_mpc(MpcConfig(hurwitz_spec(), sim_steps=20, solver=SolverConfig(restarts=2)))
    assert np.all(np.diff(trace.state_norms) <= 0)
    assert len(trace.applied_modes) == 20
    assert trace.plant_states.shape == (21, 2)
    np.testing.assert_array_equal(trace.plant_states[0], XI)
    np.testing.assert_allclose(trace.times, 0.1 * np.arange(21))


def test_trace_replays_with_plant_integrator():
    trace = run_mpc(MpcConfig(hurwitz_spec(), sim_steps=8, solver=SolverConfig(restarts=2)))
    x = np.array(XI)
    system = hurwitz_spec().system
    for k, m in enumerate(trace.applied_modes):
        x = simulate_plant(system, x, m, 0.1, 16)
        assert np.array_equal(trace.plant_states[k + 1], x)
        assert trace.per_step_reports[k].mode == m
    u = applied_controls(trace).values
    assert set(np.unique(u)) <= {0.0, 1.0}


def test_euler_plant_matches_model_step():
    system = hurwitz_spec().system
    x = np.array([0.3, -1.2])
    np.testing.assert_array_equal(advance_plant(system, x, 2, 0.1, "euler"), x + 0.1 * (system.modes[1] @ x))


def test_shift_warm_start():
    v = np.array([[1, 0], [0, 1], [0.3, 0.7]])
    np.testing.assert_array_equal(shift_warm_start(v), [[0, 1], [0.3, 0.7], [0.3, 0.7]])


def test_solver_failure_aborts_with_partial_trace():
    spec = ProblemSpec.from_steps(hurwitz_spec().system, XI, K=3, h=0.1, regularizer=CustomRegularizer(soav, name="soav"))
    with pytest.raises(MpcError) as err:
        run_mpc(MpcConfig(spec, sim_steps=3))
    assert err.value.step == 0
    assert len(err.value.trace.applied_modes) == 0
    np.testing.assert_array_equal(err.value.trace.plant_states[0], XI)


def test_config_guards():
    with pytest.raises(ValueError):
        MpcConfig(hurwitz_spec(), sim_steps=0)
    with pytest.raises(ValueError):
        MpcConfig(hurwitz_spec(), plant="exact")


@pytest.mark.parametrize("warm", [True, False])
def test_example_one_converges_warm_and_cold(two_mode_spec, warm):
    trace = run_mpc(MpcConfig(two_mode_spec, sim_steps=50, warm_start=warm))
    assert trace.norm_at(5.0) < 0.05 * np.linalg.norm(XI)
    assert trace.max_residual < 1e-3


def test_warm_start_iteration_share(two_mode_spec):
    # informational efficiency property: warm runs should not need more iterations most of the time
    warm = run_mpc(MpcConfig(two_mode_spec, sim_steps=30))
    cold = run_mpc(MpcConfig(two_mode_spec, sim_steps=30, warm_start=False))
    share = np.mean([w.iterations <= c.iterations for w, c in zip(warm.per_step_reports, cold.per_step_reports)])
    print(f"warm-start steps with <= cold iterations: {share:.0%}")
    assert 0.0 <= share <= 1.0
