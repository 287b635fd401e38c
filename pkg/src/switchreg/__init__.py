"""Switching-signal design for linear switched systems via discreteness-promoting regularization."""

from .dynamics import RolloutResult, adjoint_gradient, euler_rollout, phi, simulate_plant
from .errors import (
    BudgetError,
    DomainError,
    InvalidModeError,
    MpcError,
    NotDiscreteError,
    RegularizerError,
    SolverError,
    SwitchRegError,
    ValidationError,
)
from .model import (
    ControlSequence,
    ModeSequence,
    ProblemSpec,
    SwitchedSystem,
    Trajectory,
    to_mode_sequence,
    to_one_hot,
)
from .mpc import MpcConfig, MpcTrace, run_mpc
from .oracle import EnumerationResult, enumerate_discrete, grid_search_inner
from .regularizers import (
    CustomRegularizer,
    PNorm,
    QuadraticConcave,
    psi_gradient,
    psi_value,
    validate_assumption1,
)
from .simplex import nearest_vertex, project_simplex
from .solver import SolveReport, SolverConfig, inner_maximize, solve_relaxed

__version__ = "0.1.0"
