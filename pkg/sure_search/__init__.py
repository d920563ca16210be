"""
Sure-Success Quantum Search Planning

This package provides:
- The even A_2n, odd A_2n+1 and G^n members of the phase-matched search family
  as explicit 2x2 unitaries on the {|tau>, |tau_perp>} subspace
- Closed-form continuous iteration and oracle-call counts
- A planner that picks the phase nearest pi giving sure success at the
  minimal integer number of oracle calls
- Subspace and N-item statevector verification of a plan

Usage:
    from sure_search import MemberKind, make_plan, run_subspace

    plan = make_plan(MemberKind.EVEN_A2N, beta=1.0)
    result = run_subspace(plan)
"""

from .closed_form import (
    MemberKind,
    f_even,
    f_grover,
    f_odd,
    oracle_call_functions,
    oracle_calls,
    sweep,
)
from .config import DEFAULT_CONFIG, SearchConfig
from .errors import (
    BetaMismatch,
    ConvergenceFailure,
    DegenerateAngle,
    DegenerateSpectrum,
    QuantumSearchError,
    SureSuccessViolation,
)
from .operator_core import Geometry, PhaseConfig, spectral
from .planner import (
    Plan,
    continuous_iteration_oracle,
    make_plan,
    minimal_calls,
    plan_for_theta,
    solve_theta_op,
)
from .simulator import FullState, SimResult, run_full, run_subspace

__all__ = [
    'MemberKind',
    'f_even',
    'f_odd',
    'f_grover',
    'oracle_calls',
    'oracle_call_functions',
    'sweep',
    'SearchConfig',
    'DEFAULT_CONFIG',
    'QuantumSearchError',
    'DegenerateAngle',
    'DegenerateSpectrum',
    'ConvergenceFailure',
    'BetaMismatch',
    'SureSuccessViolation',
    'Geometry',
    'PhaseConfig',
    'spectral',
    'Plan',
    'make_plan',
    'minimal_calls',
    'solve_theta_op',
    'plan_for_theta',
    'continuous_iteration_oracle',
    'FullState',
    'SimResult',
    'run_subspace',
    'run_full',
]

__version__ = '1.0.0'
