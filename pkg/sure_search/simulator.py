#!/usr/bin/env python3
"""
Plan Verification by Exact Simulation

Two independent checks of a Plan:
- run_subspace applies the member operator in the {|tau>, |tau_perp>} basis
- run_full applies the phase rotations to an explicit N-item statevector

Operator products act right-to-left, so one block I_s^dagger I_tau^dagger I_s I_tau
applies I_tau first, then I_s, I_tau^dagger and finally I_s^dagger.
I_s is applied as a rank-one update in O(N); the dense matrix is never formed.
"""

import sys
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

import numpy as np

from .closed_form import MemberKind
from .config import SearchConfig, resolve
from .errors import BetaMismatch
from .operator_core import (
    Geometry,
    initial_state,
    residual_amplitude,
    success_amplitude,
)
from .planner import Plan, member_operator


@dataclass
class FullState:
    """N-item statevector with its marked index set; owned by a single run"""
    amplitudes: np.ndarray
    marked: np.ndarray

    def __post_init__(self):
        n_items = len(self.amplitudes)
        self.marked = np.unique(np.asarray(self.marked, dtype=np.int64))
        if len(self.marked) == 0 or len(self.marked) > n_items:
            raise ValueError(f"need 1 <= M <= N, got M={len(self.marked)}, N={n_items}")
        if self.marked[0] < 0 or self.marked[-1] >= n_items:
            raise ValueError(f"marked indices must lie in [0, {n_items})")

    @classmethod
    def uniform(cls, n_items: int, marked: Iterable[int]) -> "FullState":
        if n_items < 1:
            raise ValueError(f"n_items must be positive, got {n_items}")
        amplitudes = np.full(n_items, 1.0 / np.sqrt(n_items), dtype=np.complex128)
        return cls(amplitudes=amplitudes, marked=np.asarray(list(marked)))

    @property
    def n_items(self) -> int:
        return len(self.amplitudes)

    @property
    def unmarked_mask(self) -> np.ndarray:
        mask = np.ones(self.n_items, dtype=bool)
        mask[self.marked] = False
        return mask

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def success_probability(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[self.marked]) ** 2))

    def residual_amplitude(self) -> complex:
        """<tau_perp|psi> with tau_perp the uniform state over unmarked items"""
        mask = self.unmarked_mask
        count = int(mask.sum())
        if count == 0:
            return 0j
        return complex(np.sum(self.amplitudes[mask]) / np.sqrt(count))


@dataclass(frozen=True)
class SimResult:
    """Outcome of a verified run"""
    success_probability: float
    residual_amplitude: complex
    oracle_calls_used: int
    trace: List[float] = field(default_factory=list)

    def to_dict(self):
        return {
            'success_probability': self.success_probability,
            'residual_amplitude': [self.residual_amplitude.real, self.residual_amplitude.imag],
            'oracle_calls_used': self.oracle_calls_used,
        }


def _log(cfg: SearchConfig, message: str):
    if cfg.log_progress:
        print(f"[Simulator] {message}", file=sys.stderr)


def run_subspace(plan: Plan, config: Optional[SearchConfig] = None) -> SimResult:
    geom = Geometry(plan.beta)
    op = member_operator(plan.member, plan.n_iterations, plan.phases, geom, config)
    amplitude = success_amplitude(op, geom)
    return SimResult(
        success_probability=float(abs(amplitude) ** 2),
        residual_amplitude=residual_amplitude(op, geom),
        oracle_calls_used=plan.oracle_calls,
    )


# =============================================================================
# FULL STATEVECTOR
# =============================================================================

def apply_i_tau_full(state: FullState, phi: float, dagger: bool = False) -> FullState:
    """Multiply marked amplitudes by e^{i phi} (e^{-i phi} for the adjoint)"""
    sign = -1.0 if dagger else 1.0
    state.amplitudes[state.marked] *= np.exp(1j * sign * phi)
    return state


def apply_i_s_full(state: FullState, theta: float, dagger: bool = False) -> FullState:
    """psi <- -psi + (1 - e^{+-i theta}) <s|psi> s for the uniform state s"""
    sign = -1.0 if dagger else 1.0
    # <s|psi> s has every entry equal to the mean amplitude
    mean = state.amplitudes.mean()
    state.amplitudes *= -1.0
    state.amplitudes += (1.0 - np.exp(1j * sign * theta)) * mean
    return state


def _apply_block(state: FullState, phi: float, theta: float):
    apply_i_tau_full(state, phi)
    apply_i_s_full(state, theta)
    apply_i_tau_full(state, phi, dagger=True)
    apply_i_s_full(state, theta, dagger=True)


def _apply_g(state: FullState, phi: float, theta: float):
    apply_i_tau_full(state, phi)
    apply_i_s_full(state, theta)


def subspace_leakage(state: FullState) -> float:
    """Largest deviation of any amplitude from its class mean (marked / unmarked)"""
    leakage = 0.0
    for mask in (np.isin(np.arange(state.n_items), state.marked), state.unmarked_mask):
        if mask.any():
            block = state.amplitudes[mask]
            leakage = max(leakage, float(np.max(np.abs(block - block.mean()))))
    return leakage


def run_full(plan: Plan, n_items: int, marked: Iterable[int],
             record_trace: bool = False,
             config: Optional[SearchConfig] = None) -> SimResult:
    """
    Apply the planned member to the uniform N-item state.

    The trace, when recorded, holds the success probability initially and
    after every block (A_2n), every block then the final G (A_2n+1), or every
    G (G^n).
    """
    cfg = resolve(config)
    marked = list(marked)
    geom = Geometry.from_marked(n_items, marked)
    if abs(geom.beta - plan.beta) > cfg.beta_match_tolerance:
        raise BetaMismatch(
            f"instance N={n_items}, M={geom.n_marked} has beta={geom.beta!r}, "
            f"plan has {plan.beta!r}"
        )

    state = FullState.uniform(n_items, marked)
    trace = [state.success_probability()] if record_trace else []
    phi, theta = plan.phi, plan.theta

    if plan.member is MemberKind.GROVER_GN:
        for _ in range(plan.n_iterations):
            _apply_g(state, phi, theta)
            if record_trace:
                trace.append(state.success_probability())
    else:
        for _ in range(plan.n_iterations):
            _apply_block(state, phi, theta)
            if record_trace:
                trace.append(state.success_probability())
        if plan.member is MemberKind.ODD_A2N1:
            _apply_g(state, phi, theta)
            if record_trace:
                trace.append(state.success_probability())

    probability = state.success_probability()
    _log(cfg, f"{plan.member.value} N={n_items} M={len(state.marked)}: p={probability:.15f}")
    return SimResult(
        success_probability=probability,
        residual_amplitude=state.residual_amplitude(),
        oracle_calls_used=plan.oracle_calls,
        trace=trace,
    )


def subspace_trace(plan: Plan, config: Optional[SearchConfig] = None) -> List[float]:
    """Success probabilities at the same checkpoints as run_full's trace"""
    geom = Geometry(plan.beta)
    state = initial_state(geom)
    probabilities = [float(abs(state[0]) ** 2)]
    if plan.member is MemberKind.GROVER_GN:
        step = member_operator(plan.member, 1, plan.phases, geom, config)
        for _ in range(plan.n_iterations):
            state = step @ state
            probabilities.append(float(abs(state[0]) ** 2))
        return probabilities
    block = member_operator(MemberKind.EVEN_A2N, 1, plan.phases, geom, config)
    for _ in range(plan.n_iterations):
        state = block @ state
        probabilities.append(float(abs(state[0]) ** 2))
    if plan.member is MemberKind.ODD_A2N1:
        state = member_operator(plan.member, 0, plan.phases, geom, config) @ state
        probabilities.append(float(abs(state[0]) ** 2))
    return probabilities
