#!/usr/bin/env python3
"""
Sure-Success Planner

Picks the phase theta_op nearest pi at which a member's continuous count hits
the minimal integer count exactly, and packages it as a Plan. Also provides a
continuous-iteration oracle that recovers the same counts from the operators
themselves, without going through the closed-form formulas.
"""

import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from scipy import optimize

from .closed_form import (
    MemberKind,
    calls_for_iterations,
    f_member,
    matching_phases,
    oracle_calls,
)
from .config import SearchConfig, resolve
from .errors import ConvergenceFailure
from .operator_core import (
    Geometry,
    PhaseConfig,
    Unitary2,
    build_a_even,
    build_a_even_continuous,
    build_a_odd,
    build_g,
    build_g_power,
    initial_state,
    normalized_grover,
    spectral,
    su2_angle,
    su2_power,
    success_probability,
)


@dataclass(frozen=True)
class SolveReport:
    """Diagnostics of one bracketed bisection"""
    target_calls: int
    achieved_f: float
    residual: float
    bisection_iterations: int


@dataclass(frozen=True)
class Plan:
    """A fully specified run of one family member"""
    member: MemberKind
    beta: float
    theta: float
    phi: float
    n_iterations: int
    oracle_calls: int
    theta_mirror: float
    predicted_success: float
    sure_success: bool = True
    report: Optional[SolveReport] = field(default=None, compare=False)

    @property
    def phases(self) -> PhaseConfig:
        return PhaseConfig(phi=self.phi, theta=self.theta)

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.beta)

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'member': self.member.value,
            'beta': self.beta,
            'theta_op': self.theta,
            'theta_mirror': self.theta_mirror,
            'phi': self.phi,
            'n_iterations': self.n_iterations,
            'oracle_calls': self.oracle_calls,
            'predicted_success': self.predicted_success,
            'sure_success': self.sure_success,
        }
        if self.report is not None:
            result['solve'] = asdict(self.report)
        return result


def _log(cfg: SearchConfig, message: str):
    if cfg.log_progress:
        print(f"[Planner] {message}", file=sys.stderr)


def _check_beta(beta: float):
    if not np.isfinite(beta) or not 0.0 < beta < np.pi / 2:
        raise ValueError(f"beta must lie in (0, pi/2), got {beta}")


def member_operator(member: MemberKind, n_iterations: int, phases: PhaseConfig,
                    geom: Geometry, config: Optional[SearchConfig] = None) -> Unitary2:
    """A_2n, A_2n+1 or G^n in the two-dimensional subspace"""
    if member is MemberKind.EVEN_A2N:
        return build_a_even(n_iterations, phases, geom, config)
    if member is MemberKind.ODD_A2N1:
        return build_a_odd(n_iterations, phases, geom, config)
    return build_g_power(n_iterations, phases, geom)


def target_iterations(member: MemberKind, beta: float,
                      config: Optional[SearchConfig] = None) -> int:
    """
    Minimal integer iteration count, read off at theta = pi.

    At beta = pi/4 the even and odd counts at pi are their limits along theta
    (1/2 and -1/2), and the bisection walk starts from there.
    """
    _check_beta(beta)
    n = oracle_calls(member, beta, math.pi, config).n_iterations
    if member is MemberKind.GROVER_GN:
        n = max(1, n)
    return n


def minimal_calls(member: MemberKind, beta: float,
                  config: Optional[SearchConfig] = None) -> int:
    return calls_for_iterations(member, target_iterations(member, beta, config))


def _bisect(func: Callable[[float], float], lo: float, hi: float,
            xtol: float, cfg: SearchConfig) -> Tuple[float, int]:
    try:
        root, result = optimize.bisect(
            func, lo, hi, xtol=xtol, maxiter=cfg.bisect_maxiter,
            full_output=True, disp=False,
        )
    except ValueError as e:
        raise ConvergenceFailure(f"no sign change on [{lo}, {hi}]: {e}") from e
    if not result.converged:
        raise ConvergenceFailure(f"bisection on [{lo}, {hi}] did not converge")
    return float(root), int(result.iterations)


def _solve(member: MemberKind, beta: float,
           cfg: SearchConfig) -> Tuple[float, int, SolveReport]:
    n_target = target_iterations(member, beta, cfg)
    target_calls = calls_for_iterations(member, n_target)

    def excess(theta: float) -> float:
        return f_member(member, beta, theta, cfg) - n_target

    at_pi = excess(math.pi)
    # the target was snapped onto f(pi) itself
    if abs(at_pi) < cfg.snap_tolerance:
        return math.pi, n_target, SolveReport(
            target_calls, at_pi + n_target, abs(at_pi), 0)

    # counts grow away from pi, so walk the offset outward until the target is crossed
    inner = 0.0
    offset = cfg.bracket_start
    while True:
        theta = max(math.pi - offset, cfg.bracket_floor)
        if excess(theta) >= 0.0:
            break
        if theta <= cfg.bracket_floor:
            raise ConvergenceFailure(
                f"no theta in ({cfg.bracket_floor}, pi] reaches {target_calls} calls "
                f"for {member.value} at beta={beta}"
            )
        inner = offset
        offset *= 2.0

    theta_op, iterations = _bisect(excess, theta, math.pi - inner, cfg.theta_xtol, cfg)
    achieved = excess(theta_op) + n_target
    residual = abs(achieved - n_target)
    if residual >= cfg.residual_tolerance:
        raise ConvergenceFailure(
            f"theta_op={theta_op} leaves count residual {residual:.3e}"
        )
    return theta_op, n_target, SolveReport(target_calls, achieved, residual, iterations)


def solve_theta_op(member: MemberKind, beta: float,
                   config: Optional[SearchConfig] = None) -> Plan:
    """Phase nearest pi at which the member needs exactly its minimal call count"""
    cfg = resolve(config)
    theta_op, n_target, report = _solve(member, beta, cfg)
    _log(cfg, f"{member.value} beta={beta:.6g}: theta_op=pi-{math.pi - theta_op:.6f}, "
              f"{report.target_calls} calls, {report.bisection_iterations} bisections")
    phases = matching_phases(member, theta_op)
    return Plan(
        member=member,
        beta=beta,
        theta=theta_op,
        phi=phases.phi,
        n_iterations=n_target,
        oracle_calls=calls_for_iterations(member, n_target),
        theta_mirror=2.0 * math.pi - theta_op,
        predicted_success=1.0,
        report=report,
    )


def make_plan(member: MemberKind, beta: float,
              config: Optional[SearchConfig] = None) -> Plan:
    """Sure-success plan with the minimal number of oracle calls"""
    cfg = resolve(config)
    expected_calls = minimal_calls(member, beta, cfg)
    plan = solve_theta_op(member, beta, cfg)
    counted = oracle_calls(member, beta, plan.theta, cfg)
    n_iterations = counted.n_iterations
    if member is MemberKind.GROVER_GN:
        n_iterations = max(1, n_iterations)
    if n_iterations != plan.n_iterations or plan.oracle_calls != expected_calls:
        raise ConvergenceFailure(
            f"count at theta_op gives {n_iterations} iterations, plan expects {plan.n_iterations}"
        )
    return plan


def plan_for_theta(member: MemberKind, beta: float, theta: float,
                   config: Optional[SearchConfig] = None) -> Plan:
    """
    Plan at a caller-chosen theta on the matching manifold.

    The iteration count follows the member's count rule at theta, and the
    success probability is evaluated rather than assumed.
    """
    cfg = resolve(config)
    _check_beta(beta)
    counted = oracle_calls(member, beta, theta, cfg)
    n_iterations = counted.n_iterations
    if member is MemberKind.GROVER_GN:
        n_iterations = max(1, n_iterations)
    phases = matching_phases(member, theta)
    geom = Geometry(beta)
    probability = success_probability(
        member_operator(member, n_iterations, phases, geom, cfg), geom)
    return Plan(
        member=member,
        beta=beta,
        theta=theta,
        phi=phases.phi,
        n_iterations=n_iterations,
        oracle_calls=calls_for_iterations(member, n_iterations),
        theta_mirror=2.0 * math.pi - theta,
        predicted_success=probability,
        sure_success=probability >= 1.0 - cfg.success_tolerance,
    )


# =============================================================================
# CONTINUOUS-ITERATION ORACLE
# =============================================================================

def continuous_iteration_oracle(member: MemberKind, beta: float, theta: float,
                                config: Optional[SearchConfig] = None) -> float:
    """
    Real iteration count t at which one quadrature of <tau_perp|A(t)|s> vanishes.

    A(t) interpolates the member between integer iteration counts through its
    own eigensystem, so the residual is c1 cos(t W) + c2 sin(t W) for a rotation
    angle W. Under matching c1 and c2 are collinear; projecting onto their
    common direction leaves a real function whose root repeats with period pi/W
    up to sign. The search window picks the branch the closed forms use:
    [0, pi/W) for A_2n and G^n, and the window centred on zero for A_2n+1.

    For A_2n+1 the root satisfies tan(t W) = k sin W / (1 - k cos W) with
    k = 1 - 4 sin^2(theta/2) sin^2(beta). f_odd carries the sign of k alone, so
    where k cos W > 1 this returns -f_odd (at beta = 1, theta = pi: +0.626
    against -0.626). That region needs k < -1 and so only holds negative
    f_odd values; every crossing f_odd = n >= 0 the planner solves for lies
    outside it.
    """
    cfg = resolve(config)
    phases = matching_phases(member, theta)
    geom = Geometry(beta)
    s = initial_state(geom)

    if member is MemberKind.GROVER_GN:
        rotation = normalized_grover(phases, geom)
        omega = su2_angle(rotation)

        def operator_at(t: float) -> Unitary2:
            return su2_power(rotation, t, cfg)
        lo = 0.0
    else:
        omega = spectral(phases, geom, cfg).w
        g = build_g(phases, geom)
        odd = member is MemberKind.ODD_A2N1

        def operator_at(t: float) -> Unitary2:
            even = build_a_even_continuous(t, phases, geom, cfg)
            return g @ even if odd else even
        lo = -0.5 * math.pi / omega if odd else 0.0

    def residual(t: float) -> complex:
        return complex((operator_at(t) @ s)[1])

    c1 = residual(0.0)
    c2 = residual(0.5 * math.pi / omega)
    lead = c1 if abs(c1) >= abs(c2) else c2
    if abs(lead) == 0.0:
        raise ConvergenceFailure("residual amplitude vanishes identically")
    direction = lead / abs(lead)

    def quadrature(t: float) -> float:
        return float(np.real(np.conj(direction) * residual(t)))

    root, _ = _bisect(quadrature, lo, lo + math.pi / omega, cfg.t_xtol, cfg)
    return root
