#!/usr/bin/env python3
"""
Closed-form iteration and oracle-call counts

For a problem angle beta and a phase theta on the matching manifold
(phi = -theta for A_2n, phi = theta for A_2n+1 and G^n) the continuous
iteration counts are

    f_e = (pi/2 + arcsin(sin b (1 - 2 s^2 cos^2 b) / sqrt(1 - s^2 sin^2 2b))) / D
    f_o = (pi/2 - arccos(cos b (1 - 4 s^2 sin^2 b) sqrt(1 - s^4 sin^2 2b)
                         / sqrt(1 - s^2 sin^2 2b))) / D
    f   = (pi/2 - arcsin(s sin b)) / (2 arcsin(s sin b))

with s = sin(theta/2) and D = arccos(1 - 2 s^4 sin^2 2b) = 2 arcsin(s^2 |sin 2b|).
The oracle-call functions are c_e = 2 f_e, c_o = 2 f_o + 1 and c = f.
At beta = pi/4, theta = pi the radicands of f_e and f_o vanish together and
the counts are their limits along theta, 1/2 and -1/2.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from .config import SearchConfig, resolve
from .errors import DegenerateAngle, DegenerateSpectrum
from .operator_core import Geometry, PhaseConfig, SpectralData, spectral


class MemberKind(Enum):
    """Family members; the value is the CLI spelling"""
    EVEN_A2N = "even"
    ODD_A2N1 = "odd"
    GROVER_GN = "grover"

    @property
    def matching_sign(self) -> int:
        return -1 if self is MemberKind.EVEN_A2N else 1

    @classmethod
    def parse(cls, name: str) -> "MemberKind":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"Unknown member: {name} (expected one of even, odd, grover)"
            ) from None


@dataclass(frozen=True)
class CountEval:
    """Evaluated count for one member at (beta, theta)"""
    member: MemberKind
    beta: float
    theta: float
    f_value: float
    numerator: float
    denominator: float
    delta_e: Optional[float]
    n_iterations: int
    oracle_calls: int


@dataclass(frozen=True)
class SweepRow:
    """One theta sample of the oracle-call functions; NaN at degenerate angles"""
    theta: float
    c_even: float
    c_odd: float
    c_grover: float


def matching_phases(member: MemberKind, theta: float) -> PhaseConfig:
    return PhaseConfig(phi=member.matching_sign * theta, theta=theta)


def _clip_unit(value: float, cfg: SearchConfig, what: str) -> float:
    if value > 1.0 + cfg.clip_slack or value < -1.0 - cfg.clip_slack:
        raise ValueError(f"{what} argument {value!r} outside [-1, 1]")
    return min(1.0, max(-1.0, value))


def _validate(beta: float, theta: float):
    if not np.isfinite(beta) or not 0.0 < beta <= np.pi / 2:
        raise ValueError(f"beta must lie in (0, pi/2], got {beta}")
    if not np.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")


def _denominator(beta: float, theta: float, cfg: SearchConfig) -> float:
    sin_ht = math.sin(0.5 * theta)
    arg = _clip_unit(sin_ht ** 2 * abs(math.sin(2.0 * beta)), cfg, "denominator arcsin")
    denominator = 2.0 * math.asin(arg)
    if denominator < cfg.degenerate_angle:
        raise DegenerateAngle(
            f"count denominator {denominator:.3e} vanishes at beta={beta}, theta={theta}"
        )
    return denominator


def _complement_root(beta: float, theta: float):
    """
    (x, sqrt(1 - sin^2(theta/2) sin^2(2 beta))) with x = 1 - 2 sin^2(theta/2) cos^2(beta).

    The radicand equals x^2 + y^2 with y = sin(theta) cos^2(beta), so the root is
    taken as hypot(x, y) without cancellation. It vanishes only at beta = pi/4,
    theta = pi, where the block operator is -I.
    """
    cos_b2 = math.cos(beta) ** 2
    x = 2.0 * math.cos(0.5 * theta) ** 2 * cos_b2 - math.cos(2.0 * beta)
    y = math.sin(theta) * cos_b2
    return x, math.hypot(x, y)


def _quartic(beta: float, theta: float) -> float:
    """1 - sin^4(theta/2) sin^2(2 beta), factored so it stays accurate near beta = pi/4"""
    s2 = math.sin(0.5 * theta) ** 2
    sin_2b = math.sin(2.0 * beta)
    near = 2.0 * math.sin(beta - 0.25 * math.pi) ** 2 + math.cos(0.5 * theta) ** 2 * sin_2b
    return near * (1.0 + s2 * sin_2b)


def _even_parts(beta: float, theta: float, cfg: SearchConfig):
    _validate(beta, theta)
    denominator = _denominator(beta, theta, cfg)
    x, root = _complement_root(beta, theta)
    if root < cfg.degenerate_angle:
        # limit along theta at beta = pi/4: x vanishes quadratically, the root linearly
        ratio = 0.0
    else:
        ratio = math.sin(beta) * x / root
    numerator = 0.5 * math.pi + math.asin(_clip_unit(ratio, cfg, "f_even arcsin"))
    return numerator, denominator


def _odd_parts(beta: float, theta: float, cfg: SearchConfig):
    _validate(beta, theta)
    denominator = _denominator(beta, theta, cfg)
    s2 = math.sin(0.5 * theta) ** 2
    k = 1.0 - 4.0 * s2 * math.sin(beta) ** 2
    _, root = _complement_root(beta, theta)
    if root < cfg.degenerate_angle:
        # at beta = pi/4 the root ratio sqrt(quartic) / root is sqrt(1 + s^2) for every theta
        ratio = math.cos(beta) * k * math.sqrt(1.0 + s2)
    else:
        quartic = _quartic(beta, theta)
        assert quartic >= 0.0, "1 - sin^4(theta/2) sin^2(2 beta) must be nonnegative"
        ratio = math.cos(beta) * k * math.sqrt(quartic) / root
    numerator = 0.5 * math.pi - math.acos(_clip_unit(ratio, cfg, "f_odd arccos"))
    return numerator, denominator


def _grover_parts(beta: float, theta: float, cfg: SearchConfig):
    _validate(beta, theta)
    arg = _clip_unit(abs(math.sin(0.5 * theta)) * math.sin(beta), cfg, "f_grover arcsin")
    if arg < cfg.degenerate_angle:
        raise DegenerateAngle(f"sin(theta/2) sin(beta) = {arg:.3e} vanishes")
    half = math.asin(arg)
    return 0.5 * math.pi - half, 2.0 * half


def f_even(beta: float, theta: float, config: Optional[SearchConfig] = None) -> float:
    """Continuous iteration count of A_2n with phi = -theta"""
    numerator, denominator = _even_parts(beta, theta, resolve(config))
    return numerator / denominator


def f_odd(beta: float, theta: float, config: Optional[SearchConfig] = None) -> float:
    """Continuous iteration count of A_2n+1 with phi = theta; may be negative"""
    numerator, denominator = _odd_parts(beta, theta, resolve(config))
    return numerator / denominator


def f_grover(beta: float, theta: float, config: Optional[SearchConfig] = None) -> float:
    """Continuous iteration count of G^n with phi = theta"""
    numerator, denominator = _grover_parts(beta, theta, resolve(config))
    return numerator / denominator


_PARTS = {
    MemberKind.EVEN_A2N: _even_parts,
    MemberKind.ODD_A2N1: _odd_parts,
    MemberKind.GROVER_GN: _grover_parts,
}


def f_member(member: MemberKind, beta: float, theta: float,
             config: Optional[SearchConfig] = None) -> float:
    numerator, denominator = _PARTS[member](beta, theta, resolve(config))
    return numerator / denominator


def delta_e(beta: float, phases: PhaseConfig, spec: SpectralData) -> float:
    """arcsin(sin(beta) cos(phi/2 - gamma)); the even member succeeds where cos(n w - delta_e) = 0"""
    if not phases.is_matched(MemberKind.EVEN_A2N.matching_sign):
        raise ValueError("delta_e requires the even matching condition phi = -theta")
    value = math.sin(beta) * math.cos(0.5 * phases.phi - spec.gamma)
    return math.asin(min(1.0, max(-1.0, value)))


def ceiling_policy(f: float, config: Optional[SearchConfig] = None) -> int:
    """Smallest integer >= f, snapping near-integers and clamping at zero"""
    cfg = resolve(config)
    if not np.isfinite(f):
        raise ValueError(f"count must be finite, got {f}")
    nearest = round(f)
    if abs(f - nearest) < cfg.snap_tolerance:
        return max(0, int(nearest))
    return max(0, int(math.ceil(f)))


def calls_for_iterations(member: MemberKind, n_iterations: int) -> int:
    if member is MemberKind.EVEN_A2N:
        return 2 * n_iterations
    if member is MemberKind.ODD_A2N1:
        return 2 * n_iterations + 1
    return n_iterations


def calls_from_parity(member: MemberKind, c: float) -> int:
    """Oracle calls from the parity rule: round c up, then to the member's parity"""
    ceiled = int(math.ceil(c))
    if member is MemberKind.EVEN_A2N:
        return max(0, ceiled + (ceiled % 2))
    if member is MemberKind.ODD_A2N1:
        return max(1, ceiled + 1 - (ceiled % 2))
    return ceiled


# c = scale * f + offset per member
_CALL_SCALE = {
    MemberKind.EVEN_A2N: (2.0, 0.0),
    MemberKind.ODD_A2N1: (2.0, 1.0),
    MemberKind.GROVER_GN: (1.0, 0.0),
}


def oracle_calls(member: MemberKind, beta: float, theta: float,
                 config: Optional[SearchConfig] = None) -> CountEval:
    """
    Integer count at (beta, theta). delta_e is filled in for the even member
    unless the block spectrum is degenerate (beta = pi/4, theta = pi).
    """
    cfg = resolve(config)
    numerator, denominator = _PARTS[member](beta, theta, cfg)
    f_value = numerator / denominator
    n_iterations = ceiling_policy(f_value, cfg)
    calls = calls_for_iterations(member, n_iterations)
    if abs(f_value - round(f_value)) >= cfg.snap_tolerance:
        scale, offset = _CALL_SCALE[member]
        assert calls_from_parity(member, scale * f_value + offset) == calls, \
            f"parity rule disagrees with {calls} calls at beta={beta}, theta={theta}"
    delta = None
    if member is MemberKind.EVEN_A2N:
        phases = matching_phases(member, theta)
        try:
            delta = delta_e(beta, phases, spectral(phases, Geometry(beta), cfg))
        except DegenerateSpectrum:
            delta = None
    return CountEval(
        member=member, beta=beta, theta=theta, f_value=f_value,
        numerator=numerator, denominator=denominator, delta_e=delta,
        n_iterations=n_iterations,
        oracle_calls=calls,
    )


def oracle_call_functions(beta: float, theta: float,
                          config: Optional[SearchConfig] = None) -> SweepRow:
    """(c_e, c_o, c) at one theta; each is NaN where its formula degenerates"""
    cfg = resolve(config)
    values = []
    for member, (scale, offset) in _CALL_SCALE.items():
        try:
            values.append(scale * f_member(member, beta, theta, cfg) + offset)
        except DegenerateAngle:
            values.append(float("nan"))
    return SweepRow(theta=float(theta), c_even=values[0], c_odd=values[1], c_grover=values[2])


def theta_grid(theta_min: float, theta_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    if not theta_min < theta_max:
        raise ValueError(f"theta_min must be below theta_max, got {theta_min} >= {theta_max}")
    return np.linspace(theta_min, theta_max, steps)


def sweep(beta: float, thetas: Sequence[float],
          config: Optional[SearchConfig] = None) -> List[SweepRow]:
    return [oracle_call_functions(beta, float(theta), config) for theta in thetas]
