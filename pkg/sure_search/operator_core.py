#!/usr/bin/env python3
"""
Generalized Grover operators as exact 2x2 complex matrices

All matrices act on the invariant subspace spanned by the marked state |tau>
and its complement |tau_perp>, in that basis order:

    |s> = sin(beta)|tau> + cos(beta)|tau_perp>,   sin(beta) = sqrt(M/N)

    I_tau = 1 + (e^{i phi} - 1)|tau><tau|
    I_s   = -1 + (1 - e^{i theta})|s><s|
    G     = I_s I_tau
    block = I_s^dagger I_tau^dagger I_s I_tau

The even member A_2n is block^n and the odd member A_2n+1 is G A_2n.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .config import SearchConfig, resolve
from .errors import DegenerateSpectrum

# 2x2 complex128 array, row-major, basis (|tau>, |tau_perp>)
Unitary2 = np.ndarray
# length-2 complex128 array of amplitudes on (|tau>, |tau_perp>)
StateVec2 = np.ndarray

IDENTITY = np.eye(2, dtype=np.complex128)
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Geometry:
    """Search instance: the problem angle and, optionally, concrete (N, M)"""
    beta: float
    n_items: Optional[int] = None
    n_marked: Optional[int] = None

    def __post_init__(self):
        if not np.isfinite(self.beta) or not 0.0 < self.beta <= np.pi / 2:
            raise ValueError(f"beta must lie in (0, pi/2], got {self.beta}")
        if (self.n_items is None) != (self.n_marked is None):
            raise ValueError("n_items and n_marked must be given together")
        if self.n_items is not None and not 1 <= self.n_marked <= self.n_items:
            raise ValueError(
                f"need 1 <= M <= N, got N={self.n_items}, M={self.n_marked}"
            )

    @classmethod
    def from_counts(cls, n_items: int, n_marked: int) -> "Geometry":
        if n_items < 1 or not 1 <= n_marked <= n_items:
            raise ValueError(f"need 1 <= M <= N, got N={n_items}, M={n_marked}")
        beta = float(np.arcsin(np.sqrt(n_marked / n_items)))
        return cls(beta=beta, n_items=int(n_items), n_marked=int(n_marked))

    @classmethod
    def from_marked(cls, n_items: int, marked: Iterable[int]) -> "Geometry":
        indices = sorted(set(int(i) for i in marked))
        if not indices:
            raise ValueError("marked set is empty")
        if indices[0] < 0 or indices[-1] >= n_items:
            raise ValueError(f"marked indices must lie in [0, {n_items})")
        return cls.from_counts(n_items, len(indices))


@dataclass(frozen=True)
class PhaseConfig:
    """Phase angles of I_tau (phi) and I_s (theta)"""
    phi: float
    theta: float

    def __post_init__(self):
        for name, value in (("phi", self.phi), ("theta", self.theta)):
            if not np.isfinite(value) or not -TWO_PI < value < TWO_PI:
                raise ValueError(f"{name} must be finite and in (-2pi, 2pi), got {value}")

    def is_matched(self, sign: int, tol: float = 1e-14) -> bool:
        """phi == sign * theta; sign is -1 for the even member, +1 otherwise"""
        return abs(self.phi - sign * self.theta) < tol


@dataclass(frozen=True)
class SpectralData:
    """
    Derived quantities of the block operator.

    The block is cos(w) I + i H with H = [[a, -i b e^{-i psi}], [i b e^{i psi}, -a]],
    where a = sin^2(theta/2) sin(phi) sin^2(2 beta), b = 2 r sin(theta/2) sin(phi/2) sin(2 beta)
    and psi = phi/2 - gamma. Its eigenvalues are e^{+-iw}.
    """
    w: float
    r: float
    gamma: float
    x: float
    ell: float
    psi: float
    a_term: float
    b_term: float
    eig_plus: complex
    eig_minus: complex
    vec_plus: StateVec2
    vec_minus: StateVec2


def initial_state(geom: Geometry) -> StateVec2:
    return np.array([np.sin(geom.beta), np.cos(geom.beta)], dtype=np.complex128)


def success_amplitude(op: Unitary2, geom: Geometry) -> complex:
    """<tau|op|s>"""
    return complex((op @ initial_state(geom))[0])


def residual_amplitude(op: Unitary2, geom: Geometry) -> complex:
    """<tau_perp|op|s>; zero means sure success"""
    return complex((op @ initial_state(geom))[1])


def success_probability(op: Unitary2, geom: Geometry) -> float:
    return float(abs(success_amplitude(op, geom)) ** 2)


def unitarity_deviation(op: Unitary2) -> float:
    return float(np.max(np.abs(op.conj().T @ op - IDENTITY)))


# =============================================================================
# OPERATOR CONSTRUCTORS
# =============================================================================

def build_i_tau(phases: PhaseConfig, geom: Geometry) -> Unitary2:
    return np.diag([np.exp(1j * phases.phi), 1.0]).astype(np.complex128)


def build_i_s(phases: PhaseConfig, geom: Geometry) -> Unitary2:
    s = initial_state(geom)
    projector = np.outer(s, s.conj())
    return -IDENTITY + (1.0 - np.exp(1j * phases.theta)) * projector


def build_g(phases: PhaseConfig, geom: Geometry) -> Unitary2:
    return build_i_s(phases, geom) @ build_i_tau(phases, geom)


def build_block(phases: PhaseConfig, geom: Geometry) -> Unitary2:
    """I_s^dagger I_tau^dagger I_s I_tau as an explicit four-factor product"""
    i_tau = build_i_tau(phases, geom)
    i_s = build_i_s(phases, geom)
    return i_s.conj().T @ i_tau.conj().T @ i_s @ i_tau


def _block_terms(phases: PhaseConfig, geom: Geometry):
    half_theta = 0.5 * phases.theta
    sin_ht = np.sin(half_theta)
    sin_2b = np.sin(2.0 * geom.beta)
    polar = complex(np.cos(half_theta), sin_ht * np.cos(2.0 * geom.beta))
    r = abs(polar)
    gamma = float(np.angle(polar))
    a_term = sin_ht ** 2 * np.sin(phases.phi) * sin_2b ** 2
    b_term = 2.0 * r * sin_ht * np.sin(0.5 * phases.phi) * sin_2b
    psi = 0.5 * phases.phi - gamma
    # w = arccos(1 - 2K) = 2 arcsin(sqrt(K)); the latter keeps precision near w = 0
    root_k = abs(sin_ht * np.sin(0.5 * phases.phi) * sin_2b)
    w = 2.0 * float(np.arcsin(min(root_k, 1.0)))
    return w, r, gamma, a_term, b_term, psi


def block_closed_form(phases: PhaseConfig, geom: Geometry) -> Unitary2:
    """Block operator from its closed-form entries"""
    w, _, _, a_term, b_term, psi = _block_terms(phases, geom)
    cos_w = np.cos(w)
    return np.array([
        [cos_w + 1j * a_term, b_term * np.exp(-1j * psi)],
        [-b_term * np.exp(1j * psi), cos_w - 1j * a_term],
    ], dtype=np.complex128)


def spectral(phases: PhaseConfig, geom: Geometry,
             config: Optional[SearchConfig] = None) -> SpectralData:
    """
    Eigensystem of the block operator.

    Raises DegenerateSpectrum when the eigenvalues e^{+-iw} coincide
    (w ~ 0 or w ~ pi); callers fall back to repeated products.
    """
    cfg = resolve(config)
    w, r, gamma, a_term, b_term, psi = _block_terms(phases, geom)
    if w < cfg.degenerate_w or np.pi - w < cfg.degenerate_w:
        raise DegenerateSpectrum(f"block rotation angle w={w:.3e} is degenerate")

    sin_w = float(np.hypot(a_term, b_term))
    ell = 2.0 * sin_w * (sin_w + a_term)
    # cos 2x = a/sin w, sin 2x = b/sin w; cos x >= 0 always
    x = 0.5 * float(np.arctan2(b_term, a_term))

    vec_plus = np.array(
        [np.cos(x), 1j * np.sin(x) * np.exp(1j * psi)], dtype=np.complex128)
    vec_minus = np.array(
        [1j * np.sin(x) * np.exp(-1j * psi), np.cos(x)], dtype=np.complex128)

    return SpectralData(
        w=w, r=r, gamma=gamma, x=x, ell=ell, psi=psi,
        a_term=float(a_term), b_term=float(b_term),
        eig_plus=complex(np.exp(1j * w)), eig_minus=complex(np.exp(-1j * w)),
        vec_plus=vec_plus, vec_minus=vec_minus,
    )


def _even_from_spectrum(t: float, spec: SpectralData) -> Unitary2:
    cos_nw = np.cos(t * spec.w)
    sin_nw = np.sin(t * spec.w)
    cos_2x = np.cos(2.0 * spec.x)
    sin_2x = np.sin(2.0 * spec.x)
    return np.array([
        [cos_nw + 1j * sin_nw * cos_2x, sin_2x * sin_nw * np.exp(-1j * spec.psi)],
        [-sin_2x * sin_nw * np.exp(1j * spec.psi), cos_nw - 1j * sin_nw * cos_2x],
    ], dtype=np.complex128)


def build_a_even(n: int, phases: PhaseConfig, geom: Geometry,
                 config: Optional[SearchConfig] = None) -> Unitary2:
    """A_2n from the spectral closed form, or block^n when the spectrum is degenerate"""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return IDENTITY.copy()
    try:
        spec = spectral(phases, geom, config)
    except DegenerateSpectrum:
        return block_power(n, phases, geom)
    return _even_from_spectrum(float(n), spec)


def build_a_even_continuous(t: float, phases: PhaseConfig, geom: Geometry,
                            config: Optional[SearchConfig] = None) -> Unitary2:
    """A_2n with a real exponent t substituted for n"""
    return _even_from_spectrum(float(t), spectral(phases, geom, config))


def block_power(n: int, phases: PhaseConfig, geom: Geometry) -> Unitary2:
    """block^n by exponentiation by squaring"""
    return np.linalg.matrix_power(build_block(phases, geom), n)


def build_a_odd(n: int, phases: PhaseConfig, geom: Geometry,
                config: Optional[SearchConfig] = None) -> Unitary2:
    return build_g(phases, geom) @ build_a_even(n, phases, geom, config)


def build_g_power(n: int, phases: PhaseConfig, geom: Geometry) -> Unitary2:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return np.linalg.matrix_power(build_g(phases, geom), n)


# =============================================================================
# SPECIAL-UNITARY POWERS
# =============================================================================

def su2_angle(op: Unitary2) -> float:
    """Rotation angle Omega in [0, pi] of op = cos(Omega) I + i sin(Omega) n.sigma"""
    cos_part = 0.5 * float(np.real(np.trace(op)))
    anti = 0.5 * (op - op.conj().T)
    sin_part = float(np.linalg.norm(anti)) / np.sqrt(2.0)
    return float(np.arctan2(sin_part, cos_part))


def su2_power(op: Unitary2, t: float,
              config: Optional[SearchConfig] = None) -> Unitary2:
    """op^t on the principal branch: cos(t Omega) I + sin(t Omega)/sin(Omega) (op - cos(Omega) I)"""
    cfg = resolve(config)
    omega = su2_angle(op)
    if omega < cfg.degenerate_w or np.pi - omega < cfg.degenerate_w:
        raise DegenerateSpectrum(f"rotation angle {omega:.3e} is degenerate")
    cos_o = np.cos(omega)
    return (np.cos(t * omega) * IDENTITY
            + np.sin(t * omega) / np.sin(omega) * (op - cos_o * IDENTITY))


def normalized_grover(phases: PhaseConfig, geom: Geometry) -> Unitary2:
    """
    G rescaled into SU(2) as -e^{-i(theta+phi)/2} G.

    det G = e^{i(theta+phi)}; of the two square-root branches this one reduces to
    the real rotation by 2 beta at theta = phi = pi, so its rotation angle is
    2 arcsin(sin(theta/2) sin(beta)) on the matched manifold.
    """
    scale = -np.exp(-0.5j * (phases.theta + phases.phi))
    return scale * build_g(phases, geom)
