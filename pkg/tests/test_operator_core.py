"""
Tests for the 2x2 operator constructors and the block eigensystem.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from sure_search.errors import DegenerateSpectrum
from sure_search.operator_core import (
    IDENTITY,
    Geometry,
    PhaseConfig,
    block_closed_form,
    block_power,
    build_a_even,
    build_a_even_continuous,
    build_a_odd,
    build_block,
    build_g,
    build_g_power,
    build_i_s,
    build_i_tau,
    initial_state,
    normalized_grover,
    residual_amplitude,
    spectral,
    su2_angle,
    su2_power,
    success_amplitude,
    success_probability,
    unitarity_deviation,
)

betas = st.floats(min_value=1e-3, max_value=math.pi / 2 - 1e-3)
phases = st.floats(min_value=-2 * math.pi + 1e-6, max_value=2 * math.pi - 1e-6)


def _random_draw(rng):
    beta = rng.uniform(1e-3, math.pi / 2 - 1e-3)
    theta = rng.uniform(-2 * math.pi + 1e-6, 2 * math.pi - 1e-6)
    phi = rng.uniform(-2 * math.pi + 1e-6, 2 * math.pi - 1e-6)
    return PhaseConfig(phi=phi, theta=theta), Geometry(beta)


# ....................{ domain types }....................

def test_geometry_rejects_out_of_range_beta():
    with pytest.raises(ValueError):
        Geometry(0.0)
    with pytest.raises(ValueError):
        Geometry(2.0)
    with pytest.raises(ValueError):
        Geometry(float('nan'))


def test_geometry_from_counts():
    geom = Geometry.from_counts(4, 1)
    assert geom.beta == pytest.approx(math.pi / 6, abs=1e-15)
    assert (geom.n_items, geom.n_marked) == (4, 1)
    assert Geometry.from_counts(8, 8).beta == pytest.approx(math.pi / 2)


def test_geometry_from_marked_validates_indices():
    assert Geometry.from_marked(16, [3, 3, 7]).n_marked == 2
    with pytest.raises(ValueError):
        Geometry.from_marked(4, [4])
    with pytest.raises(ValueError):
        Geometry.from_marked(4, [-1])
    with pytest.raises(ValueError):
        Geometry.from_marked(4, [])


def test_phase_config_validation_and_matching():
    with pytest.raises(ValueError):
        PhaseConfig(phi=float('inf'), theta=1.0)
    with pytest.raises(ValueError):
        PhaseConfig(phi=0.0, theta=2 * math.pi)
    assert PhaseConfig(phi=-1.2, theta=1.2).is_matched(-1)
    assert PhaseConfig(phi=1.2, theta=1.2).is_matched(1)
    assert not PhaseConfig(phi=0.6, theta=1.2).is_matched(1)


# ....................{ constructors }....................

def test_i_tau_examples():
    geom = Geometry(1.0)
    assert_allclose(build_i_tau(PhaseConfig(0.0, 0.0), geom), IDENTITY, atol=1e-15)
    assert_allclose(build_i_tau(PhaseConfig(math.pi, 0.0), geom), np.diag([-1.0, 1.0]), atol=1e-15)
    quarter = build_i_tau(PhaseConfig(math.pi / 2, 0.0), geom)
    assert_allclose(quarter, np.diag([1j, 1.0]), atol=1e-15)
    assert unitarity_deviation(quarter) < 1e-15


def test_i_s_examples():
    assert_allclose(build_i_s(PhaseConfig(0.0, 0.0), Geometry(0.7)), -IDENTITY, atol=1e-15)
    assert_allclose(build_i_s(PhaseConfig(0.0, math.pi), Geometry(math.pi / 2)),
                    np.diag([1.0, -1.0]), atol=1e-15)
    i_s = build_i_s(PhaseConfig(0.0, math.pi), Geometry(math.pi / 6))
    expected = np.array([[-0.5, math.sqrt(3) / 2], [math.sqrt(3) / 2, 0.5]])
    assert_allclose(i_s, expected, atol=1e-15)
    assert unitarity_deviation(i_s) < 1e-15


def test_block_examples():
    assert_allclose(build_block(PhaseConfig(0.0, 0.0), Geometry(0.4)), IDENTITY, atol=1e-15)
    assert_allclose(build_block(PhaseConfig(-1.1, 2.3), Geometry(math.pi / 2)), IDENTITY, atol=1e-13)
    block = build_block(PhaseConfig(-math.pi, math.pi), Geometry(1.0))
    assert block[0, 0].real == pytest.approx(-0.6536436, abs=1e-7)
    assert block[1, 1].real == pytest.approx(-0.6536436, abs=1e-7)


@settings(max_examples=300, deadline=None)
@given(beta=betas, phi=phases, theta=phases)
def test_every_builder_is_unitary(beta, phi, theta):
    geom = Geometry(beta)
    ph = PhaseConfig(phi=phi, theta=theta)
    for op in (build_i_tau(ph, geom), build_i_s(ph, geom), build_g(ph, geom),
               build_block(ph, geom), build_a_even(5, ph, geom), build_a_odd(3, ph, geom),
               build_g_power(4, ph, geom)):
        assert unitarity_deviation(op) < 1e-12


@settings(max_examples=300, deadline=None)
@given(beta=betas, phi=phases, theta=phases)
def test_block_determinant_is_one(beta, phi, theta):
    det = np.linalg.det(build_block(PhaseConfig(phi=phi, theta=theta), Geometry(beta)))
    assert abs(det - 1.0) < 1e-12


@settings(max_examples=300, deadline=None)
@given(beta=betas, phi=phases, theta=phases)
def test_block_closed_form_matches_product(beta, phi, theta):
    ph, geom = PhaseConfig(phi=phi, theta=theta), Geometry(beta)
    assert_allclose(block_closed_form(ph, geom), build_block(ph, geom), atol=1e-12)


def test_unitarity_over_random_draws():
    rng = np.random.default_rng(101)
    for _ in range(10_000):
        ph, geom = _random_draw(rng)
        for op in (build_i_tau(ph, geom), build_i_s(ph, geom), build_g(ph, geom),
                   build_block(ph, geom), build_a_even(5, ph, geom), build_a_odd(3, ph, geom),
                   build_g_power(4, ph, geom)):
            assert unitarity_deviation(op) < 1e-12


def test_block_determinant_over_random_draws():
    rng = np.random.default_rng(202)
    for _ in range(10_000):
        ph, geom = _random_draw(rng)
        assert abs(np.linalg.det(build_block(ph, geom)) - 1.0) < 1e-12


def test_block_closed_form_over_random_draws():
    rng = np.random.default_rng(303)
    for _ in range(10_000):
        ph, geom = _random_draw(rng)
        assert np.max(np.abs(block_closed_form(ph, geom) - build_block(ph, geom))) < 1e-12


# ....................{ spectral data }....................

def test_spectral_anchor():
    spec = spectral(PhaseConfig(-math.pi, math.pi), Geometry(1.0))
    assert spec.w == pytest.approx(2 * math.pi - 4, abs=1e-12)
    assert spec.r == pytest.approx(0.41615, abs=1e-5)
    assert spec.gamma == pytest.approx(-math.pi / 2, abs=1e-12)


def test_spectral_rejects_degenerate_rotation():
    with pytest.raises(DegenerateSpectrum):
        spectral(PhaseConfig(0.0, 0.0), Geometry(1.0))


def test_spectral_identities_over_random_draws():
    rng = np.random.default_rng(20240101)
    checked = 0
    for _ in range(10_000):
        ph, geom = _random_draw(rng)
        try:
            spec = spectral(ph, geom)
        except DegenerateSpectrum:
            continue
        checked += 1
        half = 0.5 * ph.theta
        sin_2b = math.sin(2 * geom.beta)
        cos_w = 1 - 2 * math.sin(half) ** 2 * math.sin(0.5 * ph.phi) ** 2 * sin_2b ** 2
        assert abs(math.cos(spec.w) - cos_w) < 1e-13
        polar = complex(math.cos(half), math.sin(half) * math.cos(2 * geom.beta))
        assert abs(spec.r * np.exp(1j * spec.gamma) - polar) < 1e-13
        a = math.sin(half) ** 2 * math.sin(ph.phi) * sin_2b ** 2
        b = 2 * spec.r * math.sin(half) * math.sin(0.5 * ph.phi) * sin_2b
        assert abs(math.sin(spec.w) ** 2 - (a * a + b * b)) < 1e-12
        ell = 2 * math.sin(spec.w) * (math.sin(spec.w) + a)
        assert abs(spec.ell - ell) < 1e-12
        assert math.cos(spec.x) >= 0.0
    assert checked > 9_000


def test_eigenvector_residuals():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        ph, geom = _random_draw(rng)
        try:
            spec = spectral(ph, geom)
        except DegenerateSpectrum:
            continue
        if spec.w < 1e-6:
            continue
        block = build_block(ph, geom)
        assert np.max(np.abs(block @ spec.vec_plus - spec.eig_plus * spec.vec_plus)) < 1e-10
        assert np.max(np.abs(block @ spec.vec_minus - spec.eig_minus * spec.vec_minus)) < 1e-10


# ....................{ members }....................

def test_a_even_small_n():
    ph, geom = PhaseConfig(-2.0, 2.0), Geometry(0.6)
    assert_allclose(build_a_even(0, ph, geom), IDENTITY)
    assert_allclose(build_a_even(1, ph, geom), build_block(ph, geom), atol=1e-12)
    with pytest.raises(ValueError):
        build_a_even(-1, ph, geom)


def test_a_even_matches_matrix_power():
    rng = np.random.default_rng(11)
    for _ in range(100):
        ph, geom = _random_draw(rng)
        for n in range(65):
            diff = np.linalg.norm(build_a_even(n, ph, geom) - block_power(n, ph, geom))
            assert diff < 1e-10


def test_a_even_degenerate_spectrum_falls_back_to_product():
    ph, geom = PhaseConfig(0.0, 0.0), Geometry(0.9)
    assert_allclose(build_a_even(3, ph, geom), IDENTITY, atol=1e-15)


def test_a_odd_and_g_power_examples():
    ph, geom = PhaseConfig(0.8, 0.8), Geometry(0.3)
    assert_allclose(build_a_odd(0, ph, geom), build_g(ph, geom), atol=1e-15)
    assert_allclose(build_g_power(1, ph, geom), build_a_odd(0, ph, geom), atol=1e-15)
    with pytest.raises(ValueError):
        build_g_power(0, ph, geom)

    four_items = Geometry(math.pi / 6)
    classic = PhaseConfig(math.pi, math.pi)
    assert abs(success_amplitude(build_a_odd(0, classic, four_items), four_items)) == pytest.approx(1.0, abs=1e-12)
    assert success_probability(build_g_power(1, classic, four_items), four_items) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize('sign', [1.0, -1.0])
def test_single_matched_iterate_at_root_phase(sign):
    # sin(theta/2) = 1/(2 sin beta) zeroes the residual after one G
    geom = Geometry(1.0)
    theta = math.pi + sign * (math.pi - 2 * math.asin(1 / (2 * math.sin(1.0))))
    assert math.pi - 2 * math.asin(1 / (2 * math.sin(1.0))) == pytest.approx(1.8688, abs=5e-3)
    ph = PhaseConfig(theta, theta)
    assert success_probability(build_a_odd(0, ph, geom), geom) == pytest.approx(1.0, abs=1e-9)
    assert success_probability(build_g_power(1, ph, geom), geom) == pytest.approx(1.0, abs=1e-9)


def test_even_matching_keeps_residual_real():
    rng = np.random.default_rng(3)
    for _ in range(200):
        beta = rng.uniform(0.01, 1.55)
        theta = rng.uniform(0.05, 2 * math.pi - 0.05)
        ph, geom = PhaseConfig(-theta, theta), Geometry(beta)
        for n in range(51):
            assert abs(residual_amplitude(build_a_even(n, ph, geom), geom).imag) < 1e-10


def _collinear(values, tol):
    u0 = values[0]
    return all(abs((u * np.conj(u0)).imag) < tol * abs(u) * abs(u0) for u in values)


def test_odd_matching_residuals_are_collinear():
    rng = np.random.default_rng(5)
    for _ in range(200):
        beta = rng.uniform(0.01, 1.55)
        theta = rng.uniform(0.05, 2 * math.pi - 0.05)
        ph, geom = PhaseConfig(theta, theta), Geometry(beta)
        values = [residual_amplitude(build_a_odd(n, ph, geom), geom) for n in range(51)]
        if abs(values[0]) > 1e-8:
            assert _collinear(values, 1e-10)


def test_mismatched_phases_break_collinearity():
    rng = np.random.default_rng(9)
    failures = 0
    for _ in range(100):
        beta = rng.uniform(0.05, 1.5)
        theta = rng.uniform(0.3, 2 * math.pi - 0.3)
        ph, geom = PhaseConfig(theta / 2, theta), Geometry(beta)
        values = [residual_amplitude(build_a_odd(n, ph, geom), geom) for n in range(11)]
        if not _collinear(values, 1e-4):
            failures += 1
    assert failures >= 95


# ....................{ special-unitary powers }....................

def test_su2_power_reproduces_integer_powers():
    ph, geom = PhaseConfig(1.9, 1.9), Geometry(0.45)
    rotation = normalized_grover(ph, geom)
    assert abs(np.linalg.det(rotation) - 1.0) < 1e-12
    for n in (1, 2, 5):
        assert_allclose(su2_power(rotation, n), np.linalg.matrix_power(rotation, n), atol=1e-12)
    assert_allclose(su2_power(rotation, 0.0), IDENTITY, atol=1e-15)


def test_normalized_grover_angle_on_matched_manifold():
    beta, theta = 0.7, 2.4
    rotation = normalized_grover(PhaseConfig(theta, theta), Geometry(beta))
    expected = 2 * math.asin(math.sin(theta / 2) * math.sin(beta))
    assert su2_angle(rotation) == pytest.approx(expected, abs=1e-12)


def test_su2_power_rejects_degenerate_rotation():
    with pytest.raises(DegenerateSpectrum):
        su2_power(IDENTITY, 0.5)


def test_continuous_even_member_agrees_at_integers():
    ph, geom = PhaseConfig(-2.2, 2.2), Geometry(0.35)
    for n in (1, 3, 8):
        assert_allclose(build_a_even_continuous(float(n), ph, geom),
                        build_a_even(n, ph, geom), atol=1e-12)


def test_initial_state_is_normalized():
    s = initial_state(Geometry(0.3))
    assert np.vdot(s, s).real == pytest.approx(1.0, abs=1e-15)
