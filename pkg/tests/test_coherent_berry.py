import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from largespin.coherent_berry import (
    SphereDirection,
    SpherePath,
    berry_connection_analytic,
    berry_connection_numeric,
    coherent_state,
    coherent_state_reference,
    direction_from_vector,
    equator_loop,
    expectation_spin,
    geodesic_polygon,
    latitude_loop,
    wilson_loop_phase,
)
from largespin.errors import DegenerateOverlap, NonNormalizedState, PolarSingularity
from largespin.spin_algebra import spin_operators

from oracles import lhuilier_solid_angle, taylor_expm


def test_north_pole_is_top_state():
    psi = coherent_state(16, SphereDirection(0.0, 0.0))
    assert abs(psi[0]) == pytest.approx(1.0, abs=1e-14)


def test_spin_half_expectation_at_equator():
    # with this convention azimuth runs from +y towards +x
    np.testing.assert_allclose(expectation_spin(coherent_state(1, SphereDirection(math.pi / 2, 0.0))), [0, 0.5, 0], atol=1e-14)
    np.testing.assert_allclose(
        expectation_spin(coherent_state(1, SphereDirection(math.pi / 2, math.pi / 2))), [0.5, 0, 0], atol=1e-14
    )


@pytest.mark.parametrize("two_j", [1, 2, 15, 16])
@pytest.mark.parametrize("theta,phi", [(0.3, 0.1), (1.2, 2.5), (math.pi / 2, 4.0), (2.9, 5.9)])
def test_expectation_is_j_times_direction(two_j, theta, phi):
    d = SphereDirection(theta, phi)
    np.testing.assert_allclose(expectation_spin(coherent_state(two_j, d)), two_j / 2 * d.unit_vector(), atol=1e-12)


@pytest.mark.parametrize("two_j", [3, 16])
def test_fast_state_matches_taylor_oracle(two_j):
    jx, _, jz = spin_operators(two_j)
    top = np.zeros(two_j + 1, dtype=complex)
    top[0] = 1
    th, ph = 0.7, 1.9
    ref = taylor_expm(1j * ph * jz) @ taylor_expm(1j * th * jx) @ taylor_expm(-1j * ph * jz) @ top
    d = SphereDirection(th, ph)
    np.testing.assert_allclose(coherent_state(two_j, d), ref, atol=1e-11)
    np.testing.assert_allclose(coherent_state_reference(two_j, d), ref, atol=1e-11)


def test_non_normalized_rejected():
    with pytest.raises(NonNormalizedState):
        expectation_spin(np.array([1.0, 1.0]))


def test_direction_validation_and_wrap():
    with pytest.raises(ValueError):
        SphereDirection(-0.1, 0)
    assert SphereDirection(1.0, 2 * math.pi + 0.5).phi == pytest.approx(0.5)


def test_direction_roundtrip():
    d = SphereDirection(1.1, 4.4)
    back = direction_from_vector(d.unit_vector())
    assert back.theta == pytest.approx(d.theta)
    assert back.phi == pytest.approx(d.phi)


@pytest.mark.parametrize("two_j,theta", [(15, math.pi / 3), (16, 0.4), (1, 2.0)])
def test_connection_numeric_matches_analytic(two_j, theta):
    a_t, a_p = berry_connection_numeric(two_j, SphereDirection(theta, 0.7))
    e_t, e_p = berry_connection_analytic(two_j, theta)
    assert a_t == pytest.approx(e_t, abs=1e-6)
    assert a_p == pytest.approx(e_p, rel=1e-6)


def test_connection_frozen_value():
    # J = 15/2 at theta = pi/3: J (1 - 1/2) / (sqrt3/2) = 2.5 sqrt3
    assert berry_connection_analytic(15, math.pi / 3)[1] == pytest.approx(2.5 * math.sqrt(3), rel=1e-14)


def test_connection_near_pole_raises():
    with pytest.raises(PolarSingularity):
        berry_connection_numeric(16, SphereDirection(1e-4, 0.0))


@pytest.mark.parametrize("two_j", [1, 2, 15, 16])
def test_equator_loop_sign(two_j):
    w = wilson_loop_phase(two_j, equator_loop(2000))
    assert abs(w - (-1) ** two_j) < 1e-9


@pytest.mark.parametrize("theta", [0.4, 1.0, 2.2])
def test_latitude_loop_solid_angle(theta):
    w = wilson_loop_phase(16, latitude_loop(theta, 4000))
    omega = 2 * math.pi * (1 - math.cos(theta))
    assert abs(w - np.exp(-1j * 8 * omega)) < 1e-5


@pytest.mark.parametrize("two_j", [1, 2, 15, 16])
def test_small_triangle_against_lhuilier(two_j):
    tri = [np.array(v, dtype=float) for v in ([0, 0, 1], [0.2, 0, 1], [0, 0.2, 1])]
    tri = [t / np.linalg.norm(t) for t in tri]
    omega = lhuilier_solid_angle(*tri)
    sign = math.copysign(1.0, np.linalg.det(np.array(tri)))
    w = wilson_loop_phase(two_j, geodesic_polygon(tri, 300))
    assert abs(w - np.exp(1j * sign * two_j / 2 * omega)) < 1e-6
    # reversing the orientation conjugates the phase
    w_rev = wilson_loop_phase(two_j, geodesic_polygon(tri[::-1], 300))
    assert abs(w_rev - np.conj(w)) < 1e-9


def test_octant_solid_angle():
    tri = [np.eye(3)[i] for i in range(3)]
    assert lhuilier_solid_angle(*tri) == pytest.approx(math.pi / 2)
    w = wilson_loop_phase(2, geodesic_polygon(tri, 2000))
    sign = math.copysign(1.0, np.linalg.det(np.array(tri)))
    assert abs(w - np.exp(1j * sign * math.pi / 2)) < 1e-5


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(0, 2 * math.pi), min_size=40, max_size=40))
def test_gauge_invariance(phases):
    loop = latitude_loop(1.0, 40)
    states = [coherent_state(4, p) for p in loop.points]
    regauged = [np.exp(1j * g) * s for g, s in zip(phases, states)]
    assert abs(wilson_loop_phase(4, loop, states) - wilson_loop_phase(4, loop, regauged)) < 1e-12


def test_antipodal_points_degenerate():
    loop = SpherePath((SphereDirection(0, 0), SphereDirection(math.pi, 0), SphereDirection(math.pi / 2, 0)))
    with pytest.raises(DegenerateOverlap):
        wilson_loop_phase(16, loop)


def test_open_path_rejected():
    path = SpherePath((SphereDirection(1, 0), SphereDirection(1, 1), SphereDirection(1, 2)), closed=False)
    with pytest.raises(ValueError):
        wilson_loop_phase(2, path)
