"""Spin coherent states, their Berry connection and Wilson-loop phases.

Coherent states are built exactly as

    psi(theta, phi) = exp(i J_z phi) exp(i J_x theta) exp(-i J_z phi) |m = J>

With this phase convention the azimuth is measured from the +y axis towards
+x, i.e. ``<J> = J (sin t sin p, sin t cos p, cos t)``, and the connection
``A = <psi| i grad |psi>`` takes the north-pole gauge form
``A_theta = 0``, ``A_phi = J (1 - cos t) / sin t``.

Wilson loops are overlap products ``prod <psi_k|psi_k+1>``; a loop traversed
with increasing ``phi`` around the north pole returns ``exp(-i J Omega)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOverlap, NonNormalizedState, PolarSingularity
from .linalg_core import exp_i_hermitian, hermitian_eig
from .spin_algebra import check_two_j, spin_operators

FD_STEP = 1e-4
POLE_GUARD = 1e-3
MIN_OVERLAP = 1e-6


@dataclass(frozen=True)
class SphereDirection:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "phi", self.phi % (2 * math.pi))

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.sin(self.phi), st * math.cos(self.phi), math.cos(self.theta)])


@dataclass(frozen=True)
class SpherePath:
    points: tuple[SphereDirection, ...]
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) < 2:
            raise ValueError("a path needs at least two points")


class _Rotations:
    """Eigendecompositions of J_x and J_z cached per spin."""

    _cache: dict[int, "_Rotations"] = {}

    def __init__(self, two_J):
        jx, _, jz = spin_operators(two_J)
        sx = hermitian_eig(jx)
        self.x_vals, self.x_vecs = sx.values, sx.vectors
        self.z_diag = np.real(np.diag(jz))
        self.top = np.zeros(two_J + 1, dtype=np.complex128)
        self.top[0] = 1.0

    @classmethod
    def get(cls, two_J):
        if two_J not in cls._cache:
            cls._cache[two_J] = cls(two_J)
        return cls._cache[two_J]

    def state(self, theta, phi):
        j = (len(self.z_diag) - 1) / 2
        v = self.top * np.exp(-1j * j * phi)
        v = self.x_vecs @ (np.exp(1j * theta * self.x_vals) * (self.x_vecs.conj().T @ v))
        return np.exp(1j * self.z_diag * phi) * v


def coherent_state(two_J: int, direction: SphereDirection) -> np.ndarray:
    """Normalized coherent state pointing along ``direction.unit_vector()``."""
    two_J = check_two_j(two_J)
    return _Rotations.get(two_J).state(direction.theta, direction.phi)


def coherent_state_reference(two_J: int, direction: SphereDirection) -> np.ndarray:
    """Same state assembled from three full matrix exponentials (slow, for cross-checks)."""
    jx, _, jz = spin_operators(two_J)
    top = np.zeros(two_J + 1, dtype=np.complex128)
    top[0] = 1.0
    th, ph = direction.theta, direction.phi
    return exp_i_hermitian(jz, ph) @ exp_i_hermitian(jx, th) @ exp_i_hermitian(jz, -ph) @ top


def expectation_spin(state) -> np.ndarray:
    """<J> for a normalized state of dimension 2J+1."""
    psi = np.asarray(state, dtype=np.complex128)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-8:
        raise NonNormalizedState(f"state norm {norm:.12g} differs from 1")
    ops = spin_operators(len(psi) - 1)
    vals = np.array([np.vdot(psi, op @ psi) for op in ops])
    if np.max(np.abs(vals.imag)) > 1e-12:
        raise ArithmeticError(f"non-real spin expectation {vals}")
    return vals.real


def _connection_component(f, x):
    # i <psi| d psi>, central differences with one Richardson level
    h = FD_STEP
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    deriv = (4 * d2 - d1) / 3
    val = 1j * np.vdot(f(x), deriv)
    if abs(val.imag) > 1e-8:
        raise ArithmeticError(f"connection has imaginary residue {val.imag:.3e}")
    return val.real


def berry_connection_numeric(two_J: int, direction: SphereDirection) -> tuple[float, float]:
    """Numerical (A_theta, A_phi) of the coherent-state family at ``direction``."""
    two_J = check_two_j(two_J)
    th, ph = direction.theta, direction.phi
    if th < POLE_GUARD or th > math.pi - POLE_GUARD:
        raise PolarSingularity(f"theta={th} too close to a pole")
    rot = _Rotations.get(two_J)
    a_theta = _connection_component(lambda t: rot.state(t, ph), th)
    a_phi = _connection_component(lambda p: rot.state(th, p), ph) / math.sin(th)
    return a_theta, a_phi


def berry_connection_analytic(two_J: int, theta: float) -> tuple[float, float]:
    j = check_two_j(two_J) / 2
    return 0.0, j * (1 - math.cos(theta)) / math.sin(theta)


def wilson_loop_phase(two_J: int, path: SpherePath, states=None) -> complex:
    """Unit-modulus product of consecutive overlaps around a closed path.

    ``states`` may supply precomputed (possibly re-phased) states for the
    path points; by default coherent states are used.
    """
    two_J = check_two_j(two_J)
    if not path.closed:
        raise ValueError("Wilson loop requires a closed path")
    if len(path.points) < 3:
        raise ValueError("a closed loop needs at least three points")
    if states is None:
        rot = _Rotations.get(two_J)
        states = [rot.state(p.theta, p.phi) for p in path.points]
    st = np.asarray(states)
    ov = np.einsum("ij,ij->i", st.conj(), np.roll(st, -1, axis=0))
    mags = np.abs(ov)
    k = int(np.argmin(mags))
    if mags[k] < MIN_OVERLAP:
        raise DegenerateOverlap(f"overlap {mags[k]:.3e} between points {k} and {k + 1} too small")
    # accumulate unit phases in path order
    total = 1.0 + 0.0j
    for z in ov / mags:
        total *= z
    return total / abs(total)


def equator_loop(n_segments: int) -> SpherePath:
    phis = 2 * math.pi * np.arange(n_segments) / n_segments
    return SpherePath(tuple(SphereDirection(math.pi / 2, float(p)) for p in phis), closed=True)


def latitude_loop(theta: float, n_segments: int) -> SpherePath:
    phis = 2 * math.pi * np.arange(n_segments) / n_segments
    return SpherePath(tuple(SphereDirection(theta, float(p)) for p in phis), closed=True)


def direction_from_vector(v) -> SphereDirection:
    """Inverse of :meth:`SphereDirection.unit_vector`."""
    x, y, z = np.asarray(v, dtype=float) / np.linalg.norm(v)
    return SphereDirection(math.acos(max(-1.0, min(1.0, z))), math.atan2(x, y))


def geodesic_polygon(vertices, per_edge: int) -> SpherePath:
    """Closed path along great-circle arcs through the given unit vectors."""
    verts = [np.asarray(v, dtype=float) / np.linalg.norm(v) for v in vertices]
    pts = []
    for a, b in zip(verts, verts[1:] + verts[:1]):
        omega = math.acos(max(-1.0, min(1.0, float(a @ b))))
        for s in np.arange(per_edge) / per_edge:
            v = (math.sin((1 - s) * omega) * a + math.sin(s * omega) * b) / math.sin(omega)
            pts.append(direction_from_vector(v))
    return SpherePath(tuple(pts), closed=True)
