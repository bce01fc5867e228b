"""Planar-rotor reduction of the crystal-field problem.

The in-plane angle phi is the only dynamical variable, with J_x = J cos phi,
J_y = J sin phi and J_z = -i d/dphi + delta. The Berry connection enters as
the momentum offset ``delta`` (0 for integer J, 1/2 for half-integer J), so
the problem is solved exactly in the plane-wave basis exp(i (m + delta) phi):

    <m|H|m>     = (a/2)(m + delta)^2 - h_z (m + delta) - (3/2) b J^4
    <m+-4|H|m>  = -(b/4) J^4
    <m+1|H|m>   = -(h J / 2) exp(-i phi_h),   <m-1|H|m> = conjugate

The diagonal equals (a/2)(m + delta - h_z/a)^2 - h_z^2/(2a): an axial field
shifts the connection by -h_z/a on top of a smooth -h_z^2/(2a) envelope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cef_full import ZERO_FIELD, FieldConfig, ModelParams
from .errors import InvalidBasis, NotConverged
from .linalg_core import Spectrum, cluster_levels, hermitian_eig

CONV_RTOL = 1e-9
CONV_LEVELS = 8
M_MAX_CAP = 4096


@dataclass(frozen=True)
class RotorBasis:
    delta: float
    m_max: int

    def __post_init__(self):
        if self.delta not in (0, 0.5):
            raise InvalidBasis(f"delta must be 0 or 1/2, got {self.delta}")
        if int(self.m_max) != self.m_max or self.m_max < 8:
            raise InvalidBasis(f"m_max must be an integer >= 8, got {self.m_max}")

    @classmethod
    def for_params(cls, p: ModelParams, m_max: int):
        return cls(0.5 if p.ion.half_integer else 0.0, m_max)

    def momenta(self) -> np.ndarray:
        return np.arange(-self.m_max, self.m_max + 1)


def rotor_matrix(p: ModelParams, f: FieldConfig, basis: RotorBasis, block: int | None = None) -> np.ndarray:
    """Hamiltonian in the plane-wave basis (optionally one C4 sector ``m % 4 == block``)."""
    if (basis.delta == 0.5) != p.ion.half_integer:
        raise InvalidBasis(f"delta={basis.delta} inconsistent with two_J={p.ion.two_J}")
    J = p.J
    m = basis.momenta()
    k = m + basis.delta
    n = len(m)
    bj4 = p.b * J**4
    h = np.zeros((n, n), dtype=np.complex128)
    h[np.arange(n), np.arange(n)] = 0.5 * p.a * k**2 - f.hz * k - 1.5 * bj4
    i4 = np.arange(n - 4)
    h[i4, i4 + 4] = h[i4 + 4, i4] = -0.25 * bj4
    if f.h != 0.0:
        i1 = np.arange(n - 1)
        c = -0.5 * f.h * J * np.exp(-1j * f.phi_h)
        h[i1 + 1, i1] = c
        h[i1, i1 + 1] = np.conj(c)
    if block is not None:
        if f.h != 0.0:
            raise ValueError("C4 sectors only decouple at zero in-plane field")
        sel = np.flatnonzero(m % 4 == block % 4)
        h = h[np.ix_(sel, sel)]
    return h


def _lowest(p, f, basis, block, count):
    vals = hermitian_eig(rotor_matrix(p, f, basis, block), vectors=False).values
    return vals[:count]


def _convergence_error(lo, hi):
    k = len(lo)
    scale = max(hi[k - 1] - hi[0], 1.0)
    return float(np.max(np.abs(lo - hi[:k]))) / scale


def choose_truncation(p: ModelParams, f: FieldConfig = ZERO_FIELD, block: int | None = None) -> int:
    """Smallest m_max in the doubling ladder max(2J, 16), 2x, 4x, ... that is converged.

    Converged means doubling m_max moves none of the lowest eight levels by
    more than 1e-9 of their spread (spread floored at one energy unit).
    """
    return _truncate(p, f, block)[0]


_TRUNC_CACHE: dict = {}


def _truncate(p, f, block):
    key = (p, f, block)
    if key in _TRUNC_CACHE:
        return _TRUNC_CACHE[key]
    delta = 0.5 if p.ion.half_integer else 0.0
    m_max = max(int(np.ceil(p.J * 2)), 16)
    count = CONV_LEVELS
    lo = _lowest(p, f, RotorBasis(delta, m_max), block, count)
    while True:
        nxt = 2 * m_max
        if nxt > M_MAX_CAP:
            raise NotConverged(f"rotor truncation exceeded m_max cap {M_MAX_CAP}")
        hi = _lowest(p, f, RotorBasis(delta, nxt), block, count)
        err = _convergence_error(lo[: min(count, len(lo))], hi)
        if err <= CONV_RTOL:
            break
        m_max, lo = nxt, hi
    if len(_TRUNC_CACHE) > 512:
        _TRUNC_CACHE.clear()
    _TRUNC_CACHE[key] = (m_max, err)
    return m_max, err


def rotor_spectrum(
    p: ModelParams,
    f: FieldConfig = ZERO_FIELD,
    basis: RotorBasis | None = None,
    *,
    block: int | None = None,
    vectors: bool = False,
    check: bool = True,
) -> Spectrum:
    """Eigenvalues of the rotor Hamiltonian.

    Without ``basis`` the truncation comes from :func:`choose_truncation`.
    With an explicit basis and ``check`` the result is compared against the
    doubled truncation and :class:`NotConverged` is raised on a miss.
    """
    if basis is None:
        basis = RotorBasis.for_params(p, choose_truncation(p, f, block))
    elif check:
        lo = _lowest(p, f, basis, block, CONV_LEVELS)
        hi = _lowest(p, f, RotorBasis(basis.delta, 2 * basis.m_max), block, CONV_LEVELS)
        err = _convergence_error(lo, hi)
        if err > CONV_RTOL:
            raise NotConverged(f"m_max={basis.m_max} not converged (relative shift {err:.2e})")
    return hermitian_eig(rotor_matrix(p, f, basis, block), vectors=vectors)


def rotor_sector_spectra(p: ModelParams, f: FieldConfig, basis: RotorBasis) -> list[np.ndarray]:
    """Eigenvalues per C4 sector (m mod 4 = 0..3) at zero in-plane field."""
    return [hermitian_eig(rotor_matrix(p, f, basis, blk), vectors=False).values for blk in range(4)]


def potential(p: ModelParams, phi) -> np.ndarray:
    """Crystal-field potential -(b/2) J^4 (3 + cos 4 phi)."""
    return -0.5 * p.b * p.J**4 * (3.0 + np.cos(4.0 * np.asarray(phi)))


def barrier_top(p: ModelParams) -> float:
    """Potential maximum -b J^4, i.e. b J^4 above the well bottoms."""
    return -p.b * p.J**4


def levels_below_barrier(p: ModelParams, basis: RotorBasis | None = None) -> int:
    s = rotor_spectrum(p, ZERO_FIELD, basis)
    return int(np.sum(s.values < barrier_top(p)))


def quadruplet_clusters(values, rtol: float = 1e-6) -> list[int]:
    """Multiplicities within the lowest four levels, clustered relative to their own spread."""
    q = np.asarray(values[:4], dtype=float)
    spread = q[-1] - q[0]
    if spread <= 0:
        return [4]
    return [mult for _, mult in cluster_levels(q, rtol)]
