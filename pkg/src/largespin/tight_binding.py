"""Four-site ring model for the lowest quadruplet.

Sites sit at the easy axes phi_l = l pi/2. Hopping between neighbours carries
the Peierls phase alpha = (integral of the connection over a quarter turn),
i.e. 0 for integer and pi/4 for half-integer J, shifted by -pi h_z/(2a) in an
axial field. An in-plane field hbar = hJ acts site-diagonally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, OutOfRegime, UnsupportedAlpha
from .linalg_core import eigvals
from .spin_algebra import is_half_integer

TWO_PI = 2 * math.pi
SMALL_FIELD_LIMIT = 0.05


@dataclass(frozen=True)
class TbModel:
    w: float
    alpha: float = 0.0
    hbar_field: float = 0.0
    phi_h: float = 0.0
    site_count: int = 4

    def __post_init__(self):
        if not self.w > 0:
            raise InvalidParams(f"hopping w must be positive, got {self.w}")
        if self.site_count != 4:
            raise InvalidParams("the ring has exactly four sites")
        object.__setattr__(self, "alpha", self.alpha % TWO_PI)


def peierls_alpha(two_J: int, hz: float = 0.0, a: float = 1.0) -> float:
    if not a > 0:
        raise InvalidParams(f"a must be positive, got {a}")
    base = math.pi / 4 if is_half_integer(two_J) else 0.0
    return (base - math.pi * hz / (2 * a)) % TWO_PI


def site_energies(hbar: float, phi_h: float) -> np.ndarray:
    l = np.arange(4)
    return -hbar * np.cos(l * math.pi / 2 - phi_h)


def tb_hamiltonian(m: TbModel) -> np.ndarray:
    h = np.diag(site_energies(m.hbar_field, m.phi_h)).astype(np.complex128)
    t = -m.w * np.exp(1j * m.alpha)
    for l in range(4):
        h[l, (l + 1) % 4] = t
        h[(l + 1) % 4, l] = np.conj(t)
    return h


def tb_eigenvalues_numeric(m: TbModel) -> np.ndarray:
    return eigvals(tb_hamiltonian(m))


def _sector(alpha: float) -> str:
    if abs(alpha) < 1e-15:
        return "integer"
    if abs(alpha - math.pi / 4) < 1e-15:
        return "half"
    raise UnsupportedAlpha(f"closed forms only exist for alpha in {{0, pi/4}}, got {alpha}")


def tb_eigenvalues_analytic(m: TbModel) -> np.ndarray:
    """Closed-form quadruplet energies for alpha = 0 or pi/4, ascending.

    The smaller inner root is evaluated as (A^2 - r^2)/(A + r) to keep
    accuracy when w or hbar is small.
    """
    sector = _sector(m.alpha)
    w2 = m.w**2
    hb = m.hbar_field
    c, s = math.cos(m.phi_h), math.sin(m.phi_h)
    big = 2 * w2 + hb**2 / 2
    cs2 = (hb * hb * c * s) ** 2  # hbar_x^2 hbar_y^2
    if sector == "integer":
        r = math.sqrt(max(big**2 - cs2, 0.0))
        small = cs2 / (big + r) if big + r > 0 else 0.0
    else:
        r = hb * math.sqrt(max(2 * w2 + hb**2 / 4 - hb**2 * (c * s) ** 2, 0.0))
        small = (4 * w2 * w2 + cs2) / (big + r) if big + r > 0 else 0.0
    hi = math.sqrt(big + r)
    lo = math.sqrt(max(small, 0.0))
    return np.sort(np.array([-hi, -lo, lo, hi]))


def ground_energy_smallfield(m: TbModel, half_integer: bool) -> float:
    if m.hbar_field >= SMALL_FIELD_LIMIT * m.w:
        raise OutOfRegime(f"hbar={m.hbar_field} not << w={m.w} (need hbar < {SMALL_FIELD_LIMIT} w)")
    if half_integer:
        return -math.sqrt(2) * m.w - m.hbar_field / 2
    return -2 * m.w - m.hbar_field**2 / (4 * m.w)


def saturation_levels(hbar: float, phi_h: float) -> np.ndarray:
    """Levels once hopping is negligible (w << hbar << b J^4): moments pinned to the easy axes."""
    c, s = hbar * math.cos(phi_h), hbar * math.sin(phi_h)
    return np.sort(np.array([c, -c, s, -s]))


def momentum_energies(w: float, alpha: float) -> dict[float, float]:
    """Zero-field band E_k = -2w cos(k + alpha) for k in {0, pi/2, pi, -pi/2}."""
    return {k: -2 * w * math.cos(k + alpha) for k in (0.0, math.pi / 2, math.pi, -math.pi / 2)}
