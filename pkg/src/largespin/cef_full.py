"""Exact diagonalization of the tetragonal crystal-field Hamiltonian.

    H = (a/2) J_z^2 - 2b (J_x^4 + J_y^4) - h (J_x cos phi_h + J_y sin phi_h) - h_z J_z

in the full (2J+1)-dimensional multiplet. Fields are effective fields
(g mu_B B absorbed), energies in the units of ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams
from .linalg_core import Spectrum, cluster_levels, hermitian_eig
from .spin_algebra import IonParams, spin_operators

CALIBRATION_RATIO = math.pi**2 / 8


@dataclass(frozen=True)
class ModelParams:
    ion: IonParams
    a: float
    b: float

    def __post_init__(self):
        # b = 0 is admitted as the free-ion / free-rotor limit
        if not (self.a > 0 and self.b >= 0) or not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InvalidParams(f"CEF constants need a > 0, b >= 0, got a={self.a}, b={self.b}")

    @property
    def J(self) -> float:
        return self.ion.J

    @classmethod
    def from_ratio(cls, ion: IonParams, a: float = 1.0, ratio: float = CALIBRATION_RATIO):
        """Parameters with b J^2 / a = ratio (default pi^2/8)."""
        return cls(ion, a, ratio * a / ion.J**2)


@dataclass(frozen=True)
class FieldConfig:
    h: float = 0.0
    phi_h: float = 0.0
    hz: float = 0.0

    def __post_init__(self):
        if self.h < 0:
            raise InvalidParams(f"in-plane field magnitude must be >= 0, got {self.h}")

    def hbar(self, J: float) -> float:
        return self.h * J

    def hbar_xy(self, J: float) -> tuple[float, float]:
        hb = self.h * J
        return hb * math.cos(self.phi_h), hb * math.sin(self.phi_h)


ZERO_FIELD = FieldConfig()


def build_cef_hamiltonian(p: ModelParams, f: FieldConfig = ZERO_FIELD) -> np.ndarray:
    jx, jy, jz = spin_operators(p.ion.two_J)
    jx2 = jx @ jx
    jy2 = jy @ jy
    h = 0.5 * p.a * (jz @ jz) - 2.0 * p.b * (jx2 @ jx2 + jy2 @ jy2)
    h = h - f.h * (math.cos(f.phi_h) * jx + math.sin(f.phi_h) * jy) - f.hz * jz
    # symmetrize away last-bit roundoff from the matrix products
    return 0.5 * (h + h.conj().T)


def full_spectrum(p: ModelParams, f: FieldConfig = ZERO_FIELD, vectors: bool = False) -> Spectrum:
    return hermitian_eig(build_cef_hamiltonian(p, f), vectors=vectors)


def degeneracy_pattern(s: Spectrum, n_levels: int, rtol: float | None = None) -> list[int]:
    """Multiplicities of the lowest clusters that together hold ``n_levels`` states.

    With ``rtol`` the clusters are recomputed at that relative tolerance
    instead of using the ones stored on the spectrum.
    """
    if n_levels > len(s.values):
        raise ValueError(f"n_levels={n_levels} exceeds dimension {len(s.values)}")
    clusters = s.clusters if rtol is None else cluster_levels(s.values, rtol)
    out = []
    covered = 0
    for _, mult in clusters:
        if covered >= n_levels:
            break
        out.append(mult)
        covered += mult
    return out
