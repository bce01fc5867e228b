"""Spin-J operator matrices in the |J, m> basis and rare-earth ion presets.

Spins are always passed as ``two_J`` (an integer) so that the integer /
half-integer split is an exact parity test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidCoupling, InvalidParams, InvalidSpin, UnknownIon


@dataclass(frozen=True)
class IonParams:
    two_J: int
    two_S: int
    two_L: int
    g: float
    label: str = ""

    def __post_init__(self):
        check_two_j(self.two_J)
        if self.two_S < 0 or self.two_L < 0:
            raise InvalidParams("two_S and two_L must be non-negative")
        if not self.g > 0:
            raise InvalidParams(f"Lande g must be positive, got {self.g}")

    @property
    def J(self) -> float:
        return self.two_J / 2

    @property
    def half_integer(self) -> bool:
        return is_half_integer(self.two_J)


def check_two_j(two_J) -> int:
    if isinstance(two_J, bool) or int(two_J) != two_J or two_J < 1:
        raise InvalidSpin(f"two_J must be a positive integer, got {two_J!r}")
    return int(two_J)


def is_half_integer(two_J: int) -> bool:
    return check_two_j(two_J) % 2 == 1


def m_values(two_J: int) -> np.ndarray:
    """Magnetic quantum numbers J, J-1, ..., -J (basis order)."""
    two_J = check_two_j(two_J)
    return (two_J - 2 * np.arange(two_J + 1)) / 2.0


@lru_cache(maxsize=64)
def _operators(two_J: int):
    j = two_J / 2.0
    m = m_values(two_J)
    # <m+1|J+|m> sits above the diagonal since m decreases down the basis
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(np.complex128)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(np.complex128)
    for op in (jx, jy, jz):
        op.setflags(write=False)
    return jx, jy, jz


def spin_operators(two_J: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (J_x, J_y, J_z) as read-only complex (2J+1)x(2J+1) arrays."""
    return _operators(check_two_j(two_J))


def casimir(two_J: int) -> np.ndarray:
    jx, jy, jz = spin_operators(two_J)
    return jx @ jx + jy @ jy + jz @ jz


def lande_g(two_S: int, two_L: int, two_J: int) -> float:
    """Landé factor for LS coupling, g = 3/2 + [S(S+1) - L(L+1)] / [2J(J+1)]."""
    check_two_j(two_J)
    if not abs(two_L - two_S) <= two_J <= two_L + two_S or (two_L + two_S - two_J) % 2:
        raise InvalidCoupling(f"J={two_J}/2 not reachable from L={two_L}/2, S={two_S}/2")
    S, L, J = Fraction(two_S, 2), Fraction(two_L, 2), Fraction(two_J, 2)
    return float(Fraction(3, 2) + (S * (S + 1) - L * (L + 1)) / (2 * J * (J + 1)))


# Hund's-rule ground multiplets
_PRESETS = {
    "Ho3+": (16, 4, 12),
    "Dy3+": (15, 5, 10),
}


def ion_preset(name: str) -> IonParams:
    try:
        two_J, two_S, two_L = _PRESETS[name]
    except KeyError:
        raise UnknownIon(f"unknown ion {name!r}; known: {', '.join(_PRESETS)}") from None
    return IonParams(two_J, two_S, two_L, lande_g(two_S, two_L, two_J), name)


def ion_names() -> list[str]:
    return list(_PRESETS)
