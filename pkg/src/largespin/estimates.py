"""Semiclassical estimates and closed-form response coefficients.

Moments are in units of g mu_B and susceptibilities in (g mu_B)^2 per energy
unit, with fields entering as effective fields h = g mu_B B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cef_full import ModelParams
from .errors import InvalidParams, QuadrupletNotResolved
from .linalg_core import Spectrum

SEPARATION_FACTOR = 5.0


@dataclass(frozen=True)
class ResponseSummary:
    w_extracted: float
    chi_plane: float | None
    chi_axis: float
    moment_plane: float
    moment_axis: float
    curie: bool = False  # in-plane response is a free moment, chi_plane diverges as 1/T


def _check(p: ModelParams):
    if not (p.a > 0 and p.b >= 0):
        raise InvalidParams(f"need a > 0 and b >= 0, got a={p.a}, b={p.b}")


def wkb_exponent(p: ModelParams) -> float:
    """Tunnelling exponent sqrt(2 b J^4 / a); w scales as exp(-exponent)."""
    _check(p)
    return math.sqrt(2 * p.b * p.J**4 / p.a)


def level_count(p: ModelParams) -> float:
    """Semiclassical number of levels below the barrier in all four wells."""
    _check(p)
    return math.sqrt(32 * p.b * p.J**4 / (math.pi**2 * p.a))


def harmonic_spacing(p: ModelParams) -> float:
    """Oscillator quantum at a well bottom, 2 J^2 sqrt(2 a b)."""
    _check(p)
    return 2 * p.J**2 * math.sqrt(2 * p.a * p.b)


def _values(s) -> np.ndarray:
    return np.asarray(s.values if isinstance(s, Spectrum) else s, dtype=float)


def extract_w(s, half_integer: bool) -> float:
    """Tunnelling amplitude from the lowest quadruplet of a spectrum.

    Integer J: (E3 - E0)/4. Half-integer J: (E2 - E0)/(2 sqrt 2).
    """
    v = _values(s)
    if len(v) < 5:
        raise QuadrupletNotResolved(float("nan"), float("nan"))
    width = v[3] - v[0]
    gap = v[4] - v[3]
    if not gap > SEPARATION_FACTOR * width:
        raise QuadrupletNotResolved(width, gap)
    if half_integer:
        return (v[2] - v[0]) / (2 * math.sqrt(2))
    return (v[3] - v[0]) / 4


def fit_w(s, half_integer: bool) -> float:
    """Least-squares w from all four centred levels against the zero-field band pattern."""
    q = _values(s)[:4]
    q = q - q.mean()
    pattern = np.array([-math.sqrt(2)] * 2 + [math.sqrt(2)] * 2) if half_integer else np.array([-2.0, 0.0, 0.0, 2.0])
    return float(q @ pattern / (pattern @ pattern))


def centred_quadruplet(s) -> np.ndarray:
    q = _values(s)[:4]
    return q - q.mean()


def response_coefficients(p: ModelParams, w: float) -> ResponseSummary:
    _check(p)
    if not w > 0:
        raise InvalidParams(f"w must be positive, got {w}")
    J, a = p.J, p.a
    chi_axis = 1 / a - math.pi**2 * w / (2 * a**2)
    if p.ion.half_integer:
        return ResponseSummary(w, None, 1 / a, J / 2, w / (math.sqrt(2) * a), curie=True)
    return ResponseSummary(w, J**2 / (2 * w), chi_axis, 0.0, 0.0)


def saturation_moment(p: ModelParams) -> float:
    return p.J


def curie_susceptibility(moment: float, temperature: float) -> float:
    """Free-moment susceptibility moment^2 / (3T), temperature in energy units."""
    if not temperature > 0:
        raise InvalidParams(f"temperature must be positive, got {temperature}")
    return moment**2 / (3 * temperature)
