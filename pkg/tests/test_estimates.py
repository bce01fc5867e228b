import math

import numpy as np
import pytest

from largespin.cef_full import FieldConfig, ModelParams
from largespin.errors import InvalidParams, QuadrupletNotResolved
from largespin.estimates import (
    centred_quadruplet,
    curie_susceptibility,
    extract_w,
    fit_w,
    harmonic_spacing,
    level_count,
    response_coefficients,
    saturation_moment,
    wkb_exponent,
)
from largespin.planar_rotor import RotorBasis, rotor_spectrum
from largespin.spin_algebra import ion_preset
from largespin.tight_binding import TbModel, tb_eigenvalues_numeric

HO = ion_preset("Ho3+")
DY = ion_preset("Dy3+")
CAL_HO = ModelParams.from_ratio(HO)
CAL_DY = ModelParams.from_ratio(DY)


def test_frozen_calibrated_estimates():
    # b J^2 / a = pi^2/8 at J = 8
    assert wkb_exponent(CAL_HO) == pytest.approx(4 * math.pi, rel=1e-14)
    assert level_count(CAL_HO) == pytest.approx(16.0, rel=1e-14)
    assert harmonic_spacing(CAL_HO) == pytest.approx(8 * math.pi, rel=1e-14)


def test_free_limit_estimates_vanish():
    p = ModelParams(HO, 1.0, 0.0)
    assert wkb_exponent(p) == 0.0 and level_count(p) == 0.0


@pytest.mark.parametrize("w,half", [(0.01, False), (0.003, True)])
def test_extract_w_recovers_ring(w, half):
    vals = tb_eigenvalues_numeric(TbModel(w, math.pi / 4 if half else 0.0))
    spectrum = np.concatenate([vals, [1.0, 2.0]])
    assert extract_w(spectrum, half) == pytest.approx(w, rel=1e-12)
    assert fit_w(spectrum, half) == pytest.approx(w, rel=1e-12)


def test_extract_w_unresolved():
    with pytest.raises(QuadrupletNotResolved) as exc:
        extract_w([0.0, 0.1, 0.2, 0.3, 0.5], False)
    assert exc.value.gap == pytest.approx(0.2)
    with pytest.raises(QuadrupletNotResolved):
        extract_w([0.0, 1.0, 2.0], False)


def test_centred_quadruplet():
    np.testing.assert_allclose(centred_quadruplet([1.0, 2.0, 2.0, 3.0, 9.0]), [-1, 0, 0, 1])


def test_calibrated_w_values():
    w_ho = extract_w(rotor_spectrum(CAL_HO), False)
    w_dy = extract_w(rotor_spectrum(CAL_DY), True)
    assert 1e-4 < w_ho < 1e-3
    assert 1e-4 < w_dy < 1e-3
    assert harmonic_spacing(CAL_HO) / w_ho > 1e4


def test_response_integer():
    r = response_coefficients(CAL_HO, 1e-3)
    assert r.chi_plane == pytest.approx(64 / 2e-3)
    assert r.chi_axis == pytest.approx(1 - math.pi**2 * 1e-3 / 2)
    assert r.moment_plane == 0 and r.moment_axis == 0 and not r.curie


def test_response_half_integer():
    r = response_coefficients(CAL_DY, 1e-3)
    assert r.curie and r.chi_plane is None
    assert r.moment_plane == pytest.approx(7.5 / 2)
    assert r.moment_axis == pytest.approx(1e-3 / math.sqrt(2))


def test_response_validation():
    with pytest.raises(InvalidParams):
        response_coefficients(CAL_HO, 0.0)


def test_numeric_half_integer_axial_moment_carries_factor_pi():
    # the ground level follows -2w cos(pi hz/2a - pi/4), so dE/dhz at 0 is pi w/(sqrt2 a)
    w = extract_w(rotor_spectrum(CAL_DY), True)
    basis = RotorBasis.for_params(CAL_DY, 64)
    d = 1e-5
    e = [rotor_spectrum(CAL_DY, FieldConfig(hz=k * d), basis, check=False).values[0] for k in range(3)]
    # second-order one-sided stencil: the ground is degenerate at hz = 0
    moment = -(-3 * e[0] + 4 * e[1] - e[2]) / (2 * d)
    assert moment == pytest.approx(math.pi * w / math.sqrt(2), rel=1e-3)


def test_saturation_and_curie():
    assert saturation_moment(CAL_HO) == 8
    assert curie_susceptibility(3.0, 2.0) == pytest.approx(1.5)
    with pytest.raises(InvalidParams):
        curie_susceptibility(1.0, 0.0)
