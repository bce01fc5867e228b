import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from largespin.errors import InvalidCoupling, InvalidSpin, UnknownIon
from largespin.linalg_core import commutator, max_abs
from largespin.spin_algebra import (
    IonParams,
    casimir,
    ion_names,
    ion_preset,
    lande_g,
    m_values,
    spin_operators,
)

from oracles import ladder_spin_matrices


def test_spin_half_is_half_pauli():
    jx, jy, jz = spin_operators(1)
    np.testing.assert_allclose(jx, [[0, 0.5], [0.5, 0]])
    np.testing.assert_allclose(jy, [[0, -0.5j], [0.5j, 0]])
    np.testing.assert_allclose(jz, [[0.5, 0], [0, -0.5]])


def test_spin_one_jx():
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(spin_operators(2)[0], [[0, r, 0], [r, 0, r], [0, r, 0]], atol=1e-15)


@pytest.mark.parametrize("two_j", [1, 2, 3, 7, 15, 16, 31])
def test_matches_ladder_oracle(two_j):
    for ours, ref in zip(spin_operators(two_j), ladder_spin_matrices(two_j / 2)):
        assert max_abs(ours - ref) < 1e-13


@pytest.mark.parametrize("two_j", [1, 2, 5, 15, 16, 40])
def test_algebra(two_j):
    j = two_j / 2
    jx, jy, jz = spin_operators(two_j)
    assert max_abs(commutator(jx, jy) - 1j * jz) < 1e-12 * max(1, j)
    assert max_abs(commutator(jy, jz) - 1j * jx) < 1e-12 * max(1, j)
    assert max_abs(commutator(jz, jx) - 1j * jy) < 1e-12 * max(1, j)
    assert max_abs(casimir(two_j) - j * (j + 1) * np.eye(two_j + 1)) < 1e-12 * j * j
    for op in (jx, jy, jz):
        assert max_abs(op - op.conj().T) == 0.0
        assert abs(np.trace(op)) < 1e-14


def test_frozen_trace_jz2_spin_eight():
    jz = spin_operators(16)[2]
    assert np.trace(jz @ jz).real == pytest.approx(408.0, abs=1e-12)


def test_operators_read_only():
    with pytest.raises(ValueError):
        spin_operators(4)[0][0, 0] = 1.0


def test_basis_order():
    np.testing.assert_array_equal(m_values(3), [1.5, 0.5, -0.5, -1.5])


@pytest.mark.parametrize("bad", [0, -2, 1.5, True, "3"])
def test_invalid_spin(bad):
    with pytest.raises((InvalidSpin, ValueError, TypeError)):
        spin_operators(bad)


def test_lande_presets():
    assert lande_g(4, 12, 16) == 1.25
    assert lande_g(5, 10, 15) == pytest.approx(4 / 3, abs=1e-15)
    assert ion_preset("Ho3+").g == 1.25
    assert ion_preset("Dy3+").two_J == 15
    assert ion_preset("Dy3+").half_integer
    assert not ion_preset("Ho3+").half_integer
    assert set(ion_names()) == {"Ho3+", "Dy3+"}


def test_lande_spin_only_and_orbital_only():
    assert lande_g(2, 0, 2) == 2.0
    assert lande_g(0, 4, 4) == 1.0


def test_lande_rejects_unreachable_j():
    with pytest.raises(InvalidCoupling):
        lande_g(2, 2, 6)
    with pytest.raises(InvalidCoupling):
        lande_g(2, 4, 3)


def test_unknown_ion():
    with pytest.raises(UnknownIon):
        ion_preset("Er3+")


def test_ion_params_validate():
    with pytest.raises(InvalidSpin):
        IonParams(0, 0, 0, 1.0)


@given(st.integers(1, 30))
def test_hermitian_and_dimension_property(two_j):
    ops = spin_operators(two_j)
    for op in ops:
        assert op.shape == (two_j + 1, two_j + 1)
    jz = ops[2]
    assert np.all(np.diff(np.diag(jz).real) == -1)
