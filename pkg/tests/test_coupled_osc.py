import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.coupled_osc import (
    CoupledOscillatorSystem,
    equivalent_wavefunction,
    ground_state,
    normal_coordinates,
    normal_modes,
    potential_energy,
    potential_energy_normal_form,
    potential_matrix,
)
from app.errors import DegenerateCoupling
from app.wavefn import psi

pytestmark = pytest.mark.unit


def test_modes_example():
    nm = normal_modes(CoupledOscillatorSystem(m=1.0, A=5.0, C=3.0))
    assert nm.K == pytest.approx(4.0)
    assert nm.eta.eta == pytest.approx(-0.3465735902799727)
    assert math.exp(2 * nm.eta.eta) == pytest.approx(0.5)
    assert nm.omega_plus == pytest.approx(math.sqrt(8.0))
    assert nm.omega_minus == pytest.approx(math.sqrt(2.0))


def test_uncoupled_has_zero_rapidity():
    nm = normal_modes(CoupledOscillatorSystem(m=2.0, A=3.0, C=0.0))
    assert nm.eta.eta == 0.0
    assert nm.K == pytest.approx(3.0)
    assert nm.omega_plus == nm.omega_minus


def test_sign_convention():
    # positive coupling stiffens x1 + x2 and drives eta negative
    assert normal_modes(CoupledOscillatorSystem(m=1.0, A=2.0, C=0.5)).eta.eta < 0
    assert normal_modes(CoupledOscillatorSystem(m=1.0, A=2.0, C=-0.5)).eta.eta > 0


@pytest.mark.parametrize("C", [5.0, -5.0, 7.0])
def test_degenerate_coupling(C):
    with pytest.raises(DegenerateCoupling):
        normal_modes(CoupledOscillatorSystem(m=1.0, A=5.0, C=C))


def test_random_systems_against_eigensolver():
    rng = np.random.default_rng(3)
    for _ in range(100):
        A = float(rng.uniform(0.1, 10.0))
        C = float(rng.uniform(-0.99, 0.99) * A)
        m = float(rng.uniform(0.5, 3.0))
        sys_ = CoupledOscillatorSystem(m=m, A=A, C=C)
        nm = normal_modes(sys_)
        lo, hi = np.linalg.eigvalsh(potential_matrix(sys_))
        assert nm.K == pytest.approx(math.sqrt(lo * hi), rel=1e-12)
        assert math.exp(4 * nm.eta.eta) == pytest.approx((A - C) / (A + C), rel=1e-12)
        assert sorted([m * nm.omega_plus**2, m * nm.omega_minus**2]) == pytest.approx(
            [lo, hi], rel=1e-12
        )


def test_potential_normal_form_matches():
    sys_ = CoupledOscillatorSystem(m=1.0, A=5.0, C=3.0)
    rng = np.random.default_rng(5)
    x1, x2 = rng.normal(size=(2, 200))
    assert_allclose(
        potential_energy_normal_form(sys_, x1, x2), potential_energy(sys_, x1, x2), rtol=1e-12
    )


def test_normal_coordinates_rotate():
    y1, y2 = normal_coordinates(1.0, 1.0)
    assert y1 == pytest.approx(math.sqrt(2.0))
    assert y2 == 0.0


@pytest.mark.parametrize("A,C", [(5.0, 3.0), (2.0, -1.5), (1.0, 0.0)])
def test_ground_state_is_boosted_wavefunction(A, C):
    sys_ = CoupledOscillatorSystem(m=1.0, A=A, C=C)
    axis = np.linspace(-4.0, 4.0, 51)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    eta = normal_modes(sys_).eta
    assert_allclose(ground_state(sys_, x1, x2), psi(eta, x1, x2), atol=1e-12)
    assert_allclose(equivalent_wavefunction(sys_)(x1, x2), psi(eta, x1, x2), atol=1e-12)


def test_ground_state_normalized():
    sys_ = CoupledOscillatorSystem(m=1.0, A=5.0, C=3.0)
    axis = np.linspace(-10.0, 10.0, 801)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    dx = axis[1] - axis[0]
    assert np.sum(ground_state(sys_, x1, x2) ** 2) * dx * dx == pytest.approx(1.0, rel=1e-9)


def test_system_validation():
    with pytest.raises(ValueError):
        CoupledOscillatorSystem(m=0.0, A=1.0, C=0.0)
    with pytest.raises(ValueError):
        CoupledOscillatorSystem(m=1.0, A=-1.0, C=0.0)
