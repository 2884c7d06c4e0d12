"""Two equal-mass oscillators with a bilinear coupling.

The mass enters only the normal-mode frequencies; K, η and the ground state are
mass independent.
"""

from __future__ import annotations

import logging
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import DegenerateCoupling
from .lightcone import SQRT2, Rapidity
from .wavefn import INV_SQRT_PI, CovariantWavefunction, Real, as_real

logger = logging.getLogger(__name__)


class CoupledOscillatorSystem(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    m: float = Field(gt=0)
    A: float = Field(gt=0)
    C: float

    @property
    def positive_definite(self) -> bool:
        return abs(self.C) < self.A


class NormalModeData(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    K: float = Field(gt=0)
    eta: Rapidity
    omega_plus: float = Field(gt=0)
    omega_minus: float = Field(gt=0)


def normal_modes(sys: CoupledOscillatorSystem) -> NormalModeData:
    if not sys.positive_definite:
        raise DegenerateCoupling(
            f"|C| = {abs(sys.C)!r} must be < A = {sys.A!r} for a bound ground state",
            A=sys.A,
            C=sys.C,
        )
    stiff, soft = sys.A + sys.C, sys.A - sys.C
    data = NormalModeData(
        K=math.sqrt(stiff * soft),
        eta=Rapidity(eta=0.25 * math.log(soft / stiff)),
        omega_plus=math.sqrt(stiff / sys.m),
        omega_minus=math.sqrt(soft / sys.m),
    )
    logger.debug(
        "normal_modes",
        extra={"extra": {"A": sys.A, "C": sys.C, "K": data.K, "eta": data.eta.eta}},
    )
    return data


def potential_matrix(sys: CoupledOscillatorSystem) -> np.ndarray:
    return np.array([[sys.A, sys.C], [sys.C, sys.A]])


def normal_coordinates(x1: Real, x2: Real) -> Tuple[Real, Real]:
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    return as_real((x1 + x2) / SQRT2), as_real((x1 - x2) / SQRT2)


def potential_energy(sys: CoupledOscillatorSystem, x1: Real, x2: Real) -> Real:
    """½(A x1² + A x2² + 2C x1 x2)."""
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    return as_real(0.5 * (sys.A * x1 * x1 + sys.A * x2 * x2 + 2.0 * sys.C * x1 * x2))


def potential_energy_normal_form(sys: CoupledOscillatorSystem, x1: Real, x2: Real) -> Real:
    """(K/4){e^{−2η}(x1 + x2)² + e^{2η}(x1 − x2)²}."""
    modes = normal_modes(sys)
    e = modes.eta.eta
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    s, d = x1 + x2, x1 - x2
    return as_real(0.25 * modes.K * (math.exp(-2.0 * e) * s * s + math.exp(2.0 * e) * d * d))


def ground_state(sys: CoupledOscillatorSystem, x1: Real, x2: Real) -> Real:
    """(1/√π) exp{−¼[e^{−η}(x1 + x2)² + e^{η}(x1 − x2)²]}."""
    e = normal_modes(sys).eta.eta
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    s, d = x1 + x2, x1 - x2
    return as_real(INV_SQRT_PI * np.exp(-0.25 * (math.exp(-e) * s * s + math.exp(e) * d * d)))


def equivalent_wavefunction(sys: CoupledOscillatorSystem) -> CovariantWavefunction:
    """The boosted space-time Gaussian whose η matches this system (x1 → z, x2 → t)."""
    return CovariantWavefunction(rapidity=normal_modes(sys).eta)
