"""Exact 2×2 kinematics along the z axis.

Natural units (c = 1). The boost matrix carries η/2, so light-cone coordinates
scale by e^{±η/2} and the boosted Gaussian carries e^{±η}.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .config import ETA_MAX
from .errors import InvalidParameter, RapidityOutOfRange

SQRT2 = math.sqrt(2.0)
DET_TOL = 1e-12


class _Value(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)


class Rapidity(_Value):
    eta: float


class SpaceTimePoint(_Value):
    z: float
    t: float


class LightConePoint(_Value):
    u: float
    v: float


class FourVector(_Value):
    x: float
    y: float
    z: float
    t: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.t])

    @classmethod
    def from_array(cls, a: np.ndarray) -> "FourVector":
        return cls(x=float(a[0]), y=float(a[1]), z=float(a[2]), t=float(a[3]))


class BoostMatrix(_Value):
    m00: float
    m01: float
    m10: float
    m11: float

    @model_validator(mode="after")
    def boost_shape(self) -> "BoostMatrix":
        if self.m01 != self.m10 or self.m00 != self.m11:
            raise ValueError("boost matrix must be symmetric with equal diagonal")
        # cosh² − sinh² cancels catastrophically for large η; scale the tolerance
        det = self.m00 * self.m11 - self.m01 * self.m10
        if abs(det - 1.0) > DET_TOL * max(1.0, self.m00 * self.m00):
            raise ValueError(f"boost matrix determinant {det!r} != 1")
        return self

    def as_array(self) -> np.ndarray:
        return np.array([[self.m00, self.m01], [self.m10, self.m11]])

    @property
    def det(self) -> float:
        return self.m00 * self.m11 - self.m01 * self.m10


def as_rapidity(eta: float | Rapidity, eta_max: float = ETA_MAX) -> Rapidity:
    value = eta.eta if isinstance(eta, Rapidity) else float(eta)
    if not math.isfinite(value):
        raise RapidityOutOfRange(f"rapidity must be finite, got {value!r}", eta=value)
    if abs(value) > eta_max:
        raise RapidityOutOfRange(
            f"|eta| = {abs(value)!r} exceeds eta_max = {eta_max!r}",
            eta=value,
            eta_max=eta_max,
        )
    return eta if isinstance(eta, Rapidity) else Rapidity(eta=value)


# ---------- Boosts ----------


def boost_matrix(eta: float | Rapidity, eta_max: float = ETA_MAX) -> BoostMatrix:
    h = as_rapidity(eta, eta_max).eta / 2.0
    c, s = math.cosh(h), math.sinh(h)
    return BoostMatrix(m00=c, m01=s, m10=s, m11=c)


def boost_point(
    eta: float | Rapidity, p: SpaceTimePoint, eta_max: float = ETA_MAX
) -> SpaceTimePoint:
    b = boost_matrix(eta, eta_max)
    return SpaceTimePoint(z=b.m00 * p.z + b.m01 * p.t, t=b.m10 * p.z + b.m11 * p.t)


def boost_four_vector(
    eta: float | Rapidity, p: FourVector, eta_max: float = ETA_MAX
) -> FourVector:
    zt = boost_point(eta, SpaceTimePoint(z=p.z, t=p.t), eta_max)
    return FourVector(x=p.x, y=p.y, z=zt.z, t=zt.t)


def frame_velocity(eta: float | Rapidity, eta_max: float = ETA_MAX) -> float:
    """Velocity of the frame reached by ``boost_matrix(eta)``: tanh(η/2)."""
    return math.tanh(as_rapidity(eta, eta_max).eta / 2.0)


def rapidity_for_velocity(beta: float) -> Rapidity:
    if not (math.isfinite(beta) and abs(beta) < 1.0):
        raise InvalidParameter(f"velocity must satisfy |beta| < 1, got {beta!r}", beta=beta)
    return as_rapidity(2.0 * math.atanh(beta))


# ---------- Light-cone coordinates ----------


def to_lightcone(p: SpaceTimePoint) -> LightConePoint:
    return LightConePoint(u=(p.z + p.t) / SQRT2, v=(p.z - p.t) / SQRT2)


def from_lightcone(q: LightConePoint) -> SpaceTimePoint:
    return SpaceTimePoint(z=(q.u + q.v) / SQRT2, t=(q.u - q.v) / SQRT2)


def boost_lightcone(
    eta: float | Rapidity, q: LightConePoint, eta_max: float = ETA_MAX
) -> LightConePoint:
    h = as_rapidity(eta, eta_max).eta / 2.0
    return LightConePoint(u=math.exp(h) * q.u, v=math.exp(-h) * q.v)


def lightcone_basis() -> np.ndarray:
    """Change of basis (z, t) -> (u, v); it is its own inverse."""
    return np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2


def squeeze_diagonal(eta: float | Rapidity, eta_max: float = ETA_MAX) -> np.ndarray:
    p = lightcone_basis()
    return p @ boost_matrix(eta, eta_max).as_array() @ p


def interval(p: SpaceTimePoint) -> float:
    return p.z * p.z - p.t * p.t


def lightcone_product(q: LightConePoint) -> float:
    return q.u * q.v


# ---------- Bound-state coordinates ----------


def hadron_coordinates(xa: FourVector, xb: FourVector) -> Tuple[FourVector, FourVector]:
    """Center X = (x_a + x_b)/2 and separation x = (x_a − x_b)/(2√2)."""
    a, b = xa.as_array(), xb.as_array()
    return FourVector.from_array((a + b) / 2.0), FourVector.from_array(
        (a - b) / (2.0 * SQRT2)
    )


def constituent_coordinates(X: FourVector, x: FourVector) -> Tuple[FourVector, FourVector]:
    c, s = X.as_array(), x.as_array()
    return FourVector.from_array(c + SQRT2 * s), FourVector.from_array(c - SQRT2 * s)
