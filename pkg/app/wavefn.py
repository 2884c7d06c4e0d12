"""Covariant Gaussian oscillator wavefunctions in the (z, t) plane.

Every quadrature-backed operation integrates in light-cone coordinates, where the
squeezed Gaussian is axis aligned (Jacobian 1), and runs at orders n and 2n so
that an under-resolved rule fails loudly instead of returning a wrong number.
Sums use numpy's pairwise reduction over row-major arrays, so results are
independent of call order.
"""

from __future__ import annotations

import functools
import json
import logging
import math
from pathlib import Path
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import (
    CONVERGENCE_TOL,
    ETA_MAX,
    MAX_QUADRATURE_ORDER,
    MIN_QUADRATURE_ORDER,
    N_MAX,
    Signature,
)
from .errors import (
    GridUnderResolved,
    InvalidParameter,
    OrderOverflow,
    QuadratureUnderResolved,
)
from .lightcone import SQRT2, FourVector, Rapidity, SpaceTimePoint, as_rapidity

logger = logging.getLogger(__name__)

Real = float | np.ndarray

INV_SQRT_PI = 1.0 / math.sqrt(math.pi)
PI_QUARTER = math.pi**-0.25
OFF_DIAGONAL_TOL = 1e-10
# smallest resolvable minor/major variance ratio of a sampled density
MIN_VARIANCE_RATIO = 1e-12
STEP_RANGE = (1e-4, 1e-2)


def as_real(a: np.ndarray) -> Real:
    return float(a) if np.ndim(a) == 0 else a


# ---------- Wavefunctions ----------


def ground_4d(x: Real, y: Real, z: Real, t: Real) -> Real:
    """exp{−½(x² + y² + z² + t²)}, unnormalized."""
    x, y, z, t = (np.asarray(c, dtype=float) for c in (x, y, z, t))
    return as_real(np.exp(-0.5 * (x * x + y * y + z * z + t * t)))


def ground_4d_normalized(x: Real, y: Real, z: Real, t: Real) -> Real:
    return as_real(np.asarray(ground_4d(x, y, z, t)) / math.pi)


def ground_2d(z: Real, t: Real) -> Real:
    """The (z, t) restriction, exp{−½(z² + t²)}, unnormalized."""
    z, t = np.asarray(z, dtype=float), np.asarray(t, dtype=float)
    return as_real(np.exp(-0.5 * (z * z + t * t)))


def psi(eta: float | Rapidity, z: Real, t: Real, eta_max: float = ETA_MAX) -> Real:
    """Boosted ground state (1/π)^{1/2} exp{−¼[e^{−η}(z+t)² + e^{η}(z−t)²]}."""
    e = as_rapidity(eta, eta_max).eta
    z, t = np.asarray(z, dtype=float), np.asarray(t, dtype=float)
    s, d = z + t, z - t
    return as_real(INV_SQRT_PI * np.exp(-0.25 * (math.exp(-e) * s * s + math.exp(e) * d * d)))


class CovariantWavefunction(BaseModel):
    model_config = ConfigDict(frozen=True)

    rapidity: Rapidity

    @classmethod
    def at(cls, eta: float | Rapidity, eta_max: float = ETA_MAX) -> "CovariantWavefunction":
        return cls(rapidity=as_rapidity(eta, eta_max))

    @property
    def eta(self) -> float:
        return self.rapidity.eta

    def __call__(self, z: Real, t: Real) -> Real:
        return psi(self.rapidity, z, t, eta_max=math.inf)


# ---------- Quadrature ----------


class QuadratureRule(BaseModel):
    """Gauss-Hermite rule for ∫ f(x) e^{−x²} dx."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int = Field(ge=1, le=MAX_QUADRATURE_ORDER)
    nodes: np.ndarray
    weights: np.ndarray

    @model_validator(mode="after")
    def well_formed(self) -> "QuadratureRule":
        if self.nodes.shape != (self.order,) or self.weights.shape != (self.order,):
            raise ValueError("nodes and weights must both have length `order`")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if not np.array_equal(self.nodes, -self.nodes[::-1]):
            raise ValueError("nodes must be symmetric about 0")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        return self

    @property
    def scaled_weights(self) -> np.ndarray:
        """w·e^{x²}, the weights for integrating f(x) dx without the Gaussian factor."""
        return np.exp(np.log(self.weights) + self.nodes * self.nodes)


@functools.lru_cache(maxsize=32)
def _hermgauss(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    x, w = np.polynomial.hermite.hermgauss(order)
    # symmetrize so reflections are exact
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return tuple(x.tolist()), tuple(w.tolist())


def gauss_hermite(order: int) -> QuadratureRule:
    if not 1 <= order <= MAX_QUADRATURE_ORDER:
        raise OrderOverflow(
            f"quadrature order {order} outside [1, {MAX_QUADRATURE_ORDER}]", order=order
        )
    x, w = _hermgauss(order)
    return QuadratureRule(order=order, nodes=np.array(x), weights=np.array(w))


def _require_order(quad: QuadratureRule, min_order: int) -> None:
    if quad.order < min_order:
        raise QuadratureUnderResolved(
            f"quadrature order {quad.order} below configured minimum {min_order}",
            order=quad.order,
            min_order=min_order,
        )
    if 2 * quad.order > MAX_QUADRATURE_ORDER:
        raise OrderOverflow(
            f"doubled quadrature order {2 * quad.order} exceeds {MAX_QUADRATURE_ORDER}",
            order=quad.order,
        )


def _lightcone_nodes(
    quad: QuadratureRule, width_u: float, width_v: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tensor-product nodes at u = width_u·a, v = width_v·b, mapped back to (z, t).

    The returned weights integrate f(z, t) dz dt directly (Jacobian of the
    light-cone map is 1).
    """
    a = quad.nodes
    sw = quad.scaled_weights
    u = width_u * a[:, None]
    v = width_v * a[None, :]
    weights = width_u * width_v * (sw[:, None] * sw[None, :])
    return (u + v) / SQRT2, (u - v) / SQRT2, weights


def normalization(
    eta: float | Rapidity,
    quad: QuadratureRule,
    *,
    min_order: int = MIN_QUADRATURE_ORDER,
    tol: float = CONVERGENCE_TOL,
    eta_max: float = ETA_MAX,
) -> float:
    """∬ ψ_η² dz dt, cross-checked against the doubled-order rule."""
    e = as_rapidity(eta, eta_max).eta
    _require_order(quad, min_order)
    # node spacing follows the amplitude widths of ψ_η along u and v
    width_u = SQRT2 * math.exp(e / 2.0)
    width_v = SQRT2 * math.exp(-e / 2.0)

    def integrate(rule: QuadratureRule) -> float:
        z, t, weights = _lightcone_nodes(rule, width_u, width_v)
        return float(np.sum(np.asarray(psi(e, z, t, eta_max=math.inf)) ** 2 * weights))

    coarse = integrate(quad)
    fine = integrate(gauss_hermite(2 * quad.order))
    if abs(coarse - fine) > tol:
        raise QuadratureUnderResolved(
            f"normalization at order {quad.order} and {2 * quad.order} differ by "
            f"{abs(coarse - fine):.3e} > {tol:.1e}",
            eta=e,
            order=quad.order,
            coarse=coarse,
            fine=fine,
        )
    logger.debug(
        "normalization",
        extra={"extra": {"eta": e, "order": quad.order, "value": fine}},
    )
    return fine


# ---------- Density grids ----------


class GridSpec(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    z_min: float = -8.0
    z_max: float = 8.0
    t_min: float = -8.0
    t_max: float = 8.0
    n_z: int = Field(default=201, ge=2)
    n_t: int = Field(default=201, ge=2)

    @model_validator(mode="after")
    def ordered(self) -> "GridSpec":
        if not (self.z_min < self.z_max and self.t_min < self.t_max):
            raise ValueError("grid bounds must satisfy min < max")
        return self

    @property
    def z(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.n_z)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_t)

    @property
    def cell_area(self) -> float:
        return (self.z_max - self.z_min) / (self.n_z - 1) * (self.t_max - self.t_min) / (self.n_t - 1)


class DensityGrid(BaseModel):
    """|ψ_η|² sampled with z along rows and t along columns (row-major)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eta: float
    spec: GridSpec
    values: np.ndarray

    @field_validator("values")
    @classmethod
    def non_negative(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 2 or not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("density values must be a finite non-negative 2-D array")
        return v

    @model_validator(mode="after")
    def shape_matches(self) -> "DensityGrid":
        if self.values.shape != (self.spec.n_z, self.spec.n_t):
            raise ValueError(
                f"values shape {self.values.shape} != ({self.spec.n_z}, {self.spec.n_t})"
            )
        return self


def density_grid(
    eta: float | Rapidity, spec: GridSpec, eta_max: float = ETA_MAX
) -> DensityGrid:
    e = as_rapidity(eta, eta_max).eta
    zz, tt = np.meshgrid(spec.z, spec.t, indexing="ij")
    values = np.asarray(psi(e, zz, tt, eta_max=math.inf)) ** 2
    return DensityGrid(eta=e, spec=spec, values=values)


def grid_mass(grid: DensityGrid) -> float:
    return float(np.sum(grid.values) * grid.spec.cell_area)


def covariance(grid: DensityGrid) -> np.ndarray:
    """Second-moment matrix of the sampled density in (z, t)."""
    w = grid.values / np.sum(grid.values)
    zz, tt = np.meshgrid(grid.spec.z, grid.spec.t, indexing="ij")
    mz, mt = np.sum(w * zz), np.sum(w * tt)
    dz, dt = zz - mz, tt - mt
    czz = np.sum(w * dz * dz)
    ctt = np.sum(w * dt * dt)
    czt = np.sum(w * dz * dt)
    return np.array([[czz, czt], [czt, ctt]])


def principal_axes(grid: DensityGrid) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unit eigenvectors (columns) of the covariance."""
    return np.linalg.eigh(covariance(grid))


def axes_ratio(grid: DensityGrid) -> float:
    """Major/minor standard-deviation ratio; e^{|η|} for ψ_η."""
    vals, _ = principal_axes(grid)
    if not vals[0] > MIN_VARIANCE_RATIO * vals[1]:
        raise GridUnderResolved(
            f"minor-axis variance {float(vals[0]):.3e} unresolved on the "
            f"{grid.spec.n_z}x{grid.spec.n_t} grid",
            eta=grid.eta,
            variances=vals.tolist(),
        )
    return float(math.sqrt(vals[1] / vals[0]))


def major_axis_angle(grid: DensityGrid) -> float:
    """Angle of the major axis from the +z axis in degrees, folded into (−90, 90]."""
    _, vecs = principal_axes(grid)
    vz, vt = vecs[:, 1]
    angle = math.degrees(math.atan2(vt, vz))
    if angle > 90.0:
        angle -= 180.0
    elif angle <= -90.0:
        angle += 180.0
    return angle


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def grid_header(grid: DensityGrid) -> str:
    s = grid.spec
    return (
        f"# eta={_fmt(grid.eta)} z_min={_fmt(s.z_min)} z_max={_fmt(s.z_max)} "
        f"t_min={_fmt(s.t_min)} t_max={_fmt(s.t_max)} n_z={s.n_z} n_t={s.n_t}"
    )


def grid_to_csv(grid: DensityGrid) -> str:
    lines = [grid_header(grid)]
    lines.extend(",".join(_fmt(v) for v in row) for row in grid.values.tolist())
    return "\n".join(lines) + "\n"


def grid_to_json(grid: DensityGrid) -> str:
    s = grid.spec
    payload = {
        "eta": grid.eta,
        "z_min": s.z_min,
        "z_max": s.z_max,
        "t_min": s.t_min,
        "t_max": s.t_max,
        "n_z": s.n_z,
        "n_t": s.n_t,
        "values": grid.values.tolist(),
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def write_grid(grid: DensityGrid, path: Path, fmt: Literal["csv", "json"] = "csv") -> None:
    text = grid_to_csv(grid) if fmt == "csv" else grid_to_json(grid)
    Path(path).write_text(text, encoding="utf-8", newline="\n")


# ---------- Lorentz-invariant oscillator equation ----------


class ResidualFit(NamedTuple):
    lambda_fit: float
    max_residual: float


def _check_step(h: float) -> None:
    lo, hi = STEP_RANGE
    if not lo <= h <= hi:
        raise InvalidParameter(f"finite-difference step {h!r} outside [{lo}, {hi}]", h=h)


def _signature_sign(signature: Signature) -> float:
    return 1.0 if signature == "space_positive" else -1.0


def _fit(op: np.ndarray, f: np.ndarray) -> ResidualFit:
    lam = float(np.sum(op * f) / np.sum(f * f))
    return ResidualFit(lambda_fit=lam, max_residual=float(np.max(np.abs(op - lam * f))))


def _d2(f: Callable[..., np.ndarray], args: list[np.ndarray], axis: int, h: float) -> np.ndarray:
    plus = list(args)
    minus = list(args)
    plus[axis] = args[axis] + h
    minus[axis] = args[axis] - h
    return (f(*plus) - 2.0 * f(*args) + f(*minus)) / (h * h)


def invariant_residual(
    eta: float | Rapidity,
    points: Sequence[SpaceTimePoint],
    h: float,
    signature: Signature = "space_positive",
    eta_max: float = ETA_MAX,
) -> ResidualFit:
    """Apply ½{(z² − t²) − (∂z² − ∂t²)} to ψ_η by central differences.

    Returns the least-squares eigenvalue and the largest pointwise residual.
    """
    e = as_rapidity(eta, eta_max).eta
    _check_step(h)
    if not points:
        raise InvalidParameter("invariant_residual needs at least one point")
    z = np.array([p.z for p in points], dtype=float)
    t = np.array([p.t for p in points], dtype=float)

    def f(z_: np.ndarray, t_: np.ndarray) -> np.ndarray:
        return np.asarray(psi(e, z_, t_, eta_max=math.inf))

    f0 = f(z, t)
    lap = _d2(f, [z, t], 0, h) - _d2(f, [z, t], 1, h)
    op = _signature_sign(signature) * 0.5 * ((z * z - t * t) * f0 - lap)
    fit = _fit(op, f0)
    logger.debug(
        "invariant_residual",
        extra={"extra": {"eta": e, "h": h, "points": len(points), **fit._asdict()}},
    )
    return fit


def invariant_residual_4d(
    points: Sequence[FourVector],
    h: float,
    signature: Signature = "space_positive",
) -> ResidualFit:
    """The full operator ½{(x²+y²+z²−t²) − (∂x²+∂y²+∂z²−∂t²)} on the four-dimensional Gaussian."""
    _check_step(h)
    if not points:
        raise InvalidParameter("invariant_residual_4d needs at least one point")
    coords = [np.array([getattr(p, c) for p in points], dtype=float) for c in "xyzt"]

    def f(x: np.ndarray, y: np.ndarray, z: np.ndarray, t: np.ndarray) -> np.ndarray:
        return np.asarray(ground_4d(x, y, z, t))

    x, y, z, t = coords
    f0 = f(*coords)
    box = (
        _d2(f, coords, 0, h) + _d2(f, coords, 1, h) + _d2(f, coords, 2, h) - _d2(f, coords, 3, h)
    )
    op = _signature_sign(signature) * 0.5 * ((x * x + y * y + z * z - t * t) * f0 - box)
    return _fit(op, f0)


# ---------- Oscillator basis and squeeze expansion ----------


def hermite_table(n: int, x: Real, n_max: int = N_MAX) -> np.ndarray:
    """φ_0(x)..φ_n(x) stacked along a new leading axis (three-term recurrence)."""
    if n < 0:
        raise InvalidParameter(f"order must be non-negative, got {n}", n=n)
    if n > n_max:
        raise OrderOverflow(f"order {n} exceeds N_MAX = {n_max}", n=n, n_max=n_max)
    x = np.asarray(x, dtype=float)
    table = np.empty((n + 1,) + x.shape)
    table[0] = PI_QUARTER * np.exp(-0.5 * x * x)
    if n >= 1:
        table[1] = SQRT2 * x * table[0]
    for k in range(1, n):
        table[k + 1] = math.sqrt(2.0 / (k + 1)) * x * table[k] - math.sqrt(k / (k + 1)) * table[k - 1]
    return table


def hermite_fn(n: int, x: Real, n_max: int = N_MAX) -> Real:
    """Orthonormal oscillator eigenfunction φ_n(x) = (2^n n! √π)^{−1/2} H_n(x) e^{−x²/2}."""
    return as_real(hermite_table(n, x, n_max)[n])


class ExpansionCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eta: Rapidity
    c: np.ndarray
    max_off_diagonal: float
    order: int

    @field_validator("c")
    @classmethod
    def bessel_bound(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 1 or float(np.sum(v * v)) > 1.0 + 1e-12:
            raise ValueError("coefficients must be 1-D with Σc² ≤ 1")
        return v

    @property
    def norm_deficit(self) -> float:
        return float(1.0 - np.sum(self.c * self.c))

    @property
    def ratios(self) -> np.ndarray:
        return self.c[1:] / self.c[:-1]


def squeezed_vacuum_coefficients(eta: float | Rapidity, n_max: int, eta_max: float = ETA_MAX) -> np.ndarray:
    """Closed form sech(η/2)·tanh(η/2)^n from the Mehler kernel."""
    h = as_rapidity(eta, eta_max).eta / 2.0
    return np.tanh(h) ** np.arange(n_max + 1) / math.cosh(h)


def _overlap_matrix(e: float, n_max: int, quad: QuadratureRule, hermite_limit: int) -> np.ndarray:
    # widths make φ_m(z)φ_n(t)ψ_η a polynomial times e^{−a²−b²}: exact for order > n_max
    width_u = math.sqrt(2.0 / (1.0 + math.exp(-e)))
    width_v = math.sqrt(2.0 / (1.0 + math.exp(e)))
    z, t, weights = _lightcone_nodes(quad, width_u, width_v)
    phi_z = hermite_table(n_max, z, hermite_limit)
    phi_t = hermite_table(n_max, t, hermite_limit)
    kernel = np.asarray(psi(e, z, t, eta_max=math.inf)) * weights
    return np.einsum("mij,nij,ij->mn", phi_z, phi_t, kernel)


def squeeze_expansion(
    eta: float | Rapidity,
    n_max: int,
    quad: QuadratureRule,
    *,
    min_order: int = MIN_QUADRATURE_ORDER,
    tol: float = CONVERGENCE_TOL,
    off_diagonal_tol: float = OFF_DIAGONAL_TOL,
    hermite_limit: int = N_MAX,
    eta_max: float = ETA_MAX,
) -> ExpansionCoefficients:
    """c[n] = ⟨φ_n(z)φ_n(t) | ψ_η⟩; cross overlaps must vanish."""
    rap = as_rapidity(eta, eta_max)
    if n_max > hermite_limit:
        raise OrderOverflow(f"n_max {n_max} exceeds N_MAX = {hermite_limit}", n_max=n_max)
    _require_order(quad, min_order)
    if quad.order <= n_max:
        raise QuadratureUnderResolved(
            f"order {quad.order} cannot resolve overlaps up to n = {n_max}",
            order=quad.order,
            n_max=n_max,
        )
    coarse = _overlap_matrix(rap.eta, n_max, quad, hermite_limit)
    fine = _overlap_matrix(rap.eta, n_max, gauss_hermite(2 * quad.order), hermite_limit)
    drift = float(np.max(np.abs(coarse - fine)))
    if drift > tol:
        raise QuadratureUnderResolved(
            f"overlaps at order {quad.order} and {2 * quad.order} differ by {drift:.3e}",
            eta=rap.eta,
            order=quad.order,
        )
    c = np.diag(fine).copy()
    off = float(np.max(np.abs(fine - np.diag(c)))) if n_max > 0 else 0.0
    if off > off_diagonal_tol:
        raise QuadratureUnderResolved(
            f"cross overlap {off:.3e} exceeds {off_diagonal_tol:.1e}",
            eta=rap.eta,
            max_off_diagonal=off,
        )
    logger.debug(
        "squeeze_expansion",
        extra={"extra": {"eta": rap.eta, "n_max": n_max, "order": quad.order, "off": off}},
    )
    return ExpansionCoefficients(eta=rap, c=c, max_off_diagonal=off, order=2 * quad.order)
