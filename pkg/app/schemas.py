from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

# ---------- Algebra closure ----------


class PairClosure(BaseModel):
    left: str
    right: str
    interior_residual: float
    full_residual: float
    # [left, right] = i Σ_k f_k G_k
    structure_constants: Dict[str, float]
    non_hermitian_part: float


class ClosureReport(BaseModel):
    n_max: int
    interior_margin: int
    interior_dimension: int
    generators: List[str]
    pairs: List[PairClosure] = Field(default_factory=list)
    max_interior_residual: float = 0.0
    max_full_residual: float = 0.0
    tolerance: float
    closed: bool = False


# ---------- Command reports ----------


class BoostRow(BaseModel):
    z: float
    t: float
    z_boosted: float
    t_boosted: float
    u: float
    v: float
    u_boosted: float
    v_boosted: float
    invariant: float
    invariant_boosted: float


class BoostReport(BaseModel):
    config: dict
    eta: float
    frame_velocity: float
    rows: List[BoostRow]
    max_invariant_drift: float


class DensitySummary(BaseModel):
    config: dict
    eta: float
    output: str
    format: str
    peak: float
    mass: float
    covariance: List[List[float]]
    axes_ratio: float
    expected_axes_ratio: float
    major_axis_angle_deg: float
    normalization: Optional[float] = None


class ResidualReport(BaseModel):
    config: dict
    eta: float
    h: float
    signature: str
    n_points: int
    lambda_fit: float
    max_residual: float
    tolerance: float
    lambda_4d: float
    max_residual_4d: float


class ExpansionReport(BaseModel):
    config: dict
    eta: float
    n_max: int
    quadrature_order: int
    coefficients: List[float]
    closed_form: List[float]
    max_deviation_from_closed_form: float
    ratio_expected: float
    max_off_diagonal: float
    norm_deficit: float
    tolerance: float


class ModesReport(BaseModel):
    config: dict
    m: float
    A: float
    C: float
    K: float
    eta: float
    exp_2eta: float
    omega_plus: float
    omega_minus: float
    eigenvalues: List[float]


class AlgebraReport(BaseModel):
    config: dict
    closure: ClosureReport
