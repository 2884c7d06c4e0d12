from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

ETA_MAX = 10.0
N_MAX = 64
MIN_QUADRATURE_ORDER = 40
MAX_QUADRATURE_ORDER = 256
CONVERGENCE_TOL = 1e-8

Signature = Literal["space_positive", "time_positive"]
OutputFormat = Literal["csv", "json"]
LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class RunConfig(BaseSettings):
    """Effective configuration of one run (flags > config file > defaults; no env vars)."""

    # kinematics
    eta: float = 0.0
    eta_max: float = Field(default=ETA_MAX, gt=0)
    points: List[Tuple[float, float]] = Field(default_factory=lambda: [(1.0, 0.0)])

    # density grid (z along rows, t along columns)
    z_min: float = -8.0
    z_max: float = 8.0
    t_min: float = -8.0
    t_max: float = 8.0
    n_z: int = Field(default=201, ge=2)
    n_t: int = Field(default=201, ge=2)
    # |grid mass − quadrature normalization| above this means the grid misses the density
    grid_mass_tol: float = Field(default=1e-6, gt=0)

    # quadrature
    quadrature_order: int = Field(default=64, ge=1, le=MAX_QUADRATURE_ORDER // 2)
    min_quadrature_order: int = Field(default=MIN_QUADRATURE_ORDER, ge=1)
    convergence_tol: float = Field(default=CONVERGENCE_TOL, gt=0)

    # truncations
    hermite_n_max: int = Field(default=N_MAX, ge=0)
    expansion_n_max: int = Field(default=32, ge=0)
    fock_n_max: int = Field(default=10, ge=1)
    interior_margin: int = Field(default=2, ge=0)
    closure_tol: float = Field(default=1e-10, gt=0)

    # Lorentz-invariant oscillator equation
    fd_step: float = Field(default=1e-3, ge=1e-4, le=1e-2)
    residual_extent: float = Field(default=2.0, gt=0)
    residual_points_per_axis: int = Field(default=9, ge=2)
    residual_tol: float = Field(default=1e-5, gt=0)
    signature: Signature = "space_positive"

    # coupled oscillators
    mass: float = Field(default=1.0, gt=0)
    spring: float = Field(default=1.0, gt=0)
    coupling: float = 0.0

    # output
    out: Optional[Path] = None
    format: OutputFormat = "csv"
    log_level: LogLevel = "INFO"

    model_config = SettingsConfigDict(extra="forbid", allow_inf_nan=False)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # runs must be self-describing: only explicit arguments count
        return (init_settings,)

    @field_validator("points")
    @classmethod
    def finite_points(cls, v: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        for z, t in v:
            if not (math.isfinite(z) and math.isfinite(t)):
                raise ValueError("points must be finite")
        return v

    @model_validator(mode="after")
    def ordered_bounds(self) -> "RunConfig":
        if not self.z_min < self.z_max:
            raise ValueError("z_min must be < z_max")
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be < t_max")
        return self

    def effective(self) -> dict:
        return self.model_dump(mode="json")


def load_config(path: Optional[Path] = None, **overrides: Any) -> RunConfig:
    data: dict = {}
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"config file {path} must hold a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**data)
