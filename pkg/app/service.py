from __future__ import annotations

import itertools
import logging
import math
from typing import List, Tuple

import numpy as np

from .config import RunConfig
from .coupled_osc import CoupledOscillatorSystem, normal_modes, potential_matrix
from .desitter import TruncatedFockSpace, build_generators, verify_algebra
from .errors import ClosureFailure, GridUnderResolved, ResidualAboveTolerance
from .lightcone import (
    FourVector,
    SpaceTimePoint,
    as_rapidity,
    boost_lightcone,
    boost_point,
    frame_velocity,
    lightcone_product,
    to_lightcone,
)
from .schemas import (
    AlgebraReport,
    BoostReport,
    BoostRow,
    DensitySummary,
    ExpansionReport,
    ModesReport,
    ResidualReport,
)
from .wavefn import (
    DensityGrid,
    GridSpec,
    axes_ratio,
    covariance,
    density_grid,
    gauss_hermite,
    grid_mass,
    invariant_residual,
    invariant_residual_4d,
    major_axis_angle,
    normalization,
    squeeze_expansion,
    squeezed_vacuum_coefficients,
)

logger = logging.getLogger(__name__)


def probe_points(extent: float, per_axis: int) -> List[SpaceTimePoint]:
    axis = np.linspace(-extent, extent, per_axis)
    return [SpaceTimePoint(z=float(z), t=float(t)) for z in axis for t in axis]


def probe_points_4d(extent: float) -> List[FourVector]:
    axis = np.linspace(-extent, extent, 3)
    return [
        FourVector(x=float(x), y=float(y), z=float(z), t=float(t))
        for x, y, z, t in itertools.product(axis, repeat=4)
    ]


class Runner:
    """Turns one RunConfig into the report of each subcommand."""

    def __init__(self, config: RunConfig):
        self.config = config

    # ---------- Kinematics ----------

    def boost(self) -> BoostReport:
        cfg = self.config
        eta = as_rapidity(cfg.eta, cfg.eta_max)
        rows = []
        for z, t in cfg.points:
            p = SpaceTimePoint(z=z, t=t)
            q = to_lightcone(p)
            pb = boost_point(eta, p, cfg.eta_max)
            qb = boost_lightcone(eta, q, cfg.eta_max)
            rows.append(
                BoostRow(
                    z=p.z,
                    t=p.t,
                    z_boosted=pb.z,
                    t_boosted=pb.t,
                    u=q.u,
                    v=q.v,
                    u_boosted=qb.u,
                    v_boosted=qb.v,
                    invariant=lightcone_product(q),
                    invariant_boosted=lightcone_product(qb),
                )
            )
        drift = max((abs(r.invariant_boosted - r.invariant) for r in rows), default=0.0)
        logger.info("boost", extra={"extra": {"eta": eta.eta, "points": len(rows)}})
        return BoostReport(
            config=cfg.effective(),
            eta=eta.eta,
            frame_velocity=frame_velocity(eta, cfg.eta_max),
            rows=rows,
            max_invariant_drift=drift,
        )

    # ---------- Wavefunction ----------

    def grid_spec(self) -> GridSpec:
        cfg = self.config
        return GridSpec(
            z_min=cfg.z_min,
            z_max=cfg.z_max,
            t_min=cfg.t_min,
            t_max=cfg.t_max,
            n_z=cfg.n_z,
            n_t=cfg.n_t,
        )

    def density(self) -> Tuple[DensityGrid, DensitySummary]:
        cfg = self.config
        eta = as_rapidity(cfg.eta, cfg.eta_max)
        grid = density_grid(eta, self.grid_spec(), cfg.eta_max)
        norm = normalization(
            eta,
            gauss_hermite(cfg.quadrature_order),
            min_order=cfg.min_quadrature_order,
            tol=cfg.convergence_tol,
            eta_max=cfg.eta_max,
        )
        mass = grid_mass(grid)
        if abs(mass - norm) > cfg.grid_mass_tol:
            raise GridUnderResolved(
                f"grid mass {mass:.6g} differs from normalization {norm:.6g} "
                f"on the {cfg.n_z}x{cfg.n_t} grid",
                eta=eta.eta,
                mass=mass,
                normalization=norm,
            )
        summary = DensitySummary(
            config=cfg.effective(),
            eta=eta.eta,
            output=str(cfg.out) if cfg.out is not None else "",
            format=cfg.format,
            peak=float(np.max(grid.values)),
            mass=mass,
            covariance=covariance(grid).tolist(),
            axes_ratio=axes_ratio(grid),
            expected_axes_ratio=math.exp(abs(eta.eta)),
            major_axis_angle_deg=major_axis_angle(grid),
            normalization=norm,
        )
        logger.info(
            "density",
            extra={"extra": {"eta": eta.eta, "n_z": cfg.n_z, "n_t": cfg.n_t}},
        )
        return grid, summary

    def residual(self) -> ResidualReport:
        cfg = self.config
        eta = as_rapidity(cfg.eta, cfg.eta_max)
        points = probe_points(cfg.residual_extent, cfg.residual_points_per_axis)
        fit = invariant_residual(eta, points, cfg.fd_step, cfg.signature, cfg.eta_max)
        fit4 = invariant_residual_4d(probe_points_4d(cfg.residual_extent), cfg.fd_step, cfg.signature)
        worst = max(fit.max_residual, fit4.max_residual)
        if worst > cfg.residual_tol:
            raise ResidualAboveTolerance(
                f"max residual {worst:.3e} exceeds {cfg.residual_tol:.1e}",
                eta=eta.eta,
                h=cfg.fd_step,
                max_residual=fit.max_residual,
                max_residual_4d=fit4.max_residual,
            )
        return ResidualReport(
            config=cfg.effective(),
            eta=eta.eta,
            h=cfg.fd_step,
            signature=cfg.signature,
            n_points=len(points),
            lambda_fit=fit.lambda_fit,
            max_residual=fit.max_residual,
            tolerance=cfg.residual_tol,
            lambda_4d=fit4.lambda_fit,
            max_residual_4d=fit4.max_residual,
        )

    def expand(self) -> ExpansionReport:
        cfg = self.config
        eta = as_rapidity(cfg.eta, cfg.eta_max)
        coeffs = squeeze_expansion(
            eta,
            cfg.expansion_n_max,
            gauss_hermite(cfg.quadrature_order),
            min_order=cfg.min_quadrature_order,
            tol=cfg.convergence_tol,
            hermite_limit=cfg.hermite_n_max,
            eta_max=cfg.eta_max,
        )
        closed = squeezed_vacuum_coefficients(eta, cfg.expansion_n_max, cfg.eta_max)
        return ExpansionReport(
            config=cfg.effective(),
            eta=eta.eta,
            n_max=cfg.expansion_n_max,
            quadrature_order=cfg.quadrature_order,
            coefficients=coeffs.c.tolist(),
            closed_form=closed.tolist(),
            max_deviation_from_closed_form=float(np.max(np.abs(coeffs.c - closed))),
            ratio_expected=math.tanh(eta.eta / 2.0),
            max_off_diagonal=coeffs.max_off_diagonal,
            norm_deficit=coeffs.norm_deficit,
            tolerance=cfg.convergence_tol,
        )

    # ---------- Coupled oscillators ----------

    def modes(self) -> ModesReport:
        cfg = self.config
        sys_ = CoupledOscillatorSystem(m=cfg.mass, A=cfg.spring, C=cfg.coupling)
        nm = normal_modes(sys_)
        return ModesReport(
            config=cfg.effective(),
            m=sys_.m,
            A=sys_.A,
            C=sys_.C,
            K=nm.K,
            eta=nm.eta.eta,
            exp_2eta=math.exp(2.0 * nm.eta.eta),
            omega_plus=nm.omega_plus,
            omega_minus=nm.omega_minus,
            eigenvalues=np.linalg.eigvalsh(potential_matrix(sys_)).tolist(),
        )

    # ---------- Oscillator algebra ----------

    def algebra_check(self) -> AlgebraReport:
        cfg = self.config
        space = TruncatedFockSpace(n_max=cfg.fock_n_max)
        closure = verify_algebra(build_generators(space), cfg.interior_margin, cfg.closure_tol)
        if not closure.closed:
            raise ClosureFailure(
                f"interior residual {closure.max_interior_residual:.3e} exceeds "
                f"{cfg.closure_tol:.1e}",
                n_max=cfg.fock_n_max,
            )
        return AlgebraReport(config=cfg.effective(), closure=closure)
