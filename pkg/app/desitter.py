"""Two-mode oscillator algebra on a truncated Fock space.

Basis |n1, n2⟩ with n_i ≤ n_max, flat index n1·(n_max + 1) + n2. Quadratic
generators are exact on the interior block (n1, n2 ≤ n_max − margin); only
that block is asserted, the full-space numbers are reported alongside.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, List, Literal, NamedTuple, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import ETA_MAX
from .errors import CutoffTooSmall, DimensionMismatch, InvalidParameter
from .lightcone import Rapidity, as_rapidity
from .schemas import ClosureReport, PairClosure

logger = logging.getLogger(__name__)

HERMITICITY_TOL = 1e-12

Role = Literal["rotation", "boost"]
Hermiticity = Literal["hermitian", "anti_hermitian"]
AlgebraKind = Literal["o32", "o21"]

_EXPECTED_SIZE: Dict[str, int] = {"o32": 10, "o21": 3}


class TruncatedFockSpace(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_max: int = Field(ge=1)

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def dimension(self) -> int:
        return self.levels * self.levels

    def index(self, n1: int, n2: int) -> int:
        if not (0 <= n1 <= self.n_max and 0 <= n2 <= self.n_max):
            raise InvalidParameter(f"occupation ({n1}, {n2}) outside cutoff {self.n_max}")
        return n1 * self.levels + n2

    def occupations(self, flat: int) -> Tuple[int, int]:
        if not 0 <= flat < self.dimension:
            raise InvalidParameter(f"flat index {flat} outside [0, {self.dimension})")
        return divmod(flat, self.levels)

    def interior_indices(self, margin: int = 2) -> np.ndarray:
        top = self.n_max - margin
        if top < 0:
            raise CutoffTooSmall(f"margin {margin} leaves no interior at n_max = {self.n_max}")
        return np.array([self.index(n1, n2) for n1 in range(top + 1) for n2 in range(top + 1)])


class FockOperator(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    n_max: int

    @field_validator("matrix")
    @classmethod
    def finite_square(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.all(np.isfinite(v)):
            raise ValueError("operator matrix must be finite")
        return v

    @model_validator(mode="after")
    def matches_space(self) -> "FockOperator":
        if self.matrix.shape[0] != (self.n_max + 1) ** 2:
            raise ValueError(
                f"matrix size {self.matrix.shape[0]} != (n_max + 1)² = {(self.n_max + 1) ** 2}"
            )
        return self

    def _same_space(self, other: "FockOperator") -> None:
        if other.n_max != self.n_max:
            raise DimensionMismatch(
                f"operators on cutoffs {self.n_max} and {other.n_max}",
                left=self.n_max,
                right=other.n_max,
            )

    def dagger(self) -> "FockOperator":
        return FockOperator(matrix=self.matrix.conj().T, n_max=self.n_max)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        self._same_space(other)
        return FockOperator(matrix=self.matrix @ other.matrix, n_max=self.n_max)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._same_space(other)
        return FockOperator(matrix=self.matrix + other.matrix, n_max=self.n_max)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        self._same_space(other)
        return FockOperator(matrix=self.matrix - other.matrix, n_max=self.n_max)

    def __mul__(self, scalar: complex) -> "FockOperator":
        return FockOperator(matrix=scalar * self.matrix, n_max=self.n_max)

    __rmul__ = __mul__

    def block(self, indices: np.ndarray) -> np.ndarray:
        return self.matrix[np.ix_(indices, indices)]


class Generator(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    operator: FockOperator
    role: Role
    hermiticity: Hermiticity = "hermitian"


class GeneratorSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: AlgebraKind
    space: TruncatedFockSpace
    generators: Tuple[Generator, ...]

    @model_validator(mode="after")
    def complete(self) -> "GeneratorSet":
        expected = _EXPECTED_SIZE[self.kind]
        if len(self.generators) != expected:
            raise ValueError(f"{self.kind} needs {expected} generators, got {len(self.generators)}")
        if len({g.name for g in self.generators}) != expected:
            raise ValueError("generator names must be unique")
        return self

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def __getitem__(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)


class StepOperators(NamedTuple):
    a1: FockOperator
    a1_dag: FockOperator
    a2: FockOperator
    a2_dag: FockOperator


# ---------- Construction ----------


def step_operators(space: TruncatedFockSpace) -> StepOperators:
    """a|n⟩ = √n |n−1⟩ per mode, tensored with the identity on the other mode."""
    if space.n_max < 2:
        raise CutoffTooSmall(f"step operators need n_max >= 2, got {space.n_max}")
    lower = np.diag(np.sqrt(np.arange(1, space.levels, dtype=float)), k=1)
    eye = np.eye(space.levels)
    a1 = FockOperator(matrix=np.kron(lower, eye), n_max=space.n_max)
    a2 = FockOperator(matrix=np.kron(eye, lower), n_max=space.n_max)
    return StepOperators(a1=a1, a1_dag=a1.dagger(), a2=a2, a2_dag=a2.dagger())


def identity(space: TruncatedFockSpace) -> FockOperator:
    return FockOperator(matrix=np.eye(space.dimension), n_max=space.n_max)


def hermiticity_error(gen: Generator) -> float:
    m = gen.operator.matrix
    adj = m.conj().T
    diff = m - adj if gen.hermiticity == "hermitian" else m + adj
    return float(np.linalg.norm(diff))


def _checked(kind: AlgebraKind, space: TruncatedFockSpace, gens: List[Generator]) -> GeneratorSet:
    for g in gens:
        err = hermiticity_error(g)
        if err > HERMITICITY_TOL:
            raise ValueError(f"generator {g.name} is not {g.hermiticity} (error {err:.3e})")
    return GeneratorSet(kind=kind, space=space, generators=tuple(gens))


def build_generators(space: TruncatedFockSpace) -> GeneratorSet:
    """The ten Hermitian quadratics of the two-mode realization of sp(4, R) ≅ o(3, 2).

    J0 (total number), J1..J3 (rotations mixing the modes; J2 rotates the 1–2 plane),
    K1..K3 and Q1..Q3 (single- and two-mode squeezes).
    """
    if space.n_max < 4:
        raise CutoffTooSmall(f"generator algebra needs n_max >= 4, got {space.n_max}")
    a1, a1d, a2, a2d = step_operators(space)
    one = identity(space)
    n1, n2 = a1d @ a1, a2d @ a2
    up1, up2, up12 = a1d @ a1d, a2d @ a2d, a1d @ a2d
    dn1, dn2, dn12 = a1 @ a1, a2 @ a2, a1 @ a2

    def gen(name: str, op: FockOperator, role: Role) -> Generator:
        return Generator(name=name, operator=op, role=role)

    gens = [
        gen("J0", 0.5 * (n1 + n2 + one), "rotation"),
        gen("J1", 0.5 * (a1d @ a2 + a2d @ a1), "rotation"),
        gen("J2", -0.5j * (a1d @ a2 - a2d @ a1), "rotation"),
        gen("J3", 0.5 * (n1 - n2), "rotation"),
        gen("K1", 0.25 * (up1 + dn1 - up2 - dn2), "boost"),
        gen("K2", 0.25j * (up1 - dn1 + up2 - dn2), "boost"),
        gen("K3", 0.5 * (up12 + dn12), "boost"),
        gen("Q1", -0.25j * (up1 - dn1 - up2 + dn2), "boost"),
        gen("Q2", -0.25 * (up1 + dn1 + up2 + dn2), "boost"),
        gen("Q3", 0.5j * (up12 - dn12), "boost"),
    ]
    return _checked("o32", space, gens)


def single_mode_generators(space: TruncatedFockSpace, mode: int = 1) -> GeneratorSet:
    """The o(2, 1) triple ½(a†a + ½), ¼(a†² + a²), −(i/4)(a†² − a²) of one oscillator."""
    if space.n_max < 4:
        raise CutoffTooSmall(f"generator algebra needs n_max >= 4, got {space.n_max}")
    if mode not in (1, 2):
        raise InvalidParameter(f"mode must be 1 or 2, got {mode}")
    ops = step_operators(space)
    a, ad = (ops.a1, ops.a1_dag) if mode == 1 else (ops.a2, ops.a2_dag)
    up, dn = ad @ ad, a @ a
    gens = [
        Generator(name="L0", operator=0.5 * (ad @ a + 0.5 * identity(space)), role="rotation"),
        Generator(name="L1", operator=0.25 * (up + dn), role="boost"),
        Generator(name="L2", operator=-0.25j * (up - dn), role="boost"),
    ]
    return _checked("o21", space, gens)


# ---------- Algebra ----------


def commutator(a: FockOperator, b: FockOperator) -> FockOperator:
    return a @ b - b @ a


def verify_algebra(gens: GeneratorSet, margin: int = 2, tol: float = 1e-10) -> ClosureReport:
    """Fit every pairwise commutator onto the generator span on the interior block."""
    space = gens.space
    if space.n_max < 6:
        raise CutoffTooSmall(f"closure check needs n_max >= 6, got {space.n_max}")
    idx = space.interior_indices(margin)
    names = gens.names
    basis = np.stack([g.operator.block(idx).ravel() for g in gens.generators], axis=1)
    full_basis = np.stack([g.operator.matrix.ravel() for g in gens.generators], axis=1)

    pairs = list(itertools.combinations(range(len(names)), 2))
    comms = [
        commutator(gens.generators[i].operator, gens.generators[j].operator).matrix
        for i, j in pairs
    ]
    targets = np.stack([c[np.ix_(idx, idx)].ravel() for c in comms], axis=1)
    coeffs, _, _, _ = scipy.linalg.lstsq(basis, targets)

    report = ClosureReport(
        n_max=space.n_max,
        interior_margin=margin,
        interior_dimension=len(idx),
        generators=names,
        tolerance=tol,
    )
    for p, (i, j) in enumerate(pairs):
        c = coeffs[:, p]
        interior = float(np.linalg.norm(targets[:, p] - basis @ c))
        full = float(np.linalg.norm(comms[p].ravel() - full_basis @ c))
        f = c / 1j
        report.pairs.append(
            PairClosure(
                left=names[i],
                right=names[j],
                interior_residual=interior,
                full_residual=full,
                structure_constants={n: float(v) for n, v in zip(names, f.real)},
                non_hermitian_part=float(np.max(np.abs(f.imag))),
            )
        )
    report.max_interior_residual = max(pc.interior_residual for pc in report.pairs)
    report.max_full_residual = max(pc.full_residual for pc in report.pairs)
    report.closed = report.max_interior_residual <= tol
    logger.info(
        "verify_algebra",
        extra={
            "extra": {
                "kind": gens.kind,
                "n_max": space.n_max,
                "pairs": len(pairs),
                "max_interior_residual": report.max_interior_residual,
                "max_full_residual": report.max_full_residual,
            }
        },
    )
    return report


# ---------- Squeezed vacuum ----------


class SqueezedVacuum(NamedTuple):
    coefficients: np.ndarray
    max_off_diagonal: float


def squeeze_vacuum(
    space: TruncatedFockSpace, eta: float | Rapidity, eta_max: float = ETA_MAX
) -> SqueezedVacuum:
    """exp{(η/2)(a1†a2† − a1a2)}|0,0⟩ = exp(−iη Q3)|0,0⟩, read off on the |n, n⟩ diagonal."""
    r = as_rapidity(eta, eta_max).eta / 2.0
    ops = step_operators(space)
    gen = r * (ops.a1_dag @ ops.a2_dag - ops.a1 @ ops.a2)
    # the generator is real, so the propagator is too
    propagator = scipy.linalg.expm(gen.matrix.real)
    state = propagator[:, space.index(0, 0)]
    diag_idx = [space.index(n, n) for n in range(space.levels)]
    coefficients = state[diag_idx].copy()
    rest = np.delete(state, diag_idx)
    return SqueezedVacuum(
        coefficients=coefficients,
        max_off_diagonal=float(np.max(np.abs(rest))) if rest.size else 0.0,
    )
