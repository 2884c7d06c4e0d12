from __future__ import annotations

from typing import Any, Dict

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_IO = 3
EXIT_DOMAIN = 4
EXIT_CONVERGENCE = 5


class ToolkitError(Exception):
    exit_code = EXIT_DOMAIN

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = detail


# ---------- Domain errors ----------


class RapidityOutOfRange(ToolkitError):
    pass


class DegenerateCoupling(ToolkitError):
    pass


class OrderOverflow(ToolkitError):
    pass


class CutoffTooSmall(ToolkitError):
    pass


class DimensionMismatch(ToolkitError):
    pass


class InvalidParameter(ToolkitError):
    pass


# ---------- Convergence errors ----------


class QuadratureUnderResolved(ToolkitError):
    exit_code = EXIT_CONVERGENCE


class ResidualAboveTolerance(ToolkitError):
    exit_code = EXIT_CONVERGENCE


class ClosureFailure(ToolkitError):
    exit_code = EXIT_CONVERGENCE


class GridUnderResolved(ToolkitError):
    exit_code = EXIT_CONVERGENCE
