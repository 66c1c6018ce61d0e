"""
Exception hierarchy shared by the kernel, the CLI and the HTTP service.

Every error carries the CLI exit code and the HTTP status it maps to, plus an
optional context dict that ends up in JSON error bodies.
"""

from typing import Any, Dict, Optional


class DupinCubeError(Exception):
    """Base class for all domain errors"""

    exit_code: int = 2
    status_code: int = 400

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "detail": self.message,
            "error": type(self).__name__,
            "context": self.context,
        }


# Invalid input (exit code 2)

class InvalidInputError(DupinCubeError):
    exit_code = 2
    status_code = 400


class ZeroPair(InvalidInputError):
    """Homogeneous pair (0, 0)"""


class CoincidentPoints(InvalidInputError):
    pass


class NonCollinearInput(InvalidInputError):
    pass


class NonOrthogonalTangents(InvalidInputError):
    pass


class NonConcyclicCorners(InvalidInputError):
    pass


class DegenerateTriangle(InvalidInputError):
    pass


class DegenerateArc(InvalidInputError):
    pass


class ZeroMultiplier(InvalidInputError):
    pass


class IncompatibleFaces(InvalidInputError):
    pass


class InvalidParameter(InvalidInputError):
    pass


class OutOfRegion(InvalidInputError):
    pass


class ParseError(InvalidInputError):
    pass


class InvariantViolation(InvalidInputError):
    pass


class NotSymmetricForm(InvalidInputError):
    pass


class SingularCurve(InvalidInputError):
    pass


# Degenerate geometry (exit code 3)

class DegenerateError(DupinCubeError):
    exit_code = 3
    status_code = 422


class DegenerateCube(DegenerateError):
    pass


class DegenerateSlice(DegenerateError):
    pass


class IdenticallyZero(DegenerateError):
    """Implicit determinant vanishes identically"""


class IndeterminatePoint(DegenerateError):
    """U and W vanish together (base point)"""


class PoleEncountered(DegenerateError):
    """Derivative requested where W = 0"""


# Numerically undecidable (exit code 4)

class NumericalError(DupinCubeError):
    exit_code = 4
    status_code = 422


class UnclassifiableNumerically(NumericalError):
    pass


class SolverInconclusive(NumericalError):
    pass


class PointNearSingularity(NumericalError):
    pass
