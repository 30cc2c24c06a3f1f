"""
Error taxonomy shared by every layer.

Services raise these; the command layer maps them to exit codes:
2 = the input violates the hypotheses, 3 = the numerics failed, 1 = I/O.
"""

from typing import Any, Dict, Optional


class MinkError(ValueError):
    exit_code = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    @property
    def error(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable payload printed by the CLI."""
        return {
            "error": self.error,
            "message": self.message,
            "exitCode": self.exit_code,
            "details": self.details,
        }


# ---------- Precondition violations (exit 2) ----------
class PreconditionError(MinkError):
    exit_code = 2

class NonSpacelikeSegment(PreconditionError):
    pass

class TooFewPoints(PreconditionError):
    pass

class NotStrongSpacelike(PreconditionError):
    pass

class AmbiguousLift(PreconditionError):
    pass

class DegeneratePlane(PreconditionError):
    pass

class DegenerateFrame(PreconditionError):
    pass

class NonConvexProjection(PreconditionError):
    pass

class CorrespondenceMismatch(PreconditionError):
    pass

class LookupMiss(PreconditionError):
    pass

class WrongIndex(PreconditionError):
    pass

class RejectionExhausted(PreconditionError):
    pass

class InvalidConfig(PreconditionError):
    pass


# ---------- Numerical failures (exit 3) ----------
class NumericalError(MinkError):
    exit_code = 3

class NoConvergence(NumericalError):
    pass

class GradientBlowup(NumericalError):
    pass

class MeshError(NumericalError):
    pass


# ---------- I/O (exit 1) ----------
class IoError(MinkError):
    exit_code = 1
