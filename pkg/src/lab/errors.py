# src/lab/errors.py
"""
Exception hierarchy for the numerical core.
Every error carries the module that raised it plus a context dict,
so the pipeline can surface "module: message" together with the inputs.
"""
from typing import Any, Dict


class LabError(Exception):
    """Base class for all numerical failures."""

    module: str = "lab"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        return {
            "module": self.module,
            "error": type(self).__name__,
            "message": self.message,
            "context": {k: repr(v) for k, v in sorted(self.context.items())},
        }


class ConfigError(Exception):
    """Run configuration does not parse or validate."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.message = message
        self.field = field

    def to_dict(self) -> Dict[str, Any]:
        return {"module": "cli", "error": "ConfigError", "message": self.message, "field": self.field}


# curve

class CurveError(LabError):
    module = "curve"


class JordanViolation(CurveError):
    pass


class CuspDetected(CurveError):
    pass


class AmbiguousLocation(CurveError):
    pass


class TraceFailure(CurveError):
    pass


# algcurve

class AlgCurveError(LabError):
    module = "algcurve"


class DegenerateDiscriminant(AlgCurveError):
    pass


class PathTooCloseToBranch(AlgCurveError):
    pass


class MonodromyAmbiguity(AlgCurveError):
    pass


class DegenerateSolve(AlgCurveError):
    pass


class EliminationDegenerate(AlgCurveError):
    pass


# potential

class PotentialError(LabError):
    module = "potential"


class TooCloseToBoundary(PotentialError):
    pass


class SolveSingular(PotentialError):
    pass


class EigSolverFailure(PotentialError):
    pass


# matching

class MatchingError(LabError):
    module = "matching"


class ConditionViolated(MatchingError):
    pass


class NotJordan(MatchingError):
    pass


class VerificationFailed(MatchingError):
    pass


# sphere

class SphereError(LabError):
    module = "sphere"


class SingularPoint(SphereError):
    pass


class CoincidentPoints(SphereError):
    pass
