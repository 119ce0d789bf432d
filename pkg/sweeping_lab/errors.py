"""
Error codes, the error payload model and the exception hierarchy.
"""

from typing import Annotated, Any, Final

from pydantic import BaseModel, ConfigDict, Field

ERROR_INVALID_INPUT: Final[str] = "invalid_input"
ERROR_DIMENSION_MISMATCH: Final[str] = "dimension_mismatch"
ERROR_STEP_RULE: Final[str] = "step_rule_violated"
ERROR_INVALID_SCENARIO: Final[str] = "invalid_scenario"
ERROR_SOLVER_FAILURE: Final[str] = "solver_failure"
ERROR_PROJECTION_FAILED: Final[str] = "projection_failed"
ERROR_STEP_FAILED: Final[str] = "step_failed"
ERROR_CHECK_FAILED: Final[str] = "check_failed"
ERROR_UNKNOWN_SUITE: Final[str] = "unknown_suite"


class ErrorResponse(BaseModel):
    """Model for error payloads written by the command-line front end."""

    model_config = ConfigDict(
        str_strip_whitespace=True,
        validate_assignment=True,
    )

    error: Annotated[str, Field(description="Error code")]
    message: Annotated[str, Field(description="Human-readable error message")]


class SweepingError(Exception):
    """Base class of every error raised by the laboratory."""

    error_code: str = ERROR_INVALID_INPUT

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(error=self.error_code, message=self.message)


class InvalidInputError(SweepingError, ValueError):
    """Rejected input: bad parameters, infeasible data, violated preconditions."""

    error_code = ERROR_INVALID_INPUT


class DimensionMismatchError(InvalidInputError):
    error_code = ERROR_DIMENSION_MISMATCH


class StepRuleError(InvalidInputError):
    """The time step does not satisfy h·(f_inf + k) ≤ r/2."""

    error_code = ERROR_STEP_RULE

    def __init__(self, message: str, minimal_n: int) -> None:
        super().__init__(f"{message}; minimal admissible n is {minimal_n}")
        self.minimal_n = minimal_n


class ScenarioError(InvalidInputError):
    """A scenario file could not be parsed; carries the offending location."""

    error_code = ERROR_INVALID_SCENARIO

    def __init__(self, message: str, location: str | None = None) -> None:
        detail = f"{location}: {message}" if location else message
        super().__init__(detail)
        self.location = location


class SolverError(SweepingError, RuntimeError):
    error_code = ERROR_SOLVER_FAILURE


class ProjectionFailedError(SolverError):
    error_code = ERROR_PROJECTION_FAILED


class StepFailedError(SolverError):
    """A catching-up step failed; the partial trajectory is kept for diagnostics."""

    error_code = ERROR_STEP_FAILED

    def __init__(self, message: str, partial: Any = None) -> None:
        super().__init__(message)
        self.partial = partial


class UnknownSuiteError(InvalidInputError):
    error_code = ERROR_UNKNOWN_SUITE
