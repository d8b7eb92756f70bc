# app/core/exceptions.py
from typing import Any, Dict, Optional, Type

from fastapi import HTTPException, status


class ReasoningException(Exception):
    """Base exception for every failure surfaced by the reasoning toolkit."""

    status_code = status.HTTP_400_BAD_REQUEST
    error_code = "reasoning_error"
    exit_code = 2

    def __init__(
        self, message: str, code: str = None, details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.code = code or self.error_code
        self.details = details or {}
        super().__init__(self.message)

    def to_http_exception(self) -> HTTPException:
        """Convert this exception to an HTTPException"""
        return HTTPException(
            status_code=self.status_code,
            detail={
                "error": self.code,
                "message": self.message,
                **({"details": self.details} if self.details else {}),
            },
        )


# Input exceptions
class MlnSyntaxException(ReasoningException):
    """Exception raised when an MLN, evidence, formula or theory text cannot be parsed."""

    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    error_code = "syntax_error"

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        details = dict(details or {})
        if line is not None:
            details["line"] = line
        if column is not None:
            details["column"] = column
        location = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{location}{message}", details=details)


class ValidationException(ReasoningException):
    """Exception raised when well-formed input violates a semantic constraint."""

    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    error_code = "validation_error"


class MissingTypeException(ValidationException):
    """Exception raised when a variable's type has no entry in the domain."""

    error_code = "missing_type"


class EmptyDomainException(ValidationException):
    """Exception raised when a used type has no constants."""

    error_code = "empty_domain"


class UnknownAtomException(ValidationException):
    """Exception raised when a formula mentions an atom outside the world universe."""

    error_code = "unknown_atom"


# Computation exceptions
class CapExceededException(ReasoningException):
    """Exception raised when an exponential procedure would exceed its configured cap."""

    status_code = status.HTTP_413_REQUEST_ENTITY_TOO_LARGE
    error_code = "cap_exceeded"


class InconsistentEvidenceException(ReasoningException):
    """Exception raised when evidence contradicts the hard rules."""

    status_code = status.HTTP_409_CONFLICT
    error_code = "inconsistent_evidence"
    exit_code = 3


class AllStrataInconsistentException(InconsistentEvidenceException):
    """Exception raised when even the highest cut of a theory is unsatisfiable."""

    error_code = "all_strata_inconsistent"


class NoHittingSetException(ReasoningException):
    """Exception raised when a hitting-set family contains an empty member."""

    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    error_code = "no_hitting_set"


class ComputationTimeoutException(ReasoningException):
    """Exception raised when a computation exceeds its time limit."""

    status_code = status.HTTP_504_GATEWAY_TIMEOUT
    error_code = "computation_timeout"


# Map exception classes to HTTP status codes
EXCEPTION_STATUS_CODES: Dict[Type[ReasoningException], int] = {
    MlnSyntaxException: status.HTTP_422_UNPROCESSABLE_ENTITY,
    ValidationException: status.HTTP_422_UNPROCESSABLE_ENTITY,
    MissingTypeException: status.HTTP_422_UNPROCESSABLE_ENTITY,
    EmptyDomainException: status.HTTP_422_UNPROCESSABLE_ENTITY,
    UnknownAtomException: status.HTTP_422_UNPROCESSABLE_ENTITY,
    CapExceededException: status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
    InconsistentEvidenceException: status.HTTP_409_CONFLICT,
    AllStrataInconsistentException: status.HTTP_409_CONFLICT,
    NoHittingSetException: status.HTTP_422_UNPROCESSABLE_ENTITY,
    ComputationTimeoutException: status.HTTP_504_GATEWAY_TIMEOUT,
}
