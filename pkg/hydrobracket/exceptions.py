from __future__ import annotations

from typing import TYPE_CHECKING, Any, Optional, Tuple

if TYPE_CHECKING:
    from hydrobracket.verification import VerificationReport


class HydroBracketError(Exception):
    """
    Base class of every error raised by hydrobracket.
    """


class DimensionMismatch(HydroBracketError, ValueError):
    """
    Raised when operands live over different numbers of field variables, when matrix shapes do not
    agree, or when a variable index is out of range.
    """


class NotClosed(HydroBracketError):
    """
    Raised when a covector field handed to an integration is not closed, i.e.
    dv_i/du^j - dv_j/du^i is not the zero polynomial.

    :param i: 0-based index of the first component.
    :param j: 0-based index of the second component.
    :param residual: dv_i/du^j - dv_j/du^i.
    :param stage: for two-stage Hessian integration, the stage (1 or 2) that failed, otherwise None.
    """

    def __init__(self, i: int, j: int, residual: Any, stage: Optional[int] = None):
        super().__init__(i, j, residual, stage)
        self.i = i
        self.j = j
        self.residual = residual
        self.stage = stage

    def __str__(self) -> str:
        where = f" (stage {self.stage})" if self.stage is not None else ""
        return f"1-form not closed at components ({self.i}, {self.j}){where}: residual {self.residual}"


class NotSymmetric(HydroBracketError):
    """
    Raised when a matrix handed to Hessian integration is not symmetric.
    """

    def __init__(self, i: int, j: int, residual: Any):
        super().__init__(i, j, residual)
        self.i = i
        self.j = j
        self.residual = residual

    def __str__(self) -> str:
        return f"matrix not symmetric at ({self.i}, {self.j}): M_ij - M_ji = {self.residual}"


class JetOrderError(HydroBracketError):
    """
    Raised when a jet polynomial has a higher order in x-derivatives than an operation permits.
    """

    args: Tuple[int, int]


class SingularMatrixError(HydroBracketError, ValueError):
    """
    Raised when a constant matrix that must be nondegenerate has zero determinant.
    """


class NotSymmetricMatrixError(HydroBracketError, ValueError):
    """
    Raised when a constant matrix that must be symmetric is not.
    """


class PreconditionFailed(HydroBracketError):
    """
    Raised when the precondition of an operation does not hold for its input.

    :param message: what was expected.
    :param report: the failing verification, when the precondition is itself a verification.
    """

    def __init__(self, message: str, report: Optional[VerificationReport] = None):
        super().__init__(message)
        self.report = report


class IntegrationFailed(HydroBracketError):
    """
    Raised when an integration step that the theory guarantees to succeed did not. The underlying
    NotClosed/NotSymmetric error is chained as the cause.
    """


class CrossCheckFailed(HydroBracketError):
    """
    Raised when two independently computed forms of the same object disagree.
    """


class PolyParseError(HydroBracketError, ValueError):
    """
    Raised for malformed polynomial expressions.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(message, line, column)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.message} (line {self.line}, column {self.column})"


class ProblemFileError(HydroBracketError):
    """
    Raised when a structurally valid problem file cannot be turned into a spec.
    """
