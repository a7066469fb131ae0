"""
Arbor Errors.

Error codes shared by every module, the exception raised when an operation cannot proceed, and the result type of
validity checks. Checks never raise to say "no": they return a `CheckResult` carrying the offending pair or triple.

Classes:
    - ErrorCode: Enumeration of error codes.
    - WorkbenchError: Exception carrying an error code and an optional counterexample.
    - CheckResult: Outcome of a validity check.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any

from typing_extensions import Self

from arbor.core.utils.constants import ExitCode


class ErrorCode(str, Enum):
    """
    Error codes raised by workbench operations.
    """

    DOMAIN_MISMATCH = "DOMAIN_MISMATCH"
    EQUAL_INPUT = "EQUAL_INPUT"
    NOT_A_CODE = "NOT_A_CODE"
    NOT_A_TREE = "NOT_A_TREE"
    NOT_MONOTONE = "NOT_MONOTONE"
    NOT_TOTAL = "NOT_TOTAL"
    NO_CERTIFICATE = "NO_CERTIFICATE"
    INFINITE_BRANCHING = "INFINITE_BRANCHING"
    UNMAPPED_NODE = "UNMAPPED_NODE"
    NOT_COMPLETELY_BRANCHING = "NOT_COMPLETELY_BRANCHING"
    BAD_CODE = "BAD_CODE"
    AMBIGUOUS_AT_HORIZON = "AMBIGUOUS_AT_HORIZON"
    NOT_TRANSITIVE = "NOT_TRANSITIVE"
    NOT_HOMOGENEOUS = "NOT_HOMOGENEOUS"
    NOT_SEMI_HEREDITARY = "NOT_SEMI_HEREDITARY"
    INVALID_SOLUTION = "INVALID_SOLUTION"
    NOT_WEAKLY_HOMOGENEOUS = "NOT_WEAKLY_HOMOGENEOUS"
    NOT_SEMI_ANCESTRAL = "NOT_SEMI_ANCESTRAL"
    NOT_SEMI_HEREDITARY_ON_H = "NOT_SEMI_HEREDITARY_ON_H"
    SIZE_LIMIT = "SIZE_LIMIT"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
    NOT_ENUMERATED = "NOT_ENUMERATED"
    HORIZON_TOO_SMALL = "HORIZON_TOO_SMALL"
    UNKNOWN_FAMILY = "UNKNOWN_FAMILY"
    BAD_PARAMS = "BAD_PARAMS"
    TYPE_MISMATCH = "TYPE_MISMATCH"
    UNSOUND = "UNSOUND"
    PARSE_ERROR = "PARSE_ERROR"

    @property
    def exit_code(self) -> ExitCode:
        """
        Exit code of the CLI when a command stops on this error.

        Returns:
            The exit code from the CLI contract.
        """
        if self in _USAGE_CODES:
            return ExitCode.USAGE_ERROR
        if self in _LIMITATION_CODES:
            return ExitCode.LIMITATION
        return ExitCode.VERIFICATION_FAILURE


_USAGE_CODES = frozenset(
    {
        ErrorCode.PARSE_ERROR,
        ErrorCode.UNKNOWN_FAMILY,
        ErrorCode.BAD_PARAMS,
        ErrorCode.TYPE_MISMATCH,
        ErrorCode.EQUAL_INPUT,
    },
)

_LIMITATION_CODES = frozenset(
    {
        ErrorCode.NO_CERTIFICATE,
        ErrorCode.AMBIGUOUS_AT_HORIZON,
        ErrorCode.SIZE_LIMIT,
        ErrorCode.BUDGET_EXHAUSTED,
        ErrorCode.HORIZON_TOO_SMALL,
        ErrorCode.NOT_ENUMERATED,
    },
)


class WorkbenchError(Exception):
    """
    Raised when an operation cannot produce its result.

    Attributes:
        code: The error code.
        counterexample: The offending object(s), when the failure has a witness.
    """

    def __init__(self, code: ErrorCode, message: str, counterexample: Any = None) -> None:  # noqa: ANN401
        super().__init__(f"{code.value}: {message}")
        self.code = code
        self.counterexample = counterexample


@dataclass(frozen=True)
class CheckResult:
    """
    Outcome of a validity check: `ok`, or the witness of the violation.
    """

    ok: bool
    counterexample: tuple[Any, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls) -> Self:
        return cls(True)

    @classmethod
    def failed(cls, *witness: Any) -> Self:  # noqa: ANN401
        return cls(False, tuple(witness))

    def raise_for(self, code: ErrorCode, message: str) -> None:
        """
        Raise a WorkbenchError when the check failed.

        Args:
            code: The error code to raise.
            message: Human-readable description of the precondition.

        Raises:
            WorkbenchError: If the check did not pass.
        """
        if not self.ok:
            raise WorkbenchError(code, f"{message} (counterexample: {self.counterexample})", self.counterexample)
