"""Holds subset_approx exception base + any derived exceptions"""


class SubsetApproxException(Exception):
    pass


class InputError(SubsetApproxException, ValueError):
    """Malformed input, out-of-range identifiers or parameter domain violations."""


class ParseError(InputError):
    pass


class InvalidSolution(InputError):
    pass


class OracleMismatch(InputError):
    """The oracle's goal or supported kinds do not match the problem."""


class UnsupportedRestriction(SubsetApproxException):
    """The problem kind has no restriction operator I(e)."""


class BudgetExceeded(SubsetApproxException):
    def __init__(self, size, budget):
        self.size = size
        self.budget = budget
        super().__init__(f"Universe of size {size} exceeds exhaustive budget {budget}")


class InfeasibleInstance(SubsetApproxException):
    """An oracle was asked to solve an instance that has no feasible solution."""


class CommandFailed(SubsetApproxException):
    """Raised by the CLI once a failure has been reported; carries the exit code."""

    def __init__(self, exit_code: int):
        self.exit_code = exit_code
        super().__init__(f"Command failed with exit code {exit_code}")
