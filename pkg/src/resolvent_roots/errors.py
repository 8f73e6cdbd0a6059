"""Exception hierarchy shared by every stage of the solver.

Each class carries the process exit code the CLI reports for it.
"""


class ResolventRootsError(Exception):
    exit_code = 2


class InputError(ResolventRootsError, ValueError):
    """Malformed user input (bad token, zero leading coefficient, low degree)."""

    exit_code = 1


class DegenerateInputError(ResolventRootsError):
    """The instance is mathematically singular for this method."""

    exit_code = 2


class MultipleSeedRootError(DegenerateInputError):
    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class ZeroNullspaceError(DegenerateInputError):
    """The linear system for the resolvent has full column rank."""


class DegenerateNullspaceError(DegenerateInputError):
    """The nullspace has dimension greater than one."""

    def __init__(self, message, dimension):
        super().__init__(message)
        self.dimension = dimension


class HomogenizationError(DegenerateInputError):
    pass


class SingularPointError(DegenerateInputError):
    """s = 0 is a singular point of the resolvent (leading coefficient vanishes)."""


class SingularIndexError(DegenerateInputError):
    def __init__(self, index):
        super().__init__(f"recurrence leading band vanishes at index {index}")
        self.index = index


class OracleError(ResolventRootsError):
    exit_code = 3


class NonConvergenceError(OracleError):
    def __init__(self, message, last=None, worst_residual=None):
        super().__init__(message)
        self.last = last
        self.worst_residual = worst_residual


class FlatDerivativeError(OracleError):
    def __init__(self, x):
        super().__init__(f"derivative vanishes near x = {x!r}")
        self.x = x
