"""Exception hierarchy shared by all modules."""


class SATDError(Exception):
    """Base class for all package errors."""


class ContractViolation(SATDError, ValueError):
    """An input violates a documented precondition (bad shape, non-Hermitian, ...)."""


class SingularGeometry(SATDError, ArithmeticError):
    """The drive field vanishes (Omega = 0) where a polar angle is needed."""


class DressedFrameBreakdown(SATDError, ArithmeticError):
    """The dressed-state energy degenerates; the correction functions are undefined."""


class ConvergenceFailure(SATDError, RuntimeError):
    """An iterative solver exhausted its refinement budget."""
