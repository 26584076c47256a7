"""Exception hierarchy shared by every module of the package."""


class ResbasisError(Exception):
    """Base class for all errors raised by :mod:`resbasis`."""


class DomainError(ResbasisError, ValueError):
    """A radius lies outside the shell."""


class BreakpointError(ResbasisError, ValueError):
    """A quantity was requested exactly at a declared discontinuity."""


class DiscontinuousFieldError(ResbasisError, ValueError):
    """An H1-type quantity was requested for a field with breakpoints."""


class GeometryMismatchError(ResbasisError, ValueError):
    pass


class ParameterError(ResbasisError, ValueError):
    """Functional parameters fall outside the admissible strip."""


class MixedParameterError(ResbasisError, ValueError):
    """Modes from different parameter sets, geometries or weights were combined."""


class SchemaError(ResbasisError, ValueError):
    """Malformed sampled-field input."""


class ConvergenceError(ResbasisError, RuntimeError):
    """An iterative procedure failed to meet its tolerance."""


class DuplicateRootError(ConvergenceError):
    """Newton converged onto a mode that was already found."""


class SingularJacobianError(ConvergenceError):
    """The continuation Jacobian is numerically singular."""


class NonpositiveValueError(ResbasisError, ValueError):
    """A log-log fit met a value that is zero or negative."""


class EquilibriumWarning(UserWarning):
    """Sampled input is not a residual stress field to within tolerance."""
