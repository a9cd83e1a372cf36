"""Exception hierarchy.

Everything raised on purpose by this package derives from
:class:`CommCalcError`.  Violated mathematical preconditions (non-symmetric
input, loss of positive definiteness, a function undefined at a required
spectral pair, ...) derive from :class:`PreconditionError`, which the CLI maps
to exit code 2.
"""


class CommCalcError(Exception):
    """Base class for all errors raised by commcalc."""


class PreconditionError(CommCalcError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class NotSymmetricError(PreconditionError):
    pass


class NotPositiveDefiniteError(PreconditionError):
    pass


class DecompositionError(CommCalcError):
    """The symmetric eigensolver failed to converge."""


class UndefinedValueError(PreconditionError):
    """A function has no (extended) value at a required spectral pair.

    ``pairs`` lists the offending 0-based index pairs ``(i, j)``.
    """

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class SingularOperatorError(PreconditionError):
    """The symbol of an operator vanishes at some spectral pair."""

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class MultiplicityError(PreconditionError):
    """Repeated eigenvalues where distinct ones are required."""


class UnsupportedDimensionError(PreconditionError):
    pass


class SeriesDivergenceError(CommCalcError):
    """A truncated operator series failed to converge."""


class IntegrationError(CommCalcError):
    """Time integration failed (e.g. loss of positive definiteness)."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
