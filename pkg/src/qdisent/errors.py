"""Exception hierarchy shared by the library and the command-line front end."""


class QDisentError(Exception):
    """Base class for every error raised by qdisent."""


class DimensionError(QDisentError, ValueError):
    """Operand shapes do not match the declared subsystem dimensions."""


class InvalidStateError(QDisentError, ValueError):
    """A matrix or vector fails density-matrix / normalization validation."""


class NonHermitianError(InvalidStateError):
    pass


class UnsupportedDimensionsError(QDisentError, ValueError):
    """The requested operation is only defined for specific subsystem sizes."""


class NonCommutingError(QDisentError, ValueError):
    """Raised by the simultaneous diagonalizer when two inputs fail to commute.

    Attributes:
        pair: indices ``(i, j)`` of the offending matrices.
        residual: Frobenius norm of their commutator.
    """

    def __init__(self, pair, residual):
        self.pair = tuple(pair)
        self.residual = float(residual)
        super().__init__(
            f"matrices {self.pair[0]} and {self.pair[1]} do not commute "
            f"(commutator norm {self.residual:.3e})"
        )


class PreconditionViolated(QDisentError):
    """A disentanglement machine was asked to run on a set it is not built for."""


class NoMatchError(QDisentError, LookupError):
    """Input state is not (within tolerance) a member of the state set."""


class AmbiguousMatchError(QDisentError, LookupError):
    """More than one member of the state set matches the input."""


class ParseError(QDisentError, ValueError):
    """A state-set file could not be parsed.

    ``location`` is a field path such as ``states[1].data[3]`` or a
    ``line:column`` pair for syntax errors.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class NonUnitaryError(QDisentError, ValueError):
    """A basis change handed to a machine is not unitary."""
