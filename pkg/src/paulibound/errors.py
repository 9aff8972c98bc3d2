"""Exception hierarchy shared by the library and the CLI."""


class PauliBoundError(Exception):
    """Base class for every error raised by paulibound."""

    exit_code = 1


class ArgumentError(PauliBoundError, ValueError):
    """Invalid argument or parameter combination."""

    exit_code = 2


class SizeError(ArgumentError):
    """Qubit count outside the supported range."""


class ConstructionError(ArgumentError):
    """A feature map or Pauli term that cannot be built."""


class DataError(PauliBoundError, ValueError):
    """Malformed, non-finite or inconsistent input data."""

    exit_code = 3


class NumericalError(PauliBoundError, ArithmeticError):
    """A numerical consistency check or solver failed."""

    exit_code = 4
