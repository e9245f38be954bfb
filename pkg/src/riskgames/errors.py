"""Exception hierarchy shared across the package.

Two families matter to the CLI: ``GameValidationError`` maps to exit code 1
(bad input files or arguments), ``NumericsError`` maps to exit code 2
(a computation could not be carried out).
"""


class RiskGameError(Exception):
    """Base class for all package errors."""


class GameValidationError(RiskGameError):
    """Invalid game description or arguments."""


class ParseError(GameValidationError):
    """Game file could not be parsed; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class MissingProfile(GameValidationError):
    """Payoff table does not cover every (player, pure profile) cell."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        cells = ", ".join(f"player {p!r} at {s}" for p, s in self.missing)
        super().__init__(f"payoff table incomplete: {cells}")


class UnboundParameter(GameValidationError):
    """An expression references a parameter with no binding."""


class NumericsError(RiskGameError):
    """A numerical operation failed or was refused."""


class ZeroMass(NumericsError):
    """Distribution has no mass to normalize."""


class NotNormalized(NumericsError):
    """Operation requires a normalized distribution."""


class GridTooCoarse(NumericsError):
    """Convolution grid step too large for the narrowest component."""


class TupleExplosion(NumericsError):
    """Opponent-profile tuple enumeration exceeds the configured cap."""


class NoInteriorRoot(NumericsError):
    """Indifference polynomial has no root inside [0, 1]."""


class DegenerateSupportWarning(UserWarning):
    """Singular indifference system for a candidate support; it was skipped."""
