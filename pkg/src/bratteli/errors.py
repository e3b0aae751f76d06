"""Exception hierarchy.

Every library error derives from :class:`BratteliError`; the CLI maps the
subclasses onto exit codes.
"""


class BratteliError(Exception):
    """Base class for all library errors."""


class ZeroBand(BratteliError, ZeroDivisionError):
    """Normalizing a band whose coefficients sum to zero."""


class RuleOverflow(BratteliError, ValueError):
    """A sequence rule produced a value that is not a valid incidence entry."""


class FiniteHorizon(BratteliError, IndexError):
    """A diagram has no data for the requested level."""


class Intractable(BratteliError):
    """An enumeration guard tripped."""


class MissingEdge(BratteliError, ValueError):
    """A path or odometer uses an edge that does not exist."""


class MixedKinds(BratteliError, TypeError):
    """Constant and finitely supported measure vectors at adjacent levels."""


class NotECS(BratteliError, ValueError):
    """A windowed subdiagram does not have equal column sums."""

    def __init__(self, message, level=None, columns=None):
        super().__init__(message)
        self.level = level
        self.columns = columns


class InvalidOrder(BratteliError, ValueError):
    """An edge order is not a total order on the incoming slots."""


class InvalidKernel(BratteliError, ValueError):
    """Markov edge probabilities violate positivity or normalization."""
