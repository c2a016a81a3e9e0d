"""Exception hierarchy shared by all levyhit modules."""


class LevyHitError(Exception):
    """Base class for all package errors."""


class ParameterError(LevyHitError, ValueError):
    """A model, scheme or law parameter is out of its admissible range."""


class QuadratureError(LevyHitError, ArithmeticError):
    """A numerical integral failed to converge to the requested tolerance."""


class UnclassifiableError(LevyHitError):
    """No limit-regime hypothesis holds for the given triplet.

    Carries a human-readable description of which hypothesis failed.
    """


class InfiniteVariationError(LevyHitError):
    """The small-jump first absolute moment diverges."""


class UnsupportedLawError(LevyHitError):
    """No closed form is available for this limit law; use the MC oracle."""


class IntensityOverflow(LevyHitError):
    """Expected jump count per time step exceeds the configured bound."""


class HorizonExceeded(LevyHitError):
    """A simulated path failed to exit before the configured time cap."""


class EmptySeriesError(LevyHitError):
    """An estimator was evaluated on a series with no crossings."""


class PreconditionError(LevyHitError):
    """A study refused to run because the theorem's hypotheses fail."""


class InsufficientSignal(LevyHitError):
    """Bias is statistically indistinguishable from zero; no rate can be fit."""


class SchemaError(LevyHitError, ValueError):
    """An input file does not match the documented schema."""


class _RowError(LevyHitError, ValueError):
    """Validation error attached to a specific data row."""

    def __init__(self, message: str, row: int):
        super().__init__(f"{message} (row={row})")
        self.row = row


class MonotonicityError(_RowError):
    """Observation times are not strictly increasing."""


class BarrierViolationError(_RowError):
    """A rescaled increment has magnitude below the barrier level 1."""
