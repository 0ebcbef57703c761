"""Exception hierarchy shared by every module of the package."""


class DPPLoaderError(ValueError):
    """Base class for all errors raised by dpploader."""


class ZeroColumnError(DPPLoaderError):
    def __init__(self, column):
        super().__init__(f"column {column} has zero norm")
        self.column = column


class RankDeficientError(DPPLoaderError):
    pass


class NotSquareError(DPPLoaderError):
    pass


class OddDimensionError(DPPLoaderError):
    pass


class ConvergenceError(DPPLoaderError):
    pass


class WrongCardinalityError(DPPLoaderError):
    pass


class GroundSetTooLargeError(DPPLoaderError):
    pass


class NotUnitNormError(DPPLoaderError):
    pass


class AllEntriesBelowTolError(DPPLoaderError):
    pass


class PlanOutOfRangeError(DPPLoaderError):
    pass


class AdjacentQubitsError(DPPLoaderError):
    pass


class ROutOfRangeError(DPPLoaderError):
    pass


class BadRegisterSizeError(DPPLoaderError):
    pass


class UnsupportedGateError(DPPLoaderError):
    pass


class WidthMismatchError(DPPLoaderError):
    pass


class TrialBudgetExceeded(DPPLoaderError):
    """Raised when a rejection loop exhausts its trial budget."""

    def __init__(self, budget):
        super().__init__(f"no accepted sample within {budget} trials")
        self.budget = budget


class OutOfRangeError(DPPLoaderError):
    pass


class SketchFailure(DPPLoaderError):
    pass


class BadConfigError(DPPLoaderError):
    pass


class KindMismatchError(DPPLoaderError):
    pass


class GraphError(DPPLoaderError):
    """Malformed graph input (self-loop, duplicate edge, disconnected)."""
