"""Exception types shared across the pipeline."""


class InsufficientRelations(RuntimeError):
    """Not enough relations (or dependencies) to continue; ``found`` says how many."""

    def __init__(self, message: str, found: int = 0):
        super().__init__(message)
        self.found = found


class EarlyFactor(Exception):
    """A factor of N turned up as a side effect (e.g. a reducible polynomial).

    Not a failure: callers catch this and use ``factor``.
    """

    def __init__(self, factor: int, reason: str):
        super().__init__(f"{reason}: found factor {factor}")
        self.factor = factor
        self.reason = reason


class AlgebraicSqrtError(RuntimeError):
    """The selected product is not a square in Z[alpha] (missing character columns)."""


class DensityError(RuntimeError):
    """Smooth-pair density could not be estimated from the sample."""


class PipelineFailure(RuntimeError):
    """Retry budget exhausted; ``stats`` carries what happened."""

    def __init__(self, message: str, stats: dict):
        super().__init__(message)
        self.stats = stats
