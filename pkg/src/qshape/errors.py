"""Exception hierarchy.

Every exception carries a short ``code`` used by the command-line front end
as a machine-parseable reason.
"""


class QShapeError(ValueError):
    code = "QShapeError"


class Degenerate(QShapeError):
    code = "Degenerate"


class FourthPowerNotFree(QShapeError):
    code = "FourthPowerNotFree"


class Reducible(QShapeError):
    code = "Reducible"


class ExcludedMinusFour(QShapeError):
    code = "ExcludedMinusFour"


class InvalidTau(QShapeError):
    code = "InvalidTau"


class NotPositiveDefinite(QShapeError):
    code = "NotPositiveDefinite"


class ReductionFailure(QShapeError):
    code = "ReductionFailure"


class FactorizationMismatch(QShapeError):
    """Raised when a projected Gram matrix differs from its torus factorization."""

    code = "FactorizationMismatch"

    def __init__(self, m, entry, observed, expected):
        self.m = m
        self.entry = entry
        self.observed = observed
        self.expected = expected
        super().__init__(
            f"m={m}: entry {entry} is {observed}, torus factorization gives {expected}"
        )


class ConfigError(QShapeError):
    code = "ConfigError"
