"""Exception hierarchy shared by every module."""


class LevyError(Exception):
    """Base class for all package errors."""


class DomainError(LevyError, ValueError):
    """Argument outside the domain of an operation (e.g. x not in (0, 1])."""


class BvRequired(LevyError):
    """The operation needs a jump part of bounded variation."""


class UnsupportedFunctional(LevyError):
    """The measure family cannot supply the requested quantity."""


class EvaluationError(LevyError):
    """An integrand returned NaN or +inf."""


class InconclusiveBracket(LevyError):
    """A critical-constant search hit an Inconclusive verdict."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class NonMonotoneVerdict(LevyError):
    """Verdicts of a parameterised test were not monotone in the parameter."""


class InfiniteActivityRequired(LevyError):
    """The measure is finite but the operation needs infinite activity."""


class SamplingUnsupported(LevyError):
    """The jump family cannot be sampled."""


class SimulationError(LevyError):
    """A simulated path produced a non-finite value."""


class InconclusiveClassification(LevyError):
    """A classification depends on an Inconclusive integral verdict."""

    def __init__(self, message, verdict=None, basis=None):
        super().__init__(message)
        self.verdict = verdict
        self.basis = basis
