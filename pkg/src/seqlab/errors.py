"""Exception hierarchy shared by every seqlab module."""


class SeqlabError(Exception):
    """Base class for all errors raised by seqlab."""


class EvaluationError(SeqlabError):
    """A sequence or function could not be evaluated."""


class EvaluationOverflow(EvaluationError):
    """An evaluator produced a non-finite value (inf or NaN)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BudgetExceeded(EvaluationError):
    """A prefix longer than the configured evaluation budget was requested."""


class UnknownCatalogName(SeqlabError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidPairStream(SeqlabError, ValueError):
    """Pair gaps do not shrink over the checked prefix."""


class OutOfInterval(SeqlabError, ValueError):
    """A point fell outside its host interval."""


class DomainViolation(SeqlabError, ValueError):
    """A generator sequence left the domain of the function under test."""


class InvalidLacunarySchedule(SeqlabError, ValueError):
    pass


class MalformedMethod(SeqlabError, ValueError):
    """A summability method row is empty, unordered, or undefined."""


class UnboundedEvidence(SeqlabError):
    """Terms escaped the bounding window; ``index`` is the first escaping index."""

    def __init__(self, message, index, value):
        super().__init__(message)
        self.index = index
        self.value = value


class InsufficientTerms(SeqlabError):
    """A bounded prefix holds too few terms near any point for the requested tolerance."""
