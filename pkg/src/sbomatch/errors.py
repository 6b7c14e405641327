"""Shared exception types."""


class ValidationError(ValueError):
    """Input violates a documented invariant (bad parameters, infeasible sets, ...)."""


class ParseError(ValidationError):
    """Instance text is malformed; the message carries the offending line."""


class SizeLimitError(RuntimeError):
    """An exhaustive operation was asked to run beyond its configured size bound."""
