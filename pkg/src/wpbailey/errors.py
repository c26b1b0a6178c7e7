"""Exception types shared across the package."""


class WPBaileyError(Exception):
    """Base class for all errors raised by this package."""


class ScaleMismatchError(WPBaileyError):
    """Two series with different exponent scales were combined."""


class ExponentError(WPBaileyError):
    """An exponent is not representable at the current scale."""


class TruncationError(WPBaileyError):
    """A coefficient beyond the trusted order was requested."""


class SingularSpecializationError(WPBaileyError):
    """A parameter binding makes a denominator vanish."""


class UnboundParameterError(WPBaileyError):
    """An expression references a parameter with no bound value."""


class NonConvergentError(WPBaileyError):
    """An adaptive sum failed to stabilize within the term budget."""


class FormalConvergenceError(WPBaileyError):
    """An infinite product/sum argument has no positive q-order."""


class DualSubstitutionError(WPBaileyError):
    """An expression node has no exact image under q -> 1/q."""


class CatalogError(WPBaileyError, KeyError):
    """Unknown catalog pair or identity id."""


class DslError(WPBaileyError):
    """Parse or semantic error in the mini-language, with source position."""

    def __init__(self, message, span=None, expected=()):
        super().__init__(message)
        self.message = message
        self.span = span
        self.expected = tuple(expected)

    def __str__(self):
        loc = ""
        if self.span is not None:
            loc = f" at line {self.span.line}, column {self.span.column}"
        exp = ""
        if self.expected:
            exp = " (expected " + ", ".join(self.expected) + ")"
        return f"{self.message}{loc}{exp}"
