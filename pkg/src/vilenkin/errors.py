"""Exception types raised by the library.

Every error derives from :class:`VilenkinError`, itself a ``ValueError``, so
callers that only care about "bad input" can catch one thing.
"""


class VilenkinError(ValueError):
    pass


class RadixTooSmall(VilenkinError):
    pass


class Overflow(VilenkinError):
    """Cumulative product M_N does not fit in a signed 64-bit index."""


class StructureMismatch(VilenkinError):
    pass


class OutOfRange(VilenkinError):
    pass


class LevelOutOfRange(OutOfRange):
    pass


class OracleCapExceeded(VilenkinError):
    pass


class OrderOutOfRange(VilenkinError):
    pass


class LengthMismatch(VilenkinError):
    pass


class ZeroVector(VilenkinError):
    pass


class BadExponent(VilenkinError):
    pass


class SpecParseError(VilenkinError):
    """A radix, function or policy string could not be parsed."""
