"""Exception hierarchy shared by every layer of the engine."""


class GosperKarajiError(Exception):
    """Base class for all engine errors."""


class ResourceLimit(GosperKarajiError):
    """An intermediate polynomial exceeded the degree or bit-length caps."""


class ZeroDenominator(GosperKarajiError, ZeroDivisionError):
    pass


class DomainError(GosperKarajiError, ValueError):
    """A term was evaluated outside the set where it is defined."""


class NotHypergeometric(GosperKarajiError):
    pass


class ParseError(GosperKarajiError, ValueError):
    """Raised by the term parser.

    ``offset`` is the byte offset of the offending token and ``expected``
    the sorted set of token kinds that would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class NoPrefixSum(GosperKarajiError):
    pass


class InvalidPrefixSum(GosperKarajiError):
    pass


class NotPolynomial(GosperKarajiError):
    """A term or prefix sum that had to be a polynomial in k was not one."""
