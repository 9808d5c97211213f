"""Exception hierarchy shared by every module of the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by ``testideals``."""


class RingMismatch(AlgebraError):
    pass


class LengthMismatch(AlgebraError):
    pass


class NonPrimeChar(AlgebraError):
    pass


class DegreeExplosion(AlgebraError):
    """A configured size or degree limit was exceeded."""


class UnitIdeal(AlgebraError):
    pass


class HeightMismatch(AlgebraError):
    pass


class ZeroDivisorGamma(AlgebraError):
    """An element that must be a nonzerodivisor modulo ``I`` is not."""


class NoTestElementFound(AlgebraError):
    pass


class GenericityFailure(AlgebraError):
    pass


class NonPrincipalLink(AlgebraError):
    pass


class DegreeBoundTooSmall(AlgebraError):
    pass


class ContainmentViolation(AlgebraError):
    pass


class NotStabilized(AlgebraError):
    """The Frobenius chain was still growing at ``e_max``."""

    def __init__(self, e_max, chain=None):
        super().__init__(f"chain not stabilized by e_max={e_max}")
        self.e_max = e_max
        self.chain = chain or []


class ParseError(AlgebraError):
    def __init__(self, message, line=None, token=None):
        self.message = message
        where = ""
        if line is not None:
            where = f"line {line}: "
        if token is not None:
            message = f"{message} (at {token!r})"
        super().__init__(where + message)
        self.line = line
        self.token = token


class ChainNotAscending(AlgebraError):
    """A recorded chain ideal was not contained in its successor."""

    def __init__(self, e, chain=None):
        super().__init__(f"chain ideal at e={e} is not contained in its successor")
        self.e = e
        self.chain = chain or []
