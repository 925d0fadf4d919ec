"""Exception taxonomy shared by all qvaforge modules."""


class QvaError(Exception):
    """Base class for every error raised by qvaforge."""


class TruncationZero(QvaError):
    pass


class DisallowedPole(QvaError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class DivisionOutsideRing(DisallowedPole):
    """The quotient would need a pole factor outside the whitelist."""


class DisallowedPoleAfterShift(DisallowedPole):
    pass


class UnknownVariable(QvaError):
    pass


class UnsupportedFactor(QvaError):
    pass


class InsufficientLowTrunc(QvaError):
    pass


class MissingTableEntry(QvaError):
    pass


class ValidationFailed(QvaError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ExprSyntaxError(QvaError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnsupportedAxiom(QvaError):
    pass


class InconclusiveTruncation(QvaError):
    pass
