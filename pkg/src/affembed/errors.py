"""Exception types shared across the package."""


class AffEmbedError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedTowerShape(AffEmbedError):
    pass


class ReducibleMinimalPolynomial(AffEmbedError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class DenominatorVanishes(AffEmbedError):
    def __init__(self, element, point=None):
        super().__init__(f"denominator of {element} vanishes at {point}")
        self.element = element
        self.point = point


class DegreeMismatch(AffEmbedError):
    pass


class BoundTooLarge(AffEmbedError):
    pass


class RetriesExhausted(AffEmbedError):
    def __init__(self, message, rejected=()):
        super().__init__(message)
        self.rejected = list(rejected)


class VerificationFailed(AffEmbedError):
    def __init__(self, check, witness=None):
        super().__init__(f"verification failed at {check}: {witness}")
        self.check = check
        self.witness = witness


class AllConstant(AffEmbedError):
    pass


class InconsistentSystem(AffEmbedError):
    pass


class NotNilpotentOnInput(AffEmbedError):
    pass


class NotClosed(AffEmbedError):
    pass


class InconsistentExtension(AffEmbedError):
    pass


class NotRestricting(AffEmbedError):
    pass


class TraceContradiction(AffEmbedError):
    pass
