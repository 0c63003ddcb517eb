"""Exception hierarchy. Everything derives from ``ValueError`` so callers
that only care about bad input can catch one type."""


class ConvLatticeError(ValueError):
    pass


class DimensionMismatchError(ConvLatticeError):
    pass


class InsufficientPointsError(ConvLatticeError):
    pass


class MalformedSubjectError(ConvLatticeError):
    pass


class NotCanonicalHomomorphismError(ConvLatticeError):
    pass


class InconsistentSampleError(NotCanonicalHomomorphismError):
    pass


class NonAffineDataError(NotCanonicalHomomorphismError):
    pass


class RankDeficientError(ConvLatticeError):
    pass


class UnsupportedOpenCaseError(ConvLatticeError):
    pass


class UndefinedPoleError(ConvLatticeError):
    pass


class DegenerateFamilyError(ConvLatticeError):
    pass


class SizeLimitError(ConvLatticeError):
    pass


class NotInClassError(ConvLatticeError):
    pass


class NotFoundError(ConvLatticeError):
    def __init__(self, message: str, step: str = ""):
        super().__init__(message)
        self.step = step
