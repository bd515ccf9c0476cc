"""Exception types raised by harmonica."""


class HarmonicaError(ValueError):
    """Base class for all precondition failures."""


class InvalidDirection(HarmonicaError):
    pass


class InvalidExponent(HarmonicaError):
    pass


class InvalidParameter(HarmonicaError):
    pass


class NeedsWiderWindow(HarmonicaError):
    pass


class NeedsLargerBox(HarmonicaError):
    pass


class MeanNotZero(HarmonicaError):
    pass


class InvalidKernel(HarmonicaError):
    pass


class ResolutionMismatch(HarmonicaError):
    pass


class ComplementEmpty(HarmonicaError):
    pass
