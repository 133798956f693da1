"""Exception types raised across the package."""


class DDBHError(Exception):
    """Base class for all package errors."""


class PoleHit(DDBHError):
    pass


class NoConvergence(DDBHError):
    pass


class DegenerateCubic(DDBHError):
    pass


class NoneFound(DDBHError):
    pass


class G2Undefined(DDBHError):
    pass


class TruncationTooSmall(DDBHError):
    pass


class DegenerateKernel(DDBHError):
    pass


class TruncationCeiling(DDBHError):
    pass


class XiOutOfRange(DDBHError):
    pass


class NearResonance(DDBHError):
    pass


class AtCriticalCoupling(DDBHError):
    pass


class StepTooLarge(DDBHError):
    pass


class EigenFailure(DDBHError):
    pass
