"""Exception hierarchy shared by every module."""


class OrbitlockError(Exception):
    """Base class for all errors raised by the package."""


class CycleDetected(OrbitlockError):
    pass


class IndexOutOfRange(OrbitlockError):
    pass


class EmptySubset(OrbitlockError):
    pass


class ArityMismatch(OrbitlockError):
    pass


class CapExceeded(OrbitlockError):
    """An exact computation was refused because the input exceeds a size cap."""


class NotAnAntichainPartition(OrbitlockError):
    pass


class OrbitNotAntichain(OrbitlockError):
    pass


class BlockNotInStructure(OrbitlockError):
    pass


class NotTightIOU(OrbitlockError):
    pass


class TooFewBlocks(OrbitlockError):
    pass


class NotMaxLocked(OrbitlockError):
    pass


class BadVector(OrbitlockError):
    pass


class BadDivisor(OrbitlockError):
    pass


class NotFlexibleTightIOU(OrbitlockError):
    pass


class ParseError(OrbitlockError):
    pass


class UnknownSuite(OrbitlockError):
    pass


class InvariantViolation(OrbitlockError):
    """An internal consistency check failed. This is always a bug."""
