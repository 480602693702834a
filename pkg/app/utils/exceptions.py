"""
    Error classes raised by the services and the scenario layer
"""


class CwReachError(Exception):
    """Base class for every error raised by this package"""


# DOMAIN errors : inputs a computation cannot accept
class DomainError(CwReachError, ValueError):
    pass


class DtOutOfRange(DomainError):
    pass


class SingularTransfer(DomainError):
    pass


class NotSymmetric(DomainError):
    pass


class EmptyList(DomainError):
    pass


class BadAxis(DomainError):
    pass


class AllZero(DomainError):
    pass


class BadGrid(DomainError):
    pass


class NoWitness(DomainError):
    pass


class BoundaryNotClear(DomainError):
    pass


class InsufficientSampling(DomainError):
    pass


class EndpointInside(DomainError):
    pass


class ChainBroken(DomainError):
    pass


class Unreachable(DomainError):
    pass


# SCENARIO errors : unreadable or invalid scenario documents
class ScenarioError(CwReachError, ValueError):
    pass


# IO errors : artifacts could not be written
class IoError(CwReachError, OSError):
    pass
