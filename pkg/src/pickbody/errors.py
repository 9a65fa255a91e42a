"""Exception types shared across the package."""


class PickbodyError(Exception):
    """Base class for all library errors."""


class InvalidInput(PickbodyError):
    """Malformed or out-of-domain input."""


class PreconditionViolation(PickbodyError):
    """An operation was invoked on data that fails its contract."""


class DegenerateBoundaryPair(PickbodyError):
    """Pseudohyperbolic distance is undefined for an equal boundary pair."""


class ReconstructionFailure(PickbodyError):
    """Interpolation data admits no Blaschke product of the requested degree."""


class NoBoundaryScale(PickbodyError):
    """The zero tuple cannot be scaled onto the boundary."""
