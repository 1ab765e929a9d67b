"""Exception hierarchy shared by all modules."""


class DualCoverError(Exception):
    """Base class for errors raised by dualcover."""


class StructureError(DualCoverError, ValueError):
    """Malformed input: wrong shape, non-finite entries, empty index sets."""


class PreconditionError(DualCoverError, ValueError):
    """A documented precondition of an operation does not hold."""


class SizeCapError(DualCoverError, ValueError):
    """An exact solver was asked to handle more points than its cap allows."""
