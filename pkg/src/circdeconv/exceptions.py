"""Exception and warning types shared across the package."""


class CircDeconvError(Exception):
    """Base class for errors raised by circdeconv."""


class DataFormatError(CircDeconvError, ValueError):
    """Malformed input data: bad sample files, bad configs, bad spectra."""


class PreconditionError(CircDeconvError, ValueError):
    """A numeric precondition failed (e.g. an assumption under strict mode)."""


class InsufficientRangeError(PreconditionError):
    """A spectrum does not cover the indices an operation needs."""


class ReplicationError(CircDeconvError, RuntimeError):
    """A Monte Carlo replication aborted.

    The failing seed and replication index are attached so the run can be
    reproduced in isolation.
    """

    def __init__(self, message, seed=None, replication=None):
        super().__init__(message)
        self.seed = seed
        self.replication = replication


class AssumptionWarning(UserWarning):
    """A sample-size assumption of a selection rule does not hold."""
