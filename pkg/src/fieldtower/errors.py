"""Exception types shared across the kernel."""


class KernelError(Exception):
    """Base class for kernel-specific failures."""


class PrecisionError(KernelError):
    """A question was asked that the known windows cannot decide.

    Raised instead of guessing: the kernel never reports a coefficient,
    membership bit, or valuation that is not certified by the data it holds.
    """


class CertificationError(KernelError):
    """A required nonzero/invertibility certificate is missing or wrong."""
