class HvmaxError(Exception):
    """Base class for hvmax specific errors."""

    pass


class DominanceViolation(HvmaxError, ValueError):
    """Exception for a reference point that does not dominate the objectives.

    The single-solution hypervolume is only defined when every component of the Nadir point is
    strictly larger than the matching objective value. Gaps are never clamped.
    """

    pass


class NonPositiveSlack(HvmaxError, ValueError):
    """Exception for a slack that would place the shared Nadir value on or below the worst loss.

    Example:

        .. code::

            >>> hvmax.scalarize.mu_for_batch([0.5, 1.5], epsilon=0.0)
            Traceback (most recent call last):
            ...
            NonPositiveSlack: ...
    """

    pass


class ZeroVariance(HvmaxError, ValueError):
    """Exception for a paired t-test whose differences have no spread."""

    pass


class BadMagic(HvmaxError, ValueError):
    """Exception for an IDX file whose magic number is not the unsigned-byte 3D tensor one."""

    pass


class TruncatedFile(HvmaxError, ValueError):
    """Exception for an IDX file that is shorter than its header announces."""

    pass


class NumericalInstability(HvmaxError, ArithmeticError):
    """Exception for non-finite losses or gradients.

    This error is raised by :mod:`~hvmax.net` when a loss or a gradient entry is ``nan`` or
    infinite, which usually means that the learning rate is too large.
    """

    pass


class UnpairedRunsError(HvmaxError, ValueError):
    """Exception for runs that cannot be compared against each other.

    This error is raised when two runs differ in anything other than their objective, or when
    records to be aggregated do not share the same seeds and epochs.
    """

    pass


class CLIUsageError(HvmaxError):
    """Exception for CLI.

    CLI raises this exception when it receives invalid configuration.
    """

    pass
