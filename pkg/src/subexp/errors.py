"""Exception types shared across the package.

Everything raised on purpose derives from SubexpError so callers (and the CLI
runner) can distinguish modeling errors from genuine bugs.
"""


class SubexpError(Exception):
    """Base class for all deliberate failures."""


class NonIntegrable(SubexpError):
    """A test function cannot be integrated against a heavy-tailed member."""


class NotConvergent(SubexpError):
    """A requested limit (mean, truncation limit) does not exist."""


class QuadratureNotConverged(SubexpError):
    """Tail quadrature failed to bracket a finite value at the requested tolerance."""


class TargetOutOfRange(SubexpError):
    """Requested long-run mean lies outside the attainable mean interval."""


class TargetOutsideM(SubexpError):
    """Requested vector target is not in the mean set (simplex solve residual too large)."""


class MuNotAttainable(SubexpError):
    """A centering mean is not a mixture of member means."""


class DimensionTooLarge(SubexpError):
    """Direction nets are capped at dimension 4."""


class NonLattice(SubexpError):
    """Atom values are not integer multiples of the stated quantum."""


class StateSpaceTooLarge(SubexpError):
    """Dynamic program would exceed the documented state-count guard."""


class TooLargeForBruteForce(SubexpError):
    """Instance exceeds the brute-force oracle's enumeration limits."""


class SchemaError(SubexpError):
    """Configuration document violates the schema; message carries the field path."""
