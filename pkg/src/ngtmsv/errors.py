"""Exception types shared across the package."""


class NGError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(NGError, ValueError):
    """A parameter is outside its physical domain (bad lambda, tau, photon count)."""


class ConstructionError(NGError, ValueError):
    """A series/exponent object was built with inconsistent shapes or data."""


class ConsistencyError(NGError, ArithmeticError):
    """A physically real output carried a non-negligible imaginary residue,
    or an internal cross-check failed. Never silently discarded."""


class DegenerateOperationError(NGError, ArithmeticError):
    """Heralding probability fell below the representable cutoff; downstream
    normalized quantities are undefined."""


class DegenerateStateError(NGError, ArithmeticError):
    """The state carries no phase information (quantum Fisher information <= 0)."""


class StationaryPointError(NGError, ArithmeticError):
    """The parity signal has (numerically) zero slope at the requested phase;
    the error-propagation sensitivity is undefined there."""


class TruncationError(NGError, ValueError):
    """A Fock-space cutoff is too small for the requested accuracy."""


class NormalizationError(NGError, ValueError):
    """An operation that requires a normalized state received an unnormalized one."""


class UsageError(NGError, ValueError):
    """Bad command-line or config-file input. The message names the offending key."""
