"""Exception types shared across the package."""


class DqcPoolError(Exception):
    """Base class for all errors raised by dqcpool."""


class InvalidShapeError(DqcPoolError, ValueError):
    """System shape violates a structural requirement (e.g. odd M*N, M < 2)."""


class InvalidPairingError(DqcPoolError, ValueError):
    """Pairing parameters (x, y, R) are out of range or inconsistent."""


class InfeasibleCalibrationError(DqcPoolError, ValueError):
    """No growth base in the search bracket reproduces the two price points."""


class DegenerateInputError(DqcPoolError, ValueError):
    """Calibration points do not determine a unique solution."""


class InvalidInputError(DqcPoolError, ValueError):
    """A value fails a precondition (negative latency, empty sample, ...)."""


class InfeasibleScheduleError(DqcPoolError, RuntimeError):
    """A non-empty batch can never complete under the given resource model."""


class ConfigError(DqcPoolError, ValueError):
    """A sweep specification or configuration file is invalid."""
