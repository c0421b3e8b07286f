"""Exception types shared across the package."""


class LtahError(Exception):
    """Base class for all package-specific errors."""


class DatasetError(LtahError):
    """A dataset file or in-memory sample violates the input contract."""


class ConfigError(LtahError):
    """A scenario configuration file is malformed or inconsistent."""


class EstimabilityError(LtahError):
    """The requested quantity is not estimable from the given data."""


class WindowBeyondSupport(EstimabilityError):
    """The evaluation window extends past the largest observed time."""


class ZeroEventMass(EstimabilityError):
    """No estimated event mass inside the window, so the average hazard
    is undefined."""


class TooFewAtRisk(EstimabilityError):
    """Fewer than two subjects remain under the requested conditioning."""


class NoEvents(EstimabilityError):
    """A test statistic needs at least one observed event."""


class CalibrationFailed(LtahError):
    """A delayed-effect curve could not be calibrated to the target."""
