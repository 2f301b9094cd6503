"""Exception types shared across the package."""


class KacflowError(Exception):
    """Base class for all package errors."""


class ParameterError(KacflowError):
    """Invalid process or model parameters."""


class DomainError(KacflowError):
    """Query outside the mathematical domain of an operation."""


class DegenerateLawError(DomainError):
    """The requested law is a point mass and has no density object."""


class InternalConsistencyError(KacflowError):
    """A numerical invariant failed during construction (e.g. non-monotone CDF)."""


class TrainingError(KacflowError):
    """Optimization diverged; carries the loss trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class IntegrationError(KacflowError):
    """Non-finite state during ODE integration; carries the last good node."""

    def __init__(self, message, last_time=None, last_state=None):
        super().__init__(message)
        self.last_time = last_time
        self.last_state = last_state


class ConfigError(KacflowError):
    """Malformed experiment configuration or CLI usage."""
