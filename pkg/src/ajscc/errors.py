"""Exception types shared across the package."""


class AjsccError(Exception):
    """Base class; ``code`` is the short machine-readable tag used by the CLI."""

    code = "ajscc"


class DomainError(AjsccError, ValueError):
    """An input lies outside the range an operation is defined on."""

    code = "domain"


class ConfigError(AjsccError, ValueError):
    """A configuration is inconsistent or has no calibration data."""

    code = "config"
