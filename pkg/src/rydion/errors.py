"""Exception types surfaced by the CLI with module-qualified codes."""

from __future__ import annotations


class RydionError(Exception):
    """Base class; `code` feeds the CLI exit status."""

    code = 1


class ConfigError(RydionError):
    """Invalid or inconsistent run configuration."""

    code = 2


class ConvergenceError(RydionError):
    """An iterative solver failed to converge; carries the last residual/bracket."""

    code = 3

    def __init__(self, message: str, *, residual: float | None = None,
                 bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.residual = residual
        self.bracket = bracket


class IntegrationError(RydionError):
    """Time integration failed; carries the diagnostic time."""

    code = 4

    def __init__(self, message: str, *, t: float | None = None):
        super().__init__(message)
        self.t = t


class TrackingError(RydionError):
    """Instantaneous-eigenstate continuation lost its branch."""

    code = 5

    def __init__(self, message: str, *, t: float | None = None):
        super().__init__(message)
        self.t = t
