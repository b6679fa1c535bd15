"""
Exception hierarchy shared across scatterqubit.

Library code raises these; only the CLI maps them to exit codes:
- ConfigError -> 2 (bad run configuration or input file)
- OutputError -> 3 (output cannot be written)
- DomainError -> 4 (physics or numerics precondition violated)
"""


class ScatterQubitError(Exception):
    """Base class for every error raised by scatterqubit."""


class ConfigError(ScatterQubitError):
    """Raised when a run configuration or CLI override is invalid."""


class OutputError(ScatterQubitError):
    """Raised when a result file cannot be written."""


class DomainError(ScatterQubitError):
    """Raised when a computation is asked outside the model's domain."""
