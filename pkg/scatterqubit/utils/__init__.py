"""
Utility subpackage initializer.

Shared plumbing used by every other layer of scatterqubit.

Included Modules:
- config: Environment + YAML application settings
- logger: Rich + file-based logger with custom SUCCESS level
- constants: Physical constants, enums, defaults and CSV layouts
- exceptions: Error hierarchy mapped onto CLI exit codes
- file_loader: Validated JSON run configs and CSV time series
- output_writer: Locked CSV/JSON writes with provenance sidecars

    from scatterqubit.utils import config, logger, constants
"""

from . import config
from . import logger
from . import constants
from . import exceptions
from . import file_loader
from . import output_writer

__all__ = [
    "config",
    "logger",
    "constants",
    "exceptions",
    "file_loader",
    "output_writer",
]
