"""
Structured logger for scatterqubit.

- Console logging (rich formatting, on stderr so stdout stays clean for results)
- Optional rotating file logging
- Custom SUCCESS level (25)
- Level and file logging from AppConfig (SCATTERQUBIT_LOG_LEVEL > config.yaml > INFO)
"""

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from scatterqubit.utils.config import config
from scatterqubit.utils.constants import LogLevel

LOGGER_NAME = "scatterqubit"

# === Register Custom SUCCESS Log Level ===
logging.addLevelName(LogLevel.SUCCESS, "SUCCESS")


def success(self, message, *args, **kwargs):
    """Custom SUCCESS level log method."""
    if self.isEnabledFor(LogLevel.SUCCESS):
        self._log(LogLevel.SUCCESS, message, args, **kwargs)


# Attach custom method to the logger
logging.Logger.success = success


def _resolve_level(level: Optional[str]) -> int:
    name = (level or config.log_level or "INFO").upper()
    return getattr(LogLevel, name, LogLevel.INFO)


class LoggerFactory:
    """
    Factory for creating Rich + optional rotating-file loggers.

    Uses the configured LOG_LEVEL unless an explicit level is passed.
    """

    @staticmethod
    def get_logger(
        name: str = LOGGER_NAME,
        log_to_file: bool = False,
        level: Optional[str] = None,
    ) -> logging.Logger:
        """
        Returns a logger with a stderr RichHandler and, optionally, a RotatingFileHandler.

        Args:
            name (str): Name of the logger instance.
            log_to_file (bool): Enable writing logs to disk under OUTPUT_DIR/logs.
            level (Optional[str]): Level name; falls back to the environment, then INFO.

        Returns:
            logging.Logger: Configured logger instance.
        """
        _logger = logging.getLogger(name)
        if _logger.handlers:
            return _logger

        log_level = _resolve_level(level)
        _logger.setLevel(log_level)
        _logger.propagate = False

        # === Console Logger ===
        console_handler = RichHandler(
            console=Console(stderr=True),
            markup=False,
            show_time=True,
            show_path=False,
            rich_tracebacks=True
        )
        console_handler.setLevel(log_level)
        _logger.addHandler(console_handler)

        # === File Logger ===
        if log_to_file:
            LoggerFactory.attach_file_handler(_logger)

        return _logger

    @staticmethod
    def attach_file_handler(_logger: logging.Logger, log_dir: Optional[Path] = None) -> None:
        """Adds a rotating file handler unless one is already attached."""
        if any(isinstance(h, RotatingFileHandler) for h in _logger.handlers):
            return
        log_dir = log_dir or config.output_dir / "logs"
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            filename=log_dir / "scatterqubit.log",
            maxBytes=5 * 1024 * 1024,
            backupCount=2,
            encoding="utf-8",
        )
        file_handler.setLevel(LogLevel.DEBUG)
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s | %(levelname)s | %(name)s | %(message)s'
        ))
        _logger.addHandler(file_handler)

    @staticmethod
    def set_level(_logger: logging.Logger, level: str) -> None:
        """Changes the level of the logger and all its console handlers."""
        log_level = _resolve_level(level)
        _logger.setLevel(log_level)
        for handler in _logger.handlers:
            if not isinstance(handler, RotatingFileHandler):
                handler.setLevel(log_level)


# === Default Global Logger Instance ===
logger = LoggerFactory.get_logger(log_to_file=config.log_to_file)
