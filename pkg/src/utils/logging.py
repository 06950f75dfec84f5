"""
Logging setup and utilities for the circle-method toolkit.

structlog renders events on top of the stdlib handlers configured here.
Everything goes to stderr so that command output on stdout stays
byte-for-byte reproducible.
"""

import functools
import json
import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

import structlog


def setup_logging(
    level: str = "WARNING",
    log_file: Optional[str] = None,
    json_format: bool = False,
    include_timestamp: bool = True,
) -> None:
    """
    Set up application logging.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional log file path
        json_format: Whether to render events as JSON
        include_timestamp: Whether to include timestamps
    """
    numeric_level = getattr(logging, level.upper(), logging.WARNING)

    processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
    ]
    if include_timestamp:
        processors.append(structlog.processors.TimeStamper(fmt="iso"))
    processors.extend([
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.processors.JSONRenderer() if json_format else structlog.dev.ConsoleRenderer(colors=False),
    ])

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )

    handlers = []

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(logging.Formatter("%(message)s"))
    handlers.append(console_handler)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(
            JsonFormatter(include_timestamp=include_timestamp)
            if json_format else logging.Formatter("%(message)s")
        )
        handlers.append(file_handler)

    logging.basicConfig(
        level=numeric_level,
        handlers=handlers,
        force=True
    )

    get_logger(__name__).debug("logging configured", level=level, json=json_format)


class JsonFormatter(logging.Formatter):
    """JSON formatter for records that did not pass through structlog."""

    def __init__(self, include_timestamp: bool = True):
        super().__init__()
        self.include_timestamp = include_timestamp

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON."""
        message = record.getMessage()
        try:
            # structlog's JSONRenderer already produced an object
            log_entry = json.loads(message)
            if not isinstance(log_entry, dict):
                raise ValueError
        except ValueError:
            log_entry = {"event": message}

        log_entry.setdefault("level", record.levelname.lower())
        log_entry.setdefault("logger", record.name)
        if self.include_timestamp:
            log_entry.setdefault("timestamp", datetime.fromtimestamp(record.created).isoformat())
        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_entry, default=str, sort_keys=True)


def get_logger(name: str) -> Any:
    """
    Get a structlog logger bound to the given name.

    Args:
        name: Logger name, usually ``__name__``

    Returns:
        A structlog bound logger
    """
    return structlog.get_logger(name)


class PerformanceTimer:
    """Context manager for timing operations."""

    def __init__(self, operation: str, logger: Optional[Any] = None, **context: Any):
        """
        Initialize performance timer.

        Args:
            operation: Name of the operation being timed
            logger: Optional structlog logger to use
            **context: Extra key/value pairs logged with the timing
        """
        self.operation = operation
        self.logger = logger or get_logger("performance")
        self.context = context
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.end_time = time.perf_counter()
        duration = round(self.end_time - self.start_time, 4)

        if exc_type is None:
            self.logger.debug("operation completed", operation=self.operation, seconds=duration, **self.context)
        else:
            self.logger.warning("operation failed", operation=self.operation, seconds=duration, **self.context)

    @property
    def duration(self) -> Optional[float]:
        """Get the duration if timing is complete."""
        if self.start_time is not None and self.end_time is not None:
            return self.end_time - self.start_time
        return None


def log_performance(operation: Optional[str] = None):
    """
    Decorator that times a function with ``PerformanceTimer``.

    Args:
        operation: Name logged for the call; defaults to the function name
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            with PerformanceTimer(operation or func.__name__, get_logger(func.__module__)):
                return func(*args, **kwargs)
        return wrapper
    return decorator
