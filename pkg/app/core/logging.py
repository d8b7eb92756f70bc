import contextlib
import contextvars
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from app.core.config import settings

# Context attached to every record while a compilation or query runs
compilation_context = contextvars.ContextVar("compilation_context", default={})


class JsonFormatter(logging.Formatter):
    """
    Formatter that renders records as one JSON object per line.
    """

    def __init__(self, **kwargs):
        super().__init__()
        self.fmt_dict = kwargs

    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(self._prepare_log_dict(record), default=str)

    def _prepare_log_dict(self, record: logging.LogRecord) -> Dict[str, Any]:
        record_dict = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            record_dict["exception"] = self.formatException(record.exc_info)

        for key in self.fmt_dict:
            if key in record.__dict__:
                record_dict[key] = record.__dict__[key]

        # Extra attributes passed via extra={"extras": {...}}
        if hasattr(record, "extras"):
            record_dict.update(record.extras)

        for key, value in compilation_context.get().items():
            record_dict.setdefault(key, value)

        return record_dict


class ContextFilter(logging.Filter):
    """
    Copies the current compilation context onto log records.
    """

    def filter(self, record):
        for key, value in compilation_context.get().items():
            setattr(record, key, value)
        return True


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Set up logging for the application.

    Args:
        level: Optional log level override (defaults to settings.LOG_LEVEL)
    """
    log_level = getattr(logging, (level or settings.LOG_LEVEL).upper())

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    context_filter = ContextFilter()

    # Diagnostics go to stderr so that stdout carries only rendered theories
    console_handler = logging.StreamHandler(sys.stderr)

    if settings.ENVIRONMENT == "production":
        formatter = JsonFormatter()
    else:
        formatter = logging.Formatter(
            "[%(asctime)s] [%(levelname)s] %(name)s (%(filename)s:%(lineno)d) - %(message)s"
        )

    console_handler.setFormatter(formatter)
    console_handler.setLevel(log_level)
    console_handler.addFilter(context_filter)
    root_logger.addHandler(console_handler)

    if settings.LOG_FILE:
        try:
            log_path = Path(settings.LOG_FILE)
            os.makedirs(log_path.parent, exist_ok=True)

            file_handler = logging.FileHandler(settings.LOG_FILE)
            file_handler.setFormatter(formatter)
            file_handler.setLevel(log_level)
            file_handler.addFilter(context_filter)
            root_logger.addHandler(file_handler)
        except OSError as e:
            root_logger.error(f"Error setting up file logging: {e}")

    logging.getLogger("uvicorn.access").setLevel(logging.WARNING)
    logging.getLogger("httpx").setLevel(logging.WARNING)

    return logging.getLogger("app")


@contextlib.contextmanager
def log_context(**context_data):
    """
    Context manager for adding context to logs.

    Usage:
        with log_context(method="lifted", k=3):
            logger.info("Compiling")

    Args:
        **context_data: Key-value pairs to add to log context
    """
    current_context = compilation_context.get().copy()
    current_context.update(context_data)
    token = compilation_context.set(current_context)

    try:
        yield
    finally:
        compilation_context.reset(token)
