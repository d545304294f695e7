"""Logging setup for qubitsep.

All diagnostics go to standard error through the ``qubitsep`` logger so that
standard output carries nothing but reports.
"""

import logging
import sys
from datetime import datetime, timezone
from time import time_ns

from qubitsep.utils.env import get_env_choice


def format_ns(time_in_ns: int) -> str:
    """ISO-8601 UTC timestamp with nanoseconds, e.g. ``1970-01-01T00:00:01.500000000Z``."""
    seconds, nanoseconds = divmod(time_in_ns, 10**9)
    stamp = datetime.fromtimestamp(seconds, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%S")
    return f"{stamp}.{nanoseconds:09d}Z"


class LogRecordNs(logging.LogRecord):  # pylint: disable=too-few-public-methods
    """Log record that also stores ``time_ns()`` at creation."""

    def __init__(self, *args, **kwargs):
        self.created_ns = time_ns()
        super().__init__(*args, **kwargs)


class FormatterNs(logging.Formatter):
    """Renders ``%(asctime)s`` from ``created_ns`` when no datefmt is given."""

    def formatTime(self, record, datefmt=None):
        created_ns = getattr(record, "created_ns", None)
        if datefmt is None and created_ns is not None:
            return format_ns(created_ns)
        return super().formatTime(record, datefmt)


_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(filename)s-%(funcName)s - %(message)s"
LOG_LEVEL = _LEVELS[get_env_choice("LOG_LEVEL", _LEVELS, "INFO")]


def _stderr_logger(name: str, level: int, fmt: str) -> logging.Logger:
    """A non-propagating logger with a single stderr handler (re-imports replace the handler)."""
    named = logging.getLogger(name)
    named.setLevel(level)
    named.propagate = False
    named.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(FormatterNs(fmt))
    named.addHandler(handler)
    return named


logging.setLogRecordFactory(LogRecordNs)

logger = _stderr_logger("qubitsep", LOG_LEVEL, LOG_FORMAT)
# assertion diagnostics from the slow acceptance tests
pytest_assertion_logger = _stderr_logger("PyTest_Logger", logging.DEBUG, "%(asctime)s - %(levelname)s - %(message)s")

for _noisy in ("numpy", "scipy", "concurrent.futures"):
    logging.getLogger(_noisy).setLevel(logging.WARNING)
