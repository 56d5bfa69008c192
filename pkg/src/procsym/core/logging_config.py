"""Logging configuration helpers for procsym (Python 3.12).

Root logging goes to stderr so that reports on stdout stay machine
readable. Two formats are supported: plain text and one JSON object per
record. Engine modules attach structured context through ``extra=``
(for example ``extra={"kind": "exact", "perm": "(1 2)"}``); the JSON
formatter carries those keys through.
"""

from __future__ import annotations

import json
import logging
import sys
from typing import Any, TextIO


LEVELS: dict[str, int] = {
    "CRITICAL": logging.CRITICAL,
    "ERROR": logging.ERROR,
    "WARNING": logging.WARNING,
    "INFO": logging.INFO,
    "DEBUG": logging.DEBUG,
    "NOTSET": logging.NOTSET,
}

LOG_FORMATS: tuple[str, ...] = ("text", "json")

# Attributes every LogRecord has; anything else came in through ``extra=``.
_STANDARD_ATTRS = frozenset(
    vars(logging.LogRecord("", 0, "", 0, "", None, None)).keys()
) | {"message", "asctime"}


class JsonFormatter(logging.Formatter):
    """JSON log formatter that keeps ``extra=`` context fields."""

    def format(self, record: logging.LogRecord) -> str:  # noqa: D401
        payload: dict[str, Any] = {
            "level": record.levelname,
            "message": record.getMessage(),
            "logger": record.name,
            "time": self.formatTime(record, datefmt="%Y-%m-%dT%H:%M:%S%z"),
        }
        for key, value in vars(record).items():
            if key not in _STANDARD_ATTRS and not key.startswith("_"):
                payload[key] = value if _is_jsonable(value) else str(value)
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)


def _is_jsonable(value: Any) -> bool:
    return isinstance(value, (str, int, float, bool, type(None), list, dict))


def configure_logging(
    level_name: str | None = None,
    fmt: str = "text",
    verbose: bool = False,
    stream: TextIO | None = None,
) -> None:
    """Configure root logging with the desired level and format.

    - If `verbose` is True, the level is forced to DEBUG.
    - `fmt` can be 'text' or 'json'.
    - If `level_name` is None, defaults to WARNING so that a plain CLI
      run prints only the report.
    """
    if verbose:
        level = logging.DEBUG
    else:
        level = LEVELS.get((level_name or "WARNING").upper(), logging.WARNING)

    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    if fmt == "json":
        formatter: logging.Formatter = JsonFormatter()
    else:
        formatter = logging.Formatter("%(levelname)s:%(name)s:%(message)s")
    handler.setFormatter(formatter)

    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(level)
    root.addHandler(handler)
