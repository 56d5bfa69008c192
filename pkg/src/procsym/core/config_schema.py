"""Config schema and validation for procsym (Py 3.12)."""

from __future__ import annotations

import json
import logging
import os
from typing import Any

from .constants import DEFAULT_REPORT_FORMAT, REPORT_FORMATS
from .exceptions import ConfigError, ValidationError
from .logging_config import LEVELS, LOG_FORMATS


# key -> converter applied to values read from the JSON config file
CONFIG_KEYS: dict[str, Any] = {
    "log_level": str,
    "log_format": str,
    "verbose": lambda v: str(v).lower() == "true",
    "seed": int,
    "trials": int,
    "symbolic_max_k": int,
    "frontier_cap": int,
    "report_format": str,
    "verify": lambda v: str(v).lower() == "true",
}


def _at_least(name: str, val: int, lo: int) -> None:
    if val < lo:
        raise ValidationError(f"{name} must be >= {lo}, got {val}")


def validate_config(ns: Any) -> None:
    """Validate critical configuration constraints.

    Raises ConfigError/ValidationError on invalid values.
    """
    for name, lo in (
        ("seed", 0),
        ("trials", 1),
        ("symbolic_max_k", 0),
        ("frontier_cap", 1),
    ):
        val = getattr(ns, name, None)
        if val is None:
            raise ConfigError(f"Missing required setting: {name}")
        _at_least(name, int(val), lo)

    level = getattr(ns, "log_level", None)
    if level and level.upper() not in LEVELS:
        raise ValidationError(f"log_level must be one of {sorted(LEVELS)}, got {level}")

    log_format = getattr(ns, "log_format", None)
    if log_format and log_format not in LOG_FORMATS:
        raise ValidationError(f"log_format must be one of {LOG_FORMATS}")

    report_format = getattr(ns, "report_format", None)
    if report_format and report_format not in REPORT_FORMATS:
        logging.warning(
            "Invalid report_format '%s' - resetting to '%s'",
            report_format,
            DEFAULT_REPORT_FORMAT,
        )
        setattr(ns, "report_format", DEFAULT_REPORT_FORMAT)


def apply_config_file(ns: Any, path: str | None) -> None:
    """Overlay settings from a JSON config file onto parsed arguments.

    A missing file is not an error; a file that is not a JSON object, or
    holds values that do not convert, raises ConfigError.
    """
    if not path or not os.path.isfile(path):
        return
    try:
        with open(path, "r", encoding="utf-8") as config_file:
            data = json.load(config_file)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")

    for key, convert in CONFIG_KEYS.items():
        if key in data:
            try:
                setattr(ns, key, convert(data[key]))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key} in {path}: {exc}") from exc
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        logging.warning("Ignoring unknown config keys: %s", unknown)
