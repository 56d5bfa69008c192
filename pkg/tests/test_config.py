import argparse
import io
import json
import logging

import pytest

from procsym.core.config_schema import apply_config_file, validate_config
from procsym.core.constants import DEFAULT_REPORT_FORMAT
from procsym.core.exceptions import ConfigError, ValidationError
from procsym.core.logging_config import configure_logging


def _namespace(**overrides):
    values = dict(
        seed=0,
        trials=3,
        symbolic_max_k=4,
        frontier_cap=1000,
        log_level="WARNING",
        log_format="text",
        report_format="jsonl",
        verbose=False,
        verify=True,
    )
    values.update(overrides)
    return argparse.Namespace(**values)


def test_valid_config_passes():
    validate_config(_namespace())


@pytest.mark.parametrize(
    "overrides",
    [{"trials": 0}, {"seed": -1}, {"frontier_cap": 0}, {"log_level": "LOUD"}, {"log_format": "xml"}],
)
def test_invalid_values(overrides):
    with pytest.raises(ValidationError):
        validate_config(_namespace(**overrides))


def test_missing_setting():
    ns = _namespace()
    del ns.trials
    with pytest.raises(ConfigError, match="trials"):
        validate_config(ns)


def test_bad_report_format_falls_back(caplog):
    ns = _namespace(report_format="yaml")
    with caplog.at_level(logging.WARNING):
        validate_config(ns)
    assert ns.report_format == DEFAULT_REPORT_FORMAT
    assert f"Invalid report_format 'yaml' - resetting to '{DEFAULT_REPORT_FORMAT}'" in caplog.text


def test_config_file_overlays_arguments(tmp_path):
    path = tmp_path / "procsym.conf"
    path.write_text(json.dumps({"seed": "17", "verify": "false", "log_level": "DEBUG", "colour": 1}))
    ns = _namespace()
    apply_config_file(ns, str(path))
    assert ns.seed == 17
    assert ns.verify is False
    assert ns.log_level == "DEBUG"
    assert not hasattr(ns, "colour")


def test_missing_config_file_is_ignored(tmp_path):
    ns = _namespace()
    apply_config_file(ns, str(tmp_path / "absent.conf"))
    assert ns == _namespace()


@pytest.mark.parametrize("content", ["[1, 2]", "{not json", '{"trials": "many"}'])
def test_broken_config_file(tmp_path, content):
    path = tmp_path / "procsym.conf"
    path.write_text(content)
    with pytest.raises(ConfigError):
        apply_config_file(_namespace(), str(path))


def test_json_logging_keeps_context():
    stream = io.StringIO()
    configure_logging("INFO", "json", stream=stream)
    logging.getLogger("procsym.test").info("checked", extra={"kind": "exact", "perm": "(1 2)"})
    payload = json.loads(stream.getvalue())
    assert payload["message"] == "checked"
    assert payload["kind"] == "exact"
    assert payload["perm"] == "(1 2)"
    assert payload["level"] == "INFO"


def test_verbose_forces_debug():
    stream = io.StringIO()
    configure_logging("ERROR", "text", verbose=True, stream=stream)
    logging.getLogger("procsym.test").debug("details")
    assert "DEBUG:procsym.test:details" in stream.getvalue()


def test_default_level_is_quiet():
    stream = io.StringIO()
    configure_logging(stream=stream)
    logging.getLogger("procsym.test").info("hidden")
    assert stream.getvalue() == ""
