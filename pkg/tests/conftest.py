from __future__ import annotations

from pathlib import Path

import pytest

from procsym.core.model_format import parse_model

# Round-Robin arbiter over two processes, written out by hand.
ROUND_ROBIN_2 = """\
# Round-Robin arbiter, k = 2
k 2
states watch1 watch2 grant1 grant2
initial
  watch1: 1/2
  watch2: 1/2
labels
  watch1: 00
  watch2: 00
  grant1: 10
  grant2: 01
transitions
  watch1, 10 -> grant1: 1
  watch1, 11 -> grant1: 1
  watch1, default -> watch2: 1
  grant2, 10 -> grant1: 1
  grant2, 11 -> grant1: 1
  grant2, default -> watch2: 1
  watch2, 01 -> grant2: 1
  watch2, 11 -> grant2: 1
  watch2, default -> watch1: 1
  grant1, 01 -> grant2: 1
  grant1, 11 -> grant2: 1
  grant1, default -> watch1: 1
"""

# Always grants process 1, whatever the requests.
FAVOURS_ONE = """\
k 2
states idle g1
initial
  idle: 1
labels
  idle: 00
  g1: 10
transitions
  idle, default -> g1: 1
  g1, default -> g1: 1
"""


@pytest.fixture
def round_robin_2():
    return parse_model(ROUND_ROBIN_2, "round_robin_2.sym")


@pytest.fixture
def favours_one():
    return parse_model(FAVOURS_ONE, "favours_one.sym")


@pytest.fixture
def model_file(tmp_path: Path):
    """Write model text to a file and return its path."""

    def write(text: str, name: str = "model.sym") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
