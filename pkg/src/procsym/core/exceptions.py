"""Custom exceptions for procsym (Python 3.12).

Defines a small hierarchy to represent common error categories across
model parsing, validation, algebra, the decision engines, and the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class ProcsymError(Exception):
    """Base exception for procsym."""


@dataclass(slots=True)
class ModelSyntaxError(ProcsymError):
    """A model, NFA or PA file could not be parsed."""

    message: str
    line: int | None = None
    column: int | None = None
    source: str = "<string>"

    def __str__(self) -> str:
        where = self.source
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.message}"


@dataclass(slots=True)
class ModelValidationError(ProcsymError):
    """A parsed model violates the transducer invariants."""

    violations: list[Any] = field(default_factory=list)
    source: str = "<string>"

    def __str__(self) -> str:
        shown = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            shown += f" (+{more} more)"
        return f"{self.source}: invalid model: {shown}"


class DimensionMismatchError(ProcsymError):
    """Vector/matrix dimensions or word lengths do not line up."""


class VariableCountError(ProcsymError):
    """Polynomials or points over different numbers of variables."""


class PermutationError(ProcsymError):
    """Malformed cycle notation, or a permutation over the wrong k."""


class AlphabetMismatchError(ProcsymError):
    """Automata over different alphabets, fields, or reward dimensions."""


class ConfigError(ProcsymError):
    """Configuration invalid or missing required values."""


class ValidationError(ProcsymError):
    """Argument or configuration value out of range."""


@dataclass(slots=True)
class StateExplosionError(ProcsymError):
    """The forward-expansion frontier outgrew the configured cap."""

    cap: int
    reached: int
    input_length: int | None = None

    def __str__(self) -> str:
        at = f" at input length {self.input_length}" if self.input_length else ""
        return (
            f"state explosion: frontier reached {self.reached} entries{at}, "
            f"cap is {self.cap}"
        )


class WitnessReplayError(ProcsymError):
    """A counterexample did not reproduce under forward simulation."""
