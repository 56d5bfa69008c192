"""Verdict reports (Python 3.12).

JSON lines: a header record, one record per sub-verdict of a group
check, the verdict record, and (when asked) a separate timing record so
the rest of the stream stays byte-for-byte deterministic. Rationals are
``"num/den"`` strings and words are lists of bitstrings. The text format
renders the same content for humans.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator, TextIO

from .algebra import format_rational, parse_rational
from .constants import REPORT_FORMATS, REPORT_SCHEMA, REPORT_VERSION
from .exceptions import ValidationError
from .model import Permutation, letter_from_bits, letter_to_bits, parse_permutation
from .symmetry import Counterexample, Outcome, SymmetryKind, SymmetryVerdict

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """Make metadata JSON-safe without floats."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(key): _plain(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _word(word: tuple[int, ...] | None, k: int) -> list[str] | None:
    return None if word is None else [letter_to_bits(a, k) for a in word]


def counterexample_record(cex: Counterexample, k: int) -> dict[str, Any]:
    out: dict[str, Any] = {
        "input": _word(cex.input_word, k),
        "left": format_rational(cex.left),
        "right": format_rational(cex.right),
        "deviation": format_rational(cex.deviation),
    }
    if cex.output_word is not None:
        out["output"] = _word(cex.output_word, k)
    if cex.parikh_vector is not None:
        out["parikh_vector"] = list(cex.parikh_vector)
    if cex.coordinate is not None:
        out["coordinate"] = cex.coordinate
    return out


def verdict_record(verdict: SymmetryVerdict, k: int, record: str = "verdict") -> dict[str, Any]:
    out: dict[str, Any] = {
        "record": record,
        "kind": str(verdict.kind),
        "result": str(verdict.result),
        "permutation": str(verdict.permutation) if verdict.permutation else None,
        "metadata": _plain(verdict.metadata),
    }
    if verdict.counterexample is not None:
        out["counterexample"] = counterexample_record(verdict.counterexample, k)
    if verdict.failed_generator is not None:
        out["failed_generator"] = str(verdict.failed_generator)
    if verdict.note:
        out["note"] = verdict.note
    if verdict.result is Outcome.NO_COUNTEREXAMPLE:
        out["not_a_proof"] = True
    return out


def _text_word(word: list[str] | None) -> str:
    return " ".join(word) if word else "-"


def render_text(rec: dict[str, Any]) -> str:
    kind = rec.get("record")
    if kind == "header":
        return f"procsym {rec['command']} on {rec.get('model', '-')} (k={rec.get('k', '-')})"
    if kind == "timing":
        return f"wall time: {rec['seconds']} s"
    indent = "  " if kind == "subverdict" else ""
    perm = rec.get("permutation") or "group"
    lines = [f"{indent}{rec['kind']}: {rec['result']} [{perm}]"]
    meta = rec.get("metadata") or {}
    if "mode" in meta:
        lines.append(f"{indent}  mode: {meta['mode']}")
    if "error_bound" in meta:
        lines.append(f"{indent}  error bound: {meta['error_bound']}")
    cex = rec.get("counterexample")
    if cex:
        lines.append(f"{indent}  input:  {_text_word(cex['input'])}")
        if "output" in cex:
            lines.append(f"{indent}  output: {_text_word(cex['output'])}")
        if "parikh_vector" in cex:
            lines.append(f"{indent}  parikh: {tuple(cex['parikh_vector'])}")
        if "coordinate" in cex:
            lines.append(f"{indent}  coordinate: {cex['coordinate']}")
        lines.append(f"{indent}  left: {cex['left']}  right: {cex['right']}")
    if rec.get("failed_generator"):
        lines.append(f"{indent}  failed generator: {rec['failed_generator']}")
    if rec.get("note"):
        lines.append(f"{indent}  note: {rec['note']}")
    return "\n".join(lines)


class ReportWriter:
    """Write report records to a stream in JSON lines or text."""

    def __init__(self, stream: TextIO, fmt: str = "jsonl", *, timing: bool = False) -> None:
        if fmt not in REPORT_FORMATS:
            raise ValidationError(f"unknown report format {fmt!r}")
        self.stream = stream
        self.fmt = fmt
        self.timing_enabled = timing

    def publish(self, rec: dict[str, Any]) -> None:
        logger.debug("report record: %s", rec.get("record"))
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
        else:
            self.stream.write(render_text(rec) + "\n")

    def header(self, command: str, **fields: Any) -> None:
        self.publish(
            {"record": "header", "schema": REPORT_SCHEMA, "version": REPORT_VERSION, "command": command, **_plain(fields)}
        )

    def verdict(self, verdict: SymmetryVerdict, k: int) -> None:
        for sub in verdict.sub_verdicts:
            self.publish(verdict_record(sub, k, "subverdict"))
        self.publish(verdict_record(verdict, k))

    def timing(self, seconds: float) -> None:
        if self.timing_enabled:
            self.publish({"record": "timing", "seconds": round(seconds, 6)})


# ---------------------------------------------------------------------------
# Reading reports back


def read_records(path: str | Path) -> Iterator[dict[str, Any]]:
    p = Path(path)
    for number, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as e:
            raise ValidationError(f"{p}:{number}: not a JSON report line ({e.msg})") from None


def _bits_word(words: list[str]) -> tuple[int, ...]:
    return tuple(letter_from_bits(b) for b in words)


def verdict_from_record(rec: dict[str, Any], k: int) -> SymmetryVerdict:
    """Rebuild enough of a verdict to replay its counterexample."""
    perm: Permutation | None = (
        parse_permutation(rec["permutation"], k) if rec.get("permutation") else None
    )
    failed = parse_permutation(rec["failed_generator"], k) if rec.get("failed_generator") else None
    cex = None
    if "counterexample" in rec:
        c = rec["counterexample"]
        cex = Counterexample(
            input_word=_bits_word(c["input"]),
            left=parse_rational(c["left"]),
            right=parse_rational(c["right"]),
            output_word=_bits_word(c["output"]) if "output" in c else None,
            parikh_vector=tuple(c["parikh_vector"]) if "parikh_vector" in c else None,
            coordinate=c.get("coordinate"),
        )
    metadata = dict(rec.get("metadata") or {})
    if "epsilon" in metadata:
        metadata["epsilon"] = parse_rational(metadata["epsilon"])
    return SymmetryVerdict(
        kind=SymmetryKind(rec["kind"]),
        result=Outcome(rec["result"]),
        permutation=perm,
        counterexample=cex,
        failed_generator=failed,
        metadata=metadata,
    )
