"""Text formats for transducers, NFAs and PAs (Python 3.12).

Transducer model files::

    # Round-Robin arbiter, k = 2
    k 2
    states watch1 watch2 grant1 grant2
    initial
      watch1: 1/2
      watch2: 1/2
    labels
      watch1: 00
      grant1: 10
    transitions
      watch1, 10 -> grant1: 1
      watch1, default -> watch2: 1

Bitstrings list signals 1..k left to right (``100`` is {i1}). A
``default`` row covers every input letter a state does not list.
Probabilities are integers or ``num/den``; float literals are rejected.
``#`` starts a comment. The ``families`` section name is reserved.

NFA / PA files share the line layout::

    alphabet 0 1
    states q0 q1
    initial q0                 # PA: also "q0: 1/2, q1: 1/2"
    accepting q1
    sink dead                  # PA only, optional
    transitions
      q0, 0 -> q0, q1          # NFA: successor set
      q0, 1 -> q1: 1/2, q0: 1/2  # PA: distribution

Letters there are non-negative integers, or ``in|out`` bitstring pairs
for combined transducer letters.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .algebra import format_rational, parse_rational
from .automata import NFA, PA, combine_letter, split_letter
from .constants import MAX_K
from .exceptions import ModelSyntaxError, ModelValidationError
from .model import (
    Distribution,
    Letter,
    Transducer,
    Violation,
    ViolationKind,
    letter_from_bits,
    letter_to_bits,
    validate_transducer,
)

logger = logging.getLogger(__name__)

_NAME = re.compile(r"^[A-Za-z0-9_][\w.\-]*$")
_MODEL_KEYWORDS = {"k", "states", "initial", "labels", "transitions", "families"}
_AUTOMATON_KEYWORDS = {"alphabet", "states", "initial", "accepting", "sink", "transitions", "families"}


@dataclass(slots=True)
class _Line:
    number: int
    text: str
    source: str

    def error(self, message: str, fragment: str | None = None) -> ModelSyntaxError:
        col = None
        if fragment:
            at = self.text.find(fragment)
            col = at + 1 if at >= 0 else None
        return ModelSyntaxError(message, self.number, col, self.source)


def _lines(text: str, source: str) -> Iterator[tuple[_Line, str]]:
    """Yield (line, content-without-comment) for every non-blank line."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield _Line(number, raw, source), content


def _name(line: _Line, token: str) -> str:
    if not _NAME.match(token):
        raise line.error(f"bad state name {token!r}", token or None)
    return token


def _split_entries(line: _Line, text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    if any(not p for p in parts):
        raise line.error("empty entry in list", text)
    return parts


class _Weights:
    """Collects ``name: p`` pairs; zero denominators become violations."""

    def __init__(self, violations: list[Violation]) -> None:
        self.violations = violations

    def parse(self, line: _Line, text: str, owner: str | None = None) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for entry in _split_entries(line, text):
            target, sep, prob = entry.partition(":")
            if not sep:
                raise line.error(f"expected 'state: probability', got {entry!r}", entry)
            target = _name(line, target.strip())
            if target in out:
                raise line.error(f"duplicate target {target!r}", entry)
            try:
                out[target] = parse_rational(prob)
            except ZeroDivisionError:
                self.violations.append(
                    Violation(
                        ViolationKind.ZERO_DENOMINATOR,
                        owner,
                        detail=f"line {line.number}: {entry}",
                    )
                )
            except ValueError:
                raise line.error(f"bad probability {prob.strip()!r}", prob.strip()) from None
        return out


# ---------------------------------------------------------------------------
# Transducer models


def _parse_bits(line: _Line, token: str, k: int) -> Letter:
    if len(token) != k or any(c not in "01" for c in token):
        raise line.error(f"expected a bitstring of length {k}, got {token!r}", token)
    return letter_from_bits(token)


def parse_model(text: str, source: str = "<string>", validate: bool = True) -> Transducer:
    """Parse a model file. Raises ModelSyntaxError / ModelValidationError."""
    k: int | None = None
    states: list[str] | None = None
    initial: dict[str, Fraction] = {}
    labels: dict[str, Letter] = {}
    rows: dict[str, dict[Letter, Distribution]] = {}
    defaults: dict[str, Distribution] = {}
    violations: list[Violation] = []
    weights = _Weights(violations)
    section: str | None = None
    seen_any = False

    for line, content in _lines(text, source):
        seen_any = True
        head, _, rest = content.partition(" ")
        rest = rest.strip()
        if head in _MODEL_KEYWORDS:
            if head == "families":
                raise line.error("the 'families' section is not supported", head)
            if head == "k":
                if k is not None:
                    raise line.error("duplicate 'k' header", head)
                if not rest.isdigit():
                    raise line.error(f"expected an integer after 'k', got {rest!r}", rest or head)
                k = int(rest)
                if not 1 <= k <= MAX_K:
                    raise line.error(f"k must be in 1..{MAX_K}, got {k}", rest)
                section = None
                continue
            if k is None:
                raise line.error("'k' header must come first", head)
            if head == "states":
                if states is not None:
                    raise line.error("duplicate 'states' line", head)
                states = [_name(line, s) for s in rest.replace(",", " ").split()]
                if not states:
                    raise line.error("'states' needs at least one state", head)
                if len(set(states)) != len(states):
                    raise line.error("repeated state name", head)
                section = None
                continue
            if states is None:
                raise line.error(f"'states' must come before '{head}'", head)
            if rest:
                raise line.error(f"unexpected text after '{head}'", rest)
            section = head
            continue

        if section == "initial":
            for s, p in weights.parse(line, content).items():
                if s in initial:
                    raise line.error(f"duplicate initial entry for {s!r}", s)
                initial[s] = p
        elif section == "labels":
            assert k is not None
            s, sep, bits = content.partition(":")
            if not sep:
                raise line.error("expected 'state: bitstring'", content)
            s = _name(line, s.strip())
            if s in labels:
                raise line.error(f"duplicate label for {s!r}", s)
            labels[s] = _parse_bits(line, bits.strip(), k)
        elif section == "transitions":
            assert k is not None
            lhs, arrow, rhs = content.partition("->")
            if not arrow:
                raise line.error("expected 'state, letter -> distribution'", content)
            s, comma, letter_tok = lhs.partition(",")
            if not comma:
                raise line.error("expected 'state, letter' before '->'", lhs)
            s = _name(line, s.strip())
            letter_tok = letter_tok.strip()
            dist = Distribution(weights.parse(line, rhs, owner=s))
            if letter_tok == "default":
                if s in defaults:
                    raise line.error(f"duplicate default row for {s!r}", letter_tok)
                defaults[s] = dist
            else:
                letter = _parse_bits(line, letter_tok, k)
                row = rows.setdefault(s, {})
                if letter in row:
                    raise line.error(f"duplicate row for {s!r} on {letter_tok}", letter_tok)
                row[letter] = dist
        else:
            raise line.error(f"unexpected line outside a section: {content!r}", content)

    if not seen_any:
        raise ModelSyntaxError("empty model", source=source)
    if k is None or states is None:
        raise ModelSyntaxError("model needs 'k' and 'states' lines", source=source)
    if violations:
        raise ModelValidationError(violations, source)

    t = Transducer(k, tuple(states), Distribution(initial), labels, rows, defaults)
    if validate:
        problems = validate_transducer(t)
        if problems:
            raise ModelValidationError(problems, source)
    logger.debug("parsed %s: k=%d, %d states", source, k, len(states))
    return t


def _format_distribution(d: Distribution) -> str:
    return ", ".join(f"{s}: {format_rational(p)}" for s, p in d.items())


def serialize_model(t: Transducer, comment: str | None = None) -> str:
    out = []
    if comment:
        out += [f"# {c}" for c in comment.splitlines()]
    out.append(f"k {t.k}")
    out.append("states " + " ".join(t.states))
    out.append("initial")
    out += [f"  {s}: {format_rational(p)}" for s, p in t.initial.items()]
    out.append("labels")
    out += [f"  {s}: {letter_to_bits(t.labels[s], t.k)}" for s in t.states if s in t.labels]
    out.append("transitions")
    for s in t.states:
        for letter in sorted(t.rows.get(s, {})):
            d = t.rows[s][letter]
            out.append(f"  {s}, {letter_to_bits(letter, t.k)} -> {_format_distribution(d)}")
        if s in t.defaults:
            out.append(f"  {s}, default -> {_format_distribution(t.defaults[s])}")
    return "\n".join(out) + "\n"


def load_model(path: str | Path, validate: bool = True) -> Transducer:
    p = Path(path)
    return parse_model(p.read_text(encoding="utf-8"), str(p), validate)


def save_model(t: Transducer, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(serialize_model(t, comment), encoding="utf-8")


# ---------------------------------------------------------------------------
# NFA / PA dialect


def _parse_symbol(line: _Line, token: str) -> Letter:
    if token.isdigit():
        return int(token)
    inp, bar, out = token.partition("|")
    if bar and inp and len(inp) == len(out) and set(inp + out) <= {"0", "1"}:
        return combine_letter(letter_from_bits(inp), letter_from_bits(out), len(inp))
    raise line.error(f"bad letter {token!r}", token)


def _format_symbol(letter: Letter, k: int | None) -> str:
    if k is None:
        return str(letter)
    inp, out = split_letter(letter, k)
    return f"{letter_to_bits(inp, k)}|{letter_to_bits(out, k)}"


@dataclass(slots=True)
class _AutomatonText:
    alphabet: list[Letter]
    states: list[str]
    initial_line: tuple[_Line, str] | None
    accepting: list[str]
    sink: str | None
    rows: list[tuple[_Line, str, Letter, str]]


def _parse_automaton_text(text: str, source: str) -> _AutomatonText:
    alphabet: list[Letter] | None = None
    states: list[str] | None = None
    initial_line = None
    accepting: list[str] = []
    sink = None
    rows = []
    section = None
    seen_any = False
    for line, content in _lines(text, source):
        seen_any = True
        head, _, rest = content.partition(" ")
        rest = rest.strip()
        if head in _AUTOMATON_KEYWORDS:
            section = None
            if head == "families":
                raise line.error("the 'families' section is not supported", head)
            if head == "alphabet":
                alphabet = [_parse_symbol(line, tok) for tok in rest.replace(",", " ").split()]
                if not alphabet or len(set(alphabet)) != len(alphabet):
                    raise line.error("alphabet must list distinct letters", head)
            elif head == "states":
                states = [_name(line, s) for s in rest.replace(",", " ").split()]
                if not states or len(set(states)) != len(states):
                    raise line.error("states must list distinct names", head)
            elif head == "initial":
                initial_line = (line, rest)
            elif head == "accepting":
                accepting = [_name(line, s) for s in rest.replace(",", " ").split()]
            elif head == "sink":
                sink = _name(line, rest)
            else:
                if rest:
                    raise line.error("unexpected text after 'transitions'", rest)
                section = "transitions"
            continue
        if section != "transitions":
            raise line.error(f"unexpected line outside a section: {content!r}", content)
        lhs, arrow, rhs = content.partition("->")
        q, comma, sym = lhs.partition(",")
        if not arrow or not comma:
            raise line.error("expected 'state, letter -> ...'", content)
        rows.append((line, _name(line, q.strip()), _parse_symbol(line, sym.strip()), rhs.strip()))
    if not seen_any:
        raise ModelSyntaxError("empty automaton", source=source)
    if alphabet is None or states is None or initial_line is None:
        raise ModelSyntaxError("automaton needs 'alphabet', 'states' and 'initial' lines", source=source)
    return _AutomatonText(alphabet, states, initial_line, accepting, sink, rows)


def _check_known(line: _Line, names: list[str] | set[str], known: set[str]) -> None:
    for s in names:
        if s not in known:
            raise line.error(f"unknown state {s!r}", s)


def parse_nfa(text: str, source: str = "<string>") -> NFA:
    raw = _parse_automaton_text(text, source)
    known = set(raw.states)
    line, rest = raw.initial_line
    initial = [_name(line, s) for s in rest.replace(",", " ").split()]
    _check_known(line, initial, known)
    transitions: dict[str, dict[Letter, frozenset[str]]] = {q: {} for q in raw.states}
    for line, q, sym, rhs in raw.rows:
        succ = [_name(line, s) for s in _split_entries(line, rhs)]
        _check_known(line, [q, *succ], known)
        if sym not in raw.alphabet:
            raise line.error(f"letter {sym} not in the alphabet")
        if sym in transitions[q]:
            raise line.error(f"duplicate row for {q!r}")
        transitions[q][sym] = frozenset(succ)
    return NFA(
        states=tuple(raw.states),
        alphabet=tuple(raw.alphabet),
        initial=frozenset(initial),
        accepting=frozenset(raw.accepting),
        transitions=transitions,
    )


def parse_pa(text: str, source: str = "<string>") -> PA:
    raw = _parse_automaton_text(text, source)
    violations: list[Violation] = []
    weights = _Weights(violations)
    known = set(raw.states)
    line, rest = raw.initial_line
    if ":" in rest:
        initial = Distribution(weights.parse(line, rest))
    else:
        initial = Distribution.dirac(_name(line, rest))
    _check_known(line, list(initial), known)
    if raw.sink is not None and raw.sink not in known:
        raise ModelSyntaxError(f"sink {raw.sink!r} is not a declared state", source=source)
    transitions: dict[str, dict[Letter, Distribution]] = {q: {} for q in raw.states}
    for line, q, sym, rhs in raw.rows:
        d = Distribution(weights.parse(line, rhs, owner=q))
        _check_known(line, [q, *d], known)
        if sym not in raw.alphabet:
            raise line.error(f"letter {sym} not in the alphabet")
        if sym in transitions[q]:
            raise line.error(f"duplicate row for {q!r}")
        transitions[q][sym] = d
    if initial.total() != 1:
        violations.append(Violation(ViolationKind.INITIAL_NOT_STOCHASTIC, detail=f"sums to {initial.total()}"))
    for q in raw.states:
        for sym in raw.alphabet:
            d = transitions[q].get(sym)
            if d is None:
                if raw.sink is None:
                    violations.append(Violation(ViolationKind.MISSING_TRANSITION, q, sym))
            elif d.total() != 1:
                violations.append(Violation(ViolationKind.NON_STOCHASTIC, q, sym, f"sums to {d.total()}"))
    _check_known(raw.initial_line[0], raw.accepting, known)
    if violations:
        raise ModelValidationError(violations, source)
    return PA(
        states=tuple(raw.states),
        alphabet=tuple(raw.alphabet),
        initial=initial,
        accepting=frozenset(raw.accepting),
        transitions=transitions,
        sink=raw.sink,
    )


def load_nfa(path: str | Path) -> NFA:
    p = Path(path)
    return parse_nfa(p.read_text(encoding="utf-8"), str(p))


def load_pa(path: str | Path) -> PA:
    p = Path(path)
    return parse_pa(p.read_text(encoding="utf-8"), str(p))


def dump_pa(a: PA, k: int | None = None) -> str:
    """Render a PA in the PA dialect; combined letters as ``in|out`` when k is given."""
    out = ["alphabet " + " ".join(_format_symbol(s, k) for s in a.alphabet)]
    out.append("states " + " ".join(a.states))
    out.append("initial " + _format_distribution(a.initial))
    out.append("accepting " + " ".join(q for q in a.states if q in a.accepting))
    if a.sink is not None:
        out.append(f"sink {a.sink}")
    out.append("transitions")
    for q in a.states:
        row = a.transitions.get(q, {})
        for sym in sorted(row):
            out.append(f"  {q}, {_format_symbol(sym, k)} -> {_format_distribution(row[sym])}")
    return "\n".join(out) + "\n"


def dump_nfa(n: NFA, k: int | None = None) -> str:
    out = ["alphabet " + " ".join(_format_symbol(s, k) for s in n.alphabet)]
    out.append("states " + " ".join(n.states))
    out.append("initial " + " ".join(q for q in n.states if q in n.initial))
    out.append("accepting " + " ".join(q for q in n.states if q in n.accepting))
    out.append("transitions")
    for q in n.states:
        row = n.transitions.get(q, {})
        for sym in sorted(row):
            succ = ", ".join(p for p in n.states if p in row[sym])
            out.append(f"  {q}, {_format_symbol(sym, k)} -> {succ}")
    return "\n".join(out) + "\n"
