"""Domain model: letters, permutations, distributions and transducers (Python 3.12).

Signals are numbered 1..k. A letter (a set of input or output signals)
is an int bitmask where bit ``j - 1`` stands for signal ``j``; the
bitstring ``100`` over k=3 is ``{i1}``. Permutations act on signal
indices; a permutation is stored as its image array.
"""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .constants import MAX_K
from .exceptions import DimensionMismatchError, PermutationError

logger = logging.getLogger(__name__)

Letter = int
Word = tuple[int, ...]


# ---------------------------------------------------------------------------
# Letters


def letter_from_bits(bits: str) -> Letter:
    """``"101"`` -> {1, 3} as a bitmask."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a bitstring: {bits!r}")
    return sum(1 << j for j, c in enumerate(bits) if c == "1")


def letter_to_bits(letter: Letter, k: int) -> str:
    return "".join("1" if letter >> j & 1 else "0" for j in range(k))


def letter_signals(letter: Letter) -> list[int]:
    """1-based signal indices present in ``letter``."""
    out = []
    j = 1
    while letter:
        if letter & 1:
            out.append(j)
        letter >>= 1
        j += 1
    return out


def all_letters(k: int) -> range:
    return range(1 << k)


def parikh_image(y: Sequence[Letter], k: int) -> tuple[int, ...]:
    """Per-signal occurrence counts of an output word."""
    counts = [0] * k
    for letter in y:
        for j in letter_signals(letter):
            if j > k:
                raise DimensionMismatchError(f"letter {letter:b} has signals beyond k={k}")
            counts[j - 1] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# Permutations

_CYCLE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True, slots=True)
class Permutation:
    """A bijection on [k]; ``images[j - 1] == pi(j)``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise PermutationError(f"not a permutation image array: {self.images}")

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    @property
    def is_identity(self) -> bool:
        return all(img == j for j, img in enumerate(self.images, start=1))

    def inverse(self) -> Permutation:
        inv = [0] * self.k
        for j, img in enumerate(self.images, start=1):
            inv[img - 1] = j
        return Permutation(tuple(inv))

    def compose(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def power(self, n: int) -> Permutation:
        result = identity(self.k)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            result = compose(base, result)
        return result

    def order(self) -> int:
        n, p = 1, self
        while not p.is_identity:
            p = compose(self, p)
            n += 1
        return n

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least element."""
        seen: set[int] = set()
        out = []
        for start in range(1, self.k + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def format_cycles(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __str__(self) -> str:
        return self.format_cycles()


def identity(k: int) -> Permutation:
    return Permutation(tuple(range(1, k + 1)))


def parse_permutation(text: str, k: int) -> Permutation:
    """Parse cycle notation such as ``(1 2 7)`` or ``(1,2)(3 4)``.

    Unlisted elements are fixed points; ``""`` and ``"()"`` are the identity.
    """
    if k < 1:
        raise PermutationError(f"k must be >= 1, got {k}")
    images = list(range(1, k + 1))
    seen: set[int] = set()
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _CYCLE.match(text, pos)
        if not m:
            raise PermutationError(
                f"malformed cycle notation at column {pos + 1}: {text!r}"
            )
        cycle: list[int] = []
        for tok in m.group(1).replace(",", " ").split():
            if not tok.isdigit():
                raise PermutationError(f"bad element {tok!r} in {text!r}")
            e = int(tok)
            if not 1 <= e <= k:
                raise PermutationError(f"element {e} out of range 1..{k} in {text!r}")
            if e in seen:
                raise PermutationError(f"repeated element {e} in {text!r}")
            seen.add(e)
            cycle.append(e)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a - 1] = b
        pos = m.end()
    return Permutation(tuple(images))


def parse_generators(text: str, k: int) -> GeneratorSet:
    """Split ``"(1 2),(1 2 3)"`` (also ``;``-separated) into a generator set."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in ",;" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return GeneratorSet(tuple(parse_permutation(p.strip(), k) for p in parts if p.strip()))


def compose(pi: Permutation, tau: Permutation) -> Permutation:
    """Functional composition: ``(pi o tau)(j) = pi(tau(j))``."""
    if pi.k != tau.k:
        raise PermutationError(f"cannot compose permutations over {pi.k} and {tau.k}")
    return Permutation(tuple(pi(tau(j)) for j in range(1, pi.k + 1)))


def permute_letter(pi: Permutation, v: Letter) -> Letter:
    """Bit j set in ``v`` iff bit pi(j) set in the result."""
    out = 0
    for j in letter_signals(v):
        if j > pi.k:
            raise PermutationError(f"letter {v:b} has signals beyond k={pi.k}")
        out |= 1 << (pi(j) - 1)
    return out


def permute_word(pi: Permutation, x: Iterable[Letter]) -> Word:
    return tuple(permute_letter(pi, v) for v in x)


def permute_vector(pi: Permutation, a: Sequence[int | Fraction]) -> tuple:
    """Index pi(j) of the result holds a_j."""
    if len(a) != pi.k:
        raise DimensionMismatchError(f"vector of length {len(a)} for k={pi.k}")
    out: list = [0] * pi.k
    for j, aj in enumerate(a, start=1):
        out[pi(j) - 1] = aj
    return tuple(out)


@dataclass(frozen=True, slots=True)
class GeneratorSet:
    perms: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        if not self.perms:
            raise PermutationError("generator set must be nonempty")
        ks = {p.k for p in self.perms}
        if len(ks) != 1:
            raise PermutationError(f"generators over different k: {sorted(ks)}")

    @property
    def k(self) -> int:
        return self.perms[0].k

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.perms)

    def __len__(self) -> int:
        return len(self.perms)


def sk_generators(k: int) -> GeneratorSet:
    """The transposition (1 2) and the k-cycle; one generator when k = 2."""
    if k < 2:
        raise PermutationError(f"S_k generators need k >= 2, got {k}")
    transposition = parse_permutation("(1 2)", k)
    k_cycle = parse_permutation("(" + " ".join(map(str, range(1, k + 1))) + ")", k)
    if k_cycle == transposition:
        return GeneratorSet((transposition,))
    return GeneratorSet((transposition, k_cycle))


def generate_group(gens: GeneratorSet) -> list[Permutation]:
    """All elements of the generated group, breadth-first from the identity."""
    start = identity(gens.k)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = compose(g, p)
            if q not in seen:
                seen.add(q)
                order.append(q)
                queue.append(q)
    return order


# ---------------------------------------------------------------------------
# Distributions and transducers


@dataclass(frozen=True, slots=True)
class Distribution:
    """Finite map element -> probability. Zero entries are dropped.

    Construction does not enforce stochasticity; that is a validation
    concern so that bad rows can be reported rather than rejected.
    """

    weights: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "weights", {s: Fraction(p) for s, p in self.weights.items() if p}
        )

    @classmethod
    def dirac(cls, s: str) -> Distribution:
        return cls({s: Fraction(1)})

    @classmethod
    def uniform(cls, elements: Iterable[str]) -> Distribution:
        items = list(dict.fromkeys(elements))
        if not items:
            raise ValueError("uniform distribution over an empty set")
        return cls({s: Fraction(1, len(items)) for s in items})

    def __getitem__(self, s: str) -> Fraction:
        return self.weights.get(s, Fraction(0))

    def __iter__(self) -> Iterator[str]:
        return iter(self.weights)

    def items(self) -> Iterable[tuple[str, Fraction]]:
        return self.weights.items()

    def support(self) -> frozenset[str]:
        return frozenset(s for s, p in self.weights.items() if p > 0)

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))


@dataclass(frozen=True, slots=True)
class Transducer:
    """Probabilistic I/O transducer over corresponding signals i1..ik / o1..ok.

    ``rows[s][letter]`` lists explicit transitions; ``defaults[s]`` covers
    the letters a state does not list. ``step`` is the total transition
    function once the model validates.
    """

    k: int
    states: tuple[str, ...]
    initial: Distribution
    labels: Mapping[str, Letter]
    rows: Mapping[str, Mapping[Letter, Distribution]]
    defaults: Mapping[str, Distribution] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # every declared state gets a (possibly empty) row table
        rows = {s: dict(self.rows.get(s, {})) for s in self.states}
        rows.update({s: dict(r) for s, r in self.rows.items() if s not in rows})
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", dict(self.labels))
        object.__setattr__(self, "defaults", dict(self.defaults))

    def step(self, state: str, letter: Letter) -> Distribution:
        row = self.rows.get(state, {})
        d = row.get(letter)
        if d is None:
            d = self.defaults.get(state)
        if d is None:
            raise KeyError(f"no transition for state {state!r} on letter {letter:b}")
        return d

    def label(self, state: str) -> Letter:
        return self.labels[state]

    def letters(self) -> range:
        return all_letters(self.k)

    @property
    def output_letters(self) -> frozenset[Letter]:
        return frozenset(self.labels[s] for s in self.states)


class ViolationKind(StrEnum):
    NON_STOCHASTIC = "NonStochastic"
    NEGATIVE_PROBABILITY = "NegativeProbability"
    MISSING_TRANSITION = "MissingTransition"
    UNKNOWN_STATE = "UnknownState"
    BAD_LABEL = "BadLabel"
    MISSING_LABEL = "MissingLabel"
    BAD_LETTER = "BadLetter"
    INITIAL_NOT_STOCHASTIC = "InitialNotStochastic"
    BAD_K = "BadK"
    ZERO_DENOMINATOR = "ZeroDenominator"
    DUPLICATE_STATE = "DuplicateState"


@dataclass(frozen=True, slots=True)
class Violation:
    kind: ViolationKind
    state: str | None = None
    letter: Letter | None = None
    detail: str = ""

    def __str__(self) -> str:
        parts = [str(self.kind)]
        if self.state is not None:
            parts.append(f"state={self.state}")
        if self.letter is not None:
            parts.append(f"letter={self.letter:b}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


def _check_distribution(
    d: Distribution, known: set[str], kind: ViolationKind, state: str | None, letter: Letter | None
) -> list[Violation]:
    out = []
    for s, p in d.items():
        if s not in known:
            out.append(Violation(ViolationKind.UNKNOWN_STATE, state, letter, f"target {s!r}"))
        if p < 0:
            out.append(Violation(ViolationKind.NEGATIVE_PROBABILITY, state, letter, f"{s}: {p}"))
    if d.total() != 1:
        out.append(Violation(kind, state, letter, f"sums to {d.total()}"))
    return out


def validate_transducer(t: Transducer) -> list[Violation]:
    """Return every invariant violation; an empty list means the model is valid."""
    out: list[Violation] = []
    if not 1 <= t.k <= MAX_K:
        return [Violation(ViolationKind.BAD_K, detail=f"k={t.k} not in 1..{MAX_K}")]
    known = set(t.states)
    if len(known) != len(t.states):
        out.append(Violation(ViolationKind.DUPLICATE_STATE, detail="state names repeat"))
    out += _check_distribution(
        t.initial, known, ViolationKind.INITIAL_NOT_STOCHASTIC, None, None
    )
    n_letters = 1 << t.k
    for s in t.states:
        if s not in t.labels:
            out.append(Violation(ViolationKind.MISSING_LABEL, s))
        elif not 0 <= t.labels[s] < n_letters:
            out.append(Violation(ViolationKind.BAD_LABEL, s, detail=f"{t.labels[s]:b}"))
        row = t.rows.get(s, {})
        for letter, d in row.items():
            if not 0 <= letter < n_letters:
                out.append(Violation(ViolationKind.BAD_LETTER, s, letter))
                continue
            out += _check_distribution(d, known, ViolationKind.NON_STOCHASTIC, s, letter)
        if s in t.defaults:
            out += _check_distribution(
                t.defaults[s], known, ViolationKind.NON_STOCHASTIC, s, None
            )
        else:
            missing = sorted(set(range(n_letters)) - set(row))
            if missing:
                out.append(
                    Violation(
                        ViolationKind.MISSING_TRANSITION,
                        s,
                        missing[0],
                        f"{len(missing)} letter(s) without a row",
                    )
                )
    for what, keys in (("row", t.rows), ("label", t.labels), ("default row", t.defaults)):
        for s in sorted(set(keys) - known):
            out.append(Violation(ViolationKind.UNKNOWN_STATE, s, detail=f"{what} for undeclared state"))
    if out:
        logger.debug("transducer has %d violation(s)", len(out))
    return out
