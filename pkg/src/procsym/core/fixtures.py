"""Reproducible transducer fixtures (Python 3.12).

* ``gen_round_robin``: the cyclic arbiter.
* ``reduce_pa_to_transducer`` / ``reduce_nfa_to_transducer``: the
  constructions that turn PA emptiness and NFA universality into
  approximate and qualitative symmetry questions.
* ``gen_random_transducer`` and friends: seeded random instances.
* ``gen_symmetric_pair_fixtures``: small transducers separating the
  symmetry notions, each with a manifest of expected verdicts.

State naming: the arbiter watches process j in ``watch{j}`` (label
empty) and grants it in ``grant{j}`` (label {o_j}). Reduction states
copied from the automaton are prefixed ``q.``.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .automata import NFA, PA
from .constants import MANIFEST_SCHEMA, MANIFEST_VERSION
from .exceptions import ValidationError
from .model import Distribution, Letter, Permutation, Transducer, parse_permutation

logger = logging.getLogger(__name__)

EMPTY = 0
I1, I2 = 0b01, 0b10
I12 = 0b11
O1, O2 = 0b01, 0b10
O12 = 0b11


# ---------------------------------------------------------------------------
# Round-Robin


def gen_round_robin(k: int, init: str | int = "uniform") -> Transducer:
    """Cyclic arbiter over k processes.

    The arbiter watching process j grants it when i_j is requested and
    then watches j+1; otherwise it just moves on to watch j+1.
    ``init="uniform"`` starts in each watch state with probability 1/k,
    an int j starts deterministically in ``watch{j}``.
    """
    if k < 2:
        raise ValidationError(f"round-robin needs k >= 2, got {k}")
    watch = [f"watch{j}" for j in range(1, k + 1)]
    grant = [f"grant{j}" for j in range(1, k + 1)]
    if init == "uniform":
        initial = Distribution.uniform(watch)
    elif isinstance(init, int) and not isinstance(init, bool):
        if not 1 <= init <= k:
            raise ValidationError(f"initial process {init} outside 1..{k}")
        initial = Distribution.dirac(watch[init - 1])
    else:
        raise ValidationError(f"init must be 'uniform' or a process index, got {init!r}")

    labels: dict[str, Letter] = {w: EMPTY for w in watch}
    labels.update({g: 1 << j for j, g in enumerate(grant)})
    rows: dict[str, dict[Letter, Distribution]] = {}
    defaults: dict[str, Distribution] = {}
    for j in range(k):
        # watch{j+1} and grant{j} both look at process j+1 next
        looks_at = j
        for state in (watch[j], grant[(j - 1) % k]):
            defaults[state] = Distribution.dirac(watch[(looks_at + 1) % k])
            rows[state] = {
                letter: Distribution.dirac(grant[looks_at])
                for letter in range(1 << k)
                if letter >> looks_at & 1
            }
    return Transducer(k, tuple(watch + grant), initial, labels, rows, defaults)


# ---------------------------------------------------------------------------
# Reductions


def _binary(alphabet: Sequence[Letter], what: str) -> None:
    if sorted(alphabet) != [0, 1]:
        raise ValidationError(f"{what} alphabet must be {{0, 1}}, got {sorted(alphabet)}")


def _fresh(names: set[str], base: str) -> str:
    name = base
    while name in names:
        name = "_" + name
    return name


def reduce_pa_to_transducer(a: PA, lam: Fraction) -> tuple[Transducer, Permutation, Fraction]:
    """Transducer that is (lam, (1 2))-symmetric iff A(x) <= lam for every x.

    Input letters of the PA component: empty -> 0, {i2} -> 1. Any letter
    with i1 leaves the component, to s_top from accepting states and to
    s_bot otherwise.
    """
    _binary(a.alphabet, "PA")
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValidationError(f"lambda must be in (0, 1), got {lam}")
    q = {s: f"q.{s}" for s in a.states}
    taken = set(q.values())
    s_init, s_mid, s_top, s_bot = (_fresh(taken, n) for n in ("s_init", "s_mid", "s_top", "s_bot"))
    states = (s_init, s_mid, s_top, s_bot, *q.values())
    labels = {s: EMPTY for s in states}
    labels[s_bot] = O12

    def lift(d: Distribution) -> Distribution:
        return Distribution({q[p]: w for p, w in d.items()})

    rows: dict[str, dict[Letter, Distribution]] = {
        s_init: {
            I1: Distribution.dirac(s_mid),
            I2: lift(a.initial),
            EMPTY: Distribution.dirac(s_bot),
            I12: Distribution.dirac(s_bot),
        },
        s_mid: {
            EMPTY: Distribution.dirac(s_mid),
            I1: Distribution.dirac(s_mid),
            I2: Distribution.dirac(s_bot),
            I12: Distribution.dirac(s_bot),
        },
    }
    defaults = {s_top: Distribution.dirac(s_top), s_bot: Distribution.dirac(s_bot)}
    for s in a.states:
        leave = Distribution.dirac(s_top if s in a.accepting else s_bot)
        rows[q[s]] = {
            EMPTY: lift(a.step(s, 0)),
            I2: lift(a.step(s, 1)),
            I1: leave,
            I12: leave,
        }
    t = Transducer(2, states, Distribution.dirac(s_init), labels, rows, defaults)
    return t, parse_permutation("(1 2)", 2), lam


def reduce_nfa_to_transducer(n: NFA) -> tuple[Transducer, Permutation]:
    """Transducer that is (1 2)-qualitatively symmetric iff L(N) is universal.

    Input letters of the NFA component: empty -> 0, {i1,i2} -> 1.
    Nondeterministic choices get uniform probabilities.
    """
    _binary(n.alphabet, "NFA")
    rejecting = [s for s in n.states if s not in n.accepting]
    if rejecting:
        raise ValidationError(f"every NFA state must be accepting; not: {', '.join(rejecting)}")
    if len(n.initial) != 1:
        raise ValidationError("the NFA must have exactly one initial state")
    q = {s: f"q.{s}" for s in n.states}
    taken = set(q.values())
    s_init, s_mid, s_bot = (_fresh(taken, b) for b in ("s_init", "s_mid", "s_bot"))
    states = (s_init, s_mid, s_bot, *q.values())
    labels = {s: EMPTY for s in states}
    labels[s_bot] = O12
    (q0,) = n.initial

    def uniform(targets: Sequence[str]) -> Distribution:
        return Distribution.uniform(sorted(targets))

    rows: dict[str, dict[Letter, Distribution]] = {
        s_init: {
            I1: Distribution.dirac(q[q0]),
            I2: Distribution.dirac(s_mid),
            EMPTY: Distribution.dirac(s_bot),
            I12: Distribution.dirac(s_bot),
        },
        s_mid: {
            EMPTY: uniform([s_mid, s_bot]),
            I12: uniform([s_mid, s_bot]),
            I1: Distribution.dirac(s_bot),
            I2: Distribution.dirac(s_bot),
        },
    }
    defaults = {s_bot: Distribution.dirac(s_bot)}
    for s in n.states:
        row = n.transitions.get(s, {})
        rows[q[s]] = {
            EMPTY: uniform([q[p] for p in row.get(0, ())] + [s_bot]),
            I12: uniform([q[p] for p in row.get(1, ())] + [s_bot]),
        }
        defaults[q[s]] = Distribution.dirac(s_bot)
    t = Transducer(2, states, Distribution.dirac(s_init), labels, rows, defaults)
    return t, parse_permutation("(1 2)", 2)


# ---------------------------------------------------------------------------
# Random instances


def _random_distribution(rng: random.Random, targets: Sequence[str], bound: int) -> Distribution:
    """Random distribution whose probabilities all have denominator ``den <= bound``."""
    den = rng.randint(1, bound)
    weights = [0] * len(targets)
    for _ in range(den):
        weights[rng.randrange(len(targets))] += 1
    return Distribution({s: Fraction(w, den) for s, w in zip(targets, weights) if w})


def gen_random_transducer(seed: int, n_states: int, k: int, denominator_bound: int) -> Transducer:
    """Deterministic in its arguments; every row and the initial vector are stochastic."""
    if n_states < 1 or k < 1:
        raise ValidationError(f"need n_states >= 1 and k >= 1, got {n_states}, {k}")
    if denominator_bound < 1:
        raise ValidationError(f"denominator bound must be >= 1, got {denominator_bound}")
    rng = random.Random(seed)
    states = tuple(f"s{j}" for j in range(n_states))
    labels = {s: rng.randrange(1 << k) for s in states}
    initial = _random_distribution(rng, states, denominator_bound)
    rows = {
        s: {letter: _random_distribution(rng, states, denominator_bound) for letter in range(1 << k)}
        for s in states
    }
    return Transducer(k, states, initial, labels, rows)


def gen_random_nfa(seed: int, n_states: int, all_accepting: bool = True, density: float = 0.4) -> NFA:
    """Random NFA over {0, 1}; rows are sometimes left undefined."""
    rng = random.Random(seed)
    states = tuple(f"n{j}" for j in range(n_states))
    transitions: dict[str, dict[Letter, frozenset[str]]] = {}
    for s in states:
        row = {}
        for letter in (0, 1):
            if rng.random() < 0.15:
                continue
            succ = frozenset(p for p in states if rng.random() < density)
            if succ:
                row[letter] = succ
        transitions[s] = row
    accepting = (
        frozenset(states) if all_accepting else frozenset(s for s in states if rng.random() < 0.5)
    )
    return NFA(states, (0, 1), frozenset({states[0]}), accepting, transitions)


def gen_random_dfa(seed: int, n_states: int) -> PA:
    """Random total DFA over {0, 1}, as a PA with Dirac rows."""
    rng = random.Random(seed)
    states = tuple(f"d{j}" for j in range(n_states))
    transitions = {
        s: {letter: Distribution.dirac(rng.choice(states)) for letter in (0, 1)} for s in states
    }
    accepting = frozenset(s for s in states if rng.random() < 0.3)
    return PA(states, (0, 1), Distribution.dirac(states[0]), accepting, transitions)


def dfa_for_words(words: Sequence[Sequence[int]]) -> PA:
    """A 0/1-probability PA accepting exactly the given binary words (a trie plus a dead state)."""
    names: dict[tuple[int, ...], str] = {(): "t"}
    for w in words:
        for n in range(1, len(w) + 1):
            names.setdefault(tuple(w[:n]), "t" + "".join(map(str, w[:n])))
    dead = "dead"
    transitions: dict[str, dict[Letter, Distribution]] = {}
    for prefix, name in names.items():
        transitions[name] = {
            c: Distribution.dirac(names.get(prefix + (c,), dead)) for c in (0, 1)
        }
    transitions[dead] = {c: Distribution.dirac(dead) for c in (0, 1)}
    states = tuple(names.values()) + (dead,)
    accepting = frozenset(names[tuple(w)] for w in words)
    return PA(states, (0, 1), Distribution.dirac("t"), accepting, transitions)


# ---------------------------------------------------------------------------
# Hierarchy fixtures


@dataclass(frozen=True, slots=True)
class Fixture:
    """A named transducer with the verdict each check must give under ``permutation``."""

    name: str
    transducer: Transducer
    permutation: Permutation
    expected: dict[str, bool]
    description: str = ""
    identity_expected: dict[str, bool] = field(default_factory=dict)

    def manifest(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": MANIFEST_SCHEMA,
            "version": MANIFEST_VERSION,
            "fixture": self.name,
            "model": f"{self.name}.sym",
            "description": self.description,
            "checks": [
                {"kind": kind, "permutation": str(self.permutation), "symmetric": holds}
                for kind, holds in self.expected.items()
            ],
        }
        out["checks"] += [
            {"kind": kind, "permutation": "()", "symmetric": holds}
            for kind, holds in self.identity_expected.items()
        ]
        return out

    def manifest_json(self) -> str:
        return json.dumps(self.manifest(), indent=2, sort_keys=True) + "\n"


def _branching(
    start: str, branches: dict[Letter, list[tuple[Fraction, Sequence[Letter]]]], k: int = 2
) -> Transducer:
    """A start state that, on a chosen first input, commits to one of several output scripts.

    Each script is a fixed sequence of labels emitted one step at a time
    regardless of later inputs; afterwards the run rests in a silent sink.
    Unlisted first letters go straight to the sink.
    """
    sink = "rest"
    states = [start]
    labels: dict[str, Letter] = {start: EMPTY}
    rows: dict[str, dict[Letter, Distribution]] = {start: {}}
    defaults: dict[str, Distribution] = {start: Distribution.dirac(sink)}
    for letter, scripts in branches.items():
        first: dict[str, Fraction] = {}
        for n, (p, script) in enumerate(scripts):
            names = [f"b{letter}.{n}.{step}" for step in range(len(script))]
            for step, (name, out) in enumerate(zip(names, script)):
                states.append(name)
                labels[name] = out
                nxt = names[step + 1] if step + 1 < len(names) else sink
                defaults[name] = Distribution.dirac(nxt)
            first[names[0]] = p
        rows[start][letter] = Distribution(first)
    states.append(sink)
    labels[sink] = EMPTY
    defaults[sink] = Distribution.dirac(sink)
    return Transducer(k, tuple(states), Distribution.dirac(start), labels, rows, defaults)


def _memoryless(name_rows: dict[Letter, dict[str, Fraction]], labels: dict[str, Letter], initial: str) -> Transducer:
    """Every state shares the same transition rows; only labels differ."""
    states = tuple(labels)
    rows = {s: {letter: Distribution(d) for letter, d in name_rows.items()} for s in states}
    return Transducer(2, states, Distribution.dirac(initial), labels, rows)


def gen_symmetric_pair_fixtures() -> list[Fixture]:
    """Fixtures separating exact, Parikh-distribution, Parikh-expected and qualitative symmetry."""
    swap = parse_permutation("(1 2)", 2)
    half = Fraction(1, 2)
    kinds = ("exact", "parikh-dist", "parikh-exp", "qualitative")

    # o1 counts along {i1} scripts match o2 counts along {i2} scripts in
    # distribution at every prefix length, but the sequences differ
    order_swap = _branching(
        "start",
        {
            I1: [(half, (O1, EMPTY, O1)), (half, (EMPTY, O1, EMPTY))],
            I2: [(half, (O2, EMPTY, EMPTY)), (half, (EMPTY, O2, O2))],
        },
    )
    # {i1}: (2,0) or (0,2); {i2}: always (1,1); equal means, different laws
    fifty_fifty = _branching(
        "start",
        {
            I1: [(half, (O1, O1)), (half, (O2, O2))],
            I2: [(half, (O1, O2)), (half, (O2, O1))],
        },
    )
    # same supports under the swap, different weights
    perturbation = _memoryless(
        {
            I1: {"g1": Fraction(1, 3), "idle": Fraction(2, 3)},
            I2: {"g2": half, "idle": half},
            EMPTY: {"idle": Fraction(1)},
            I12: {"idle": Fraction(1)},
        },
        {"idle": EMPTY, "g1": O1, "g2": O2},
        "idle",
    )
    # grants lean towards process 1
    biased = _memoryless(
        {
            I1: {"g1": Fraction(1)},
            I2: {"g2": half, "idle": half},
            EMPTY: {"idle": Fraction(1)},
            I12: {"g1": Fraction(2, 3), "g2": Fraction(1, 3)},
        },
        {"idle": EMPTY, "g1": O1, "g2": O2},
        "idle",
    )

    def expect(*holds: bool) -> dict[str, bool]:
        return dict(zip(kinds, holds))

    fixtures = [
        Fixture(
            "order_swap",
            order_swap,
            swap,
            expect(False, True, True, False),
            "same Parikh laws at every length, different output orders",
        ),
        Fixture(
            "fifty_fifty",
            fifty_fifty,
            swap,
            expect(False, False, True, False),
            "equal expected Parikh images, different distributions",
        ),
        Fixture(
            "perturbation",
            perturbation,
            swap,
            expect(False, False, False, True),
            "same supports, rebalanced probabilities",
        ),
        Fixture(
            "biased",
            biased,
            swap,
            expect(False, False, False, False),
            "process 1 is favoured; only the identity is a symmetry",
            identity_expected=expect(True, True, True, True),
        ),
    ]
    logger.debug("built %d hierarchy fixtures", len(fixtures))
    return fixtures
