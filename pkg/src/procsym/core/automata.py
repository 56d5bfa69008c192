"""Automata and the transducer -> automaton constructions (Python 3.12).

Combined letters over 2^(I u O) are ints: the input part in the low k
bits, the output part shifted left by k (``inp | out << k``). Every
construction enumerates input letters from the transducer's tables and
keys its rows by the output letters the successors actually carry, so
the alphabet stays far below 4^k in practice.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .algebra import (
    RATIONALS,
    Field,
    Matrix,
    Vector,
    dot,
    polynomial_fraction_field,
    vec_mat_mul,
)
from .constants import SINK_STATE
from .exceptions import DimensionMismatchError, PermutationError
from .model import (
    Distribution,
    Letter,
    Permutation,
    Transducer,
    Word,
    permute_letter,
    permute_vector,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class PA:
    """Probabilistic automaton. Missing rows go to ``sink`` when one is set."""

    states: tuple[str, ...]
    alphabet: tuple[Letter, ...]
    initial: Distribution
    accepting: frozenset[str]
    transitions: Mapping[str, Mapping[Letter, Distribution]]
    sink: str | None = None

    def step(self, state: str, letter: Letter) -> Distribution:
        d = self.transitions.get(state, {}).get(letter)
        if d is not None:
            return d
        if self.sink is not None:
            return Distribution.dirac(self.sink)
        raise KeyError(f"PA has no transition for {state!r} on {letter}")


@dataclass(frozen=True, slots=True)
class PRA:
    """A PA over input letters with a {0,1}^k reward collected on entering a state."""

    pa: PA
    rewards: Mapping[str, tuple[int, ...]]
    k: int

    @property
    def states(self) -> tuple[str, ...]:
        return self.pa.states

    @property
    def alphabet(self) -> tuple[Letter, ...]:
        return self.pa.alphabet


@dataclass(frozen=True, slots=True)
class NFA:
    """Nondeterministic automaton; a missing row means no successor."""

    states: tuple[str, ...]
    alphabet: tuple[Letter, ...]
    initial: frozenset[str]
    accepting: frozenset[str]
    transitions: Mapping[str, Mapping[Letter, frozenset[str]]]

    def post(self, states: frozenset[str], letter: Letter) -> frozenset[str]:
        out: set[str] = set()
        for q in states:
            out |= self.transitions.get(q, {}).get(letter, frozenset())
        return frozenset(out)


@dataclass(frozen=True, slots=True)
class LinearRepresentation:
    """Weighted automaton (u, M_sigma, f); the value of w is u . M_w . f."""

    field: Field
    alphabet: tuple[Letter, ...]
    initial: Vector
    matrices: Mapping[Letter, Matrix]
    final: Vector
    labels: tuple[str, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.initial)

    def forward(self, word: Sequence[Letter]) -> Vector:
        v = self.initial
        for a in word:
            v = vec_mat_mul(v, self.matrices[a], self.field)
        return v

    def value(self, word: Sequence[Letter]) -> Any:
        return dot(self.forward(word), self.final, self.field)


# ---------------------------------------------------------------------------
# Words over the combined alphabet


def combine_letter(inp: Letter, out: Letter, k: int) -> Letter:
    return inp | out << k


def split_letter(sigma: Letter, k: int) -> tuple[Letter, Letter]:
    mask = (1 << k) - 1
    return sigma & mask, sigma >> k


def combine_word(x: Sequence[Letter], y: Sequence[Letter], k: int) -> Word:
    """Letter-wise union x (x) y of an input and an output word."""
    if len(x) != len(y):
        raise DimensionMismatchError(f"input word of length {len(x)} vs output of {len(y)}")
    if not x:
        raise DimensionMismatchError("combined words must be nonempty")
    return tuple(combine_letter(i, o, k) for i, o in zip(x, y))


def split_word(w: Sequence[Letter], k: int) -> tuple[Word, Word]:
    pairs = [split_letter(sigma, k) for sigma in w]
    return tuple(i for i, _ in pairs), tuple(o for _, o in pairs)


def _fresh_name(base: str, taken: Sequence[str]) -> str:
    taken_set = set(taken)
    name, n = base, 0
    while name in taken_set:
        n += 1
        name = f"{base}{n}"
    return name


def _check_k(t: Transducer, pi: Permutation) -> None:
    if pi.k != t.k:
        raise PermutationError(f"permutation over {pi.k} signals for a transducer with k={t.k}")


def characteristic_vector(letter: Letter, k: int) -> tuple[int, ...]:
    return tuple(letter >> j & 1 for j in range(k))


# ---------------------------------------------------------------------------
# Exact symmetry: PA pair


def _pa_rows(t: Transducer, pi: Permutation | None, sink: str) -> dict[str, dict[Letter, Distribution]]:
    """Rows keyed by the combined letters the transition table actually produces.

    For B the input is read through pi and a successor labelled l emits
    the output pi^-1(l), so the letter x (x) y carries mass into states
    labelled pi(y).
    """
    inv = pi.inverse() if pi is not None else None
    rows: dict[str, dict[Letter, Distribution]] = {}
    for q in t.states:
        row: dict[Letter, Distribution] = {}
        for inp in t.letters():
            d = t.step(q, inp if pi is None else permute_letter(pi, inp))
            by_label: dict[Letter, dict[str, Fraction]] = {}
            for p, w in d.items():
                by_label.setdefault(t.labels[p], {})[p] = w
            for label, mass in by_label.items():
                out = label if inv is None else permute_letter(inv, label)
                rest = 1 - sum(mass.values(), Fraction(0))
                if rest:
                    mass[sink] = rest
                row[combine_letter(inp, out, t.k)] = Distribution(mass)
        rows[q] = row
    return rows


def build_pa_pair(t: Transducer, pi: Permutation) -> tuple[PA, PA]:
    """PAs with A(x (x) y) = Pr(T(x)=y) and B(x (x) y) = Pr(T(pi x)=pi y).

    Mass of a transition that does not match the letter's output part
    falls into a rejecting sink; letters with no matching mass are left
    out of the table and default to the sink. The shared alphabet holds
    only combined letters some row of A or B uses: any other letter sends
    both automata to the sink, so it cannot tell them apart.
    """
    _check_k(t, pi)
    sink = _fresh_name(SINK_STATE, t.states)
    rows_a = _pa_rows(t, None, sink)
    rows_b = _pa_rows(t, pi, sink)
    alphabet = tuple(sorted({sigma for rows in (rows_a, rows_b) for row in rows.values() for sigma in row}))

    def pa(rows: dict[str, dict[Letter, Distribution]]) -> PA:
        return PA(
            states=t.states + (sink,),
            alphabet=alphabet,
            initial=t.initial,
            accepting=frozenset(t.states),
            transitions=rows,
            sink=sink,
        )

    logger.debug("PA pair: %d states, %d combined letters in use", len(t.states) + 1, len(alphabet))
    return pa(rows_a), pa(rows_b)


def to_linear_representation(a: PA) -> LinearRepresentation:
    index = {q: n for n, q in enumerate(a.states)}
    n = len(a.states)
    matrices = {}
    for sigma in a.alphabet:
        rows = []
        for q in a.states:
            row = [Fraction(0)] * n
            for p, w in a.step(q, sigma).items():
                row[index[p]] = w
            rows.append(tuple(row))
        matrices[sigma] = tuple(rows)
    return LinearRepresentation(
        field=RATIONALS,
        alphabet=a.alphabet,
        initial=tuple(a.initial[q] for q in a.states),
        matrices=matrices,
        final=tuple(Fraction(1 if q in a.accepting else 0) for q in a.states),
        labels=a.states,
    )


# ---------------------------------------------------------------------------
# Parikh symmetry: PRA pair


def build_pra_pair(t: Transducer, pi: Permutation) -> tuple[PRA, PRA]:
    """A rewards R(s) = chi(l(s)); B reads pi-permuted inputs with reward pi^-1(R(s)).

    With that choice Pr(B(x)=a) = Pr(P(T(pi x)) = pi(a)), so A and B are
    distribution equivalent exactly when T is pi-Parikh symmetric.
    """
    _check_k(t, pi)
    letters = tuple(t.letters())
    inv = pi.inverse()
    rewards_a = {s: characteristic_vector(t.labels[s], t.k) for s in t.states}
    rewards_b = {s: permute_vector(inv, r) for s, r in rewards_a.items()}

    def pa(perm: Permutation | None) -> PA:
        rows = {
            s: {i: t.step(s, i if perm is None else permute_letter(perm, i)) for i in letters}
            for s in t.states
        }
        return PA(t.states, letters, t.initial, frozenset(t.states), rows)

    return PRA(pa(None), rewards_a, t.k), PRA(pa(pi), rewards_b, t.k)


def expected_reward_representation(p: PRA, j: int) -> LinearRepresentation:
    """Dimension-2n rational representation whose value is E[reward_j]."""
    if not 1 <= j <= p.k:
        raise DimensionMismatchError(f"reward coordinate {j} outside 1..{p.k}")
    states = p.states
    n = len(states)
    index = {q: m for m, q in enumerate(states)}
    zero = Fraction(0)
    matrices = {}
    for sigma in p.alphabet:
        rows = []
        for q in states:
            top = [zero] * (2 * n)
            bottom = [zero] * (2 * n)
            for target, w in p.pa.step(q, sigma).items():
                c = index[target]
                top[c] = w
                # accumulator picks up mass entering a state rewarded on j
                if p.rewards[target][j - 1]:
                    top[n + c] = w
                bottom[n + c] = w
            rows.append(tuple(top))
            rows.append(tuple(bottom))
        # rows were interleaved per state; reorder into [top block; bottom block]
        matrices[sigma] = tuple(rows[0::2]) + tuple(rows[1::2])
    initial = tuple(p.pa.initial[q] for q in states) + (zero,) * n
    final = (zero,) * n + (Fraction(1),) * n
    return LinearRepresentation(RATIONALS, p.alphabet, initial, matrices, final, states + states)


def _monomial_weights(p: PRA, entry) -> dict[str, Any]:
    return {s: entry(p.rewards[s]) for s in p.states}


def _reward_representation(p: PRA, fld: Field, weight: Mapping[str, Any]) -> LinearRepresentation:
    states = p.states
    index = {q: m for m, q in enumerate(states)}
    n = len(states)
    matrices = {}
    for sigma in p.alphabet:
        rows = []
        for q in states:
            row = [fld.zero] * n
            for target, w in p.pa.step(q, sigma).items():
                row[index[target]] = fld.convert(w) * weight[target]
            rows.append(tuple(row))
        matrices[sigma] = tuple(rows)
    return LinearRepresentation(
        field=fld,
        alphabet=p.alphabet,
        initial=tuple(fld.convert(p.pa.initial[q]) for q in states),
        matrices=matrices,
        final=(fld.one,) * n,
        labels=states,
    )


def symbolic_reward_representation(p: PRA) -> LinearRepresentation:
    """Representation over QQ(y1..yk) whose value is sum_a Pr(reward=a) y^a."""
    fld, gens = polynomial_fraction_field(p.k)

    def monomial(r: tuple[int, ...]) -> Any:
        m = fld.one
        for g, e in zip(gens, r):
            if e:
                m = m * g
        return m

    return _reward_representation(p, fld, _monomial_weights(p, monomial))


def evaluated_reward_representation(p: PRA, point: Sequence[int | Fraction]) -> LinearRepresentation:
    """The symbolic representation with every y_j replaced by ``point[j-1]``."""
    if len(point) != p.k:
        raise DimensionMismatchError(f"point with {len(point)} coordinates for k={p.k}")
    values = [Fraction(x) for x in point]

    def monomial(r: tuple[int, ...]) -> Fraction:
        m = Fraction(1)
        for x, e in zip(values, r):
            if e:
                m *= x
        return m

    return _reward_representation(p, RATIONALS, _monomial_weights(p, monomial))


# ---------------------------------------------------------------------------
# Qualitative symmetry: NFA pair


def support_nfa(a: PA) -> NFA:
    """The NFA of positive-probability transitions, with the sink removed."""
    rows: dict[str, dict[Letter, frozenset[str]]] = {}
    for q in a.states:
        if q == a.sink:
            continue
        row = {}
        for sigma, d in a.transitions.get(q, {}).items():
            succ = frozenset(p for p in d.support() if p != a.sink)
            if succ:
                row[sigma] = succ
        rows[q] = row
    states = tuple(q for q in a.states if q != a.sink)
    return NFA(
        states=states,
        alphabet=a.alphabet,
        initial=frozenset(s for s in a.initial.support() if s != a.sink),
        accepting=frozenset(a.accepting) - {a.sink},
        transitions=rows,
    )


def build_nfa_pair(t: Transducer, pi: Permutation) -> tuple[NFA, NFA]:
    """NFAs accepting exactly the x (x) y with positive Pr(T(x)=y), resp. Pr(T(pi x)=pi y)."""
    a, b = build_pa_pair(t, pi)
    return support_nfa(a), support_nfa(b)
