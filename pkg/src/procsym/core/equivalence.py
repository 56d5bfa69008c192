"""Equivalence engines with counterexample words (Python 3.12).

* ``weighted_equivalent``: breadth-first span search over the stacked
  difference of two linear representations (Tzeng / Schuetzenberger).
* ``nfa_equivalent``: on-the-fly determinised pair search with pruning
  up to congruence (HKC).
* ``pra_distribution_equivalent`` / ``pra_expected_equivalent``: the two
  reward-automaton variants built on top of the weighted engine.

Only nonempty words are compared; the empty word is never a witness.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .algebra import Basis, dot, extend_basis, vec_mat_mul
from .automata import (
    NFA,
    PRA,
    LinearRepresentation,
    evaluated_reward_representation,
    expected_reward_representation,
    symbolic_reward_representation,
)
from .constants import DEFAULT_SEED, DEFAULT_TRIALS, RANDOM_POINT_HIGH, RANDOM_POINT_LOW
from .exceptions import AlphabetMismatchError, ConfigError
from .model import Word
from .simulation import pra_reward_distribution

logger = logging.getLogger(__name__)

PARIKH_MODES = ("symbolic", "randomized")


@dataclass(frozen=True, slots=True)
class Equivalent:
    basis_size: int = 0


@dataclass(frozen=True, slots=True)
class Witness:
    """A word on which the two sides differ, with both values."""

    word: Word
    left: Any
    right: Any
    basis_size: int = 0
    coordinate: int | None = None
    vector: tuple[int, ...] | None = None


@dataclass(frozen=True, slots=True)
class ProbablyEquivalent:
    """Equivalent at every random point; ``error_bound`` bounds a wrong answer."""

    error_bound: Fraction
    trials: int
    seed: int
    basis_size: int = 0


EquivalenceResult = Equivalent | Witness | ProbablyEquivalent


def weighted_equivalent(r1: LinearRepresentation, r2: LinearRepresentation) -> Equivalent | Witness:
    """Decide value1(w) == value2(w) for every nonempty w.

    Vectors are checked against the difference functional only when they
    enter the basis; a vector in the span of checked vectors has value 0.
    """
    if r1.field.name != r2.field.name:
        raise AlphabetMismatchError(f"representations over {r1.field.name} and {r2.field.name}")
    if tuple(r1.alphabet) != tuple(r2.alphabet):
        raise AlphabetMismatchError("representations over different alphabets")
    fld = r1.field
    n1 = r1.dimension
    dimension = n1 + r2.dimension
    basis = Basis(dimension)
    queue: deque[tuple[Word, tuple, tuple]] = deque()

    def consider(word: Word, v1: tuple, v2: tuple) -> Witness | None:
        nonlocal basis
        basis, added = extend_basis(basis, v1 + v2, word)
        if not added:
            return None
        left = dot(v1, r1.final, fld)
        right = dot(v2, r2.final, fld)
        if left != right:
            return Witness(word, left, right, basis_size=len(basis))
        queue.append((word, v1, v2))
        return None

    for a in r1.alphabet:
        found = consider((a,), vec_mat_mul(r1.initial, r1.matrices[a], fld),
                         vec_mat_mul(r2.initial, r2.matrices[a], fld))
        if found:
            return found
    while queue and not basis.full:
        word, v1, v2 = queue.popleft()
        for a in r1.alphabet:
            found = consider(word + (a,), vec_mat_mul(v1, r1.matrices[a], fld),
                             vec_mat_mul(v2, r2.matrices[a], fld))
            if found:
                return found
    logger.debug("span search closed with basis of size %d / %d", len(basis), dimension)
    return Equivalent(basis_size=len(basis))


# ---------------------------------------------------------------------------
# NFA equivalence, bisimulation up to congruence


Tagged = tuple[int, str]
Macro = frozenset[Tagged]


def _normal_form(x: Macro, relation: list[tuple[Macro, Macro]]) -> Macro:
    """Saturate x under the rewriting rules X -> X u Y for (X, Y) in the relation."""
    cur = set(x)
    changed = True
    while changed:
        changed = False
        for a, b in relation:
            if a <= cur and not b <= cur:
                cur |= b
                changed = True
            if b <= cur and not a <= cur:
                cur |= a
                changed = True
    return frozenset(cur)


def nfa_equivalent(n1: NFA, n2: NFA) -> Equivalent | Witness:
    """L(N1) == L(N2) on nonempty words. Witness values are the acceptance flags."""
    if set(n1.alphabet) != set(n2.alphabet):
        raise AlphabetMismatchError("NFAs over different alphabets")
    letters = sorted(n1.alphabet)
    sides = (n1, n2)

    def post(m: Macro, a: int) -> Macro:
        out: set[Tagged] = set()
        for side, q in m:
            out |= {(side, p) for p in sides[side].transitions.get(q, {}).get(a, ())}
        return frozenset(out)

    def accepting(m: Macro) -> bool:
        return any(q in sides[side].accepting for side, q in m)

    start1 = frozenset((0, q) for q in n1.initial)
    start2 = frozenset((1, q) for q in n2.initial)
    relation: list[tuple[Macro, Macro]] = []
    todo: deque[tuple[Macro, Macro, Word]] = deque(
        (post(start1, a), post(start2, a), (a,)) for a in letters
    )
    pruned = 0
    while todo:
        x, y, word = todo.popleft()
        if _normal_form(x, relation) == _normal_form(y, relation):
            pruned += 1
            continue
        if accepting(x) != accepting(y):
            logger.debug("HKC witness after %d pairs, %d pruned", len(relation), pruned)
            return Witness(word, accepting(x), accepting(y), basis_size=len(relation))
        relation.append((x, y))
        for a in letters:
            todo.append((post(x, a), post(y, a), word + (a,)))
    logger.debug("HKC closed: relation of %d pairs, %d pruned", len(relation), pruned)
    return Equivalent(basis_size=len(relation))


# ---------------------------------------------------------------------------
# Reward automata


def _check_pra_pair(p1: PRA, p2: PRA) -> None:
    if p1.k != p2.k:
        raise AlphabetMismatchError(f"reward dimensions {p1.k} and {p2.k} differ")
    if tuple(p1.alphabet) != tuple(p2.alphabet):
        raise AlphabetMismatchError("reward automata over different alphabets")


def _first_difference(
    d1: dict[tuple[int, ...], Fraction], d2: dict[tuple[int, ...], Fraction]
) -> tuple[tuple[int, ...], Fraction, Fraction] | None:
    for a in sorted(set(d1) | set(d2)):
        left, right = d1.get(a, Fraction(0)), d2.get(a, Fraction(0))
        if left != right:
            return a, left, right
    return None


def _parikh_witness(p1: PRA, p2: PRA, word: Word, basis_size: int) -> Witness:
    diff = _first_difference(pra_reward_distribution(p1, word), pra_reward_distribution(p2, word))
    if diff is None:
        # the engines only report words whose generating polynomials differ
        raise AssertionError(f"reward distributions agree on witness {word}")
    a, left, right = diff
    return Witness(word, left, right, basis_size=basis_size, vector=a)


def schwartz_zippel_bound(dimension: int, k: int, trials: int) -> Fraction:
    """Probability that ``trials`` random points all miss an inequivalence.

    A shortest distinguishing word has length <= dimension, so its
    difference polynomial has total degree <= dimension * k.
    """
    per_trial = min(Fraction(1), Fraction(dimension * k, RANDOM_POINT_HIGH - RANDOM_POINT_LOW + 1))
    return per_trial**trials


def random_points(k: int, seed: int, trials: int) -> Iterable[tuple[int, ...]]:
    rng = random.Random(seed)
    for _ in range(trials):
        yield tuple(rng.randint(RANDOM_POINT_LOW, RANDOM_POINT_HIGH) for _ in range(k))


def pra_distribution_equivalent(
    p1: PRA,
    p2: PRA,
    mode: str = "symbolic",
    *,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
) -> EquivalenceResult:
    """Do the two PRAs induce the same reward distribution on every word?

    ``symbolic`` is exact; ``randomized`` evaluates the generating
    polynomials at random integer points and is one-sided: a Witness is
    always genuine.
    """
    if mode not in PARIKH_MODES:
        raise ConfigError(f"unknown Parikh mode {mode!r}; expected one of {PARIKH_MODES}")
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    _check_pra_pair(p1, p2)

    if mode == "symbolic":
        res = weighted_equivalent(symbolic_reward_representation(p1), symbolic_reward_representation(p2))
        if isinstance(res, Witness):
            return _parikh_witness(p1, p2, res.word, res.basis_size)
        return res

    basis_size = 0
    for n, point in enumerate(random_points(p1.k, seed, trials), start=1):
        res = weighted_equivalent(
            evaluated_reward_representation(p1, point), evaluated_reward_representation(p2, point)
        )
        if isinstance(res, Witness):
            logger.debug("random point %d separated the reward automata", n)
            return _parikh_witness(p1, p2, res.word, res.basis_size)
        basis_size = max(basis_size, res.basis_size)
    bound = schwartz_zippel_bound(len(p1.states) + len(p2.states), p1.k, trials)
    return ProbablyEquivalent(bound, trials, seed, basis_size)


def pra_expected_equivalent(p1: PRA, p2: PRA) -> Equivalent | Witness:
    """Same expected reward vector on every word, coordinate by coordinate."""
    _check_pra_pair(p1, p2)
    basis_size = 0
    for j in range(1, p1.k + 1):
        res = weighted_equivalent(expected_reward_representation(p1, j), expected_reward_representation(p2, j))
        if isinstance(res, Witness):
            return Witness(res.word, res.left, res.right, res.basis_size, coordinate=j)
        basis_size = max(basis_size, res.basis_size)
    return Equivalent(basis_size=basis_size)
