"""Exact forward simulation and brute-force oracles (Python 3.12).

Everything here enumerates runs directly instead of going through the
linear-algebra engines, so it doubles as the ground truth the engines
are checked against and as the replay path for counterexamples.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from .automata import NFA, PA, PRA
from .constants import DEFAULT_FRONTIER_CAP
from .exceptions import StateExplosionError, ValidationError
from .model import (
    Letter,
    Permutation,
    Transducer,
    Word,
    permute_vector,
    permute_word,
)

logger = logging.getLogger(__name__)


def _require_nonempty(x: Sequence[Letter]) -> None:
    if not x:
        raise ValidationError("input words must be nonempty")


def _guard(size: int, cap: int, step: int) -> None:
    if size > cap:
        raise StateExplosionError(cap=cap, reached=size, input_length=step)


def output_distribution(
    t: Transducer, x: Sequence[Letter], cap: int = DEFAULT_FRONTIER_CAP
) -> dict[Word, Fraction]:
    """Pr(T(x) = y) for every y with positive probability."""
    _require_nonempty(x)
    frontier: dict[tuple[str, Word], Fraction] = {(s, ()): p for s, p in t.initial.items()}
    for n, letter in enumerate(x, start=1):
        nxt: dict[tuple[str, Word], Fraction] = defaultdict(Fraction)
        for (s, y), p in frontier.items():
            for target, w in t.step(s, letter).items():
                nxt[(target, y + (t.labels[target],))] += p * w
        frontier = nxt
        _guard(len(frontier), cap, n)
    out: dict[Word, Fraction] = defaultdict(Fraction)
    for (_, y), p in frontier.items():
        out[y] += p
    return dict(out)


def probability(t: Transducer, x: Sequence[Letter], y: Sequence[Letter]) -> Fraction:
    """Pr(T(x) = y), following only runs whose labels match y."""
    _require_nonempty(x)
    if len(x) != len(y):
        return Fraction(0)
    cur: dict[str, Fraction] = dict(t.initial.items())
    for letter, out in zip(x, y):
        nxt: dict[str, Fraction] = defaultdict(Fraction)
        for s, p in cur.items():
            for target, w in t.step(s, letter).items():
                if t.labels[target] == out:
                    nxt[target] += p * w
        cur = nxt
        if not cur:
            return Fraction(0)
    return sum(cur.values(), Fraction(0))


def _bit_vector(letter: Letter, k: int) -> tuple[int, ...]:
    return tuple(letter >> j & 1 for j in range(k))


def parikh_distribution(
    t: Transducer, x: Sequence[Letter], cap: int = DEFAULT_FRONTIER_CAP
) -> dict[tuple[int, ...], Fraction]:
    """Distribution of the Parikh image of T(x)."""
    _require_nonempty(x)
    zero = (0,) * t.k
    frontier: dict[tuple[str, tuple[int, ...]], Fraction] = {
        (s, zero): p for s, p in t.initial.items()
    }
    for n, letter in enumerate(x, start=1):
        nxt: dict[tuple[str, tuple[int, ...]], Fraction] = defaultdict(Fraction)
        for (s, a), p in frontier.items():
            for target, w in t.step(s, letter).items():
                bits = _bit_vector(t.labels[target], t.k)
                nxt[(target, tuple(u + v for u, v in zip(a, bits)))] += p * w
        frontier = nxt
        _guard(len(frontier), cap, n)
    out: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for (_, a), p in frontier.items():
        out[a] += p
    return dict(out)


def expected_parikh(t: Transducer, x: Sequence[Letter]) -> tuple[Fraction, ...]:
    """E[P(T(x))], by linearity over the per-step state distributions."""
    _require_nonempty(x)
    cur: dict[str, Fraction] = dict(t.initial.items())
    totals = [Fraction(0)] * t.k
    for letter in x:
        nxt: dict[str, Fraction] = defaultdict(Fraction)
        for s, p in cur.items():
            for target, w in t.step(s, letter).items():
                nxt[target] += p * w
        cur = nxt
        for s, p in cur.items():
            for j, bit in enumerate(_bit_vector(t.labels[s], t.k)):
                if bit:
                    totals[j] += p
    return tuple(totals)


def permuted_parikh_distribution(
    t: Transducer, pi: Permutation, x: Sequence[Letter], cap: int = DEFAULT_FRONTIER_CAP
) -> dict[tuple[int, ...], Fraction]:
    """a -> Pr(P(T(pi x)) = pi(a)), the right-hand side of Parikh symmetry."""
    inv = pi.inverse()
    return {
        permute_vector(inv, a): p
        for a, p in parikh_distribution(t, permute_word(pi, x), cap).items()
    }


def permuted_expected_parikh(t: Transducer, pi: Permutation, x: Sequence[Letter]) -> tuple[Fraction, ...]:
    return permute_vector(pi.inverse(), expected_parikh(t, permute_word(pi, x)))


# ---------------------------------------------------------------------------
# Automata


def pa_acceptance(a: PA, w: Sequence[Letter]) -> Fraction:
    cur: dict[str, Fraction] = dict(a.initial.items())
    for letter in w:
        nxt: dict[str, Fraction] = defaultdict(Fraction)
        for q, p in cur.items():
            for target, v in a.step(q, letter).items():
                nxt[target] += p * v
        cur = nxt
    return sum((p for q, p in cur.items() if q in a.accepting), Fraction(0))


def nfa_accepts(n: NFA, w: Sequence[Letter]) -> bool:
    cur = n.initial
    for letter in w:
        cur = n.post(cur, letter)
        if not cur:
            return False
    return bool(cur & n.accepting)


def pra_reward_distribution(p: PRA, w: Sequence[Letter]) -> dict[tuple[int, ...], Fraction]:
    frontier: dict[tuple[str, tuple[int, ...]], Fraction] = {
        (s, (0,) * p.k): v for s, v in p.pa.initial.items()
    }
    for letter in w:
        nxt: dict[tuple[str, tuple[int, ...]], Fraction] = defaultdict(Fraction)
        for (s, a), v in frontier.items():
            for target, u in p.pa.step(s, letter).items():
                r = p.rewards[target]
                nxt[(target, tuple(x + y for x, y in zip(a, r)))] += v * u
        frontier = nxt
    out: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for (_, a), v in frontier.items():
        out[a] += v
    return dict(out)


def pra_expected_reward(p: PRA, w: Sequence[Letter]) -> tuple[Fraction, ...]:
    totals = [Fraction(0)] * p.k
    for a, v in pra_reward_distribution(p, w).items():
        for j in range(p.k):
            totals[j] += v * a[j]
    return tuple(totals)


# ---------------------------------------------------------------------------
# Brute-force oracles


def words_up_to(alphabet: Iterable[Letter], max_len: int, min_len: int = 1) -> Iterator[Word]:
    """All words with min_len <= |w| <= max_len, by length then lexicographically."""
    letters = sorted(alphabet)
    for n in range(min_len, max_len + 1):
        yield from product(letters, repeat=n)


def nfa_universal(n: NFA) -> tuple[bool, Word | None]:
    """Explicit subset construction: is every nonempty word accepted?

    Returns a shortest rejected word when it is not.
    """
    seen: set[frozenset[str]] = set()
    queue: deque[tuple[frozenset[str], Word]] = deque()
    for letter in sorted(n.alphabet):
        queue.append((n.post(n.initial, letter), (letter,)))
    while queue:
        macro, word = queue.popleft()
        if macro in seen:
            continue
        seen.add(macro)
        if not macro & n.accepting:
            return False, word
        for letter in sorted(n.alphabet):
            queue.append((n.post(macro, letter), word + (letter,)))
    logger.debug("universality oracle explored %d macrostates", len(seen))
    return True, None


def nfa_equivalent_bruteforce(n1: NFA, n2: NFA) -> tuple[bool, Word | None]:
    """Product of the two subset constructions, over nonempty words."""
    seen: set[tuple[frozenset[str], frozenset[str]]] = set()
    letters = sorted(set(n1.alphabet) | set(n2.alphabet))
    queue: deque[tuple[frozenset[str], frozenset[str], Word]] = deque(
        (n1.post(n1.initial, a), n2.post(n2.initial, a), (a,)) for a in letters
    )
    while queue:
        m1, m2, word = queue.popleft()
        if (m1, m2) in seen:
            continue
        seen.add((m1, m2))
        if bool(m1 & n1.accepting) != bool(m2 & n2.accepting):
            return False, word
        for a in letters:
            queue.append((n1.post(m1, a), n2.post(m2, a), word + (a,)))
    return True, None


def brute_force_exact_symmetric(
    t: Transducer, pi: Permutation, max_len: int, cap: int = DEFAULT_FRONTIER_CAP
) -> tuple[bool, tuple[Word, Word] | None]:
    """Compare Pr(T(x)=y) with Pr(T(pi x)=pi y) for every |x| <= max_len."""
    inv = pi.inverse()
    for x in words_up_to(t.letters(), max_len):
        left = output_distribution(t, x, cap)
        right = output_distribution(t, permute_word(pi, x), cap)
        ys = set(left) | {permute_word(inv, y) for y in right}
        for y in sorted(ys):
            if left.get(y, 0) != right.get(permute_word(pi, y), 0):
                return False, (x, y)
    return True, None


def brute_force_parikh_symmetric(
    t: Transducer, pi: Permutation, max_len: int, expected: bool = False
) -> tuple[bool, Word | None]:
    """Parikh-distribution (or expected) symmetry on every |x| <= max_len."""
    for x in words_up_to(t.letters(), max_len):
        if expected:
            same = expected_parikh(t, x) == permuted_expected_parikh(t, pi, x)
        else:
            same = parikh_distribution(t, x) == permuted_parikh_distribution(t, pi, x)
        if not same:
            return False, x
    return True, None


def brute_force_qualitative_symmetric(
    t: Transducer, pi: Permutation, max_len: int
) -> tuple[bool, tuple[Word, Word] | None]:
    inv = pi.inverse()
    for x in words_up_to(t.letters(), max_len):
        left = set(output_distribution(t, x))
        right = {permute_word(inv, y) for y in output_distribution(t, permute_word(pi, x))}
        if left != right:
            return False, (x, min(left ^ right))
    return True, None
