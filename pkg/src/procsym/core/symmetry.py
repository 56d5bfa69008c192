"""Symmetry checks for probabilistic I/O transducers (Python 3.12).

Each single-permutation check builds an automaton pair from the
transducer and hands it to an equivalence engine; negative answers are
turned into counterexamples recomputed by forward simulation. Group
checks run the single check on every generator, which is sound and
complete because each of the four notions is preserved under
composition of permutations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Any

from .automata import (
    build_nfa_pair,
    build_pa_pair,
    build_pra_pair,
    split_word,
    to_linear_representation,
)
from .constants import DEFAULT_FRONTIER_CAP, DEFAULT_SEED, DEFAULT_SYMBOLIC_MAX_K, DEFAULT_TRIALS
from .equivalence import (
    ProbablyEquivalent,
    Witness,
    nfa_equivalent,
    pra_distribution_equivalent,
    pra_expected_equivalent,
    weighted_equivalent,
)
from .exceptions import PermutationError, ValidationError, WitnessReplayError
from .model import (
    GeneratorSet,
    Permutation,
    Transducer,
    Word,
    generate_group,
    permute_vector,
    permute_word,
    sk_generators,
)
from .simulation import (
    expected_parikh,
    output_distribution,
    parikh_distribution,
    permuted_expected_parikh,
    probability,
    words_up_to,
)

logger = logging.getLogger(__name__)


class SymmetryKind(StrEnum):
    EXACT = "exact"
    PARIKH_DISTRIBUTION = "parikh-dist"
    PARIKH_EXPECTED = "parikh-exp"
    QUALITATIVE = "qualitative"
    LINF_FALSIFY = "linf-falsify"


class Outcome(StrEnum):
    SYMMETRIC = "Symmetric"
    NOT_SYMMETRIC = "NotSymmetric"
    PROBABLY_SYMMETRIC = "ProbablySymmetric"
    NO_COUNTEREXAMPLE = "NoCounterexampleFound"


CHECK_KINDS = (
    SymmetryKind.EXACT,
    SymmetryKind.PARIKH_DISTRIBUTION,
    SymmetryKind.PARIKH_EXPECTED,
    SymmetryKind.QUALITATIVE,
)


@dataclass(frozen=True, slots=True)
class Counterexample:
    """Input word plus either an output word, a Parikh vector, or a coordinate.

    ``left`` is the value for (x, y); ``right`` the value for (pi x, pi y).
    """

    input_word: Word
    left: Fraction
    right: Fraction
    output_word: Word | None = None
    parikh_vector: tuple[int, ...] | None = None
    coordinate: int | None = None

    @property
    def deviation(self) -> Fraction:
        return abs(self.left - self.right)


@dataclass(frozen=True, slots=True)
class SymmetryVerdict:
    kind: SymmetryKind
    result: Outcome
    permutation: Permutation | None = None
    counterexample: Counterexample | None = None
    failed_generator: Permutation | None = None
    sub_verdicts: tuple[SymmetryVerdict, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self) -> None:
        if self.result is Outcome.NOT_SYMMETRIC:
            cex = self.counterexample
            if cex is None or cex.left == cex.right:
                raise ValueError("a NotSymmetric verdict needs a counterexample with left != right")

    @property
    def holds(self) -> bool:
        """True unless a counterexample was found."""
        return self.result is not Outcome.NOT_SYMMETRIC


def _check_k(t: Transducer, pi: Permutation) -> None:
    if pi.k != t.k:
        raise PermutationError(f"permutation over {pi.k} signals for a transducer with k={t.k}")


def _symmetric(kind: SymmetryKind, pi: Permutation, **metadata: Any) -> SymmetryVerdict:
    logger.info("%s symmetry holds for %s", kind, pi, extra={"kind": str(kind), "perm": str(pi)})
    return SymmetryVerdict(kind, Outcome.SYMMETRIC, pi, metadata=metadata)


def _not_symmetric(
    kind: SymmetryKind, pi: Permutation, cex: Counterexample, **metadata: Any
) -> SymmetryVerdict:
    logger.info(
        "%s symmetry fails for %s on input %s", kind, pi, cex.input_word,
        extra={"kind": str(kind), "perm": str(pi)},
    )
    return SymmetryVerdict(kind, Outcome.NOT_SYMMETRIC, pi, cex, metadata=metadata)


def check_exact(t: Transducer, pi: Permutation) -> SymmetryVerdict:
    """Pr(T(x)=y) == Pr(T(pi x)=pi y) for all nonempty x and |y| = |x|."""
    _check_k(t, pi)
    a, b = build_pa_pair(t, pi)
    res = weighted_equivalent(to_linear_representation(a), to_linear_representation(b))
    meta = {"engine": "weighted", "basis_size": res.basis_size}
    if not isinstance(res, Witness):
        return _symmetric(SymmetryKind.EXACT, pi, **meta)
    x, y = split_word(res.word, t.k)
    cex = Counterexample(
        input_word=x,
        output_word=y,
        left=probability(t, x, y),
        right=probability(t, permute_word(pi, x), permute_word(pi, y)),
    )
    return _not_symmetric(SymmetryKind.EXACT, pi, cex, **meta)


def check_parikh_distribution(
    t: Transducer,
    pi: Permutation,
    mode: str = "symbolic",
    *,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
) -> SymmetryVerdict:
    """Every input induces the same Parikh-image distribution up to pi."""
    _check_k(t, pi)
    a, b = build_pra_pair(t, pi)
    res = pra_distribution_equivalent(a, b, mode, seed=seed, trials=trials)
    meta: dict[str, Any] = {"engine": "weighted", "mode": mode, "basis_size": res.basis_size}
    if mode == "randomized":
        meta.update(seed=seed, trials=trials)
    if isinstance(res, ProbablyEquivalent):
        logger.info("parikh-dist symmetry holds for %s up to error %s", pi, res.error_bound)
        return SymmetryVerdict(
            SymmetryKind.PARIKH_DISTRIBUTION,
            Outcome.PROBABLY_SYMMETRIC,
            pi,
            metadata={**meta, "error_bound": res.error_bound},
        )
    if not isinstance(res, Witness):
        return _symmetric(SymmetryKind.PARIKH_DISTRIBUTION, pi, **meta)
    x = res.word
    vec = res.vector
    assert vec is not None
    cex = Counterexample(
        input_word=x,
        parikh_vector=vec,
        left=parikh_distribution(t, x).get(vec, Fraction(0)),
        right=parikh_distribution(t, permute_word(pi, x)).get(permute_vector(pi, vec), Fraction(0)),
    )
    return _not_symmetric(SymmetryKind.PARIKH_DISTRIBUTION, pi, cex, **meta)


def check_parikh_expected(t: Transducer, pi: Permutation) -> SymmetryVerdict:
    """E[P(T(x))] == pi^-1(E[P(T(pi x))]) for every nonempty x."""
    _check_k(t, pi)
    a, b = build_pra_pair(t, pi)
    res = pra_expected_equivalent(a, b)
    meta = {"engine": "weighted", "basis_size": res.basis_size}
    if not isinstance(res, Witness):
        return _symmetric(SymmetryKind.PARIKH_EXPECTED, pi, **meta)
    j = res.coordinate
    assert j is not None
    cex = Counterexample(
        input_word=res.word,
        coordinate=j,
        left=expected_parikh(t, res.word)[j - 1],
        right=permuted_expected_parikh(t, pi, res.word)[j - 1],
    )
    return _not_symmetric(SymmetryKind.PARIKH_EXPECTED, pi, cex, **meta)


def check_qualitative(t: Transducer, pi: Permutation) -> SymmetryVerdict:
    """Pr(T(x)=y) > 0 iff Pr(T(pi x)=pi y) > 0."""
    _check_k(t, pi)
    a, b = build_nfa_pair(t, pi)
    res = nfa_equivalent(a, b)
    meta = {"engine": "hkc", "relation_size": res.basis_size}
    if not isinstance(res, Witness):
        return _symmetric(SymmetryKind.QUALITATIVE, pi, **meta)
    x, y = split_word(res.word, t.k)
    cex = Counterexample(
        input_word=x,
        output_word=y,
        left=probability(t, x, y),
        right=probability(t, permute_word(pi, x), permute_word(pi, y)),
    )
    meta["zero_side"] = "left" if cex.left == 0 else "right"
    return _not_symmetric(SymmetryKind.QUALITATIVE, pi, cex, **meta)


def default_parikh_mode(k: int, symbolic_max_k: int = DEFAULT_SYMBOLIC_MAX_K) -> str:
    return "symbolic" if k <= symbolic_max_k else "randomized"


def check(
    t: Transducer,
    pi: Permutation,
    kind: SymmetryKind | str,
    *,
    mode: str | None = None,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
) -> SymmetryVerdict:
    """Run the single-permutation check for ``kind``."""
    kind = SymmetryKind(kind)
    if kind is SymmetryKind.EXACT:
        return check_exact(t, pi)
    if kind is SymmetryKind.PARIKH_DISTRIBUTION:
        return check_parikh_distribution(
            t, pi, mode or default_parikh_mode(t.k), seed=seed, trials=trials
        )
    if kind is SymmetryKind.PARIKH_EXPECTED:
        return check_parikh_expected(t, pi)
    if kind is SymmetryKind.QUALITATIVE:
        return check_qualitative(t, pi)
    raise ValidationError(f"{kind} is not a decision check; use falsify_linf")


def check_group(
    t: Transducer,
    gens: GeneratorSet,
    kind: SymmetryKind | str,
    **options: Any,
) -> SymmetryVerdict:
    """Symmetric under the generated group iff symmetric under every generator."""
    kind = SymmetryKind(kind)
    if gens.k != t.k:
        raise PermutationError(f"generators over {gens.k} signals for a transducer with k={t.k}")
    subs = tuple(check(t, g, kind, **options) for g in gens)
    metadata = {"generators": [str(g) for g in gens]}
    failed = next((v for v in subs if v.result is Outcome.NOT_SYMMETRIC), None)
    if failed is not None:
        return SymmetryVerdict(
            kind,
            Outcome.NOT_SYMMETRIC,
            failed.permutation,
            failed.counterexample,
            failed_generator=failed.permutation,
            sub_verdicts=subs,
            metadata=metadata,
        )
    probable = [v for v in subs if v.result is Outcome.PROBABLY_SYMMETRIC]
    if probable:
        # independent failures add up across generators
        metadata["error_bound"] = min(
            Fraction(1), sum((v.metadata["error_bound"] for v in probable), Fraction(0))
        )
        return SymmetryVerdict(kind, Outcome.PROBABLY_SYMMETRIC, sub_verdicts=subs, metadata=metadata)
    return SymmetryVerdict(kind, Outcome.SYMMETRIC, sub_verdicts=subs, metadata=metadata)


def check_full_sk(t: Transducer, kind: SymmetryKind | str, **options: Any) -> SymmetryVerdict:
    """Symmetry under every permutation of the k processes."""
    kind = SymmetryKind(kind)
    if t.k < 2:
        return SymmetryVerdict(
            kind, Outcome.SYMMETRIC, note="k < 2: the only permutation is the identity"
        )
    return check_group(t, sk_generators(t.k), kind, **options)


# ---------------------------------------------------------------------------
# Bounded L-infinity falsification


def _check_epsilon(epsilon: Fraction, max_len: int) -> None:
    if not 0 < epsilon <= 1:
        raise ValidationError(f"epsilon must be in (0, 1], got {epsilon}")
    if max_len < 1:
        raise ValidationError(f"max_len must be >= 1, got {max_len}")


def falsify_linf(
    t: Transducer,
    pi: Permutation,
    epsilon: Fraction,
    max_len: int,
    cap: int = DEFAULT_FRONTIER_CAP,
) -> SymmetryVerdict:
    """Search |x| <= max_len for |Pr(T(x)=y) - Pr(T(pi x)=pi y)| > epsilon.

    Inputs are tried by length, then lexicographically; outputs in sorted
    order. Finding nothing is not a proof of (epsilon, pi)-symmetry.
    """
    epsilon = Fraction(epsilon)
    _check_epsilon(epsilon, max_len)
    _check_k(t, pi)
    inv = pi.inverse()
    checked = 0
    for x in words_up_to(t.letters(), max_len):
        checked += 1
        left = output_distribution(t, x, cap)
        right = output_distribution(t, permute_word(pi, x), cap)
        for y in sorted(set(left) | {permute_word(inv, z) for z in right}):
            lp = left.get(y, Fraction(0))
            rp = right.get(permute_word(pi, y), Fraction(0))
            if abs(lp - rp) > epsilon:
                cex = Counterexample(input_word=x, output_word=y, left=lp, right=rp)
                return _not_symmetric(
                    SymmetryKind.LINF_FALSIFY,
                    pi,
                    cex,
                    epsilon=epsilon,
                    max_len=max_len,
                    words_checked=checked,
                    deviation=cex.deviation,
                )
    logger.info("no L-inf counterexample for %s up to length %d", pi, max_len)
    return SymmetryVerdict(
        SymmetryKind.LINF_FALSIFY,
        Outcome.NO_COUNTEREXAMPLE,
        pi,
        metadata={"epsilon": epsilon, "max_len": max_len, "words_checked": checked},
        note="bounded search only; not a proof of symmetry",
    )


def falsify_linf_group(
    t: Transducer,
    gens: GeneratorSet,
    epsilon: Fraction,
    max_len: int,
    cap: int = DEFAULT_FRONTIER_CAP,
) -> SymmetryVerdict:
    """Falsifier over every element of the generated group.

    Approximate symmetry does not compose, so generators alone do not suffice.
    """
    epsilon = Fraction(epsilon)
    _check_epsilon(epsilon, max_len)
    subs = []
    for pi in generate_group(gens):
        if pi.is_identity:
            continue
        v = falsify_linf(t, pi, epsilon, max_len, cap)
        subs.append(v)
        if v.result is Outcome.NOT_SYMMETRIC:
            return SymmetryVerdict(
                SymmetryKind.LINF_FALSIFY,
                Outcome.NOT_SYMMETRIC,
                pi,
                v.counterexample,
                failed_generator=pi,
                sub_verdicts=tuple(subs),
                metadata=dict(v.metadata),
            )
    return SymmetryVerdict(
        SymmetryKind.LINF_FALSIFY,
        Outcome.NO_COUNTEREXAMPLE,
        sub_verdicts=tuple(subs),
        metadata={"epsilon": epsilon, "max_len": max_len, "permutations": len(subs)},
        note="bounded search only; not a proof of symmetry",
    )


# ---------------------------------------------------------------------------
# Replay


def replay_counterexample(
    t: Transducer, kind: SymmetryKind | str, pi: Permutation, cex: Counterexample
) -> tuple[Fraction, Fraction]:
    """Recompute (left, right) for a counterexample by forward simulation."""
    kind = SymmetryKind(kind)
    x = cex.input_word
    px = permute_word(pi, x)
    if kind in (SymmetryKind.EXACT, SymmetryKind.QUALITATIVE, SymmetryKind.LINF_FALSIFY):
        if cex.output_word is None:
            raise WitnessReplayError(f"{kind} counterexample has no output word")
        y = cex.output_word
        return probability(t, x, y), probability(t, px, permute_word(pi, y))
    if kind is SymmetryKind.PARIKH_DISTRIBUTION:
        if cex.parikh_vector is None:
            raise WitnessReplayError("Parikh counterexample has no vector")
        a = cex.parikh_vector
        return (
            parikh_distribution(t, x).get(a, Fraction(0)),
            parikh_distribution(t, px).get(permute_vector(pi, a), Fraction(0)),
        )
    if cex.coordinate is None:
        raise WitnessReplayError("expected-value counterexample has no coordinate")
    j = cex.coordinate
    return expected_parikh(t, x)[j - 1], permuted_expected_parikh(t, pi, x)[j - 1]


def replay(t: Transducer, verdict: SymmetryVerdict) -> SymmetryVerdict:
    """Re-verify a NotSymmetric verdict; raise WitnessReplayError on mismatch."""
    if verdict.result is not Outcome.NOT_SYMMETRIC:
        return verdict
    pi = verdict.failed_generator or verdict.permutation
    cex = verdict.counterexample
    if pi is None or cex is None:
        raise WitnessReplayError("verdict carries no permutation or counterexample")
    left, right = replay_counterexample(t, verdict.kind, pi, cex)
    if (left, right) != (cex.left, cex.right):
        raise WitnessReplayError(
            f"{verdict.kind} counterexample on {cex.input_word} replays to "
            f"{left} vs {right}, report says {cex.left} vs {cex.right}"
        )
    if left == right:
        raise WitnessReplayError(f"counterexample on {cex.input_word} shows no difference")
    if verdict.kind is SymmetryKind.QUALITATIVE and (left == 0) == (right == 0):
        raise WitnessReplayError("qualitative counterexample must have exactly one zero side")
    if verdict.kind is SymmetryKind.LINF_FALSIFY:
        epsilon = verdict.metadata.get("epsilon")
        if epsilon is not None and abs(left - right) <= epsilon:
            raise WitnessReplayError(f"deviation {abs(left - right)} does not exceed {epsilon}")
    logger.debug("counterexample on %s replayed", cex.input_word)
    return verdict
