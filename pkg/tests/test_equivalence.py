from fractions import Fraction

import pytest

from procsym.core.automata import PA, PRA, build_pra_pair, to_linear_representation
from procsym.core.equivalence import (
    Equivalent,
    ProbablyEquivalent,
    Witness,
    nfa_equivalent,
    pra_distribution_equivalent,
    pra_expected_equivalent,
    random_points,
    schwartz_zippel_bound,
    weighted_equivalent,
)
from procsym.core.exceptions import AlphabetMismatchError, ConfigError
from procsym.core.fixtures import dfa_for_words, gen_random_nfa
from procsym.core.model import Distribution, parse_permutation
from procsym.core.model_format import parse_nfa
from procsym.core.simulation import nfa_accepts, nfa_equivalent_bruteforce, pa_acceptance

F = Fraction


def _coin(p: Fraction) -> PA:
    """One-letter PA accepting after the first step with probability p."""
    return PA(
        ("s", "yes", "no"),
        (0,),
        Distribution.dirac("s"),
        frozenset({"yes"}),
        {
            "s": {0: Distribution({"yes": p, "no": 1 - p})},
            "yes": {0: Distribution.dirac("yes")},
            "no": {0: Distribution.dirac("no")},
        },
    )


def test_weighted_equivalence_of_equal_automata():
    a = to_linear_representation(_coin(F(1, 3)))
    b = to_linear_representation(
        PA(
            ("t", "acc", "rej1", "rej2"),
            (0,),
            Distribution.dirac("t"),
            frozenset({"acc"}),
            {
                "t": {0: Distribution({"acc": F(1, 3), "rej1": F(1, 3), "rej2": F(1, 3)})},
                "acc": {0: Distribution.dirac("acc")},
                "rej1": {0: Distribution.dirac("rej2")},
                "rej2": {0: Distribution.dirac("rej1")},
            },
        )
    )
    res = weighted_equivalent(a, b)
    assert isinstance(res, Equivalent)
    assert res.basis_size <= a.dimension + b.dimension


def test_weighted_witness_is_genuine():
    a, b = _coin(F(1, 3)), _coin(F(1, 2))
    res = weighted_equivalent(to_linear_representation(a), to_linear_representation(b))
    assert isinstance(res, Witness)
    assert res.word == (0,)
    assert (res.left, res.right) == (pa_acceptance(a, res.word), pa_acceptance(b, res.word))
    assert (res.left, res.right) == (F(1, 3), F(1, 2))


def test_witness_is_shortest_for_dfas():
    a = dfa_for_words([(0, 1, 1)])
    b = dfa_for_words([(0, 1, 0)])
    res = weighted_equivalent(to_linear_representation(a), to_linear_representation(b))
    assert isinstance(res, Witness)
    assert len(res.word) == 3
    assert res.word == (0, 1, 0)


def test_alphabet_mismatch():
    a = to_linear_representation(_coin(F(1, 2)))
    b = to_linear_representation(dfa_for_words([(1,)]))
    with pytest.raises(AlphabetMismatchError):
        weighted_equivalent(a, b)


NFA_A = "alphabet 0 1\nstates x y\ninitial x\naccepting y\ntransitions\n  x, 0 -> x, y\n  x, 1 -> x\n"
# same language (words ending in 0), deterministic
NFA_B = (
    "alphabet 0 1\nstates p q\ninitial p\naccepting q\ntransitions\n"
    "  p, 0 -> q\n  p, 1 -> p\n  q, 0 -> q\n  q, 1 -> p\n"
)


def test_hkc_equivalent_languages():
    res = nfa_equivalent(parse_nfa(NFA_A), parse_nfa(NFA_B))
    assert isinstance(res, Equivalent)


def test_hkc_witness():
    other = parse_nfa(NFA_B.replace("accepting q", "accepting p"))
    res = nfa_equivalent(parse_nfa(NFA_A), other)
    assert isinstance(res, Witness)
    assert res.word == (0,)
    assert (res.left, res.right) == (True, False)


@pytest.mark.parametrize("seed", range(8))
def test_hkc_agrees_with_subset_construction(seed):
    n1 = gen_random_nfa(seed, 4, all_accepting=False)
    n2 = gen_random_nfa(seed + 100, 3, all_accepting=False)
    ok, word = nfa_equivalent_bruteforce(n1, n2)
    res = nfa_equivalent(n1, n2)
    assert isinstance(res, Equivalent) == ok
    if not ok:
        assert isinstance(res, Witness)
        assert nfa_accepts(n1, res.word) != nfa_accepts(n2, res.word)
        assert len(res.word) >= len(word)
    assert isinstance(nfa_equivalent(n1, n1), Equivalent)


def test_schwartz_zippel_bound():
    assert schwartz_zippel_bound(10, 2, 3) == F(20, 2**31) ** 3
    assert schwartz_zippel_bound(2**31, 4, 1) == 1


def test_random_points_are_seeded():
    assert list(random_points(3, 42, 2)) == list(random_points(3, 42, 2))
    assert list(random_points(3, 42, 2)) != list(random_points(3, 43, 2))
    assert all(1 <= c <= 2**31 for pt in random_points(5, 0, 4) for c in pt)


def _pra(weights: dict[str, Fraction], rewards: dict[str, tuple[int, int]]) -> PRA:
    states = ("s", *weights)
    rows = {"s": {0: Distribution(weights)}}
    rows.update({q: {0: Distribution.dirac(q)} for q in weights})
    pa = PA(states, (0,), Distribution.dirac("s"), frozenset(states), rows)
    return PRA(pa, {"s": (0, 0), **rewards}, 2)


def test_pra_distribution_vs_expectation():
    # one signal each vs both-or-neither: same mean, different laws
    split = _pra({"a": F(1, 2), "b": F(1, 2)}, {"a": (1, 0), "b": (0, 1)})
    both = _pra({"c": F(1, 2), "d": F(1, 2)}, {"c": (1, 1), "d": (0, 0)})
    assert isinstance(pra_expected_equivalent(split, both), Equivalent)
    res = pra_distribution_equivalent(split, both, "symbolic")
    assert isinstance(res, Witness)
    assert res.word == (0,)
    assert res.vector == (0, 0)
    assert (res.left, res.right) == (F(0), F(1, 2))
    randomized = pra_distribution_equivalent(split, both, "randomized", seed=1, trials=2)
    assert isinstance(randomized, Witness)


def test_pra_expected_witness_coordinate():
    left = _pra({"a": F(1)}, {"a": (1, 0)})
    right = _pra({"b": F(1)}, {"b": (0, 1)})
    res = pra_expected_equivalent(left, right)
    assert isinstance(res, Witness)
    assert res.coordinate == 1
    assert (res.left, res.right) == (F(1), F(0))


def test_randomized_mode_reports_error_bound(round_robin_2):
    a, b = build_pra_pair(round_robin_2, parse_permutation("(1 2)", 2))
    res = pra_distribution_equivalent(a, b, "randomized", seed=7, trials=3)
    assert isinstance(res, ProbablyEquivalent)
    assert res.error_bound == schwartz_zippel_bound(8, 2, 3)
    assert (res.seed, res.trials) == (7, 3)
    assert isinstance(pra_distribution_equivalent(a, b, "symbolic"), Equivalent)


@pytest.mark.parametrize("mode, trials", [("exhaustive", 3), ("randomized", 0)])
def test_bad_parikh_options(round_robin_2, mode, trials):
    a, b = build_pra_pair(round_robin_2, parse_permutation("(1 2)", 2))
    with pytest.raises(ConfigError):
        pra_distribution_equivalent(a, b, mode, trials=trials)
