import json
from fractions import Fraction

import pytest

from procsym.core.automata import PA
from procsym.core.constants import MANIFEST_SCHEMA
from procsym.core.exceptions import ValidationError
from procsym.core.fixtures import (
    I1,
    I2,
    I12,
    dfa_for_words,
    gen_random_dfa,
    gen_random_nfa,
    gen_random_transducer,
    gen_round_robin,
    gen_symmetric_pair_fixtures,
    reduce_nfa_to_transducer,
    reduce_pa_to_transducer,
)
from procsym.core.model import identity, validate_transducer
from procsym.core.model_format import parse_model, parse_nfa, serialize_model
from procsym.core.simulation import (
    brute_force_exact_symmetric,
    brute_force_parikh_symmetric,
    brute_force_qualitative_symmetric,
    nfa_universal,
    pa_acceptance,
    probability,
    words_up_to,
)
from procsym.core.symmetry import Outcome, check, falsify_linf, replay

F = Fraction
FIXTURES = {f.name: f for f in gen_symmetric_pair_fixtures()}


def test_round_robin_generator_matches_hand_written_model(round_robin_2):
    assert serialize_model(gen_round_robin(2)) == serialize_model(round_robin_2)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_round_robin_is_valid(k):
    t = gen_round_robin(k)
    assert validate_transducer(t) == []
    assert len(t.states) == 2 * k
    assert t.initial.weights == {f"watch{j}": F(1, k) for j in range(1, k + 1)}
    assert gen_round_robin(k, init=2).initial.weights == {"watch2": F(1)}


@pytest.mark.parametrize("init", [0, 4, "random", True])
def test_round_robin_rejects_bad_init(init):
    with pytest.raises(ValidationError):
        gen_round_robin(3, init=init)


def test_random_transducers_are_reproducible_and_valid():
    a = gen_random_transducer(9, 3, 2, 5)
    assert serialize_model(a) == serialize_model(gen_random_transducer(9, 3, 2, 5))
    assert validate_transducer(a) == []
    assert all(p.denominator <= 5 for row in a.rows.values() for d in row.values() for _, p in d.items())
    assert serialize_model(a) != serialize_model(gen_random_transducer(10, 3, 2, 5))


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("kind", ["exact", "parikh-dist", "parikh-exp", "qualitative"])
def test_hierarchy_fixture_verdicts(name, kind):
    fixture = FIXTURES[name]
    verdict = check(fixture.transducer, fixture.permutation, kind)
    assert verdict.holds == fixture.expected[kind]


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_hierarchy_fixtures_agree_with_enumeration(name):
    fixture = FIXTURES[name]
    t, pi = fixture.transducer, fixture.permutation
    assert brute_force_exact_symmetric(t, pi, 3)[0] == fixture.expected["exact"]
    assert brute_force_parikh_symmetric(t, pi, 3)[0] == fixture.expected["parikh-dist"]
    assert brute_force_parikh_symmetric(t, pi, 3, expected=True)[0] == fixture.expected["parikh-exp"]
    assert brute_force_qualitative_symmetric(t, pi, 3)[0] == fixture.expected["qualitative"]


def test_identity_is_always_a_symmetry():
    biased = FIXTURES["biased"]
    for kind, holds in biased.identity_expected.items():
        assert check(biased.transducer, identity(2), kind).holds == holds


def test_fixture_manifest():
    manifest = json.loads(FIXTURES["fifty_fifty"].manifest_json())
    assert manifest["schema"] == MANIFEST_SCHEMA
    assert manifest["model"] == "fifty_fifty.sym"
    by_kind = {c["kind"]: c["symmetric"] for c in manifest["checks"]}
    assert by_kind == {"exact": False, "parikh-dist": False, "parikh-exp": True, "qualitative": False}
    # fixtures survive the text format unchanged
    for fixture in FIXTURES.values():
        again = parse_model(serialize_model(fixture.transducer, fixture.description))
        assert again.rows == fixture.transducer.rows


def test_pa_reduction_separates_acceptance_above_lambda():
    dfa = dfa_for_words([(1, 1)])
    t, pi, eps = reduce_pa_to_transducer(dfa, F(1, 2))
    assert eps == F(1, 2)
    assert validate_transducer(t) == []
    assert pa_acceptance(dfa, (1, 1)) == 1

    # x = {i2}{i2}{i2}{i1,i2} feeds 11 to the automaton, then leaves from an accepting state
    x = (I2, I2, I2, I12)
    silent = (0,) * 4
    assert probability(t, x, silent) == 1
    assert probability(t, (I1, I1, I1, I12), silent) == 0

    verdict = falsify_linf(t, pi, eps, max_len=4)
    assert verdict.result is Outcome.NOT_SYMMETRIC
    assert verdict.counterexample.deviation == 1
    assert verdict.counterexample.output_word == silent
    assert falsify_linf(t, pi, eps, max_len=3).result is Outcome.NO_COUNTEREXAMPLE


def test_pa_reduction_on_a_quiet_automaton():
    never = dfa_for_words([])
    t, pi, eps = reduce_pa_to_transducer(never, F(1, 3))
    assert falsify_linf(t, pi, eps, max_len=4).result is Outcome.NO_COUNTEREXAMPLE


@pytest.mark.parametrize("lam", [F(0), F(1), F(3, 2)])
def test_pa_reduction_lambda_range(lam):
    with pytest.raises(ValidationError):
        reduce_pa_to_transducer(dfa_for_words([(0,)]), lam)


def test_pa_reduction_needs_binary_alphabet():
    dfa = dfa_for_words([(0,)])
    ternary = PA(dfa.states, (0, 1, 2), dfa.initial, dfa.accepting, dfa.transitions)
    with pytest.raises(ValidationError):
        reduce_pa_to_transducer(ternary, F(1, 2))


UNIVERSAL = "alphabet 0 1\nstates a\ninitial a\naccepting a\ntransitions\n  a, 0 -> a\n  a, 1 -> a\n"
NOT_UNIVERSAL = "alphabet 0 1\nstates a b\ninitial a\naccepting a b\ntransitions\n  a, 0 -> a, b\n  a, 1 -> b\n  b, 0 -> a\n"


def test_nfa_reduction_universal():
    t, pi = reduce_nfa_to_transducer(parse_nfa(UNIVERSAL))
    assert validate_transducer(t) == []
    assert check(t, pi, "qualitative").result is Outcome.SYMMETRIC


def test_nfa_reduction_not_universal():
    nfa = parse_nfa(NOT_UNIVERSAL)
    assert nfa_universal(nfa) == (False, (1, 1))
    t, pi = reduce_nfa_to_transducer(nfa)
    verdict = check(t, pi, "qualitative")
    assert verdict.result is Outcome.NOT_SYMMETRIC
    cex = verdict.counterexample
    assert (cex.left == 0) != (cex.right == 0)
    replay(t, verdict)


@pytest.mark.parametrize("seed", range(10))
def test_nfa_reduction_matches_universality(seed):
    nfa = gen_random_nfa(seed, 3)
    universal, _ = nfa_universal(nfa)
    t, pi = reduce_nfa_to_transducer(nfa)
    assert check(t, pi, "qualitative").holds == universal


def test_nfa_reduction_preconditions():
    with pytest.raises(ValidationError):
        reduce_nfa_to_transducer(parse_nfa(NOT_UNIVERSAL.replace("accepting a b", "accepting a")))
    with pytest.raises(ValidationError):
        reduce_nfa_to_transducer(parse_nfa(NOT_UNIVERSAL.replace("initial a", "initial a b")))


def test_random_dfa_is_stochastic():
    dfa = gen_random_dfa(2, 4)
    assert all(d.total() == 1 for row in dfa.transitions.values() for d in row.values())
    assert dfa == gen_random_dfa(2, 4)


def test_letter_constants():
    assert (I1, I2, I12) == (0b01, 0b10, 0b11)


def _shortest_accepted(dfa, max_len):
    for w in words_up_to((0, 1), max_len, min_len=0):
        if pa_acceptance(dfa, w) > F(1, 2):
            return len(w)
    return None


@pytest.mark.slow
def test_pa_reduction_on_random_dfas():
    tried = 0
    for seed in range(400):
        dfa = gen_random_dfa(seed, 3)
        shortest = _shortest_accepted(dfa, 6)
        if shortest is None:
            continue
        t, pi, eps = reduce_pa_to_transducer(dfa, F(1, 2))
        assert len(t.states) == len(dfa.states) + 4
        assert validate_transducer(t) == []
        verdict = falsify_linf(t, pi, eps, max_len=8)
        assert verdict.result is Outcome.NOT_SYMMETRIC
        # one letter to enter the automaton, one to leave it
        assert len(verdict.counterexample.input_word) == shortest + 2
        assert verdict.counterexample.deviation == 1
        replay(t, verdict)
        tried += 1
        if tried == 100:
            break
    assert tried == 100


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_nfa_reduction_on_random_nfas(seed):
    nfa = gen_random_nfa(seed, 1 + seed % 6)
    t, pi = reduce_nfa_to_transducer(nfa)
    assert len(t.states) == len(nfa.states) + 3
    assert validate_transducer(t) == []
    universal, _ = nfa_universal(nfa)
    verdict = check(t, pi, "qualitative")
    assert verdict.holds == universal
    if not universal:
        replay(t, verdict)
