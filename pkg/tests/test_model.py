import random
from fractions import Fraction

import pytest

from procsym.core.exceptions import DimensionMismatchError, PermutationError
from procsym.core.model import (
    Distribution,
    GeneratorSet,
    Permutation,
    Transducer,
    ViolationKind,
    compose,
    generate_group,
    identity,
    letter_from_bits,
    letter_signals,
    letter_to_bits,
    parikh_image,
    parse_generators,
    parse_permutation,
    permute_letter,
    permute_vector,
    permute_word,
    sk_generators,
    validate_transducer,
)


def test_letters_read_left_to_right():
    assert letter_from_bits("100") == 0b001
    assert letter_from_bits("011") == 0b110
    assert letter_to_bits(0b101, 3) == "101"
    assert letter_signals(0b101) == [1, 3]


@pytest.mark.parametrize("bits", ["", "102", "1 0"])
def test_bad_bitstrings(bits):
    with pytest.raises(ValueError):
        letter_from_bits(bits)


def test_parse_cycle_notation():
    pi = parse_permutation("(1 2 7)", 7)
    assert pi.images == (2, 7, 3, 4, 5, 6, 1)
    assert str(pi) == "(1 2 7)"
    assert parse_permutation("(1,2)(3 4)", 4).images == (2, 1, 4, 3)
    assert parse_permutation("()", 3).is_identity
    assert parse_permutation("", 3) == identity(3)


@pytest.mark.parametrize("text", ["(1 8)", "(1 2)(2 3)", "(1 a)", "1 2", "(1 2"])
def test_parse_rejects_bad_cycles(text):
    with pytest.raises(PermutationError):
        parse_permutation(text, 7)


def test_composition_applies_right_factor_first():
    swap = parse_permutation("(1 2)", 3)
    rot = parse_permutation("(1 2 3)", 3)
    assert compose(swap, rot) == parse_permutation("(2 3)", 3)
    assert swap.compose(rot) == compose(swap, rot)


def test_inverse_power_order():
    rot = parse_permutation("(1 2 3 4)", 4)
    assert compose(rot, rot.inverse()).is_identity
    assert rot.order() == 4
    assert rot.power(2) == parse_permutation("(1 3)(2 4)", 4)
    assert rot.power(-1) == rot.inverse()
    assert identity(4).order() == 1


def test_permute_vector_moves_entry_j_to_pi_j():
    rot = parse_permutation("(1 2 3)", 3)
    assert permute_vector(rot, (5, 7, 9)) == (9, 5, 7)
    with pytest.raises(DimensionMismatchError):
        permute_vector(rot, (1, 2))


def test_permute_letter_and_word():
    rot = parse_permutation("(1 2 3)", 3)
    # {i3, i1} -> {i1, i2}
    assert permute_letter(rot, letter_from_bits("101")) == letter_from_bits("110")
    assert permute_word(rot, (0b001, 0b000)) == (0b010, 0b000)


def test_generators():
    assert len(sk_generators(2)) == 1
    assert len(sk_generators(5)) == 2
    with pytest.raises(PermutationError):
        sk_generators(1)
    gens = parse_generators("(1 2),(1 2 3)", 3)
    assert [str(g) for g in gens] == ["(1 2)", "(1 2 3)"]
    with pytest.raises(PermutationError):
        GeneratorSet((identity(2), identity(3)))


@pytest.mark.parametrize("k, size", [(2, 2), (3, 6), (4, 24)])
def test_symmetric_group_size(k, size):
    group = generate_group(sk_generators(k))
    assert len(group) == size
    assert group[0].is_identity


def test_cyclic_group():
    gens = parse_generators("(1 2 3 4)", 4)
    assert len(generate_group(gens)) == 4


def test_parikh_image():
    assert parikh_image((0b01, 0b11, 0b00), 2) == (2, 1)
    with pytest.raises(DimensionMismatchError):
        parikh_image((0b100,), 2)


def test_distribution_drops_zeros():
    d = Distribution({"a": Fraction(1), "b": Fraction(0)})
    assert list(d) == ["a"]
    assert d["b"] == 0
    assert Distribution.uniform(["a", "b", "a"]).weights == {"a": Fraction(1, 2), "b": Fraction(1, 2)}


def test_round_robin_validates(round_robin_2):
    assert validate_transducer(round_robin_2) == []
    assert round_robin_2.output_letters == frozenset({0b00, 0b01, 0b10})


def test_validation_reports_every_problem():
    t = Transducer(
        2,
        ("a", "b"),
        Distribution({"a": Fraction(1, 2)}),
        {"a": 0b00, "b": 0b111},
        {"a": {0: Distribution({"a": Fraction(1, 2), "zz": Fraction(1, 2)})}},
    )
    kinds = {v.kind for v in validate_transducer(t)}
    assert {
        ViolationKind.INITIAL_NOT_STOCHASTIC,
        ViolationKind.UNKNOWN_STATE,
        ViolationKind.BAD_LABEL,
        ViolationKind.MISSING_TRANSITION,
    } <= kinds


def test_out_of_range_letter_does_not_hide_a_missing_one():
    t = Transducer(
        1,
        ("a",),
        Distribution.dirac("a"),
        {"a": 0},
        {"a": {0: Distribution.dirac("a"), 5: Distribution.dirac("a")}},
    )
    found = [(v.kind, v.letter) for v in validate_transducer(t)]
    assert (ViolationKind.BAD_LETTER, 5) in found
    assert (ViolationKind.MISSING_TRANSITION, 1) in found


def test_step_falls_back_to_default(round_robin_2):
    assert round_robin_2.step("watch1", 0b01) == Distribution.dirac("grant1")
    assert round_robin_2.step("watch1", 0b10) == Distribution.dirac("watch2")


def _random_permutation(rng, k):
    images = list(range(1, k + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


@pytest.mark.parametrize("seed", range(30))
def test_permutation_laws(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 8)
    pi, tau, sigma = (_random_permutation(rng, k) for _ in range(3))
    assert compose(compose(pi, tau), sigma) == compose(pi, compose(tau, sigma))
    assert compose(pi, pi.inverse()) == identity(k) == compose(pi.inverse(), pi)
    assert pi.power(pi.order()) == identity(k)

    word = tuple(rng.randrange(1 << k) for _ in range(5))
    assert permute_word(compose(pi, tau), word) == permute_word(pi, permute_word(tau, word))
    assert permute_word(pi.inverse(), permute_word(pi, word)) == word
    # renaming signals moves their counts along
    assert permute_vector(pi, parikh_image(word, k)) == parikh_image(permute_word(pi, word), k)
