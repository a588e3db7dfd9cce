import random

import pytest

from graevext import (AbelianWord, DomainError, FormatError, Letter, Word,
                      from_normal_form, in_length_ball, parse_abelian,
                      parse_word)
from .conftest import random_reduced_word
from .oracles import scan_reduce

AB = ("a", "b")


def W(text: str) -> Word:
    return parse_word(text, AB)


def test_letter_basics():
    a = Letter("a", 1)
    assert a.inverse() == Letter("a", -1)
    assert a.inverse().inverse() == a
    e = Letter.neutral()
    assert e.inverse() == e and e.is_neutral
    assert str(a) == "a" and str(a.inverse()) == "a^-1" and str(e) == "e"
    with pytest.raises(DomainError):
        Letter("a", 2)
    with pytest.raises(DomainError):
        Letter(None, 1)


@pytest.mark.parametrize("text,expected", [
    ("a a^-1", ""),
    ("a e b", "a b"),
    ("a b b^-1 a", "a a"),
    ("a^-1 a a a^-1", ""),
    ("e e", ""),
])
def test_reduce_examples(text, expected):
    assert W(text).reduce() == W(expected)
    assert scan_reduce(W(text)) == W(expected)


def test_reduce_counts_all_letters():
    word = W("a e b")
    assert len(word) == 3
    assert word.reduced_length() == 2


@pytest.mark.parametrize("text,expected", [
    ("a a a", (("a", 3),)),
    ("", ()),
    ("a b b a^-1", (("a", 1), ("b", 2), ("a", -1))),
])
def test_normal_form(text, expected):
    assert W(text).normal_form() == expected


def test_normal_form_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        word = random_reduced_word(rng, AB, 8)
        assert from_normal_form(word.normal_form()) == word.reduce()


def test_from_normal_form_rejects_bad_terms():
    with pytest.raises(DomainError):
        from_normal_form([("a", 0)])
    with pytest.raises(DomainError):
        from_normal_form([("a", 1), ("a", 2)])


@pytest.mark.parametrize("text,expected", [
    ("a b a^-1", {"b": 1}),
    ("a e a", {"a": 2}),
    ("a^-1 b a^-1 b", {"a": -2, "b": 2}),
])
def test_abelianize(text, expected):
    assert W(text).abelianize() == AbelianWord.from_mapping(expected)


def test_product_and_inverse():
    assert (W("a") * W("a^-1")).reduce() == Word()
    assert W("a b").inverse() == W("b^-1 a^-1")
    assert Word().inverse() == Word()


@pytest.mark.parametrize("text,n,expected", [
    ("a b", 2, True),
    ("a b", 1, False),
    ("a a^-1 b", 1, True),
])
def test_length_ball(text, n, expected):
    assert in_length_ball(W(text), n) is expected


def test_length_ball_rejects_negative_radius():
    with pytest.raises(DomainError):
        in_length_ball(W("a"), -1)


def test_reduce_invariants_random():
    rng = random.Random(11)
    letters = [Letter("a", 1), Letter("a", -1), Letter("b", 1),
               Letter("b", -1), Letter.neutral()]
    for _ in range(300):
        word = Word(tuple(rng.choice(letters)
                          for _ in range(rng.randint(0, 12))))
        reduced = word.reduce()
        assert reduced.reduce() == reduced
        assert reduced.is_reduced() or not len(reduced)
        assert reduced == scan_reduce(word)
        assert reduced.abelianize() == word.abelianize()
        assert len(reduced) <= len(word)
        non_neutral = sum(1 for l in word if not l.is_neutral)
        assert (non_neutral - len(reduced)) % 2 == 0


def test_abelianize_is_homomorphism():
    rng = random.Random(13)
    for _ in range(100):
        u = random_reduced_word(rng, AB, 6)
        v = random_reduced_word(rng, AB, 6)
        assert (u * v).abelianize() == u.abelianize() + v.abelianize()


def test_almost_irreducible_filter():
    assert W("a e a^-1").is_almost_irreducible()
    assert W("e e").is_almost_irreducible()
    assert not W("a a^-1").is_almost_irreducible()
    assert not W("b^-1 b").is_almost_irreducible()


def test_parse_word_syntax():
    assert W("a^3") == W("a a a")
    assert W("a^-2") == W("a^-1 a^-1")
    assert W("a^0") == Word()
    assert W("") == Word()
    assert W("e") == Word((Letter.neutral(),))
    with pytest.raises(FormatError):
        parse_word("c", AB)
    with pytest.raises(FormatError):
        parse_word("a^x", AB)
    with pytest.raises(FormatError):
        parse_word("e^2", AB)


def test_alphabet_validation():
    with pytest.raises(FormatError):
        parse_word("a", ())
    with pytest.raises(FormatError):
        parse_word("a", ("a", "a"))
    with pytest.raises(FormatError):
        parse_word("a", ("a", "e"))


def test_abelian_word_arithmetic():
    g = AbelianWord.from_mapping({"a": 2, "b": -1})
    h = AbelianWord.from_mapping({"a": -2, "b": 3})
    assert g + h == AbelianWord.from_mapping({"b": 2})
    assert g - g == AbelianWord()
    assert 3 * AbelianWord.from_mapping({"a": 1}) == AbelianWord.from_mapping({"a": 3})
    assert g.length() == 3 and g.coefficient_sum() == 1
    assert (-g).exponent("a") == -2
    assert [str(l) for l in g.letters()] == ["a", "a", "b^-1"]


@pytest.mark.parametrize("text,mapping", [
    ("-2a + 3b", {"a": -2, "b": 3}),
    ("2a", {"a": 2}),
    ("a - b", {"a": 1, "b": -1}),
    ("-a", {"a": -1}),
    ("0", {}),
    ("e", {}),
    ("a b^-1", {"a": 1, "b": -1}),
    ("a^2 b", {"a": 2, "b": 1}),
    ("2a - 2a", {}),
])
def test_parse_abelian(text, mapping):
    assert parse_abelian(text, AB) == AbelianWord.from_mapping(mapping)


def test_parse_abelian_rejects_unknown():
    with pytest.raises(FormatError):
        parse_abelian("2c", AB)


def test_abelian_str_round_trip():
    for mapping in ({"a": -2, "b": 3}, {"a": 1}, {"b": -1}, {}):
        g = AbelianWord.from_mapping(mapping)
        assert parse_abelian(str(g), AB) == g


def test_word_str_round_trip():
    rng = random.Random(17)
    for _ in range(50):
        word = random_reduced_word(rng, AB, 6)
        assert parse_word(str(word), AB).reduce() == word
