import random
from fractions import Fraction

import pytest

from graevext import (AbelianWord, CapExceeded, DomainError, Letter, QPSpace,
                      Word, abelian_dist, abelian_norm, abelian_norm_balanced,
                      ball_member, enumerate_schemes, graev_dist, graev_norm,
                      pairing_cost, parse_abelian, parse_word,
                      signed_extension)
from graevext.norms import _assignment_min, _constrained_witness, _EngineContext
from .conftest import random_qpspace, random_reduced_word
from .oracles import brute_abelian_norm, brute_assignment, brute_free_norm

F = Fraction


def test_identity_norm(two_point_space):
    value, witness = graev_norm(two_point_space, Word())
    assert value == 0
    assert witness.word == Word() and witness.scheme.pairs == ()
    value, _ = graev_norm(two_point_space, parse_word("a a^-1 e", two_point_space.points))
    assert value == 0


def test_fixture_norms(two_point_space):
    sp = two_point_space
    value, witness = graev_norm(sp, parse_word("a b^-1", sp.points))
    assert value == F(1, 2)
    assert str(witness.word) == "a b^-1"
    assert witness.scheme.pairs == ((1, 2),)
    value, _ = graev_norm(sp, parse_word("a b", sp.points))
    assert value == 2


def test_norm_matches_brute_oracle(two_point_space):
    rng = random.Random(41)
    spaces = [two_point_space] + [random_qpspace(rng, 2) for _ in range(3)]
    for sp in spaces:
        for _ in range(12):
            g = random_reduced_word(rng, sp.points, 3)
            expected = brute_free_norm(sp, g)
            got, witness = graev_norm(sp, g)
            if expected is None:
                expected = F(0)
            assert got == expected
            assert witness.word.reduce() == g.reduce()


def test_norm_matches_brute_oracle_three_generators():
    rng = random.Random(42)
    sp = random_qpspace(rng, 3)
    for _ in range(6):
        g = random_reduced_word(rng, sp.points, 2, min_len=1)
        assert graev_norm(sp, g)[0] == brute_free_norm(sp, g)
    g = random_reduced_word(rng, sp.points, 3, min_len=3)
    assert graev_norm(sp, g)[0] == brute_free_norm(sp, g)


def test_witness_contract(two_point_space):
    rng = random.Random(43)
    for trial in range(30):
        sp = random_qpspace(rng, rng.randint(2, 3))
        g = random_reduced_word(rng, sp.points, 4)
        value, witness = graev_norm(sp, g)
        reduced = g.reduce()
        assert witness.word.reduce() == reduced
        assert witness.word.is_almost_irreducible()
        if len(reduced):
            assert len(witness.word) <= 2 * len(reduced)
            allowed = {l for l in reduced} | {l.inverse() for l in reduced} \
                | {Letter.neutral()}
            assert set(witness.word.letters) <= allowed
        assert pairing_cost(sp, witness.word, witness.scheme) == value
        assert witness.value == value


def test_constrained_witness_pass(two_point_space):
    # the fallback pass must recover an almost irreducible word whose best
    # pairing hits the exact norm value, for any input it can be handed
    rng = random.Random(44)
    for trial in range(25):
        sp = random_qpspace(rng, rng.randint(2, 3))
        g = random_reduced_word(rng, sp.points, 4, min_len=1)
        value, _ = graev_norm(sp, g)
        ctx = _EngineContext(sp, g.reduce())
        packed = _constrained_witness(ctx, int(value * ctx.scale))
        codes = []
        pos = ctx.width - ctx.bits
        while pos >= 0 and (packed >> pos) & ctx.mask:
            codes.append(((packed >> pos) & ctx.mask) - 1)
            pos -= ctx.bits
        word = Word(tuple(ctx.letters[c] for c in codes))
        assert word.is_almost_irreducible()
        assert word.reduce() == g.reduce()
        assert len(word) % 2 == 0 and len(word) <= 2 * g.reduced_length()
        best = min(pairing_cost(sp, word, s)
                   for s in enumerate_schemes(len(word) // 2))
        assert best == value


def test_norm_deterministic(two_point_space):
    sp = two_point_space
    g = parse_word("a b a^-1", sp.points)
    first = graev_norm(sp, g)
    second = graev_norm(sp, g)
    assert first == second


def test_norm_cap(two_point_space):
    long_word = parse_word("a b a b a b a", two_point_space.points)
    with pytest.raises(CapExceeded):
        graev_norm(two_point_space, long_word)
    value, _ = graev_norm(two_point_space, long_word, cap=7)
    assert value > 0


def test_norm_requires_bounded_space():
    big = QPSpace(("a", "b"), ((F(0), F(3)), (F(2), F(0))))
    with pytest.raises(DomainError):
        graev_norm(big, parse_word("a", big.points))
    with pytest.raises(DomainError):
        abelian_norm(big, parse_abelian("a", big.points))


def test_norm_rejects_unknown_generator(two_point_space):
    with pytest.raises(DomainError):
        graev_norm(two_point_space, Word((Letter("z", 1),)))


def test_dist_extension(two_point_space):
    sp = two_point_space
    a, b = parse_word("a", sp.points), parse_word("b", sp.points)
    assert graev_dist(sp, a, a) == 0
    assert graev_dist(sp, a, b) == F(1, 4)
    assert graev_dist(sp, b, a) == F(1, 2)


def test_prenorm_axioms_random():
    rng = random.Random(47)
    for trial in range(6):
        sp = random_qpspace(rng, rng.randint(2, 3))
        words = [random_reduced_word(rng, sp.points, 3) for _ in range(6)]
        values = {}
        for w in words:
            values[w] = graev_norm(sp, w)[0]
            assert values[w] >= 0
        for g in words[:3]:
            for h in words[:3]:
                assert graev_norm(sp, g * h, cap=6)[0] <= values[g] + values[h]


def test_invariance_under_conjugation():
    rng = random.Random(53)
    for trial in range(10):
        sp = random_qpspace(rng, 2)
        g = random_reduced_word(rng, sp.points, 3)
        w = random_reduced_word(rng, sp.points, 1, min_len=1)
        conjugated = w.inverse() * g * w
        assert graev_norm(sp, conjugated, cap=6)[0] == graev_norm(sp, g)[0]


def test_monotone_in_the_metric():
    rng = random.Random(59)
    for trial in range(10):
        sp = random_qpspace(rng, 2)
        halved = sp.scale(F(1, 2))
        g = random_reduced_word(rng, sp.points, 3)
        assert graev_norm(halved, g)[0] <= graev_norm(sp, g)[0]


def test_abelian_norm_examples(two_point_space):
    sp = two_point_space
    value, witness = abelian_norm(sp, parse_abelian("-a + b", sp.points))
    assert value == F(1, 4)
    assert witness.pairs == ((Letter("a", 1), Letter("b", 1)),)
    value, _ = abelian_norm(sp, parse_abelian("-2a + 2b", sp.points))
    assert value == F(1, 2)
    value, witness = abelian_norm(sp, parse_abelian("a", sp.points))
    assert value == 1
    assert witness.pairs in (((Letter("a", -1), Letter.neutral()),),
                             ((Letter.neutral(), Letter("a", 1)),))
    assert abelian_norm(sp, AbelianWord())[0] == 0


def test_abelian_witness_sound(two_point_space):
    rng = random.Random(61)
    for trial in range(40):
        sp = random_qpspace(rng, rng.randint(2, 4))
        mapping = {gen: rng.randint(-2, 2) for gen in sp.points}
        h = AbelianWord.from_mapping(mapping)
        value, witness = abelian_norm(sp, h)
        total = sum((signed_extension(sp, u, v) for u, v in witness.pairs),
                    F(0))
        assert total == value
        delta = AbelianWord()
        for u, v in witness.pairs:
            for letter, sign in ((u, -1), (v, 1)):
                if not letter.is_neutral:
                    delta = delta + AbelianWord.from_mapping(
                        {letter.gen: sign * letter.sign})
        assert delta == h


def test_abelian_norm_matches_oracle():
    rng = random.Random(67)
    for trial in range(30):
        sp = random_qpspace(rng, rng.randint(2, 3))
        mapping = {gen: rng.randint(-3, 3) for gen in sp.points}
        h = AbelianWord.from_mapping(mapping)
        assert abelian_norm(sp, h)[0] == brute_abelian_norm(sp, h)


def test_abelian_cap(two_point_space):
    with pytest.raises(CapExceeded):
        abelian_norm(two_point_space,
                     AbelianWord.from_mapping({"a": 7, "b": -6}))


def test_balanced_examples(two_point_space):
    sp = two_point_space
    value, witness = abelian_norm_balanced(sp, parse_abelian("-a + b", sp.points))
    assert value == F(1, 4)
    assert witness.pairs == ((Letter("a", 1), Letter("b", 1)),)
    assert abelian_norm_balanced(sp, parse_abelian("-2a + 2b", sp.points))[0] == F(1, 2)


def test_balanced_three_point():
    sp = QPSpace(("a", "b", "c"),
                 ((F(0), F(1, 2), F(1, 8)),
                  (F(1, 4), F(0), F(1, 3)),
                  (F(1, 2), F(1, 2), F(0))))
    assert not sp.validate()
    h = parse_abelian("-a - b + 2c", sp.points)
    assert abelian_norm_balanced(sp, h)[0] == sp.d("a", "c") + sp.d("b", "c")


def test_balanced_rejects_unbalanced(two_point_space):
    with pytest.raises(DomainError):
        abelian_norm_balanced(two_point_space,
                              parse_abelian("a", two_point_space.points))


def test_balanced_equals_pairing_norm():
    rng = random.Random(71)
    for trial in range(40):
        sp = random_qpspace(rng, rng.randint(2, 4))
        pool = {gen: 0 for gen in sp.points}
        for _ in range(rng.randint(1, 4)):
            plus, minus = rng.choice(sp.points), rng.choice(sp.points)
            pool[plus] += 1
            pool[minus] -= 1
        h = AbelianWord.from_mapping(pool)
        assert abelian_norm_balanced(sp, h)[0] == abelian_norm(sp, h)[0]


def test_balanced_allows_unbounded_space():
    sp = QPSpace(("a", "b"), ((F(0), F(3)), (F(5), F(0))))
    assert abelian_norm_balanced(sp, parse_abelian("-2a + 2b", sp.points))[0] == 6


def test_assignment_against_permutations():
    rng = random.Random(73)
    for trial in range(30):
        n = rng.randint(1, 5)
        cost = [[F(rng.randint(0, 20), rng.randint(1, 8)) for _ in range(n)]
                for _ in range(n)]
        value, match = _assignment_min(cost)
        assert sorted(match) == list(range(n))
        assert value == brute_assignment(cost)
        assert value == sum((cost[i][match[i]] for i in range(n)), F(0))


def test_abelian_dist(two_point_space):
    sp = two_point_space
    g = parse_abelian("2a - b", sp.points)
    assert abelian_dist(sp, g, g) == 0
    assert abelian_dist(sp, parse_abelian("3a", sp.points),
                        parse_abelian("3b", sp.points)) == F(3, 4)
    assert abelian_dist(sp, parse_abelian("a", sp.points),
                        parse_abelian("b", sp.points)) == F(1, 4)


def test_scaling_law(two_point_space):
    sp = two_point_space
    for k in range(6):
        for x, y in (("a", "b"), ("b", "a")):
            g = AbelianWord.from_mapping({x: k})
            h = AbelianWord.from_mapping({y: k})
            expected = k * sp.d(x, y) if x != y else F(0)
            assert abelian_dist(sp, g, h, cap=12) == expected


def test_subadditive_pairing_bound():
    rng = random.Random(79)
    for trial in range(25):
        sp = random_qpspace(rng, rng.randint(2, 4))
        pairs = [(rng.choice(sp.points), rng.choice(sp.points))
                 for _ in range(rng.randint(1, 5))]
        total = AbelianWord()
        bound = F(0)
        for x, y in pairs:
            total = total + AbelianWord.from_mapping({x: -1}) \
                + AbelianWord.from_mapping({y: 1})
            bound += sp.d(x, y)
        assert abelian_norm(sp, total)[0] <= bound


def test_ball_member(two_point_space):
    sp = two_point_space
    assert ball_member(sp, Word(), F(1, 100))
    assert ball_member(sp, parse_abelian("-a + b", sp.points), F(1, 2))
    assert not ball_member(sp, parse_abelian("-a + b", sp.points), F(1, 4))
    assert ball_member(sp, parse_word("a b^-1", sp.points), F(3, 4))
    assert not ball_member(sp, parse_word("a b^-1", sp.points), F(1, 2))
    with pytest.raises(DomainError):
        ball_member(sp, Word(), F(0))
    with pytest.raises(DomainError):
        ball_member(sp, "a", F(1))
