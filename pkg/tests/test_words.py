import math
import random

import pytest
from hypothesis import given, strategies as st

from affcox.exceptions import ParseError, PreconditionError
from affcox.words import (ReducedWord, all_words, cyclic_reduce, element_order, generator_conjugates,
                          involution_witness, involutions, parity, parse_word, word_from_letters,
                          word_mul, word_product)


def W(text, rank=3):
    return parse_word(text, rank)


def test_multiplication_examples():
    assert word_mul(W("e1 e2"), W("e2 e1")).is_identity()
    assert word_mul(W("e1"), W("e1")).is_identity()
    assert word_mul(W("e1 e2"), W("e1")) == W("e1 e2 e1")
    with pytest.raises(PreconditionError):
        word_mul(W("e1", 2), W("e1", 3))


def test_cyclic_reduce_examples():
    core, c = cyclic_reduce(W("e1 e2 e1"))
    assert core == W("e2") and c == W("e1")
    assert cyclic_reduce(W("e1 e2")) == (W("e1 e2"), W("1"))
    assert cyclic_reduce(W("1")) == (W("1"), W("1"))


def test_orders_and_parity():
    assert element_order(W("e1 e2 e1")) == 2
    assert element_order(W("e1 e2")) == math.inf
    assert element_order(W("1")) == 1
    assert parity(W("e1 e2")) == 0 and parity(W("e1")) == 1 and parity(W("1")) == 0


def test_witness_examples():
    w = involution_witness(W("e1 e2 e1"))
    assert (w.target, w.conjugator) == (2, W("e1"))
    w = involution_witness(W("e1"))
    assert (w.target, w.conjugator) == (1, W("1"))
    with pytest.raises(PreconditionError):
        involution_witness(W("e1 e2"))


def test_parse():
    assert parse_word("e1 e1 e2").letters == (2,)
    assert parse_word("1", 2).is_identity()
    assert parse_word("e3 e1").rank == 3
    with pytest.raises(ParseError):
        parse_word("e1 x2")
    with pytest.raises(ParseError):
        parse_word("e4", 3)
    with pytest.raises(PreconditionError):
        ReducedWord(2, (1, 1))


def test_associativity_exhaustive():
    words = list(all_words(3, 4))
    rng = random.Random(0)
    sample = [tuple(rng.choice(words) for _ in range(3)) for _ in range(3000)]
    for u, v, w in sample:
        assert word_mul(word_mul(u, v), w) == word_mul(u, word_mul(v, w))
    for i in (1, 2, 3):
        g = ReducedWord.generator(3, i)
        assert word_mul(g, g).is_identity()


def test_word_counts():
    # 1 + n * sum (n-1)^(k-1)
    assert sum(1 for _ in all_words(3, 4)) == 1 + 3 * (1 + 2 + 4 + 8)


@pytest.mark.parametrize("rank", [2, 3])
def test_involutions_are_generator_conjugates(rank):
    assert involutions(rank, 7) == generator_conjugates(rank, 7)
    for w in involutions(rank, 7):
        assert involution_witness(w).verify(w)


words = st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(1, n), max_size=12)))


@given(words)
def test_order_two_iff_conjugate_of_generator(data):
    n, letters = data
    w = word_from_letters(n, letters)
    conj = generator_conjugates(n, len(w)) if len(w) % 2 == 1 else set()
    assert (element_order(w) == 2) == (w in conj)
    if element_order(w) == 2:
        wit = involution_witness(w)
        c = wit.conjugator
        assert word_product(c.inverse(), w, c).letters == (wit.target,)


@given(words, st.lists(st.integers(1, 4), max_size=12))
def test_parity_homomorphism(data, other):
    n, letters = data
    u = word_from_letters(n, letters)
    v = word_from_letters(n, [x for x in other if x <= n])
    assert parity(word_mul(u, v)) == (parity(u) + parity(v)) % 2


@given(st.integers(2, 4), st.integers(1, 4), st.lists(st.integers(1, 4), max_size=10))
def test_random_conjugate_witness(n, i, letters):
    i = min(i, n)
    u = word_from_letters(n, [x for x in letters if x <= n])
    w = word_product(u, ReducedWord.generator(n, i), u.inverse())
    wit = involution_witness(w)
    assert wit.target == i and wit.verify(w)
