import itertools

import pytest

from starweight.words import (
    Word,
    canonical_cyclic_class,
    cyclically_reduce,
    exponent_sum,
    free_reduce,
    max_root,
    strip_conjugation,
    syllable_length,
    word_from_tokens,
)


def W(text):
    return word_from_tokens(text.split())


def test_free_reduce_cancellation():
    assert free_reduce(W("a1 a1^-1")) == Word()


def test_free_reduce_exponent_merge():
    assert free_reduce(W("a1 t^2 t^-1 a2")) == W("a1 t a2")


def test_free_reduce_already_reduced():
    w = W("a1 b1 a1^-1")
    assert free_reduce(w) == w


def test_free_reduce_idempotent_and_nonincreasing():
    for toks in itertools.product(["a", "a^-1", "b", "b^-1"], repeat=5):
        w = Word([lt for lt in map(lambda t: (t.rstrip("^-1"), -1 if "^" in t else 1), toks)])
        r = free_reduce(w)
        assert free_reduce(r) == r
        assert len(r) <= 5
        for (n1, e1), (n2, e2) in zip(r.letters, r.letters[1:]):
            assert n1 != n2


def test_cyclically_reduce_strips_conjugation():
    assert cyclically_reduce(W("t^-1 a1 t")) == W("a1")


def test_cyclically_reduce_canonical_rotation():
    order = ["a1", "a2", "t"]
    w = W("a2 t a1 t^-1")
    assert cyclically_reduce(w, order) == W("a1 t^-1 a2 t")


def test_cyclically_reduce_theorem_word():
    order = ["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"]
    w = W("a1 b1 a2 b2 a3 b3 a4 b4")
    assert cyclically_reduce(w, order) == w


def test_canonical_class_inversion():
    order = ["a1", "a2", "a3", "a4"]
    a = canonical_cyclic_class(W("a2^-1 a4"), order)
    b = canonical_cyclic_class(W("a4^-1 a2"), order)
    assert a == b


def test_canonical_class_rotation():
    order = ["a1", "a2", "a3", "a4"]
    a = canonical_cyclic_class(W("a1 a4^-1 a2 a4^-1"), order)
    b = canonical_cyclic_class(W("a4^-1 a2 a4^-1 a1"), order)
    assert a == b


def test_canonical_class_distinguishes():
    # brute-force over all rotations and inversions of each word
    order = ["a1", "a2", "a3", "a4"]
    u, v = W("a1 a4^-1 a2 a4^-1"), W("a1 a2^-1 a4 a2^-1")
    orbit_u = set()
    exp = u.expand()
    for i in range(len(exp)):
        rot = exp[i:] + exp[:i]
        orbit_u.add(Word(rot))
        orbit_u.add(Word(rot).inverse())
    assert v not in orbit_u
    assert canonical_cyclic_class(u, order) != canonical_cyclic_class(v, order)


def test_canonical_class_constant_on_orbits():
    order = ["a", "b"]
    words = [W("a b"), W("a b^-1 a b"), W("a^2 b^-1"), W("a b a^-1 b^-1")]
    for w in words:
        exp = w.expand()
        rep = canonical_cyclic_class(w, order)
        for i in range(len(exp)):
            rot = Word(exp[i:] + exp[:i])
            assert canonical_cyclic_class(rot, order) == rep
            assert canonical_cyclic_class(rot.inverse(), order) == rep


@pytest.mark.parametrize(
    "tokens,expected",
    [
        ("a1 t a2 t^-1", 4),
        ("a1 t a2 t a3 t a4 t a5 t a6 t a7 t a8 t a9 t^-8", 18),
        ("", 0),
    ],
)
def test_syllable_length(tokens, expected):
    coeffs = {f"a{i}" for i in range(1, 10)}
    w = W(tokens) if tokens else Word()
    assert syllable_length(w, (coeffs, {"t"})) == expected


def test_syllable_length_not_alternating():
    with pytest.raises(ValueError):
        syllable_length(W("a1 t a2"), ({"a1", "a2"}, {"t"}))


@pytest.mark.parametrize(
    "tokens,x,expected",
    [
        ("a1 t a2 t a3 t^-1", "t", 1),
        ("a1 t a2 t a3 t a4 t", "t", 4),
        ("a1 t a2 t a3 t^-1 a4 t^-1", "t", 0),
        ("a1 b1", "t", 0),
    ],
)
def test_exponent_sum(tokens, x, expected):
    assert exponent_sum(W(tokens), x) == expected


def test_exponent_sum_additive_and_negated():
    u, v = W("a1 t^2 a2"), W("t^-1 a1 t^3")
    assert exponent_sum(u * v, "t") == exponent_sum(u, "t") + exponent_sum(v, "t")
    assert exponent_sum(u.inverse(), "t") == -exponent_sum(u, "t")


def test_strip_conjugation():
    h, core = strip_conjugation(W("b1^-1 b2 b1"))
    assert h == W("b1^-1") and core == W("b2")
    assert h * core * h.inverse() == W("b1^-1 b2 b1")


def test_max_root():
    root, d = max_root(W("a2^-1 a4 a2^-1 a4 a2^-1 a4"))
    assert root == W("a2^-1 a4") and d == 3
    root, d = max_root(W("a1 a2"))
    assert d == 1
