"""Symmetric group machinery."""

from itertools import permutations as iter_perms

import pytest

from heckeklr.errors import IndexOutOfRange
from heckeklr.permutations import Permutation


def brute_min_index_sum(w: Permutation) -> int:
    """Smallest index sum over all reduced words, by breadth-first search."""
    d = w.d
    best = {Permutation.identity(d): 0}
    frontier = [Permutation.identity(d)]
    target_len = w.length()
    for _ in range(target_len):
        nxt = {}
        for u in frontier:
            for r in range(1, d):
                v = u * Permutation.s(r, d)
                if v.length() == u.length() + 1:
                    cand = best[u] + r
                    if v not in nxt or cand < nxt[v]:
                        nxt[v] = cand
        for v, s in nxt.items():
            if v not in best or s < best[v]:
                best[v] = s
        frontier = list(nxt)
    return best[w]


def test_identity_and_generators():
    e = Permutation.identity(3)
    assert e.is_identity()
    s1 = Permutation.s(1, 3)
    assert s1(1) == 2 and s1(2) == 1 and s1(3) == 3
    assert (s1 * s1).is_identity()
    with pytest.raises(IndexOutOfRange):
        Permutation.s(3, 3)


def test_composition_order():
    # (self*other)(k) = self(other(k)); words apply rightmost letter first
    d = 3
    s1 = Permutation.s(1, d)
    s2 = Permutation.s(2, d)
    w = Permutation.from_word([1, 2], d)  # s_1 then s_2 reading left to right?
    assert w == s1 * s2
    assert w(3) == s1(s2(3))


def test_length_and_descents():
    w0 = Permutation.from_word([1, 2, 1], 3)
    assert w0.length() == 3
    assert w0(1) == 3 and w0(3) == 1
    assert w0.right_descents() == {1, 2}
    assert w0.left_descents() == {1, 2}


def test_canonical_word_reduced_and_lex_smallest():
    for d in (2, 3, 4):
        for w in Permutation.all(d):
            word = w.canonical_word()
            assert Permutation.from_word(word, d) == w
            assert len(word) == w.length()


def test_left_adjusted_word_minimizes_index_sum():
    for d in (2, 3, 4):
        for w in Permutation.all(d):
            word = w.left_adjusted_word()
            assert len(word) == w.length()
            # application order: w = s_{word[-1]} ... s_{word[0]}
            acc = Permutation.identity(d)
            for r in word:
                acc = Permutation.s(r, d) * acc
            assert acc == w
            assert sum(word) == brute_min_index_sum(w)


def test_left_adjusted_word_deterministic_tiebreak():
    # the longest element of S_3 admits (1,2,1) and (2,1,2); both have
    # index sum 4, the lex-smaller application tuple wins
    w0 = Permutation.from_word([1, 2, 1], 3)
    assert w0.left_adjusted_word() == (1, 2, 1)


def test_act_on_seq_places_values():
    w = Permutation.from_word([1, 2], 3)  # w = s_1 s_2
    seq = ("a", "b", "c")
    out = w.act_on_seq(seq)
    # out[w(k)-1] = seq[k-1]
    for k in range(1, 4):
        assert out[w(k) - 1] == seq[k - 1]


def test_all_enumeration_counts():
    assert len(list(Permutation.all(1))) == 1
    assert len(list(Permutation.all(3))) == 6
    assert len(list(Permutation.all(4))) == 24


def test_inverse_and_product_roundtrip():
    for w in Permutation.all(4):
        assert (w * w.inv()).is_identity()
        assert w.inv().inv() == w
        assert w.length() == w.inv().length()
