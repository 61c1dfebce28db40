"""Permutations of {1..d}, reduced words, and word selection.

Conventions used by every module:

* a permutation w maps positions; w(X_i) = X_{w(i)} on variables, and on a
  label tuple it acts on positions from the left: (w i)_{w(k)} = i_k;
* a word (i_1, ..., i_k) spells the composition s_{i_1} o ... o s_{i_k},
  so the rightmost letter acts first, matching the operator products
  T_{i_1} ... T_{i_k} and tau words read the same way;
* canonical_word(w) is the lexicographically smallest reduced word in this
  spelling (greedy smallest left descent);
* left_adjusted_word(w) returns the application-order tuple (r_1, ..., r_k)
  of a reduced word s_{r_k} ... s_{r_1} minimizing r_1 + ... + r_k, ties
  broken by the lexicographically smallest (r_1, ..., r_k).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations as _it_permutations

from .errors import IndexOutOfRange


class Permutation:
    """Permutation of {1..d} stored as the image tuple (w(1), ..., w(d))."""

    __slots__ = ("img",)

    def __init__(self, img: tuple[int, ...]):
        if sorted(img) != list(range(1, len(img) + 1)):
            raise IndexOutOfRange(f"not a permutation of 1..{len(img)}: {img}")
        self.img = tuple(img)

    # -- construction ------------------------------------------------------

    @staticmethod
    def identity(d: int) -> "Permutation":
        return Permutation(tuple(range(1, d + 1)))

    @staticmethod
    def s(r: int, d: int) -> "Permutation":
        if not 1 <= r <= d - 1:
            raise IndexOutOfRange(f"generator index {r} outside 1..{d - 1}")
        img = list(range(1, d + 1))
        img[r - 1], img[r] = img[r], img[r - 1]
        return Permutation(tuple(img))

    @staticmethod
    def from_word(word, d: int) -> "Permutation":
        w = Permutation.identity(d)
        for i in word:
            w = w * Permutation.s(i, d)
        return w

    @staticmethod
    def all(d: int):
        for img in _it_permutations(range(1, d + 1)):
            yield Permutation(img)

    # -- group structure ----------------------------------------------------

    @property
    def d(self) -> int:
        return len(self.img)

    def __call__(self, k: int) -> int:
        return self.img[k - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(k) = self(other(k))
        return Permutation(tuple(self.img[other.img[k] - 1] for k in range(self.d)))

    def inv(self) -> "Permutation":
        img = [0] * self.d
        for k in range(1, self.d + 1):
            img[self.img[k - 1] - 1] = k
        return Permutation(tuple(img))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.img == other.img

    def __hash__(self) -> int:
        return hash(self.img)

    def __lt__(self, other: "Permutation") -> bool:
        return self.img < other.img

    def __repr__(self) -> str:
        return f"Permutation{self.img}"

    # -- combinatorics -------------------------------------------------------

    def length(self) -> int:
        inv = 0
        for a in range(self.d):
            for b in range(a + 1, self.d):
                if self.img[a] > self.img[b]:
                    inv += 1
        return inv

    def is_identity(self) -> bool:
        return self.img == tuple(range(1, self.d + 1))

    def right_descents(self) -> set[int]:
        return {r for r in range(1, self.d) if self.img[r - 1] > self.img[r]}

    def left_descents(self) -> set[int]:
        winv = self.inv()
        return {r for r in range(1, self.d) if winv.img[r - 1] > winv.img[r]}

    def canonical_word(self) -> tuple[int, ...]:
        """Lex-smallest reduced word (i_1, ..., i_k), w = s_{i_1} o ... o s_{i_k}."""
        return _canonical_word(self.img)

    def left_adjusted_word(self) -> tuple[int, ...]:
        """Minimal-index-sum reduced word in application order (r_1, ..., r_k),
        w = s_{r_k} o ... o s_{r_1}; lex-smallest among the minimal-sum ones."""
        return _left_adjusted_word(self.img)

    def act_on_seq(self, seq: tuple) -> tuple:
        """Left action on a label tuple: (w seq)_{w(k)} = seq_k."""
        out = [None] * self.d
        for k in range(1, self.d + 1):
            out[self.img[k - 1] - 1] = seq[k - 1]
        return tuple(out)


@lru_cache(maxsize=None)
def _canonical_word(img: tuple[int, ...]) -> tuple[int, ...]:
    w = Permutation(img)
    word = []
    while not w.is_identity():
        r = min(w.left_descents())
        word.append(r)
        w = Permutation.s(r, w.d) * w
    return tuple(word)


@lru_cache(maxsize=None)
def _min_index_sum(img: tuple[int, ...]) -> int:
    w = Permutation(img)
    if w.is_identity():
        return 0
    return min(r + _min_index_sum((w * Permutation.s(r, w.d)).img) for r in w.right_descents())


@lru_cache(maxsize=None)
def _left_adjusted_word(img: tuple[int, ...]) -> tuple[int, ...]:
    w = Permutation(img)
    word = []
    while not w.is_identity():
        best = _min_index_sum(w.img)
        r = min(
            r
            for r in w.right_descents()
            if r + _min_index_sum((w * Permutation.s(r, w.d)).img) == best
        )
        word.append(r)
        w = w * Permutation.s(r, w.d)
    return tuple(word)
