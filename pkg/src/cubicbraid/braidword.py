"""Braid words, formal combinations of words and the twist maps.

A letter ``i`` stands for s_i and ``-i`` for s_i^{-1}.  In the cubic
quotients s_i^{-1} = s_i^2, so a normalized word keeps at most one letter
per syllable, with exponent 1 written ``i`` and exponent 2 written ``-i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .coeff import F4, ZZ, RingSpec

__all__ = [
    "BraidWord",
    "FormalElement",
    "normalize",
    "parse_word",
    "phi",
    "tau",
    "element_q",
    "element_c",
    "element_b",
    "element_rw",
    "element_r1",
    "element_r2",
    "element_e1",
    "z_word",
    "word_of",
]


def _syllables(letters: Sequence[int]) -> List[List[int]]:
    """Merge adjacent letters with equal index into [index, exponent mod 3]."""
    stack: List[List[int]] = []
    for x in letters:
        i, e = abs(x), (1 if x > 0 else 2)
        if stack and stack[-1][0] == i:
            stack[-1][1] = (stack[-1][1] + e) % 3
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([i, e])
    return stack


def normalize_letters(letters: Sequence[int]) -> Tuple[int, ...]:
    return tuple(i if e == 1 else -i for i, e in _syllables(letters))


@dataclass(frozen=True)
class BraidWord:
    """A word in s_1, ..., s_{n-1} and their inverses."""

    n: int
    letters: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or abs(x) > self.n - 1:
                raise ValueError(f"letter {x} out of range for {self.n} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(max(self.n, other.n), self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(-x for x in reversed(self.letters)))

    def signed_length(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def max_index(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.letters)


def normalize(w: BraidWord) -> BraidWord:
    """Merge syllables mod 3 (s^3 = 1) and cancel; idempotent."""
    return BraidWord(w.n, normalize_letters(w.letters))


def parse_word(text: str, n: int = 0) -> BraidWord:
    """Parse "2,-3,1" (comma separated signed ints); blank gives the empty word."""
    text = text.strip()
    letters = tuple(int(t) for t in text.replace(" ", "").split(",") if t) if text else ()
    need = max((abs(x) for x in letters), default=0) + 1
    return BraidWord(max(n, need, 2), letters)


def word_of(n: int, *letters: int) -> BraidWord:
    return BraidWord(n, tuple(letters))


class FormalElement:
    """Finite linear combination of normalized braid words."""

    __slots__ = ("n", "ring", "terms")

    def __init__(self, n: int, terms: Dict[Tuple[int, ...], object] = None, ring: RingSpec = ZZ):
        self.n = n
        self.ring = ring
        acc: Dict[Tuple[int, ...], object] = {}
        for letters, c in (terms or {}).items():
            key = normalize_letters(letters)
            acc[key] = ring.add(acc[key], c) if key in acc else c
        self.terms = {k: c for k, c in acc.items() if not ring.is_zero(c)}

    @classmethod
    def from_words(cls, n: int, words: Iterable[Sequence[int]], ring: RingSpec = ZZ) -> "FormalElement":
        terms: Dict[Tuple[int, ...], object] = {}
        for w in words:
            key = normalize_letters(w)
            terms[key] = ring.add(terms[key], ring.one()) if key in terms else ring.one()
        return cls(n, terms, ring)

    def over(self, ring: RingSpec) -> "FormalElement":
        """Map integer coefficients into ring."""
        if self.ring == ring:
            return self
        if self.ring != ZZ:
            raise ValueError("only integer elements can change ring")
        return FormalElement(self.n, {w: ring.from_int(c) for w, c in self.terms.items()}, ring)

    def with_n(self, n: int) -> "FormalElement":
        return FormalElement(max(n, self.n), self.terms, self.ring)

    def __add__(self, other: "FormalElement") -> "FormalElement":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = self.ring.add(terms[w], c) if w in terms else c
        return FormalElement(max(self.n, other.n), terms, self.ring)

    def __sub__(self, other: "FormalElement") -> "FormalElement":
        return self + other.scaled(self.ring.neg(self.ring.one()))

    def __mul__(self, other: "FormalElement") -> "FormalElement":
        terms: Dict[Tuple[int, ...], object] = {}
        r = self.ring
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                key = normalize_letters(w1 + w2)
                p = r.mul(c1, c2)
                terms[key] = r.add(terms[key], p) if key in terms else p
        return FormalElement(max(self.n, other.n), terms, r)

    def scaled(self, c) -> "FormalElement":
        return FormalElement(self.n, {w: self.ring.mul(c, x) for w, x in self.terms.items()}, self.ring)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalElement) and self.ring == other.ring and self.terms == other.terms

    def __iter__(self) -> Iterator[Tuple[Tuple[int, ...], object]]:
        return iter(sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        parts = []
        for w, c in self:
            word = "".join(str(x) for x in w) or "1"
            cs = self.ring.fmt(c)
            parts.append(word if cs == "1" else f"{cs}*{word}")
        return " + ".join(parts) or "0"


def phi(e: FormalElement, ring: RingSpec = None) -> FormalElement:
    """The automorphism s_i -> j s_i: a word gets j^(signed length)."""
    ring = ring or (e.ring if e.ring.has_j else F4)
    e = e.over(ring) if e.ring != ring else e
    out = {}
    for w, c in e.terms.items():
        k = sum(1 if x > 0 else 2 for x in w) % 3
        out[w] = ring.mul(ring.pow(ring.j, k), c)
    return FormalElement(e.n, out, ring)


def tau(e: FormalElement, gamma, ring: RingSpec = None) -> FormalElement:
    """The automorphism s_i -> gamma^2 s_i^{-1}; s_i^{-1} goes to gamma s_i."""
    ring = ring or e.ring
    e = e.over(ring) if e.ring != ring else e
    out = {}
    for w, c in e.terms.items():
        k = sum(2 if x > 0 else 1 for x in w)
        out[tuple(-x for x in w)] = ring.mul(ring.pow(gamma, k), c)
    return FormalElement(e.n, out, ring)


# ---------------------------------------------------------------------------
# canonical elements


def element_q(n: int = 3) -> FormalElement:
    """Sum of the quaternion subgroup of Gamma_3."""
    words = [(), (1, -2), (2, -1), (-1, 2), (-2, 1), (1, 2, 1), (-1, -2, -1), (1, -2, 1, -2)]
    return FormalElement.from_words(max(n, 3), words)


def element_c(n: int = 3) -> FormalElement:
    words = [(2, -1, 2), (1, -2, 1), (-1, 2, 1), (1, 2, -1), (-1, -2), (-2, -1), (1,), (2,)]
    return FormalElement.from_words(max(n, 3), words)


def element_b(n: int = 3) -> FormalElement:
    words = [(1, -2), (-2, 1), (-1, 2), (2, -1)]
    return FormalElement.from_words(max(n, 3), words)


def element_e1(n: int = 3) -> FormalElement:
    return FormalElement.from_words(max(n, 3), [(), (1,), (-1,)])


def element_rw(sign: int, n: int = 3) -> FormalElement:
    """e_1 (s_2^{+-1} + 1) e_1 with e_1 = 1 + s_1 + s_1^2."""
    e1 = element_e1(n)
    mid = FormalElement.from_words(max(n, 3), [(2 if sign > 0 else -2,), ()])
    return e1 * mid * e1


def element_r1(n: int = 4) -> FormalElement:
    words = [(2, -3), (-1, 2), (1, -2), (3, -1), (-2, 3), (1, -3)]
    return FormalElement.from_words(max(n, 4), words)


def element_r2(n: int = 4) -> FormalElement:
    words = [(-2, 3), (1,), (2,), (2, 3, -1), (-2, 3, 1), (-1, -3)]
    return FormalElement.from_words(max(n, 4), words)


def z_word(n: int) -> BraidWord:
    """(s_1 s_2 ... s_{n-1})^n."""
    return BraidWord(n, tuple(range(1, n)) * n)
