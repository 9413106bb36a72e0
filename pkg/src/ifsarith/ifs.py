"""The three-map iterated function system and its basic-interval machinery.

The system is {x -> Lx, x -> Lx + c - L, x -> Lx + 1 - L} on [0,1] with
rational parameters (L, c).  Feasibility means the first two maps overlap
while the third is separated: L <= c <= 2L and c + L < 1.

Words over the alphabet {1,2,3} address basic intervals (images of [0,1]
under map compositions, leftmost letter outermost).  ``tilde`` refines a
basic interval into the union of its three children; ``level_cover``
materializes the rank-n cover of the attractor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import as_fraction, format_rational
from .intervals import Interval, IntervalUnion

Word = tuple[int, ...]

_LETTERS = (1, 2, 3)


class InvalidParams(ValueError):
    """Parameter pair violates the feasibility constraints."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("invalid parameters: " + "; ".join(self.violations))


@dataclass(frozen=True)
class Params:
    """A feasible exact parameter pair (lam, c).

    Boundary cases c = lam (first two maps coincide) and c = 2*lam
    (tilde children just touch) are valid.
    """

    lam: Fraction
    c: Fraction

    def __post_init__(self):
        violations = param_violations(self.lam, self.c)
        if violations:
            raise InvalidParams(violations)

    @property
    def offsets(self) -> tuple[Fraction, Fraction, Fraction]:
        return (Fraction(0), self.c - self.lam, 1 - self.lam)

    def map_point(self, letter: int, x: Fraction) -> Fraction:
        return self.lam * x + self.offsets[letter - 1]

    def describe(self) -> dict:
        return {"lambda": format_rational(self.lam), "c": format_rational(self.c)}


def param_violations(lam, c) -> list[str]:
    """Named constraint violations; empty list means feasible."""
    lam = as_fraction(lam)
    c = as_fraction(c)
    violations = []
    if not (0 < lam < 1):
        violations.append("0<lambda<1")
    if not lam <= c:
        violations.append("lambda<=c")
    if not c <= 2 * lam:
        violations.append("c<=2*lambda")
    if not c + lam < 1:
        violations.append("c+lambda<1")
    return violations


@dataclass(frozen=True)
class ParamCheck:
    params: Params | None
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_params(lam, c) -> ParamCheck:
    """Validate a candidate pair; violations are data, not exceptions."""
    violations = param_violations(lam, c)
    if violations:
        return ParamCheck(None, tuple(violations))
    return ParamCheck(Params(as_fraction(lam), as_fraction(c)), ())


def _check_word(word: Word) -> Word:
    word = tuple(word)
    if any(letter not in (1, 2, 3) for letter in word):
        raise ValueError(f"word letters must be in {{1,2,3}}: {word}")
    return word


@dataclass(frozen=True)
class WordSet:
    """A finite set of words of one rank; denotes a union of basic intervals."""

    rank: int
    words: frozenset[Word]

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        for w in self.words:
            if len(_check_word(w)) != self.rank:
                raise ValueError(f"word {w} does not have rank {self.rank}")

    @classmethod
    def of(cls, *words: Word) -> "WordSet":
        words = tuple(_check_word(w) for w in words)
        if not words:
            raise ValueError("a word set needs at least one word")
        rank = len(words[0])
        return cls(rank, frozenset(words))

    def sorted_words(self) -> list[Word]:
        return sorted(self.words)

    def refined(self, extra_ranks: int = 1) -> "WordSet":
        """All descendants ``extra_ranks`` levels down."""
        words = set(self.words)
        for _ in range(extra_ranks):
            words = {w + (i,) for w in words for i in _LETTERS}
        return WordSet(self.rank + extra_ranks, frozenset(words))


def basic_interval(p: Params, word: Word) -> Interval:
    """f_w([0,1]) computed exactly; its length is lam**rank."""
    word = _check_word(word)
    offs = p.offsets
    left = Fraction(0)
    scale = Fraction(1)
    for letter in word:
        left += scale * offs[letter - 1]
        scale *= p.lam
    return Interval(left, left + scale)


def word_children(word: Word) -> list[Word]:
    return [word + (i,) for i in _LETTERS]


def tilde(p: Params, interval: Interval) -> IntervalUnion:
    """Union of the three children of a basic interval [a, a+t].

    Because c <= 2L the first two children always merge, giving exactly
    [a, a+ct] u [a+(1-L)t, a+t] for feasible parameters.
    """
    a = interval.lo
    t = interval.hi - interval.lo
    lam, c = p.lam, p.c
    children = [
        Interval(a, a + lam * t),
        Interval(a + (c - lam) * t, a + c * t),
        Interval(a + (1 - lam) * t, a + t),
    ]
    return IntervalUnion(children)


@lru_cache(maxsize=256)
def level_cover(p: Params, n: int) -> IntervalUnion:
    """Normalized union of all 3**n rank-n basic intervals.

    Computed by folding the whole cover through the three maps once per
    rank, which keeps the work proportional to the merged part count
    instead of 3**n.
    """
    if n < 0:
        raise ValueError("cover rank must be nonnegative")
    cover = IntervalUnion([Interval(Fraction(0), Fraction(1))])
    for _ in range(n):
        images = []
        for off in p.offsets:
            images.extend(cover.map_affine(p.lam, off).parts)
        cover = IntervalUnion(images)
    return cover


def wordset_union(p: Params, ws: WordSet) -> IntervalUnion:
    """Normalized union of the basic intervals addressed by the word set."""
    return IntervalUnion([basic_interval(p, w) for w in ws.sorted_words()])
