"""Non-crossing perfect pairings of {1..2n} and their word cost.

A scheme pairs up the indices 1..2n so that any two pair intervals are
disjoint or nested.  Enumeration follows the recursive decomposition:
index 1 pairs with some even-offset partner, and the inside and outside
segments recurse independently.  That generates exactly the non-crossing
family, in lexicographic order of the sorted pair lists, and the count is
the n-th Catalan number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

from .errors import CapExceeded, DomainError
from .qpspace import QPSpace, signed_extension
from .words import Word

DEFAULT_SCHEME_CAP = 10


@dataclass(frozen=True)
class Scheme:
    """A non-crossing perfect pairing, stored as sorted (a, b) pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        problem = _pairing_problem(pairs)
        if problem is not None:
            raise DomainError(f"not a scheme: {problem}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def size(self) -> int:
        return 2 * len(self.pairs)

    @cached_property
    def _partner(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def partner(self, i: int) -> int:
        try:
            return self._partner[i]
        except KeyError as exc:
            raise DomainError(f"index {i} outside the scheme") from exc

    def __str__(self) -> str:
        return "".join(f"({a},{b})" for a, b in self.pairs)


def _pairing_problem(pairs: tuple[tuple[int, int], ...]) -> str | None:
    """Why the pairs fail to be a scheme, or None when they are one."""
    indices: list[int] = []
    for a, b in pairs:
        if a >= b:
            return f"pair ({a}, {b}) is not increasing"
        indices.extend((a, b))
    if sorted(indices) != list(range(1, 2 * len(pairs) + 1)):
        return "pairs do not partition 1..2n"
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i + 1:]:
            if a < c < b < d or c < a < d < b:
                return f"pairs ({a},{b}) and ({c},{d}) cross"
    return None


def is_scheme(pairs: Iterable[tuple[int, int]]) -> bool:
    """True iff the pairs partition 1..2n into a non-crossing pairing."""
    try:
        normalized = tuple(sorted((int(a), int(b)) for a, b in pairs))
    except (TypeError, ValueError):
        return False
    return _pairing_problem(normalized) is None


def enumerate_schemes(n: int, cap: int = DEFAULT_SCHEME_CAP) -> Iterator[Scheme]:
    """Yield every scheme on {1..2n} exactly once, lexicographically."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the scheme enumeration cap {cap}")
    for pairs in _segment_schemes(1, 2 * n):
        yield Scheme(pairs)


def _segment_schemes(lo: int, hi: int) -> Iterator[tuple[tuple[int, int], ...]]:
    if lo > hi:
        yield ()
        return
    for partner in range(lo + 1, hi + 1, 2):
        for inside in _segment_schemes(lo + 1, partner - 1):
            for outside in _segment_schemes(partner + 1, hi):
                yield ((lo, partner),) + inside + outside


def pairing_cost(space: QPSpace, word: Word, scheme: Scheme) -> Fraction:
    """Half-sum over all positions i of the signed-alphabet distance from
    the inverse of letter i to the letter at i's partner.

    Each pair contributes both orientations before the half factor, so a
    matched mutually inverse pair costs 0.
    """
    if len(word) != scheme.size:
        raise DomainError(
            f"word length {len(word)} does not match scheme size {scheme.size}")
    total = Fraction(0)
    for i, letter in enumerate(word, start=1):
        total += signed_extension(space, letter.inverse(), word[scheme.partner(i) - 1])
    return total / 2
