"""Word algebra for free and free abelian groups over a finite alphabet.

A letter is a signed generator or the distinguished neutral letter ``e``.
Words are immutable letter sequences; reduction deletes neutral letters and
cancels adjacent mutually inverse letters until a fixed point.  Abelian
elements are kept as generator-to-exponent mappings with zero entries
dropped.  Every operation is a pure function, so values are safe to share
between threads.

Text syntax accepted by the parsers:

* word: whitespace-separated tokens, each ``sym``, ``sym^k`` (k may be
  negative) or ``e``;
* abelian element: either word syntax (then abelianized) or ``+``/``-``
  separated terms such as ``-2a + 3b``; ``0`` and ``e`` denote the identity.

Generator symbols must be declared up front; an unknown symbol is a parse
error, never a silent extension of the alphabet.  The symbol ``e`` is
reserved for the neutral letter and cannot be a generator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Collection, Iterable, Iterator, Mapping

from .errors import DomainError, FormatError

NEUTRAL_TOKEN = "e"

_SYMBOL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"(?P<sym>[A-Za-z][A-Za-z0-9_]*)(?:\^(?P<exp>-?\d+))?\Z")
_TERM_RE = re.compile(r"\s*(?P<sign>[+-])?\s*(?P<coef>\d+)?\s*(?P<sym>[A-Za-z][A-Za-z0-9_]*)\s*")


def validate_symbols(symbols: Iterable[str]) -> tuple[str, ...]:
    """Check a declared alphabet: nonempty, unique, well-formed, no ``e``."""
    out = tuple(symbols)
    if not out:
        raise FormatError("alphabet must contain at least one generator")
    seen = set()
    for sym in out:
        if not isinstance(sym, str) or not _SYMBOL_RE.match(sym):
            raise FormatError(f"bad generator symbol: {sym!r}")
        if sym == NEUTRAL_TOKEN:
            raise FormatError("'e' is reserved for the neutral letter")
        if sym in seen:
            raise FormatError(f"duplicate generator symbol: {sym!r}")
        seen.add(sym)
    return out


@dataclass(frozen=True, slots=True)
class Letter:
    """A signed generator, or the neutral letter when ``gen`` is None."""

    gen: str | None
    sign: int = 1

    def __post_init__(self) -> None:
        if self.gen is None:
            if self.sign != 0:
                raise DomainError("the neutral letter carries no sign")
        elif self.sign not in (-1, 1):
            raise DomainError(f"letter sign must be +1 or -1, got {self.sign}")

    @classmethod
    def neutral(cls) -> "Letter":
        return cls(None, 0)

    @property
    def is_neutral(self) -> bool:
        return self.gen is None

    def inverse(self) -> "Letter":
        if self.gen is None:
            return self
        return Letter(self.gen, -self.sign)

    def token(self) -> str:
        if self.gen is None:
            return NEUTRAL_TOKEN
        return self.gen if self.sign > 0 else f"{self.gen}^-1"

    def __str__(self) -> str:
        return self.token()


def letter_sort_key(letter: Letter, point_order: Mapping[str, int]) -> tuple:
    """Total order on letters: generators in declared order, each positive
    letter before its inverse, the neutral letter last."""
    if letter.is_neutral:
        return (1,)
    return (0, point_order[letter.gen], 0 if letter.sign > 0 else 1)


@dataclass(frozen=True, slots=True)
class Word:
    """A finite sequence of letters; the empty word is the group identity."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple(self.letters)
        if any(not isinstance(l, Letter) for l in letters):
            raise DomainError("words are built from Letter values")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    def reduce(self) -> "Word":
        """Unique reduced form: neutral letters deleted, adjacent mutually
        inverse letters cancelled, in one left-to-right stack pass."""
        stack: list[Letter] = []
        for letter in self.letters:
            if letter.is_neutral:
                continue
            if stack and stack[-1] == letter.inverse():
                stack.pop()
            else:
                stack.append(letter)
        return Word(tuple(stack))

    def is_reduced(self) -> bool:
        if any(l.is_neutral for l in self.letters):
            return False
        return all(
            self.letters[i + 1] != self.letters[i].inverse()
            for i in range(len(self.letters) - 1)
        )

    def is_almost_irreducible(self) -> bool:
        """No directly adjacent pair u, u^-1 of non-neutral letters.

        Neutral letters may appear anywhere, including next to each other;
        patterns like ``x e x^-1`` are allowed.
        """
        for i in range(len(self.letters) - 1):
            cur, nxt = self.letters[i], self.letters[i + 1]
            if not cur.is_neutral and nxt == cur.inverse():
                return False
        return True

    def reduced_length(self) -> int:
        return len(self.reduce())

    def normal_form(self) -> tuple[tuple[str, int], ...]:
        """Run-length encoding of the reduced word: (generator, exponent)
        pairs with nonzero exponents and distinct adjacent generators."""
        terms: list[tuple[str, int]] = []
        for letter in self.reduce():
            if terms and terms[-1][0] == letter.gen:
                terms[-1] = (letter.gen, terms[-1][1] + letter.sign)
            else:
                terms.append((letter.gen, letter.sign))
        return tuple(terms)

    def abelianize(self) -> "AbelianWord":
        counts: dict[str, int] = {}
        for letter in self.letters:
            if letter.is_neutral:
                continue
            counts[letter.gen] = counts.get(letter.gen, 0) + letter.sign
        return AbelianWord.from_mapping(counts)

    def tokens(self) -> list[str]:
        return [l.token() for l in self.letters]

    def __str__(self) -> str:
        return " ".join(self.tokens()) if self.letters else NEUTRAL_TOKEN


def from_normal_form(terms: Iterable[tuple[str, int]]) -> Word:
    """Expand (generator, exponent) terms back into a word."""
    letters: list[Letter] = []
    prev = None
    for gen, exp in terms:
        if exp == 0:
            raise DomainError(f"zero exponent for generator {gen!r}")
        if gen == prev:
            raise DomainError(f"adjacent terms share the generator {gen!r}")
        prev = gen
        sign = 1 if exp > 0 else -1
        letters.extend(Letter(gen, sign) for _ in range(abs(exp)))
    return Word(tuple(letters))


def in_length_ball(word: Word, n: int) -> bool:
    """True iff the reduced length of ``word`` is at most ``n``."""
    if n < 0:
        raise DomainError(f"radius must be non-negative, got {n}")
    return word.reduced_length() <= n


@dataclass(frozen=True, slots=True)
class AbelianWord:
    """Element of the free abelian group: sorted (generator, exponent)
    terms with all exponents nonzero; the identity has no terms."""

    terms: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        terms = tuple((g, int(m)) for g, m in self.terms)
        gens = [g for g, _ in terms]
        if gens != sorted(gens) or len(set(gens)) != len(gens):
            raise DomainError("terms must be sorted by generator and unique")
        if any(m == 0 for _, m in terms):
            raise DomainError("zero exponents must be dropped")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int]) -> "AbelianWord":
        return cls(tuple(sorted((g, m) for g, m in mapping.items() if m != 0)))

    @property
    def is_identity(self) -> bool:
        return not self.terms

    def exponent(self, gen: str) -> int:
        for g, m in self.terms:
            if g == gen:
                return m
        return 0

    def generators(self) -> tuple[str, ...]:
        return tuple(g for g, _ in self.terms)

    def length(self) -> int:
        return sum(abs(m) for _, m in self.terms)

    def coefficient_sum(self) -> int:
        return sum(m for _, m in self.terms)

    def letters(self) -> tuple[Letter, ...]:
        """The multiset of signed letters, in term order."""
        out: list[Letter] = []
        for gen, m in self.terms:
            sign = 1 if m > 0 else -1
            out.extend(Letter(gen, sign) for _ in range(abs(m)))
        return tuple(out)

    def __add__(self, other: "AbelianWord") -> "AbelianWord":
        counts = dict(self.terms)
        for g, m in other.terms:
            counts[g] = counts.get(g, 0) + m
        return AbelianWord.from_mapping(counts)

    def __neg__(self) -> "AbelianWord":
        return AbelianWord(tuple((g, -m) for g, m in self.terms))

    def __sub__(self, other: "AbelianWord") -> "AbelianWord":
        return self + (-other)

    def __rmul__(self, k: int) -> "AbelianWord":
        if not isinstance(k, int):
            return NotImplemented
        return AbelianWord.from_mapping({g: k * m for g, m in self.terms})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for i, (gen, m) in enumerate(self.terms):
            mag = "" if abs(m) == 1 else str(abs(m))
            if i == 0:
                parts.append(("-" if m < 0 else "") + mag + gen)
            else:
                parts.append(("- " if m < 0 else "+ ") + mag + gen)
        return " ".join(parts)


def parse_word(text: str, alphabet: Collection[str]) -> Word:
    """Parse word syntax against a declared alphabet."""
    symbols = set(validate_symbols(alphabet))
    letters: list[Letter] = []
    for tok in text.split():
        if tok == NEUTRAL_TOKEN:
            letters.append(Letter.neutral())
            continue
        m = _TOKEN_RE.match(tok)
        if m is None:
            raise FormatError(f"bad word token: {tok!r}")
        sym, exp = m.group("sym"), m.group("exp")
        if sym == NEUTRAL_TOKEN:
            raise FormatError("the neutral letter takes no exponent")
        if sym not in symbols:
            raise FormatError(f"unknown generator {sym!r}")
        k = 1 if exp is None else int(exp)
        sign = 1 if k > 0 else -1
        letters.extend(Letter(sym, sign) for _ in range(abs(k)))
    return Word(tuple(letters))


def parse_abelian(text: str, alphabet: Collection[str]) -> AbelianWord:
    """Parse an abelian element, accepting term syntax or word syntax."""
    symbols = set(validate_symbols(alphabet))
    stripped = text.strip()
    if stripped in ("", "0", NEUTRAL_TOKEN):
        return AbelianWord()
    if "^" not in stripped:
        parsed = _parse_terms(stripped, symbols)
        if parsed is not None:
            return parsed
    return parse_word(text, alphabet).abelianize()


def _parse_terms(text: str, symbols: set[str]) -> AbelianWord | None:
    """Term syntax like ``-2a + 3b``; None when the text is not term-shaped."""
    counts: dict[str, int] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos:
            return None
        sign_tok, coef_tok, sym = m.group("sign"), m.group("coef"), m.group("sym")
        if sign_tok is None and not first:
            return None
        pos = m.end()
        first = False
        coef = 1 if coef_tok is None else int(coef_tok)
        if sign_tok == "-":
            coef = -coef
        if sym == NEUTRAL_TOKEN:
            continue
        if sym not in symbols:
            raise FormatError(f"unknown generator {sym!r}")
        counts[sym] = counts.get(sym, 0) + coef
    return AbelianWord.from_mapping(counts)
