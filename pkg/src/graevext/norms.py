"""Group norms and distances induced by a bounded quasi-pseudometric.

Free group: the norm of a reduced word g is the exact minimum, over all
almost irreducible candidate words of even length at most twice the
reduced length (letters drawn from the signed letters of g, their
inverses, and the neutral letter) that reduce to g, and over all
non-crossing pairings of the candidate's positions, of the pairing cost.
The search runs as a depth-first walk over joint (letter, open-or-close)
decisions with dominance pruning that provably preserves the minimum; a
plain enumeration over the same candidate family is kept in the test
suite as an oracle.

Free abelian group: the norm of an element of length l is the minimum
over all perfect pairings of its multiset of signed letters (padded with
one neutral letter when l is odd) of the per-pair cost, where an
unordered pair {s, t} may be realized as the difference term in either
orientation and pays the cheaper one.  Balanced elements (coefficient
sum zero) additionally admit a bipartite formulation: a minimum-cost
perfect matching between the negatively and positively signed letters
under the original distance, solved by an exact rational assignment
algorithm.

All caps are plain size guards; exceeding one raises ``CapExceeded``
instead of silently truncating the search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceeded, DomainError
from .qpspace import QPSpace, signed_extension
from .schemes import Scheme, enumerate_schemes, pairing_cost
from .words import AbelianWord, Letter, Word, letter_sort_key

DEFAULT_FREE_CAP = 6
DEFAULT_ABELIAN_CAP = 12


@dataclass(frozen=True)
class NormWitness:
    """A minimizing candidate word and pairing for a free-group norm."""

    word: Word
    scheme: Scheme
    value: Fraction

    def __str__(self) -> str:
        return f"value={self.value} word=[{' '.join(self.word.tokens())}] " \
               f"scheme=[{self.scheme}]"


@dataclass(frozen=True)
class PairingWitness:
    """Oriented difference pairs realizing an abelian norm value."""

    pairs: tuple[tuple[Letter, Letter], ...]
    value: Fraction

    def __str__(self) -> str:
        body = " ".join(f"({u.token()},{v.token()})" for u, v in self.pairs)
        return f"value={self.value} pairs=[{body}]"


def _check_generators(space: QPSpace, gens) -> None:
    for gen in gens:
        if gen not in space.index:
            raise DomainError(f"unknown generator {gen!r}")


def graev_norm(space: QPSpace, g: Word,
               cap: int = DEFAULT_FREE_CAP) -> tuple[Fraction, NormWitness]:
    """Exact free-group norm of g with a minimizing witness.

    The identity has norm 0 with an empty witness.  The witness word is
    chosen deterministically (see ``_free_norm_search``); among pairings
    of that word achieving the value, the lexicographically least one is
    returned.
    """
    space.ensure_valid(require_bounded=True)
    _check_generators(space, (l.gen for l in g if not l.is_neutral))
    reduced = g.reduce()
    if not len(reduced):
        return Fraction(0), NormWitness(Word(), Scheme(()), Fraction(0))
    if len(reduced) > cap:
        raise CapExceeded(
            f"reduced length {len(reduced)} exceeds the search cap {cap}")
    value, letters = _free_norm_search(space, reduced)
    word = Word(tuple(letters))
    scheme = _first_matching_scheme(space, word, value)
    return value, NormWitness(word, scheme, value)


def graev_dist(space: QPSpace, g: Word, h: Word,
               cap: int = DEFAULT_FREE_CAP) -> Fraction:
    """Left-invariant distance: the norm of g^-1 h."""
    return graev_norm(space, g.inverse() * h, cap)[0]


def _first_matching_scheme(space: QPSpace, word: Word, value: Fraction) -> Scheme:
    n = len(word) // 2
    for scheme in enumerate_schemes(n, cap=n):
        if pairing_cost(space, word, scheme) == value:
            return scheme
    raise AssertionError("no pairing reproduces the computed norm value")


def _free_norm_search(space: QPSpace, reduced: Word) -> tuple[Fraction, list[Letter]]:
    """Minimize the pairing cost over the candidate family of ``reduced``.

    Positions are generated left to right; each position picks a letter
    and either opens a new pairing arc or closes the innermost open one,
    so the arcs always form a non-crossing pairing.

    The value pass runs over a rearranged superset of the candidate
    family that has the same minimum: every candidate can be rewritten,
    without changing its cost or what it reduces to, so that neutral
    letters sit directly after their arc partner (so they only ever close
    a just-opened arc and never open one), neutral pairs matched together
    are dropped, and a pair of adjacent mutually inverse letters matched
    to each other is dropped.  Dropping the adjacency constraint in
    exchange lets states forget the previous letter, so a state is just
    the reduction stack, the open-arc letters, whether the innermost arc
    was opened at the previous position, and the length parity, with
    Pareto dominance over (length, cost) records.

    The witness starts at the candidate that pairs leftover reduced-word
    letters with inserted neutral letters and is replaced by the best
    almost irreducible completion the value pass encounters; if the value
    pass proves a smaller value but only via words outside the almost
    irreducible family, a second bounded pass recovers an almost
    irreducible witness at the exact value (one exists by the attainment
    property of the norm).  All tie handling is a fixed deterministic
    exploration order.
    """
    ctx = _EngineContext(space, reduced)
    letters, neutral, inv = ctx.letters, ctx.neutral, ctx.inv
    idelta, scale = ctx.idelta, ctx.scale
    target, size, max_len = ctx.target, ctx.size, ctx.max_len
    bits, mask, width = ctx.bits, ctx.mask, ctx.width
    shift_opens = bits * max_len
    shift_fresh = shift_opens + bits * size
    shift_parity = shift_fresh + 1

    def pack(codes) -> int:
        out = 0
        for i, c in enumerate(codes):
            out |= (c + 1) << (width - bits * (i + 1))
        return out

    def unpack(packed) -> list[int]:
        out = []
        pos = width - bits
        while pos >= 0:
            nib = (packed >> pos) & mask
            if nib == 0:
                break
            out.append(nib - 1)
            pos -= bits
        return out

    def almost_irreducible(codes) -> bool:
        return all(a == neutral or inv[a] != b
                   for a, b in zip(codes, codes[1:]))

    upper, e_matched = _insertion_plan(target, idelta, neutral)
    seed: list[int] = []
    for i, c in enumerate(target):
        seed.append(c)
        if e_matched[i]:
            seed.append(neutral)
    best_cost = upper
    best_word = pack(seed)
    air_cost, air_word = best_cost, best_word

    # state -> Pareto records of (length, cost): a record dominates any
    # later arrival that is at least as long (same parity) and costly.
    seen: dict[int, list[tuple[int, int]]] = {}

    def admit(key, length, cost) -> bool:
        records = seen.get(key)
        if records is None:
            seen[key] = [(length, cost)]
            return True
        drop = False
        for rec_len, rec_cost in records:
            if rec_len <= length and rec_cost <= cost:
                return False
            if rec_len >= length and rec_cost >= cost:
                drop = True
        if drop:
            seen[key] = [(l, c) for l, c in records
                         if l < length or c < cost] + [(length, cost)]
        else:
            records.append((length, cost))
        return True

    def walk(stack, depth, match, opens, odepth, fresh, length, cost, word):
        nonlocal best_cost, best_word, air_cost, air_word
        if length and not length & 1 and not odepth and depth == size == match:
            if cost < best_cost:
                best_cost, best_word = cost, word
            if cost < air_cost:
                codes = unpack(word)
                if almost_irreducible(codes):
                    air_cost, air_word = cost, word
            return  # extensions only add cost and length
        if length == max_len:
            return
        budget = max_len - length - 1
        base = width - bits * (length + 1)
        clength = length + 1
        parity_bit = (clength & 1) << shift_parity
        may_open = odepth < budget and cost < best_cost
        open_base = ((opens << bits) << shift_opens) | (1 << shift_fresh)
        if odepth:
            top = (opens & mask) - 1
            close_row = idelta[top]
            close_base = (opens >> bits) << shift_opens
            inv_top = inv[top] if fresh else -1
            # A neutral letter only ever closes the arc opened right
            # before it; rearranging any candidate into that shape keeps
            # its cost and its reduction.
            if fresh and odepth - 1 <= budget >= depth + size - 2 * match:
                ccost = cost + close_row[neutral]
                if ccost < best_cost:
                    key = stack | close_base | parity_bit
                    if admit(key, clength, ccost):
                        walk(stack, depth, match, opens >> bits, odepth - 1,
                             False, clength, ccost,
                             word | (neutral + 1) << base)
        else:
            inv_top = -1
        for letter in range(neutral):
            if depth and (stack & mask) - 1 == inv[letter]:
                cdepth = depth - 1
                cstack = stack >> bits
                cmatch = cdepth if match == depth else match
            else:
                cstack = (stack << bits) | (letter + 1)
                cdepth = depth + 1
                cmatch = (match + 1 if match == depth and match < size
                          and target[match] == letter else match)
            if cdepth + size - 2 * cmatch > budget:
                continue
            cword = word | (letter + 1) << base
            # open a new arc (cost deferred to its close)
            if may_open:
                key = cstack | open_base | (letter + 1) << shift_opens \
                      | parity_bit
                if admit(key, clength, cost):
                    walk(cstack, cdepth, cmatch,
                         (opens << bits) | (letter + 1), odepth + 1,
                         True, clength, cost, cword)
            # close the innermost open arc; a just-opened arc never takes
            # its opener's inverse (such a pair simply drops out)
            if odepth and odepth - 1 <= budget and letter != inv_top:
                ccost = cost + close_row[letter]
                if ccost < best_cost:
                    key = cstack | close_base | parity_bit
                    if admit(key, clength, ccost):
                        walk(cstack, cdepth, cmatch, opens >> bits,
                             odepth - 1, False, clength, ccost, cword)

    walk(0, 0, 0, 0, 0, False, 0, 0, 0)

    if air_cost == best_cost:
        witness = air_word
    else:
        witness = _constrained_witness(ctx, best_cost)
    return Fraction(best_cost, scale), [letters[c] for c in unpack(witness)]


class _EngineContext:
    """Letter coding and packed-state geometry shared by both passes.

    Letters take codes in point order, each positive letter before its
    inverse, the neutral letter last.  Arc costs are pre-scaled to
    integers by the common denominator.  Packed words are left-aligned
    nonzero fields, so integer order equals word order and a proper
    prefix stays smaller.
    """

    def __init__(self, space: QPSpace, reduced: Word):
        order = {p: i for i, p in enumerate(space.points)}
        gens = sorted({l.gen for l in reduced}, key=order.__getitem__)
        letters: list[Letter] = []
        for gen in gens:
            letters.append(Letter(gen, 1))
            letters.append(Letter(gen, -1))
        letters.append(Letter.neutral())
        self.letters = letters
        self.neutral = len(letters) - 1
        code = {letter: c for c, letter in enumerate(letters)}
        self.inv = [code[letter.inverse()] for letter in letters]
        # arc cost between letters u (opened) and v (closed): both
        # orientations of the extension distance, halved
        delta = [[(signed_extension(space, u.inverse(), v)
                   + signed_extension(space, v.inverse(), u)) / 2
                  for v in letters] for u in letters]
        self.scale = math.lcm(*(x.denominator for row in delta for x in row))
        self.idelta = [[int(x * self.scale) for x in row] for row in delta]
        self.target = tuple(code[l] for l in reduced)
        self.size = len(self.target)
        self.max_len = 2 * self.size
        self.bits = (len(letters) + 1).bit_length()
        self.mask = (1 << self.bits) - 1
        self.width = self.bits * self.max_len


def _constrained_witness(ctx: _EngineContext, value: int) -> int:
    """First almost irreducible candidate whose best pairing meets the
    known minimum value, searched in a fixed deterministic order."""
    target, size, max_len = ctx.target, ctx.size, ctx.max_len
    inv, idelta, neutral = ctx.inv, ctx.idelta, ctx.neutral
    bits, mask, width = ctx.bits, ctx.mask, ctx.width
    shift_opens = bits * max_len
    shift_prev = shift_opens + bits * size
    shift_len = shift_prev + bits + 1
    seen: dict[int, int] = {}

    def walk(stack, depth, match, opens, odepth, prev, length, cost, word):
        if length and not length & 1 and not odepth and depth == size == match:
            return word if cost == value else None
        if length == max_len:
            return None
        budget = max_len - length - 1
        base = width - bits * (length + 1)
        clength = length + 1
        inv_prev = inv[prev] if 0 <= prev != neutral else -1
        if odepth:
            close_row = idelta[(opens & mask) - 1]
            close_base = (opens >> bits) << shift_opens
        for letter in range(neutral + 1):
            if letter == inv_prev:
                continue  # keep the witness almost irreducible
            if letter == neutral:
                cstack, cdepth, cmatch = stack, depth, match
            elif depth and (stack & mask) - 1 == inv[letter]:
                cdepth = depth - 1
                cstack = stack >> bits
                cmatch = cdepth if match == depth else match
            else:
                cstack = (stack << bits) | (letter + 1)
                cdepth = depth + 1
                cmatch = (match + 1 if match == depth and match < size
                          and target[match] == letter else match)
            if cdepth + size - 2 * cmatch > budget:
                continue
            cword = word | (letter + 1) << base
            tag = (letter + 1) << shift_prev | clength << shift_len
            if odepth < budget:
                copens = (opens << bits) | (letter + 1)
                key = cstack | copens << shift_opens | tag
                rec = seen.get(key)
                if rec is None or cost < rec:
                    seen[key] = cost
                    hit = walk(cstack, cdepth, cmatch, copens, odepth + 1,
                               letter, clength, cost, cword)
                    if hit is not None:
                        return hit
            if odepth and odepth - 1 <= budget:
                ccost = cost + close_row[letter]
                if ccost <= value:
                    key = cstack | close_base | tag
                    rec = seen.get(key)
                    if rec is None or ccost < rec:
                        seen[key] = ccost
                        hit = walk(cstack, cdepth, cmatch, opens >> bits,
                                   odepth - 1, letter, clength, ccost, cword)
                        if hit is not None:
                            return hit
        return None

    found = walk(0, 0, 0, 0, 0, -1, 0, 0, 0)
    if found is None:
        raise AssertionError("no almost irreducible witness at the minimum")
    return found


def _insertion_plan(target, idelta, neutral) -> tuple[int, list[bool]]:
    """Best candidate built from the reduced word alone, where positions
    either pair up (non-crossing) or match an inserted neutral letter.
    Returns the cost and which positions take a neutral partner."""
    memo: dict[tuple[int, int], int] = {}

    def cost(i: int, j: int) -> int:
        if i > j:
            return 0
        key = (i, j)
        if key in memo:
            return memo[key]
        best = idelta[target[i]][neutral] + cost(i + 1, j)
        for k in range(i + 1, j + 1):
            best = min(best,
                       idelta[target[i]][target[k]] + cost(i + 1, k - 1)
                       + cost(k + 1, j))
        memo[key] = best
        return best

    e_matched = [False] * len(target)

    def rebuild(i: int, j: int) -> None:
        while i <= j:
            total = cost(i, j)
            for k in range(i + 1, j + 1):
                if total == (idelta[target[i]][target[k]] + cost(i + 1, k - 1)
                             + cost(k + 1, j)):
                    rebuild(i + 1, k - 1)
                    i = k + 1
                    break
            else:
                e_matched[i] = True
                i += 1

    value = cost(0, len(target) - 1)
    rebuild(0, len(target) - 1)
    return value, e_matched


def _pair_cost(space: QPSpace, s: Letter, t: Letter,
               order) -> tuple[Fraction, tuple[Letter, Letter]]:
    """Cheapest oriented realization of the unordered pair {s, t}."""
    first = (s.inverse(), t)
    second = (t.inverse(), s)
    c1 = signed_extension(space, *first)
    c2 = signed_extension(space, *second)
    if c2 < c1:
        return c2, second
    if c1 < c2:
        return c1, first
    key = lambda pair: (letter_sort_key(pair[0], order),
                        letter_sort_key(pair[1], order))
    return c1, min(first, second, key=key)


def abelian_norm(space: QPSpace, h: AbelianWord,
                 cap: int = DEFAULT_ABELIAN_CAP) -> tuple[Fraction, PairingWitness]:
    """Exact abelian norm of h with a minimizing oriented pairing.

    Brute-forces all perfect pairings of the padded letter multiset; the
    first minimum encountered in the canonical enumeration order (earliest
    remaining letter pairs with each later one) is returned.
    """
    space.ensure_valid(require_bounded=True)
    _check_generators(space, h.generators())
    length = h.length()
    if length == 0:
        return Fraction(0), PairingWitness((), Fraction(0))
    if length > cap:
        raise CapExceeded(f"length {length} exceeds the pairing cap {cap}")
    pool = list(h.letters())
    if length % 2 == 1:
        pool.append(Letter.neutral())
    order = {p: i for i, p in enumerate(space.points)}

    best: list = [None, None]

    def search(remaining: tuple[Letter, ...], acc: Fraction, pairs: list) -> None:
        if not remaining:
            if best[0] is None or acc < best[0]:
                best[0], best[1] = acc, tuple(pairs)
            return
        head = remaining[0]
        rest = remaining[1:]
        tried: set[Letter] = set()
        for idx, partner in enumerate(rest):
            if partner in tried:
                continue
            tried.add(partner)
            value, oriented = _pair_cost(space, head, partner, order)
            total = acc + value
            if best[0] is not None and total >= best[0]:
                continue
            pairs.append(oriented)
            search(rest[:idx] + rest[idx + 1:], total, pairs)
            pairs.pop()

    search(tuple(pool), Fraction(0), [])
    assert best[0] is not None
    return best[0], PairingWitness(best[1], best[0])


def abelian_norm_balanced(space: QPSpace,
                          h: AbelianWord) -> tuple[Fraction, PairingWitness]:
    """Abelian norm of a balanced element via exact bipartite assignment.

    Matches the multiset of negatively signed generators against the
    positively signed ones at the original distance.  Agrees with
    ``abelian_norm`` whenever the space is bounded by 1; unlike the
    pairing route it is also meaningful for unbounded valid spaces.
    """
    space.ensure_valid()
    _check_generators(space, h.generators())
    if h.coefficient_sum() != 0:
        raise DomainError(
            f"coefficient sum {h.coefficient_sum()} != 0: element is unbalanced")
    sources: list[str] = []
    targets: list[str] = []
    for gen, m in h.terms:
        (targets if m > 0 else sources).extend([gen] * abs(m))
    if not sources:
        return Fraction(0), PairingWitness((), Fraction(0))
    cost = [[space.d(z, t) for t in targets] for z in sources]
    value, match = _assignment_min(cost)
    pairs = tuple((Letter(sources[i], 1), Letter(targets[match[i]], 1))
                  for i in range(len(sources)))
    return value, PairingWitness(pairs, value)


def abelian_dist(space: QPSpace, g: AbelianWord, h: AbelianWord,
                 cap: int = DEFAULT_ABELIAN_CAP) -> Fraction:
    """Translation-invariant distance: the norm of h - g."""
    return abelian_norm(space, h - g, cap)[0]


def ball_member(space: QPSpace, g, eps: Fraction, cap: int | None = None) -> bool:
    """True iff the norm of g is strictly below eps.

    Dispatches on the element type: ``Word`` uses the free-group norm,
    ``AbelianWord`` the abelian one.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"radius must be positive, got {eps}")
    if isinstance(g, Word):
        value = graev_norm(space, g, cap if cap is not None else DEFAULT_FREE_CAP)[0]
    elif isinstance(g, AbelianWord):
        value = abelian_norm(space, g,
                             cap if cap is not None else DEFAULT_ABELIAN_CAP)[0]
    else:
        raise DomainError(f"unsupported element type {type(g).__name__}")
    return value < eps


def _assignment_min(cost: list[list[Fraction]]) -> tuple[Fraction, list[int]]:
    """Minimum-cost perfect matching on a square rational matrix.

    Potential-based shortest augmenting paths; exact because every
    intermediate quantity stays a Fraction.  Returns the total cost and
    the column matched to each row.
    """
    n = len(cost)
    if any(len(row) != n for row in cost):
        raise DomainError("assignment matrix must be square")
    infinity = sum((x for row in cost for x in row), Fraction(0)) + 1
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [infinity] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = infinity
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    match = [0] * n
    for j in range(1, n + 1):
        if p[j]:
            match[p[j] - 1] = j - 1
    total = sum((cost[i][match[i]] for i in range(n)), Fraction(0))
    return total, match
