"""Entourages, chain metrics, finite topologies, and pair-sum neighborhoods.

An entourage is a reflexive relation on a finite point set.  Composition
follows the fixed convention ``U o V = {(x, z): exists y, (x, y) in U and
(y, z) in V}``, used consistently by every operation and test here.

``frink_metric`` turns a tripling chain (first element the full relation,
each later element with its triple composition inside the previous one)
into an exact quasi-pseudometric whose scale-``2^-i`` balls interleave the
chain.  ``entourage_metric`` specializes the construction to one entourage
over the universal base relation of a finite T0 topology.

``decompose_prefix`` and ``decompose_subset`` express a free abelian
element as an alternating sum of difference pairs drawn from an entourage
sequence, either one pair per leading entourage or pairs spread over a
bounded set of distinct positions; both return explicit witnesses.

File formats (JSON): an entourage file mirrors the space file, with
``points`` and a 0/1 ``relation`` matrix (reflexivity is validated, never
repaired); a sequence file is a JSON array of entourage file paths,
resolved relative to the sequence file; a topology file has ``points``
and an ``opens`` list of point lists.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, FormatError
from .qpspace import QPSpace
from .words import AbelianWord, validate_symbols


@dataclass(frozen=True)
class Entourage:
    """Reflexive boolean relation over a finite point list."""

    points: tuple[str, ...]
    relation: tuple[tuple[bool, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", validate_symbols(self.points))
        n = len(self.points)
        rows = tuple(tuple(bool(x) for x in row) for row in self.relation)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise DomainError(f"relation matrix must be {n}x{n}")
        missing = [self.points[i] for i in range(n) if not rows[i][i]]
        if missing:
            raise DomainError(
                f"relation is not reflexive at: {', '.join(missing)}")
        object.__setattr__(self, "relation", rows)

    @classmethod
    def diagonal(cls, points: Iterable[str]) -> "Entourage":
        pts = tuple(points)
        n = len(pts)
        return cls(pts, tuple(tuple(i == j for j in range(n)) for i in range(n)))

    @classmethod
    def full(cls, points: Iterable[str]) -> "Entourage":
        pts = tuple(points)
        n = len(pts)
        return cls(pts, ((True,) * n,) * n)

    @classmethod
    def from_pairs(cls, points: Iterable[str],
                   pairs: Iterable[tuple[str, str]]) -> "Entourage":
        """The diagonal together with the given (x, y) pairs."""
        pts = tuple(points)
        index = {p: i for i, p in enumerate(pts)}
        n = len(pts)
        rows = [[i == j for j in range(n)] for i in range(n)]
        for x, y in pairs:
            if x not in index or y not in index:
                raise DomainError(f"pair ({x}, {y}) uses unknown points")
            rows[index[x]][index[y]] = True
        return cls(pts, tuple(tuple(row) for row in rows))

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def __contains__(self, pair: tuple[str, str]) -> bool:
        x, y = pair
        try:
            return self.relation[self.index[x]][self.index[y]]
        except KeyError as exc:
            raise DomainError(f"unknown point {exc.args[0]!r}") from exc

    def pairs(self) -> Iterator[tuple[str, str]]:
        for i, row in enumerate(self.relation):
            for j, hit in enumerate(row):
                if hit:
                    yield self.points[i], self.points[j]

    def compose(self, other: "Entourage") -> "Entourage":
        if self.points != other.points:
            raise DomainError("entourages live on different point lists")
        n = len(self.points)
        rows = tuple(
            tuple(any(self.relation[i][k] and other.relation[k][j]
                      for k in range(n)) for j in range(n))
            for i in range(n))
        return Entourage(self.points, rows)

    def subset_of(self, other: "Entourage") -> bool:
        if self.points != other.points:
            raise DomainError("entourages live on different point lists")
        return all(not a or b
                   for ra, rb in zip(self.relation, other.relation)
                   for a, b in zip(ra, rb))

    def is_transitive(self) -> bool:
        return self.compose(self).subset_of(self)

    def is_full(self) -> bool:
        return all(all(row) for row in self.relation)

    def to_json_dict(self) -> dict:
        return {"points": list(self.points),
                "relation": [[1 if x else 0 for x in row] for row in self.relation]}

    @classmethod
    def from_json_dict(cls, obj) -> "Entourage":
        if not isinstance(obj, dict):
            raise FormatError("entourage document must be a JSON object")
        unknown = set(obj) - {"points", "relation"}
        if unknown:
            raise FormatError(f"unknown entourage fields: {sorted(unknown)}")
        if "points" not in obj or "relation" not in obj:
            raise FormatError("entourage document needs 'points' and 'relation'")
        rows = obj["relation"]
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise FormatError("'relation' must be a row-major 0/1 matrix")
        for row in rows:
            for x in row:
                if x not in (0, 1):
                    raise FormatError(f"relation entries must be 0 or 1, got {x!r}")
        try:
            return cls(tuple(obj["points"]),
                       tuple(tuple(bool(x) for x in row) for row in rows))
        except DomainError as exc:
            raise FormatError(str(exc)) from exc


def compose(u: Entourage, v: Entourage) -> Entourage:
    """Relational composition, left to right."""
    return u.compose(v)


@dataclass(frozen=True)
class EntourageSequence:
    """Finite ordered list of entourages over one point set."""

    entourages: tuple[Entourage, ...]

    def __post_init__(self) -> None:
        ents = tuple(self.entourages)
        if not ents:
            raise DomainError("a sequence needs at least one entourage")
        if any(e.points != ents[0].points for e in ents):
            raise DomainError("all entourages must share one point list")
        object.__setattr__(self, "entourages", ents)

    @property
    def points(self) -> tuple[str, ...]:
        return self.entourages[0].points

    def __len__(self) -> int:
        return len(self.entourages)

    def __getitem__(self, i: int) -> Entourage:
        return self.entourages[i]

    def __iter__(self) -> Iterator[Entourage]:
        return iter(self.entourages)

    def tripling_failures(self) -> list[int]:
        """Indices i where entourage i+1 composed three times leaves i."""
        out = []
        for i in range(len(self.entourages) - 1):
            nxt = self.entourages[i + 1]
            if not nxt.compose(nxt).compose(nxt).subset_of(self.entourages[i]):
                out.append(i)
        return out

    def ensure_tripling_chain(self) -> None:
        bad = self.tripling_failures()
        if bad:
            raise DomainError(
                "chain condition fails (triple composition escapes the "
                f"previous entourage) at indices: {bad}")

    def ensure_frink_chain(self) -> None:
        if not self.entourages[0].is_full():
            raise DomainError("a chain for the metric construction must "
                              "start with the full relation")
        self.ensure_tripling_chain()


def load_entourage(path) -> Entourage:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return Entourage.from_json_dict(obj)


def load_sequence(path) -> EntourageSequence:
    """Read a JSON array of entourage file paths, relative to the file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(obj, list) or any(not isinstance(p, str) for p in obj):
        raise FormatError("sequence file must be a JSON array of file paths")
    base = os.path.dirname(os.path.abspath(path))
    return EntourageSequence(tuple(load_entourage(os.path.join(base, rel))
                                   for rel in obj))


def composition_contained(seq: EntourageSequence, k: int,
                          ks: Sequence[int]) -> bool:
    """Whether the composition over positions ``ks`` sits inside position k.

    Preconditions: the sequence is a tripling chain, all indices are
    0-based positions into it, and the 2-adic weights of ``ks`` sum to
    strictly less than the weight of ``k``.  Under those the containment
    always holds; the point of the operation is to compute it anyway and
    expose any broken input.
    """
    seq.ensure_tripling_chain()
    if not ks:
        raise DomainError("need at least one composition index")
    for idx in (k, *ks):
        if not 0 <= idx < len(seq):
            raise DomainError(f"index {idx} outside the sequence")
    weight = sum(Fraction(1, 2 ** idx) for idx in ks)
    if weight >= Fraction(1, 2 ** k):
        raise DomainError(
            f"index weights sum to {weight}, not below {Fraction(1, 2 ** k)}")
    composed = seq[ks[0]]
    for idx in ks[1:]:
        composed = composed.compose(seq[idx])
    return composed.subset_of(seq[k])


def frink_metric(seq: EntourageSequence) -> QPSpace:
    """Exact quasi-pseudometric from a tripling chain.

    A pair's base weight is ``2^-i`` for the deepest chain level i that
    contains it (pairs inside the deepest entourage get the floor weight,
    the honest reading of a finite chain prefix); the distance is the
    cheapest chain of base weights.  For a chain V_0..V_m the result
    satisfies ``V_i <= {d <= 2^-i} <= V_(i-1)`` for 1 <= i <= m-1, and the
    left inclusion for every i.
    """
    seq.ensure_frink_chain()
    points = seq.points
    n = len(points)
    deepest = len(seq) - 1
    weight = [[None] * n for _ in range(n)]
    for level in range(deepest, -1, -1):
        rel = seq[level].relation
        value = Fraction(1, 2 ** level)
        for i in range(n):
            for j in range(n):
                if weight[i][j] is None and rel[i][j]:
                    weight[i][j] = value
    dist = [[Fraction(0) if i == j else weight[i][j] for j in range(n)]
            for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = dist[i][k] + dist[k][j]
                if via < dist[i][j]:
                    dist[i][j] = via
    return QPSpace(points, tuple(tuple(row) for row in dist))


@dataclass(frozen=True)
class FiniteSpace:
    """Finite topology: points plus a family of open sets closed under
    union and intersection and containing the empty and full sets."""

    points: tuple[str, ...]
    opens: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", validate_symbols(self.points))
        family = {frozenset(o) for o in self.opens}
        universe = frozenset(self.points)
        for o in family:
            if not o <= universe:
                raise DomainError(f"open set {sorted(o)} leaves the point set")
        if frozenset() not in family or universe not in family:
            raise DomainError("opens must contain the empty set and the whole set")
        for a, b in combinations(family, 2):
            if a | b not in family:
                raise DomainError(
                    f"opens not closed under union: {sorted(a)} | {sorted(b)}")
            if a & b not in family:
                raise DomainError(
                    f"opens not closed under intersection: {sorted(a)} & {sorted(b)}")
        canon = tuple(sorted(family, key=lambda o: (len(o), sorted(o))))
        object.__setattr__(self, "opens", canon)

    def minimal_open(self, x: str) -> frozenset[str]:
        if x not in self.points:
            raise DomainError(f"unknown point {x!r}")
        out = frozenset(self.points)
        for o in self.opens:
            if x in o:
                out &= o
        return out

    def is_t0(self) -> bool:
        mins = [self.minimal_open(x) for x in self.points]
        return len(set(mins)) == len(mins)

    @classmethod
    def from_json_dict(cls, obj) -> "FiniteSpace":
        if not isinstance(obj, dict):
            raise FormatError("topology document must be a JSON object")
        unknown = set(obj) - {"points", "opens"}
        if unknown:
            raise FormatError(f"unknown topology fields: {sorted(unknown)}")
        if "points" not in obj or "opens" not in obj:
            raise FormatError("topology document needs 'points' and 'opens'")
        opens = obj["opens"]
        if not isinstance(opens, list) or any(not isinstance(o, list) for o in opens):
            raise FormatError("'opens' must be a list of point lists")
        try:
            return cls(tuple(obj["points"]),
                       tuple(frozenset(o) for o in opens))
        except DomainError as exc:
            raise FormatError(str(exc)) from exc


def load_topology(path) -> FiniteSpace:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return FiniteSpace.from_json_dict(obj)


def universal_base(space: FiniteSpace) -> Entourage:
    """The minimal-open-neighborhood relation of a finite T0 topology.

    ``(x, y)`` is related iff y lies in the minimal open set of x.  The
    result is a preorder, idempotent under composition, and the filter of
    its supersets is the finest quasi-uniformity inducing the topology.
    """
    if not space.is_t0():
        raise DomainError("space is not T0: two points share their "
                          "minimal open set")
    rows = tuple(
        tuple(y in space.minimal_open(x) for y in space.points)
        for x in space.points)
    return Entourage(space.points, rows)


def entourage_metric(space: FiniteSpace, v: Entourage) -> QPSpace:
    """Quasi-pseudometric bounded by 1 whose open unit ball refines ``v``.

    Runs the chain construction on [full, v, base, base] for the universal
    base relation, then rescales so the unit ball matches the level of
    ``v`` in the chain and caps at 1.  Requires ``v`` to contain the
    universal base relation.
    """
    if v.points != space.points:
        raise DomainError("entourage and topology use different point lists")
    base = universal_base(space)
    if not base.subset_of(v):
        raise DomainError("entourage must contain the universal base relation")
    seq = EntourageSequence((Entourage.full(space.points), v, base, base))
    rho = frink_metric(seq)
    return rho.scale(Fraction(4)).cap_at_one()


@dataclass(frozen=True)
class PrefixDecomposition:
    """Alternating difference pairs, one from each of the first k
    entourages in order."""

    k: int
    pairs: tuple[tuple[str, str], ...]

    def __str__(self) -> str:
        body = " ".join(f"({x},{y})" for x, y in self.pairs)
        return f"k={self.k} pairs=[{body}]"


@dataclass(frozen=True)
class SubsetDecomposition:
    """Alternating difference pairs over distinct sequence positions
    (1-based in display and in the stored tuple)."""

    positions: tuple[int, ...]
    pairs: tuple[tuple[str, str], ...]

    def __str__(self) -> str:
        body = " ".join(f"({x},{y})" for x, y in self.pairs)
        pos = " ".join(str(p) for p in self.positions)
        return f"positions=[{pos}] pairs=[{body}]"


def _pair_delta(x: str, y: str) -> AbelianWord:
    return AbelianWord.from_mapping({x: -1}) + AbelianWord.from_mapping({y: 1})


def _check_element(g: AbelianWord, points: tuple[str, ...]) -> None:
    missing = [gen for gen in g.generators() if gen not in points]
    if missing:
        raise DomainError(f"element uses unknown generators: {missing}")


def decompose_prefix(g: AbelianWord, seq: EntourageSequence,
                     k_max: int) -> PrefixDecomposition | None:
    """Write g as -x_1+y_1-...-x_k+y_k with pair i drawn from entourage i.

    Tries k = 1..k_max and returns the first (lexicographically least)
    witness found, or None when no decomposition exists within the bound.
    None is not a proof of non-membership for longer prefixes, except
    that an element with nonzero coefficient sum can never decompose.
    """
    _check_element(g, seq.points)
    if not 1 <= k_max <= len(seq):
        raise DomainError(
            f"k_max must lie in 1..{len(seq)}, got {k_max}")
    if g.coefficient_sum() != 0:
        return None
    sorted_pairs = [sorted(e.pairs()) for e in seq]
    for k in range(1, k_max + 1):
        dead: set[tuple[int, AbelianWord]] = set()

        def search(level: int, remaining: AbelianWord, acc: list):
            if level == k:
                return tuple(acc) if remaining.is_identity else None
            if remaining.length() > 2 * (k - level):
                return None
            state = (level, remaining)
            if state in dead:
                return None
            for x, y in sorted_pairs[level]:
                acc.append((x, y))
                hit = search(level + 1, remaining - _pair_delta(x, y), acc)
                if hit is not None:
                    return hit
                acc.pop()
            dead.add(state)
            return None

        found = search(0, g, [])
        if found is not None:
            return PrefixDecomposition(k, found)
    return None


def decompose_subset(g: AbelianWord, seq: EntourageSequence,
                     n: int) -> SubsetDecomposition | None:
    """Write g as at most n difference pairs over distinct positions.

    Searches subset sizes 0..n and, per size, position subsets in
    lexicographic order with one pair per chosen entourage; returns the
    first witness or None.  The search is exhaustive for the given
    sequence, so None means g genuinely has no such decomposition here.
    """
    _check_element(g, seq.points)
    if not 1 <= n <= len(seq):
        raise DomainError(f"n must lie in 1..{len(seq)}, got {n}")
    if g.coefficient_sum() != 0:
        return None
    if g.is_identity:
        return SubsetDecomposition((), ())
    sorted_pairs = [sorted(e.pairs()) for e in seq]
    for size in range(1, n + 1):
        for positions in combinations(range(len(seq)), size):
            dead: set[tuple[int, AbelianWord]] = set()

            def search(level: int, remaining: AbelianWord, acc: list):
                if level == size:
                    return tuple(acc) if remaining.is_identity else None
                if remaining.length() > 2 * (size - level):
                    return None
                state = (level, remaining)
                if state in dead:
                    return None
                for x, y in sorted_pairs[positions[level]]:
                    acc.append((x, y))
                    hit = search(level + 1, remaining - _pair_delta(x, y), acc)
                    if hit is not None:
                        return hit
                    acc.pop()
                dead.add(state)
                return None

            found = search(0, g, [])
            if found is not None:
                return SubsetDecomposition(
                    tuple(p + 1 for p in positions), found)
    return None
