"""Finite quasi-pseudometric spaces with exact rational distances.

A quasi-pseudometric has a zero diagonal and satisfies the triangle
inequality but need not be symmetric.  Distances here are always
``fractions.Fraction``, so minima, comparisons and equalities are exact.

The module also provides the two extension stages used by the group norms:
first to the point set enlarged by the neutral letter, then to the full
signed alphabet (points, their formal inverses, and the neutral letter).

Space file format (JSON): ``points`` is a list of symbols, ``dist`` a
row-major matrix whose entries are rationals written as ``"p/q"`` or
integers; ``bounded_by_one`` is an optional boolean.  Parsing is strict:
the matrix must be square with an explicit zero diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from .errors import DomainError, FormatError
from .words import Letter, validate_symbols

ONE = Fraction(1)
TWO = Fraction(2)


def parse_rational(value) -> Fraction:
    """Parse a non-negative rational from an int or a ``p/q`` string."""
    if isinstance(value, bool):
        raise FormatError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        out = Fraction(value)
    elif isinstance(value, str):
        try:
            out = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"not a rational: {value!r}") from exc
    else:
        raise FormatError(f"not a rational: {value!r}")
    if out < 0:
        raise FormatError(f"negative value not allowed: {value!r}")
    return out


@dataclass(frozen=True)
class Violation:
    """One failed axiom instance found by ``QPSpace.validate``."""

    kind: str                  # "diagonal" | "triangle" | "bound"
    where: tuple[str, ...]
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at ({', '.join(self.where)}): {self.detail}"


@dataclass(frozen=True)
class QPSpace:
    """Finite point list with a square matrix of exact distances.

    Construction checks shape and non-negativity only; the metric axioms
    are checked by ``validate`` so that broken inputs can be reported
    instead of rejected wholesale.
    """

    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", validate_symbols(self.points))
        n = len(self.points)
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.dist)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise DomainError(
                f"distance matrix must be {n}x{n} to match the point list"
            )
        if any(x < 0 for row in rows for x in row):
            raise DomainError("distances must be non-negative")
        object.__setattr__(self, "dist", rows)

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def d(self, x: str, y: str) -> Fraction:
        try:
            return self.dist[self.index[x]][self.index[y]]
        except KeyError as exc:
            raise DomainError(f"unknown point {exc.args[0]!r}") from exc

    def validate(self, require_bounded: bool = False) -> list[Violation]:
        """Report every violated axiom instance; empty means valid."""
        out: list[Violation] = []
        pts, dist = self.points, self.dist
        n = len(pts)
        for i in range(n):
            if dist[i][i] != 0:
                out.append(Violation("diagonal", (pts[i],),
                                     f"d({pts[i]}, {pts[i]}) = {dist[i][i]} != 0"))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if dist[i][j] > dist[i][k] + dist[k][j]:
                        out.append(Violation(
                            "triangle", (pts[i], pts[j], pts[k]),
                            f"d({pts[i]}, {pts[j]}) = {dist[i][j]} > "
                            f"{dist[i][k]} + {dist[k][j]}"))
        if require_bounded:
            for i in range(n):
                for j in range(n):
                    if dist[i][j] > 1:
                        out.append(Violation("bound", (pts[i], pts[j]),
                                             f"d({pts[i]}, {pts[j]}) = {dist[i][j]} > 1"))
        return out

    def ensure_valid(self, require_bounded: bool = False) -> None:
        violations = self.validate(require_bounded)
        if violations:
            raise DomainError(
                "invalid quasi-pseudometric space: "
                + "; ".join(str(v) for v in violations)
            )

    def is_bounded_by_one(self) -> bool:
        return all(x <= 1 for row in self.dist for x in row)

    def cap_at_one(self) -> "QPSpace":
        """Pointwise ``min(d, 1)``; stays a valid quasi-pseudometric."""
        return QPSpace(self.points,
                       tuple(tuple(min(x, ONE) for x in row) for row in self.dist))

    def conjugate(self) -> "QPSpace":
        """Transpose: the reversed quasi-pseudometric d'(x, y) = d(y, x)."""
        n = len(self.points)
        return QPSpace(self.points,
                       tuple(tuple(self.dist[j][i] for j in range(n))
                             for i in range(n)))

    def scale(self, factor: Fraction) -> "QPSpace":
        if factor < 0:
            raise DomainError("scale factor must be non-negative")
        return QPSpace(self.points,
                       tuple(tuple(x * factor for x in row) for row in self.dist))

    def to_json_dict(self) -> dict:
        return {
            "points": list(self.points),
            "dist": [[str(x) for x in row] for row in self.dist],
            "bounded_by_one": self.is_bounded_by_one(),
        }

    @classmethod
    def from_json_dict(cls, obj) -> "QPSpace":
        if not isinstance(obj, dict):
            raise FormatError("space document must be a JSON object")
        unknown = set(obj) - {"points", "dist", "bounded_by_one"}
        if unknown:
            raise FormatError(f"unknown space fields: {sorted(unknown)}")
        if "points" not in obj or "dist" not in obj:
            raise FormatError("space document needs 'points' and 'dist'")
        points = obj["points"]
        if not isinstance(points, list):
            raise FormatError("'points' must be a list of symbols")
        dist = obj["dist"]
        if not isinstance(dist, list) or any(not isinstance(r, list) for r in dist):
            raise FormatError("'dist' must be a row-major matrix")
        rows = tuple(tuple(parse_rational(x) for x in row) for row in dist)
        try:
            space = cls(tuple(points), rows)
        except DomainError as exc:
            raise FormatError(str(exc)) from exc
        for i in range(len(space.points)):
            if space.dist[i][i] != 0:
                raise FormatError(
                    f"diagonal entry d({space.points[i]}, {space.points[i]}) "
                    f"must be an explicit 0")
        flag = obj.get("bounded_by_one", False)
        if not isinstance(flag, bool):
            raise FormatError("'bounded_by_one' must be a boolean")
        if flag and not space.is_bounded_by_one():
            raise FormatError("space declares bounded_by_one but has entries > 1")
        return space


def load_space(path) -> QPSpace:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return QPSpace.from_json_dict(obj)


def _point_of(space: QPSpace, letter: Letter) -> str:
    if letter.gen not in space.index:
        raise DomainError(f"unknown generator {letter.gen!r}")
    return letter.gen


def neutral_extension(space: QPSpace, p: Letter, q: Letter) -> Fraction:
    """Stage-one extension to the points plus the neutral letter.

    Zero on the diagonal, the original distance between points, and 1
    whenever the neutral letter is involved.  Requires the space to be
    valid and bounded by 1 for the result to be a quasi-pseudometric.
    """
    for letter in (p, q):
        if not letter.is_neutral and letter.sign < 0:
            raise DomainError(
                f"inverse letter {letter} is outside the stage-one domain")
    if p == q:
        return Fraction(0)
    if not p.is_neutral and not q.is_neutral:
        return space.d(_point_of(space, p), _point_of(space, q))
    if not p.is_neutral:
        _point_of(space, p)
    if not q.is_neutral:
        _point_of(space, q)
    return ONE


def signed_extension(space: QPSpace, p: Letter, q: Letter) -> Fraction:
    """Stage-two extension to the full signed alphabet.

    Cases, tested in order: equal letters cost 0; two non-inverse letters
    fall through to the stage-one extension; two inverse-or-neutral
    letters cost the stage-one distance of the swapped inverses; every
    remaining mixed pair costs 2.  The overlapping case (both letters
    neutral) agrees across branches.
    """
    if p == q:
        if not p.is_neutral:
            _point_of(space, p)
        return Fraction(0)
    if p.sign >= 0 and q.sign >= 0:
        return neutral_extension(space, p, q)
    if p.sign <= 0 and q.sign <= 0:
        return neutral_extension(space, q.inverse(), p.inverse())
    if not p.is_neutral:
        _point_of(space, p)
    if not q.is_neutral:
        _point_of(space, q)
    return TWO
