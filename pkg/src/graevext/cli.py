"""Command line frontend.

One computation per invocation, file-based inputs, deterministic output.
Values print as exact rationals (``p/q``, integers without the ``/1``).
Exit codes: 0 success, 1 domain or format error, 2 search cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import CapExceeded, DomainError
from .norms import (DEFAULT_ABELIAN_CAP, DEFAULT_FREE_CAP, abelian_norm,
                    ball_member, graev_norm)
from .qpspace import load_space, parse_rational
from .quniform import (composition_contained, decompose_prefix,
                       decompose_subset, frink_metric, load_sequence,
                       load_topology, universal_base)
from .schemes import enumerate_schemes
from .words import parse_abelian, parse_word


def _load_space(args):
    space = load_space(args.space)
    if getattr(args, "cap_at_one", False):
        space = space.cap_at_one()
    return space


def _parse_eps(text: str) -> Fraction:
    eps = parse_rational(text)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    return eps


def cmd_validate(args) -> int:
    space = load_space(args.space)
    violations = space.validate(require_bounded=args.bounded)
    if not violations:
        print("valid")
        return 0
    for violation in violations:
        print(f"violation: {violation}")
    return 1


def cmd_norm(args) -> int:
    space = _load_space(args)
    if args.abelian:
        element = parse_abelian(args.word, space.points)
        cap = args.cap if args.cap is not None else DEFAULT_ABELIAN_CAP
        value, witness = abelian_norm(space, element, cap)
    else:
        element = parse_word(args.word, space.points)
        cap = args.cap if args.cap is not None else DEFAULT_FREE_CAP
        value, witness = graev_norm(space, element, cap)
    print(value)
    if args.witness:
        print(witness)
    return 0


def cmd_dist(args) -> int:
    space = _load_space(args)
    if args.abelian:
        src = parse_abelian(args.src, space.points)
        dst = parse_abelian(args.dst, space.points)
        cap = args.cap if args.cap is not None else DEFAULT_ABELIAN_CAP
        value, witness = abelian_norm(space, dst - src, cap)
    else:
        src = parse_word(args.src, space.points)
        dst = parse_word(args.dst, space.points)
        cap = args.cap if args.cap is not None else DEFAULT_FREE_CAP
        value, witness = graev_norm(space, src.inverse() * dst, cap)
    print(value)
    if args.witness:
        print(witness)
    return 0


def cmd_member(args) -> int:
    space = _load_space(args)
    eps = _parse_eps(args.eps)
    if args.abelian:
        element = parse_abelian(args.word, space.points)
    else:
        element = parse_word(args.word, space.points)
    print("true" if ball_member(space, element, eps, args.cap) else "false")
    return 0


def cmd_schemes(args) -> int:
    count = 0
    for scheme in enumerate_schemes(args.n):
        print(scheme)
        count += 1
    print(f"count: {count}")
    return 0


def cmd_frink(args) -> int:
    seq = load_sequence(args.chain)
    space = frink_metric(seq)
    print(json.dumps(space.to_json_dict(), indent=2, sort_keys=True))
    return 0


def cmd_lemma5(args) -> int:
    seq = load_sequence(args.chain)
    try:
        ks = [int(x) for x in args.ks.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"bad index list {args.ks!r}") from exc
    print("true" if composition_contained(seq, args.k, ks) else "false")
    return 0


def cmd_ubase(args) -> int:
    space = load_topology(args.topology)
    base = universal_base(space)
    print(json.dumps(base.to_json_dict(), indent=2, sort_keys=True))
    return 0


def cmd_wmember(args) -> int:
    seq = load_sequence(args.seq)
    element = parse_abelian(args.word, seq.points)
    if args.n is not None:
        witness = decompose_subset(element, seq, args.n)
        print(f"member: {witness}" if witness is not None else "not-member")
    else:
        witness = decompose_prefix(element, seq, args.kmax)
        print(f"member: {witness}" if witness is not None
              else "not-found-within-bound")
    return 0


def _add_space_options(sub, with_cap=True):
    sub.add_argument("--space", required=True, help="space file (JSON)")
    sub.add_argument("--cap-at-one", action="store_true",
                     help="replace every distance above 1 by 1 before use")
    if with_cap:
        sub.add_argument("--cap", type=int, default=None,
                         help="override the search cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graevext",
        description="Exact norms, distances and neighborhood checks on free "
                    "and free abelian groups over finite quasi-pseudometric "
                    "spaces.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("validate", help="check the space axioms")
    p.add_argument("--space", required=True)
    p.add_argument("--bounded", action="store_true",
                   help="also require every distance to be at most 1")
    p.set_defaults(func=cmd_validate)

    p = subs.add_parser("norm", help="norm of a group element")
    _add_space_options(p)
    p.add_argument("--word", required=True)
    p.add_argument("--abelian", action="store_true")
    p.add_argument("--witness", action="store_true",
                   help="also print the minimizing witness")
    p.set_defaults(func=cmd_norm)

    p = subs.add_parser("dist", help="distance between two group elements")
    _add_space_options(p)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--abelian", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_dist)

    p = subs.add_parser("member", help="strict norm ball membership")
    _add_space_options(p)
    p.add_argument("--word", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--abelian", action="store_true")
    p.set_defaults(func=cmd_member)

    p = subs.add_parser("schemes",
                        help="list the non-crossing pairings of 1..2n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_schemes)

    p = subs.add_parser("frink",
                        help="build the chain quasi-pseudometric of an "
                             "entourage sequence")
    p.add_argument("--chain", required=True,
                   help="JSON array of entourage file paths")
    p.set_defaults(func=cmd_frink)

    p = subs.add_parser("lemma5",
                        help="check a composed containment in a tripling chain")
    p.add_argument("--chain", required=True)
    p.add_argument("--k", type=int, required=True,
                   help="0-based position of the containing entourage")
    p.add_argument("--ks", required=True,
                   help="comma-separated 0-based positions to compose")
    p.set_defaults(func=cmd_lemma5)

    p = subs.add_parser("ubase",
                        help="universal base relation of a finite T0 topology")
    p.add_argument("--topology", required=True)
    p.set_defaults(func=cmd_ubase)

    p = subs.add_parser("wmember",
                        help="decompose an abelian element into difference "
                             "pairs from an entourage sequence")
    p.add_argument("--word", required=True)
    p.add_argument("--seq", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int,
                       help="pairs over at most n distinct positions")
    group.add_argument("--kmax", type=int,
                       help="one pair per leading entourage, up to k pairs")
    p.set_defaults(func=cmd_wmember)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
