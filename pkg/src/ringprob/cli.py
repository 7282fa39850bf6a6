"""Command-line surface.

Verbs: info, subrings, prob, dist, bounds, isoclinic, generate, verify-all.
Rings are given as ``builtin:name[:params]``, ``builtin:product:a,b`` or a
ring-file path.  Elements are flat indices or, when the ring has a basis,
mixed-radix coordinates written ``(c1,c2,...)``.
"""

from __future__ import annotations

import argparse
import json
import sys

from .rings import FiniteRing, RingError, VALIDATION_CAP
from .subrings import Subring, closure, enumerate_subrings, center, whole_ring
from .probability import pr_distribution, pr_r, pr
from .bounds import check_all, characterize_quotients, smallest_prime
from .catalog import (
    GENERATION_CAP,
    CatalogEntry,
    ParseError,
    default_catalog,
    generate_rings,
    parse_ring_spec,
    serialize_ring,
)
from .isoclinism import find_z_isoclinism, check_invariance
from .verify import VerifyConfig, render_summary, verify_catalog


def _parse_element(ring: FiniteRing, text: str) -> int:
    text = text.strip()
    if text.startswith("("):
        if not text.endswith(")"):
            raise ValueError(f"unbalanced coordinates {text!r}")
        coords = [int(c) for c in text[1:-1].split(",") if c.strip() != ""]
        return ring.index_of(coords)
    return int(text)


def _split_elements(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return parts


def _parse_subring(ring: FiniteRing, text: str | None) -> Subring:
    if text is None:
        return whole_ring(ring)
    gens = [_parse_element(ring, p) for p in _split_elements(text)]
    return closure(ring, gens)


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True) if args.json else text
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _frac(v) -> str:
    return f"{v} = {float(v):.6f}"


def cmd_info(args) -> int:
    ring = parse_ring_spec(args.ring, cap=args.validation_cap)
    z = center(ring)
    payload = {
        "name": ring.name,
        "order": ring.order,
        "commutative": ring.is_commutative(),
        "center": list(z.members),
        "moduli": list(ring.basis.moduli) if ring.basis else None,
        "smallest_prime": smallest_prime(ring.order),
        "pr": pr(whole_ring(ring), whole_ring(ring)).to_json(),
    }
    value = pr(whole_ring(ring), whole_ring(ring))
    text = "\n".join(
        [
            f"ring {ring.name}: order {ring.order}",
            f"commutative: {ring.is_commutative()}",
            f"center: {list(z.members)}",
            f"moduli: {list(ring.basis.moduli) if ring.basis else '-'}",
            f"Pr = {value.fraction} = {value.decimal()}",
        ]
    )
    _emit(args, payload, text)
    return 0


def cmd_subrings(args) -> int:
    ring = parse_ring_spec(args.ring, cap=args.validation_cap)
    subs = enumerate_subrings(ring)
    payload = {
        "ring": ring.name,
        "count": len(subs),
        "subrings": [list(s.members) for s in subs],
    }
    text = "\n".join(
        [f"{len(subs)} subrings of {ring.name}"]
        + [f"  {list(s.members)}" for s in subs]
    )
    _emit(args, payload, text)
    return 0


def cmd_prob(args) -> int:
    ring = parse_ring_spec(args.ring, cap=args.validation_cap)
    S = _parse_subring(ring, args.s)
    K = _parse_subring(ring, args.k)
    r = _parse_element(ring, args.r) if args.r else 0
    value = pr_r(S, K, r)
    payload = {
        "ring": ring.name,
        "s": list(S.members),
        "k": list(K.members),
        "r": r,
        "pr_r": value.to_json(),
    }
    _emit(args, payload, f"Pr_{r}(S,K) = {value.fraction} = {value.decimal()}")
    return 0


def cmd_dist(args) -> int:
    ring = parse_ring_spec(args.ring, cap=args.validation_cap)
    S = _parse_subring(ring, args.s)
    K = _parse_subring(ring, args.k)
    dist = pr_distribution(S, K)
    payload = {
        "ring": ring.name,
        "s": list(S.members),
        "k": list(K.members),
        "entries": {str(r): v.to_json() for r, v in dist.entries.items()},
        "support": sorted(dist.support),
    }
    lines = [f"distribution over S x K in {ring.name}:"]
    lines += [
        f"  r={r}: {v.fraction} = {v.decimal()}" for r, v in dist.entries.items()
    ]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_bounds(args) -> int:
    ring = parse_ring_spec(args.ring, cap=args.validation_cap)
    S = _parse_subring(ring, args.s)
    K = _parse_subring(ring, args.k)
    r = _parse_element(ring, args.r) if args.r else 0
    report = check_all(S, K, r)
    records = report.checks + characterize_quotients(S, K)
    payload = report.to_json()
    payload["checks"] = [rec.to_json() for rec in records]
    lines = [
        f"bounds for S={list(S.members)} K={list(K.members)} r={r} "
        f"(p={report.smallest_prime})"
    ]
    for rec in records:
        if not rec.applicable:
            lines.append(f"  [-] {rec.name}: not applicable")
            continue
        status = "ok" if rec.ok() else "FAILED"
        lines.append(
            f"  [{'x' if rec.ok() else '!'}] {rec.name}: "
            f"{rec.lhs} {rec.relation} {rec.rhs} {status}"
        )
    failed = any(not rec.ok() for rec in records)
    _emit(args, payload, "\n".join(lines))
    return 1 if failed else 0


def cmd_isoclinic(args) -> int:
    ring1 = parse_ring_spec(args.ring, cap=args.validation_cap)
    ring2 = parse_ring_spec(args.ring2, cap=args.validation_cap)
    S1 = _parse_subring(ring1, args.s)
    K1 = _parse_subring(ring1, args.k)
    S2 = _parse_subring(ring2, args.s2)
    K2 = _parse_subring(ring2, args.k2)
    witness = find_z_isoclinism(S1, K1, S2, K2)
    if witness is None:
        _emit(args, {"witness": None}, "no witness: the pairs are not isoclinic")
        return 1
    records = check_invariance(witness)
    payload = {
        "witness": witness.to_json(),
        "invariance": [rec.to_json() for rec in records],
    }
    lines = ["witness found", f"phi: {witness.phi.to_json()}", f"psi: {witness.psi.to_json()}"]
    lines += [
        f"  Pr_{rec.witness['r']} = {rec.lhs} = Pr_{rec.witness['psi_r']} "
        f"{'ok' if rec.ok() else 'FAILED'}"
        for rec in records
    ]
    _emit(args, payload, "\n".join(lines))
    return 0 if all(rec.ok() for rec in records) else 1


def cmd_generate(args) -> int:
    orders = [args.order] if args.order else list(range(1, args.max_order + 1))
    entries = []
    for order in orders:
        for ring in generate_rings(order, cap=max(args.max_order, GENERATION_CAP, args.order or 0)):
            entries.append(CatalogEntry(ring.name, ring, "generated"))
    if args.serialize:
        text = "\n".join(serialize_ring(e) for e in entries)
        payload = {"rings": [serialize_ring(e) for e in entries]}
    else:
        lines = [
            f"{e.name}: order {e.ring.order}, moduli {list(e.ring.basis.moduli)}, "
            f"{'commutative' if e.ring.is_commutative() else 'non-commutative'}"
            for e in entries
        ]
        text = "\n".join([f"{len(entries)} rings"] + lines)
        payload = {
            "count": len(entries),
            "rings": [
                {
                    "name": e.name,
                    "order": e.ring.order,
                    "moduli": list(e.ring.basis.moduli),
                    "commutative": e.ring.is_commutative(),
                }
                for e in entries
            ],
        }
    _emit(args, payload, text)
    return 0


def cmd_verify_all(args) -> int:
    entries = default_catalog(gen_max_order=args.gen_order, max_order=args.max_order)
    for spec in args.ring or []:
        ring = parse_ring_spec(spec, cap=args.validation_cap)
        entries.append(CatalogEntry(ring.name, ring, "file"))
    config = VerifyConfig(
        r_mode=args.r_mode, skip=frozenset(args.skip or []), jobs=args.jobs
    )
    report, exit_code = verify_catalog(entries, config)
    if args.json:
        out = json.dumps(report, indent=2, sort_keys=True)
    else:
        out = render_summary(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        print(render_summary(report))
    else:
        print(out)
    return exit_code


def _add_ring_flags(sub, second_ring=False) -> None:
    sub.add_argument("--ring", required=True, help="builtin:name[:params] or ring file path")
    sub.add_argument("--s", help="generators of S (comma separated; coords in parens)")
    sub.add_argument("--k", help="generators of K")
    if second_ring:
        sub.add_argument("--ring2", required=True, help="second ring spec")
        sub.add_argument("--s2", help="generators of S2")
        sub.add_argument("--k2", help="generators of K2")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ringprob",
        description="Exact commuting probabilities over small finite rings",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--out", help="write output to a file")
    common.add_argument(
        "--validation-cap",
        type=int,
        default=VALIDATION_CAP,
        help="max ring order for exhaustive validation",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("info", help="ring summary", parents=[common])
    p.add_argument("--ring", required=True)
    p.set_defaults(func=cmd_info)

    p = subs.add_parser("subrings", help="list every subring", parents=[common])
    p.add_argument("--ring", required=True)
    p.set_defaults(func=cmd_subrings)

    p = subs.add_parser("prob", help="Pr_r(S,K)", parents=[common])
    _add_ring_flags(p)
    p.add_argument("--r", help="target element (index or coords)")
    p.set_defaults(func=cmd_prob)

    p = subs.add_parser("dist", help="full commutator distribution", parents=[common])
    _add_ring_flags(p)
    p.set_defaults(func=cmd_dist)

    p = subs.add_parser(
        "bounds", help="run every bound check on (S,K,r)", parents=[common]
    )
    _add_ring_flags(p)
    p.add_argument("--r", help="target element (index or coords)")
    p.set_defaults(func=cmd_bounds)

    p = subs.add_parser(
        "isoclinic", help="search for an isoclinism witness", parents=[common]
    )
    _add_ring_flags(p, second_ring=True)
    p.set_defaults(func=cmd_isoclinic)

    p = subs.add_parser(
        "generate", help="generate rings up to isomorphism", parents=[common]
    )
    p.add_argument("--order", type=int, help="single order")
    p.add_argument("--max-order", type=int, default=GENERATION_CAP)
    p.add_argument("--serialize", action="store_true", help="emit ring files")
    p.set_defaults(func=cmd_generate)

    p = subs.add_parser(
        "verify-all", help="run the whole verification harness", parents=[common]
    )
    p.add_argument("--max-order", type=int, default=16, help="catalog order cap")
    p.add_argument("--gen-order", type=int, default=GENERATION_CAP)
    p.add_argument("--r-mode", choices=("all", "zero"), default="all")
    p.add_argument("--ring", action="append", help="extra ring spec (repeatable)")
    p.add_argument("--skip", action="append", help="check name to exclude (repeatable)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify_all)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RingError, ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
