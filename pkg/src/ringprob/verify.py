"""Whole-catalog verification harness.

Runs the probability cross-checks, every bound and characterization, the
structural lemmas, and the designated isoclinism fixtures over a catalog of
rings.  Work items are independent per ring, so the harness can fan out over
a process pool; reports merge deterministically (rings sorted by order and
name, failures in discovery order within a ring).
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .rings import FiniteRing, RingError, direct_product
from .subrings import (
    Subring,
    centralizer_data,
    enumerate_subrings,
    is_ideal,
    quotient_group,
    relative_center,
    t_set,
    whole_ring,
)
from .probability import pair_tally, pr_r_product
from .bounds import (
    CheckRecord,
    _record,
    _bool_record,
    _pair_data,
    check_all,
    check_centralizer_quotient,
    check_factor_inequality,
    check_nested,
    characterize_quotients,
)
from .catalog import CatalogEntry, builtin, default_catalog
from .isoclinism import (
    GroupIso,
    check_invariance,
    check_pairwise_isoclinism,
    find_z_isoclinism,
    quotient_view,
    subgroup_view,
    verify_witness,
)

MAX_FAILURES_PER_RING = 50


@dataclass
class VerifyConfig:
    r_mode: str = "all"  # all | zero
    skip: frozenset[str] = frozenset()
    jobs: int = 1
    max_failures: int = MAX_FAILURES_PER_RING


@dataclass
class RingResult:
    name: str
    order: int
    error: str | None = None
    pairs: int = 0
    counts: dict[str, list[int]] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    failures_truncated: int = 0

    def to_json(self) -> dict:
        return {
            "ring": self.name,
            "order": self.order,
            "error": self.error,
            "pairs": self.pairs,
            "counts": {k: list(v) for k, v in sorted(self.counts.items())},
            "failures": self.failures,
            "failures_truncated": self.failures_truncated,
        }


class _Tally:
    """Aggregates CheckRecords into per-name counters and failure details."""

    def __init__(self, result: RingResult, config: VerifyConfig):
        self.result = result
        self.config = config

    def take(self, rec: CheckRecord, **context) -> None:
        counts = self.result.counts.setdefault(rec.name, [0, 0, 0])
        if not rec.applicable:
            counts[2] += 1
            return
        counts[0] += 1
        if rec.ok() or rec.name in self.config.skip:
            if rec.ok():
                counts[1] += 1
            return
        if len(self.result.failures) < self.config.max_failures:
            detail = rec.to_json()
            detail.update(context)
            self.result.failures.append(detail)
        else:
            self.result.failures_truncated += 1

    def seen_failure(self) -> bool:
        return bool(self.result.failures or self.result.failures_truncated)


def _r_values(ring: FiniteRing, config: VerifyConfig):
    return ring.elements() if config.r_mode == "all" else (0,)


def verify_ring(entry: CatalogEntry, config: VerifyConfig) -> RingResult:
    """Run every per-ring check; returns the aggregated result."""
    ring = entry.ring
    result = RingResult(entry.name, ring.order)
    try:
        ring.revalidate()
    except (RingError, ValueError) as exc:
        result.error = str(exc)
        return result
    tally = _Tally(result, config)
    subs = enumerate_subrings(ring)
    result.pairs = len(subs) ** 2
    rvals = tuple(_r_values(ring, config))
    neg = ring.neg_table

    for S in subs:
        for K in subs:
            sk = {"s": list(S.members), "k": list(K.members)}
            pd = _pair_data(S, K)
            denom = S.size * K.size
            # the two computation paths agree for every r
            for r in rvals:
                naive = Fraction(pd.tally.get(r, 0), denom)
                formula = Fraction(
                    sum(
                        centralizer_data(K, s)[0]
                        for s in S.members
                        if r in centralizer_data(K, s)[1]
                    ),
                    denom,
                )
                tally.take(
                    _record("pr_r_two_paths_agree", True, "=", naive, formula),
                    r=r,
                    **sk,
                )
            tally.take(
                _record(
                    "distribution_sums_to_one",
                    True,
                    "=",
                    Fraction(sum(pd.tally.values()), denom),
                    Fraction(1),
                ),
                **sk,
            )
            # distribution support: nonzero exactly on attained values
            tally.take(
                _bool_record(
                    "distribution_support_exact",
                    True,
                    ok=all(c > 0 for c in pd.tally.values()),
                ),
                **sk,
            )
            if S.mask <= K.mask:
                rev = _pair_data(K, S)
                for r in rvals:
                    tally.take(
                        _record(
                            "pr_symmetry_negated_element",
                            True,
                            "=",
                            Fraction(pd.tally.get(r, 0), denom),
                            Fraction(rev.tally.get(neg[r], 0), denom),
                        ),
                        r=r,
                        **sk,
                    )
            # bounds and characterizations
            for rec in characterize_quotients(S, K):
                tally.take(rec, **sk)
            for r in rvals:
                for rec in check_all(S, K, r).checks:
                    tally.take(rec, r=r, **sk)
            # a non-commutative subring never has a cyclic central quotient
            if pd.s_in_k and len(_pair_data(S, S).commset) > 1:
                qtype = quotient_group(S, pd.z_sk).iso_type
                tally.take(
                    _bool_record(
                        "noncommutative_central_quotient_not_cyclic",
                        True,
                        ok=len(qtype) != 1,
                        witness={"iso_type": list(qtype)},
                    ),
                    **sk,
                )

    # image size and solution-set structure, per (element, subring)
    comm = ring.commutator_table()
    for K in subs:
        for x in ring.elements():
            cent, img = centralizer_data(K, x)
            tally.take(
                _record(
                    "commutator_image_size_identity",
                    True,
                    "=",
                    Fraction(len(img) * cent),
                    Fraction(K.size),
                ),
                x=x,
                k=list(K.members),
            )
            solutions: dict[int, set[int]] = {}
            for k in K.members:
                solutions.setdefault(comm[x][k], set()).add(k)
            cent_members = [k for k in K.members if comm[x][k] == 0]
            coset_ok = set(solutions) == set(img)
            for r, sol in solutions.items():
                t0 = min(sol)
                coset_ok = coset_ok and sol == {ring.add(t0, c) for c in cent_members}
                coset_ok = coset_ok and len(sol) == cent
            tally.take(
                _bool_record("solution_set_coset_structure", True, ok=coset_ok),
                x=x,
                k=list(K.members),
            )

    # nested-pair bounds along the subring lattice, against the whole ring
    R = whole_ring(ring)
    inclusions = [
        (A, B)
        for A in subs
        for B in subs
        if A.mask != B.mask and A.mask & B.mask == A.mask
    ]
    for A, B in inclusions:
        for r in rvals:
            for rec in check_nested(A, B, R, R, r):
                tally.take(rec, r=r, s1=list(A.members), s2=list(B.members))
            for rec in check_nested(R, R, A, B, r):
                tally.take(rec, r=r, k1=list(A.members), k2=list(B.members))

    # ideal-driven checks
    ideals = [I for I in subs if is_ideal(ring, I)]
    for I in ideals:
        for S in subs:
            for K in subs:
                if I.mask & S.mask & K.mask == I.mask:
                    tally.take(
                        check_factor_inequality(S, K, I),
                        ideal=list(I.members),
                        s=list(S.members),
                        k=list(K.members),
                    )
        for H in subs:
            if I.mask & H.mask == I.mask:
                for x in ring.elements():
                    tally.take(
                        check_centralizer_quotient(H, I, x),
                        ideal=list(I.members),
                        h=list(H.members),
                        x=x,
                    )
    return result


def _designated_isoclinism(config: VerifyConfig) -> RingResult:
    """Fixture isoclinism suite: witness search, invariance, the pairwise
    commuting square, and a negative control."""
    result = RingResult("isoclinism-fixtures", 0)
    tally = _Tally(result, config)
    nc4a = builtin("nc4a")
    prod = direct_product(nc4a, builtin("zn", (2,)), name="nc4axz2")
    z4 = builtin("zn", (4,))

    s1 = k1 = whole_ring(nc4a)
    s2 = k2 = whole_ring(prod)
    witness = find_z_isoclinism(s1, k1, s2, k2)
    tally.take(
        _bool_record(
            "isoclinism_witness_found",
            True,
            ok=witness is not None and verify_witness(witness),
        )
    )
    if witness is not None:
        for rec in check_invariance(witness):
            tally.take(rec, pair="nc4a~nc4axz2")

    ident = find_z_isoclinism(s1, k1, s1, k1)
    tally.take(
        _bool_record(
            "isoclinism_identity_witness",
            True,
            ok=ident is not None and verify_witness(ident),
        )
    )

    control = find_z_isoclinism(s1, k1, whole_ring(z4), whole_ring(z4))
    tally.take(_bool_record("isoclinism_negative_control", True, ok=control is None))

    # independently chosen quotient maps: x -> (x,0) cosets
    qs1 = quotient_group(s1, relative_center(s1, whole_ring(nc4a)))
    qs2 = quotient_group(s2, relative_center(s2, whole_ring(prod)))
    from .subrings import commutator_subgroup

    c1 = commutator_subgroup(s1, k1)
    c2 = commutator_subgroup(s2, k2)
    phi = GroupIso(
        quotient_view(qs1),
        quotient_view(qs2),
        {x: qs2.rep_of(2 * x) for x in qs1.reps},
    )
    psi = GroupIso(
        subgroup_view(nc4a, c1.members),
        subgroup_view(prod, c2.members),
        {x: 2 * x for x in c1.members},
    )
    try:
        recs = check_pairwise_isoclinism(phi, phi, psi, ((s1, k1), (s2, k2)))
        for rec in recs:
            tally.take(rec, pair="nc4a~nc4axz2")
    except RingError as exc:
        tally.take(
            _bool_record("pairwise_square_commutes", True, ok=False, witness={"error": str(exc)})
        )
    return result


def _designated_products(config: VerifyConfig) -> RingResult:
    """Direct-product factorization on the designated fixture products."""
    result = RingResult("product-fixtures", 0)
    tally = _Tally(result, config)
    nc4a = builtin("nc4a")
    z2 = builtin("zn", (2,))
    r_nc = whole_ring(nc4a)
    r_z2 = whole_ring(z2)
    sub_a = Subring(nc4a, 0b0101)  # {0, A}
    cases = [
        (r_nc, r_nc, r_z2, r_z2),
        (sub_a, r_nc, r_z2, r_z2),
        (r_nc, r_nc, r_nc, r_nc),
        (sub_a, r_nc, sub_a, r_nc),
    ]
    for s1, k1, s2, k2 in cases:
        for r1 in s1.parent.elements():
            for r2 in s2.parent.elements():
                try:
                    pr_r_product(s1, k1, r1, s2, k2, r2)
                    ok = True
                except AssertionError:
                    ok = False
                tally.take(
                    _bool_record("pr_product_factorization", True, ok=ok),
                    r=[r1, r2],
                    s=list(s1.members),
                    k=list(k1.members),
                )
    return result


def verify_catalog(
    entries: list[CatalogEntry] | None = None,
    config: VerifyConfig | None = None,
) -> tuple[dict, int]:
    """Run the full harness; returns (report, exit_code)."""
    config = config or VerifyConfig()
    if entries is None:
        entries = default_catalog()
    entries = sorted(entries, key=lambda e: (e.ring.order, e.name))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_verify_star, [(e, config) for e in entries]))
    else:
        results = [verify_ring(e, config) for e in entries]
    results.append(_designated_isoclinism(config))
    results.append(_designated_products(config))

    totals = {"applicable": 0, "held": 0, "inapplicable": 0, "failed": 0}
    by_name: dict[str, list[int]] = {}
    errors = []
    for res in results:
        if res.error:
            errors.append({"ring": res.name, "error": res.error})
            continue
        for name, (app, held, inapp) in res.counts.items():
            agg = by_name.setdefault(name, [0, 0, 0])
            agg[0] += app
            agg[1] += held
            agg[2] += inapp
            totals["applicable"] += app
            totals["held"] += held
            totals["inapplicable"] += inapp
    failed = sum(len(r.failures) + r.failures_truncated for r in results if not r.error)
    totals["failed"] = failed

    if errors:
        exit_code = 2
    elif failed:
        exit_code = 1
    else:
        exit_code = 0
    report = {
        "catalog": [
            {"name": e.name, "order": e.ring.order, "provenance": e.provenance}
            for e in entries
        ],
        "r_mode": config.r_mode,
        "skipped_checks": sorted(config.skip),
        "results": [r.to_json() for r in results],
        "checks_by_name": {k: list(v) for k, v in sorted(by_name.items())},
        "totals": totals,
        "errors": errors,
        "exit_code": exit_code,
    }
    return report, exit_code


def _verify_star(args) -> RingResult:
    return verify_ring(*args)


def render_summary(report: dict) -> str:
    """Human-readable summary of a verification report."""
    lines = []
    totals = report["totals"]
    lines.append(
        f"catalog: {len(report['catalog'])} rings, r_mode={report['r_mode']}"
    )
    for name, (app, held, inapp) in report["checks_by_name"].items():
        flag = "ok" if held == app else f"FAILED {app - held}"
        lines.append(f"  {name:45s} {held}/{app} held ({inapp} inapplicable) {flag}")
    for res in report["results"]:
        if res["error"]:
            lines.append(f"ERROR {res['ring']}: {res['error']}")
        for f in res["failures"]:
            ctx = {k: v for k, v in f.items() if k not in ("name", "applicable")}
            lines.append(f"FAIL {res['ring']} {f['name']}: {json.dumps(ctx, sort_keys=True)}")
        if res["failures_truncated"]:
            lines.append(
                f"... {res['failures_truncated']} more failures in {res['ring']}"
            )
    lines.append(
        f"totals: {totals['held']}/{totals['applicable']} held, "
        f"{totals['failed']} failed, {totals['inapplicable']} inapplicable"
    )
    lines.append(f"exit code {report['exit_code']}")
    return "\n".join(lines)
