"""End-to-end acceptance suite over the standard small-ring catalog.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or in the
captured output of a failing run).  Every comparison is exact; there are no
tolerances anywhere.
"""

from fractions import Fraction

import pytest

from ringprob import (
    builtin,
    center,
    centralizer,
    check_centralizer_quotient,
    check_factor_inequality,
    closure,
    commutator_image,
    commutator_subgroup,
    direct_product,
    enumerate_subrings,
    find_z_isoclinism,
    is_ideal,
    characterize_quotients,
    pr,
    pr_distribution,
    pr_r_formula,
    pr_r_naive,
    pr_r_product,
    check_invariance,
    quotient_group,
    relative_center,
    t_set,
    verify_catalog,
    verify_witness,
    whole_ring,
    zero_subring,
)
from ringprob.verify import VerifyConfig

A, B = 2, 1


def report(criterion: str, ok: bool, detail: str = "") -> None:
    tail = f" ({detail})" if detail else ""
    print(f"{'PASS' if ok else 'FAIL'} {criterion}{tail}")


def test_criterion_1_formula_equivalence(catalog):
    """Both computation paths agree on every (ring, S, K, r) in the catalog."""
    mismatches = 0
    pairs = 0
    for entry in catalog:
        ring = entry.ring
        subs = enumerate_subrings(ring)
        for S in subs:
            for K in subs:
                pairs += 1
                for r in ring.elements():
                    if pr_r_naive(S, K, r) != pr_r_formula(S, K, r):
                        mismatches += 1
    ok = mismatches == 0
    report(
        "criterion 1: naive tally == centralizer formula",
        ok,
        f"{pairs} subring pairs across {len(catalog)} rings",
    )
    assert ok


def test_criterion_2_fixture_values(nc4a):
    """The pinned fixture probabilities, confirmed by the independent tally."""
    R = whole_ring(nc4a)
    S = closure(nc4a, [A])

    def tally(s_members, k_members, r):
        hits = 0
        for s in s_members:
            for k in k_members:
                if nc4a.sub(nc4a.mul(s, k), nc4a.mul(k, s)) == r:
                    hits += 1
        return Fraction(hits, len(s_members) * len(k_members))

    expected = [
        (R, R, 0, Fraction(5, 8)),
        (R, R, B, Fraction(3, 8)),
        (S, R, 0, Fraction(3, 4)),
        (S, R, B, Fraction(1, 4)),
    ]
    ok = True
    for s_sub, k_sub, r, value in expected:
        ok = ok and tally(s_sub.members, k_sub.members, r) == value
        ok = ok and pr_r_naive(s_sub, k_sub, r) == value
        ok = ok and pr_r_formula(s_sub, k_sub, r) == value
    ok = ok and pr(R, R) == Fraction(5, 8) and pr(S, R) == Fraction(3, 4)
    report("criterion 2: fixture probabilities", ok, "5/8, 3/8, 3/4, 1/4")
    assert ok


def test_criterion_3_bound_suite(catalog):
    """Every applicable bound check holds and verify-all exits 0.

    One implemented inequality (pr_r_lower_center_pair_double) is falsified
    by small catalog instances; it is evaluated as stated rather than
    weakened, so this criterion reports the failure honestly.
    """
    report_doc, exit_code = verify_catalog(catalog, VerifyConfig())
    failing = {
        name: (app, held)
        for name, (app, held, _) in report_doc["checks_by_name"].items()
        if held != app
    }
    ok = exit_code == 0
    report(
        "criterion 3: bound suite exit 0",
        ok,
        f"failing checks: {sorted(failing)}" if failing else "all held",
    )
    assert ok, (
        f"verify-all exited {exit_code}; the only failing check is expected to be "
        f"the falsified doubled center-pair lower bound: {failing}"
    )


def test_criterion_3_supplement_all_other_checks_hold(catalog):
    """Excluding the single falsified inequality, the whole suite is green."""
    config = VerifyConfig(skip=frozenset({"pr_r_lower_center_pair_double"}))
    report_doc, exit_code = verify_catalog(catalog, config)
    failing = {
        name: (app, held)
        for name, (app, held, _) in report_doc["checks_by_name"].items()
        if held != app and name not in config.skip
    }
    ok = exit_code == 0 and not failing
    report(
        "criterion 3 (supplement): every other check holds",
        ok,
        f"{report_doc['totals']['held']}/{report_doc['totals']['applicable']} held",
    )
    assert ok


def test_criterion_4_characterizations(nc4a):
    """Quotient characterizations at the special values 3/4 and 5/8."""
    R = whole_ring(nc4a)
    S = closure(nc4a, [A])
    recs = {rec.name: rec for rec in characterize_quotients(S, R)}
    rec = recs["pr_value_forces_cyclic_central_quotients"]
    ok = (
        rec.applicable
        and rec.ok()
        and rec.witness["s_quotient"] == [2]
        and rec.witness["k_quotient"] == [2]
        and rec.witness["s_equals_k"] is False
    )
    recs_full = {rec.name: rec for rec in characterize_quotients(R, R)}
    rec2 = recs_full["pr_value_forces_rank_two_quotient"]
    ok = ok and rec2.applicable and rec2.ok() and rec2.witness["s_quotient"] == [2, 2]
    report("criterion 4: quotient characterizations", ok, "[2],[2] and [2,2]")
    assert ok


def test_criterion_5_isoclinism(nc4a, nc4axz2, z4):
    """Witness for the product extension; exact invariance; negative control."""
    s1 = k1 = whole_ring(nc4a)
    s2 = k2 = whole_ring(nc4axz2)
    w = find_z_isoclinism(s1, k1, s2, k2)
    ok = w is not None and verify_witness(w)
    values = {}
    if ok:
        for rec in check_invariance(w):
            values[rec.witness["r"]] = (rec.lhs, rec.rhs, rec.ok())
        ok = values[0] == (Fraction(5, 8), Fraction(5, 8), True)
        ok = ok and values[B] == (Fraction(3, 8), Fraction(3, 8), True)
    control = find_z_isoclinism(s1, k1, whole_ring(z4), whole_ring(z4))
    ok = ok and control is None
    report("criterion 5: isoclinism invariance", ok, "5/8=5/8, 3/8=3/8, control none")
    assert ok


def test_criterion_6_symmetry_and_products(catalog, nc4a):
    """Distribution normalization, negation symmetry, product factorization."""
    ok = True
    for entry in catalog:
        ring = entry.ring
        subs = enumerate_subrings(ring)
        for S in subs:
            for K in subs:
                dist = pr_distribution(S, K)
                ok = ok and dist.total() == 1
                for r in dist.support:
                    ok = ok and pr_r_naive(S, K, r) == pr_r_naive(K, S, ring.neg(r))
    R = whole_ring(nc4a)
    z2 = builtin("zn", (2,))
    Rz = whole_ring(z2)
    for r1 in nc4a.elements():
        for r2 in z2.elements():
            pr_r_product(R, R, r1, Rz, Rz, r2)  # raises on mismatch
        for r2 in nc4a.elements():
            pr_r_product(R, R, r1, R, R, r2)
    report("criterion 6: symmetry and product factorization", ok)
    assert ok


def test_criterion_7_structural_lemmas(catalog):
    """Image-size identity, coset structure, centralizer projection, and
    non-cyclic central quotients, across the whole catalog."""
    ok = True
    for entry in catalog:
        ring = entry.ring
        comm = ring.commutator_table()
        subs = enumerate_subrings(ring)
        R = whole_ring(ring)
        for K in subs:
            for x in ring.elements():
                img = commutator_image(x, K)
                cent = centralizer(K, x)
                ok = ok and img.size * cent.size == K.size
                for r in ring.elements():
                    sol = t_set(x, r, K)
                    if sol:
                        t0 = min(sol)
                        ok = ok and sol == {ring.add(t0, c) for c in cent.members}
                    else:
                        ok = ok and r not in img
        ideals = [I for I in subs if is_ideal(ring, I)]
        for N in ideals:
            for H in subs:
                if N.mask & H.mask == N.mask:
                    for x in ring.elements():
                        ok = ok and check_centralizer_quotient(H, N, x).ok()
        for S in subs:
            for K in subs:
                if S.mask & K.mask != S.mask:
                    continue
                noncomm = any(
                    comm[a][b] for a in S.members for b in S.members
                )
                if noncomm:
                    qt = quotient_group(S, relative_center(S, K)).iso_type
                    ok = ok and len(qt) != 1
    report("criterion 7: structural lemmas", ok)
    assert ok


def test_criterion_8_subring_oracle(catalog):
    """Closure-based enumeration equals the power-set scan for order <= 16."""
    import itertools

    checked = 0
    ok = True
    for entry in catalog:
        ring = entry.ring
        if ring.order > 16:
            continue
        checked += 1
        n = ring.order
        add, mul, neg = ring.add_table, ring.mul_table, ring.neg_table
        oracle = set()
        for size in (d for d in range(1, n + 1) if n % d == 0):
            for rest in itertools.combinations(range(1, n), size - 1):
                members = (0,) + rest
                inside = set(members)
                good = all(neg[x] in inside for x in members) and all(
                    add[x][y] in inside and mul[x][y] in inside
                    for x in members
                    for y in members
                )
                if good:
                    oracle.add(members)
        ours = {s.members for s in enumerate_subrings(ring)}
        ok = ok and ours == oracle
    report("criterion 8: subring enumeration oracle", ok, f"{checked} rings")
    assert ok
