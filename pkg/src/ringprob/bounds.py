"""Inequality and characterization checks for commuting probabilities.

Every check is guarded by its exact hypotheses and reported either way, so a
vacuously-true record is distinguishable from a verified one.  Where a source
statement is an equivalence, the equality condition is evaluated in both
directions; where it is only a sufficient condition, one direction is
checked.  Structural assertions (isomorphism types, set inclusions) are
encoded as 0/1-valued records with the detail in the witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rings import FiniteRing, RingError, as_index
from .subrings import (
    AdditiveSubgroup,
    NotAnIdeal,
    Subring,
    centralizer,
    centralizer_data,
    commutator_subgroup,
    is_ideal,
    quotient_group,
    quotient_ring,
    relative_center,
    same_parent,
    subring_as_ring,
    whole_ring,
)
from .probability import ProbValue, pair_tally, pr, pr_r_formula


class NotNested(RingError):
    pass


class NotContained(RingError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def smallest_prime(n: int) -> int | None:
    """Least prime divisor of n, or None for n < 2."""
    if n < 2:
        return None
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def _exact_log(value: int, base: int) -> int | None:
    e = 0
    acc = 1
    while acc < value:
        acc *= base
        e += 1
    return e if acc == value else None


@dataclass
class CheckRecord:
    """One verified (or inapplicable) statement instance."""

    name: str
    applicable: bool
    relation: str | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    holds: bool | None = None
    equality_condition_met: bool | None = None
    equality_ok: bool | None = None
    witness: dict | None = None

    def ok(self) -> bool:
        if not self.applicable:
            return True
        return bool(self.holds) and self.equality_ok is not False

    def to_json(self) -> dict:
        def frac(v):
            return None if v is None else {"num": v.numerator, "den": v.denominator}

        out = {
            "name": self.name,
            "applicable": self.applicable,
            "relation": self.relation,
            "lhs": frac(self.lhs),
            "rhs": frac(self.rhs),
            "holds": self.holds,
        }
        if self.equality_condition_met is not None:
            out["equality_condition_met"] = self.equality_condition_met
            out["equality_ok"] = self.equality_ok
        if self.witness:
            out["witness"] = self.witness
        return out


_RELATIONS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "=": lambda a, b: a == b,
}


def _record(
    name: str,
    applicable: bool,
    relation: str | None = None,
    lhs=None,
    rhs=None,
    *,
    eq_condition: bool | None = None,
    eq_mode: str = "iff",
    witness: dict | None = None,
) -> CheckRecord:
    if not applicable:
        return CheckRecord(name, False, relation, witness=witness)
    lhs = Fraction(lhs) if not isinstance(lhs, Fraction) else lhs
    rhs = Fraction(rhs) if not isinstance(rhs, Fraction) else rhs
    holds = _RELATIONS[relation](lhs, rhs)
    eq_ok = None
    if eq_condition is not None:
        attained = lhs == rhs
        eq_ok = (attained == eq_condition) if eq_mode == "iff" else (not eq_condition or attained)
    return CheckRecord(name, True, relation, lhs, rhs, holds, eq_condition, eq_ok, witness)


def _bool_record(name: str, applicable: bool, ok: bool = True, witness: dict | None = None) -> CheckRecord:
    return _record(
        name, applicable, "=", Fraction(int(ok)), Fraction(1), witness=witness
    )


@dataclass
class BoundReport:
    """All per-(S,K,r) checks, with the governing prime."""

    ring_name: str
    s_members: tuple[int, ...]
    k_members: tuple[int, ...]
    r: int | None
    smallest_prime: int | None
    checks: list[CheckRecord] = field(default_factory=list)

    def all_ok(self) -> bool:
        return all(rec.ok() for rec in self.checks)

    def failures(self) -> list[CheckRecord]:
        return [rec for rec in self.checks if not rec.ok()]

    def to_json(self) -> dict:
        return {
            "ring": self.ring_name,
            "s": list(self.s_members),
            "k": list(self.k_members),
            "r": self.r,
            "smallest_prime": self.smallest_prime,
            "checks": [rec.to_json() for rec in self.checks],
        }


class _PairData:
    """Cached per-(S,K) quantities shared by all per-r checks."""

    __slots__ = (
        "S",
        "K",
        "ns",
        "nk",
        "z_sk",
        "z_ks",
        "tally",
        "commset",
        "commsub",
        "xs",
        "xk",
        "prf",
        "s_in_k",
    )

    def __init__(self, S: Subring, K: Subring):
        self.S, self.K = S, K
        self.ns, self.nk = S.size, K.size
        self.z_sk = relative_center(S, K)
        self.z_ks = relative_center(K, S)
        self.tally = pair_tally(S, K)
        self.commset = frozenset(self.tally)
        self.commsub = commutator_subgroup(S, K)
        self.xs = frozenset(s for s in S.members if centralizer_data(K, s)[0] == 1)
        self.xk = frozenset(k for k in K.members if centralizer_data(S, k)[0] == 1)
        self.prf = Fraction(self.tally.get(0, 0), self.ns * self.nk)
        self.s_in_k = S.mask & K.mask == S.mask


def _pair_data(S: Subring, K: Subring) -> _PairData:
    ring = same_parent(S, K)
    key = ("pairdata", S.mask, K.mask)
    data = ring._cache.get(key)
    if data is None:
        data = _PairData(S, K)
        ring._cache[key] = data
    return data


def _images_contained(S: Subring, K: Subring, over_union: bool) -> bool:
    """Whether [x,S] is a subset of [x,K] for all x in S (or S union K)."""
    ring = S.parent
    key = ("imgcontain", S.mask, K.mask, over_union)
    val = ring._cache.get(key)
    if val is None:
        probe = S.mask | K.mask if over_union else S.mask
        val = True
        x = 0
        mask = probe
        while mask:
            low = mask & -mask
            x = low.bit_length() - 1
            mask ^= low
            if not centralizer_data(S, x)[1] <= centralizer_data(K, x)[1]:
                val = False
                break
        ring._cache[key] = val
    return val


def x_set(S: Subring, K: Subring) -> frozenset[int]:
    """The elements s of S whose centralizer in K is exactly {0}."""
    same_parent(S, K)
    return frozenset(s for s in S.members if centralizer_data(K, s)[0] == 1)


def _quotient_type(S: Subring, modulus: Subring) -> tuple[int, ...]:
    ring = S.parent
    key = ("quottype", S.mask, modulus.mask)
    val = ring._cache.get(key)
    if val is None:
        val = quotient_group(S, modulus).iso_type
        ring._cache[key] = val
    return val


def check_all(S: Subring, K: Subring, r) -> BoundReport:
    """Evaluate every per-(S,K,r) bound with its hypothesis guards."""
    ring = same_parent(S, K)
    rr = as_index(ring, r)
    pd = _pair_data(S, K)
    p = smallest_prime(ring.order)
    ns, nk, total = pd.ns, pd.nk, pd.ns * pd.nk
    z, zk = pd.z_sk.size, pd.z_ks.size
    prf = pd.prf
    prr = Fraction(pd.tally.get(rr, 0), total)
    in_set = rr in pd.commset
    nonzero = rr != 0
    recs: list[CheckRecord] = []

    # lower bounds from center-pair cosets (r a nonzero attained value)
    base = Fraction(z * zk, total)
    app = nonzero and in_set
    recs.append(
        _record(
            "pr_r_lower_center_pair",
            app,
            ">=",
            prr,
            base,
            witness={"z_sk": z, "z_ks": zk},
        )
    )
    witness_b = None
    if app and pd.s_in_k:
        # diagnostic: the doubling argument needs a witness pair (s,k) with
        # s outside Z(K,S); record whether one exists
        sep = any(
            rr in centralizer_data(K, s)[1] and s not in pd.z_ks for s in S.members
        )
        witness_b = {"z_sk": z, "z_ks": zk, "separating_pair_exists": sep}
    recs.append(
        _record(
            "pr_r_lower_center_pair_double",
            app and pd.s_in_k,
            ">=",
            prr,
            2 * base,
            witness=witness_b,
        )
    )
    zc = relative_center(whole_ring(ring), whole_ring(ring)).size
    recs.append(
        _record(
            "pr_r_lower_full_ring_triple",
            app and S.is_whole() and K.is_whole(),
            ">=",
            prr,
            Fraction(3 * zc * zc, ring.order * ring.order),
        )
    )

    # Pr_r never exceeds Pr, with equality exactly at r = 0
    recs.append(
        _record("pr_r_at_most_pr", True, "<=", prr, prf, eq_condition=(rr == 0))
    )
    pr_kk = _pair_data(K, K).prf
    recs.append(
        _record(
            "pr_at_most_index_times_pr",
            pd.s_in_k,
            "<=",
            prf,
            Fraction(nk, ns) * pr_kk,
            eq_condition=(S.mask == K.mask),
        )
    )

    if p is None:
        # a one-element ring has no least prime; report the prime-governed
        # checks as inapplicable rather than dropping them
        recs.extend(
            _record(name, False)
            for name in (
                "pr_r_upper_noncentral_share",
                "pr_r_noncentral_share_below_prime",
                "pr_upper_prime_power_center_index",
                "pr_lower_prime_power_center_index_self",
                "pr_lower_zero_centralizer_split",
                "pr_upper_zero_centralizer_split",
                "pr_lower_zero_centralizer_split_swapped",
                "pr_upper_zero_centralizer_split_swapped",
                "pr_upper_classic",
                "pr_upper_three_quarters",
            )
        )
    else:
        mid = Fraction(ns - z, p * ns)
        recs.append(_record("pr_r_upper_noncentral_share", nonzero, "<=", prr, mid))
        recs.append(
            _record("pr_r_noncentral_share_below_prime", nonzero, "<", mid, Fraction(1, p))
        )

        # prime-power center index
        e = _exact_log(ns // z, p)
        app7 = pd.s_in_k and e is not None
        recs.append(
            _record(
                "pr_upper_prime_power_center_index",
                app7,
                "<=",
                prf,
                Fraction(p**e + p - 1, p ** (e + 1)) if app7 else None,
                witness={"exponent": e} if app7 else None,
            )
        )
        app7b = app7 and S.mask == K.mask
        recs.append(
            _record(
                "pr_lower_prime_power_center_index_self",
                app7b,
                ">=",
                prf,
                (Fraction(p) ** e + Fraction(p) ** (e - 1) - 1) / Fraction(p) ** (2 * e - 1)
                if app7b
                else None,
            )
        )

        # split by zero-centralizer elements, both orientations
        xs, xk = len(pd.xs), len(pd.xk)
        recs.append(
            _record(
                "pr_lower_zero_centralizer_split",
                True,
                ">=",
                prf,
                Fraction(z, ns) + Fraction(p * (ns - xs - z) + xs, total),
                witness={"x_s": xs},
            )
        )
        recs.append(
            _record(
                "pr_upper_zero_centralizer_split",
                True,
                "<=",
                prf,
                Fraction((p - 1) * z + ns, p * ns) - Fraction(xs * (nk - p), p * total),
            )
        )
        recs.append(
            _record(
                "pr_lower_zero_centralizer_split_swapped",
                True,
                ">=",
                prf,
                Fraction(zk, nk) + Fraction(p * (nk - xk - zk) + xk, total),
                witness={"x_k": xk},
            )
        )
        recs.append(
            _record(
                "pr_upper_zero_centralizer_split_swapped",
                True,
                "<=",
                prf,
                Fraction((p - 1) * zk + nk, p * nk) - Fraction(xk * (ns - p), p * total),
            )
        )

        app9 = pd.commsub.size > 1
        recs.append(
            _record("pr_upper_classic", app9, "<=", prf, Fraction(2 * p - 1, p * p))
        )
        recs.append(_record("pr_upper_three_quarters", app9, "<=", prf, Fraction(3, 4)))

    # lower bound through the commutator subgroup
    cs = pd.commsub.size
    recs.append(
        _record(
            "pr_lower_commutator_span",
            True,
            ">=",
            prf,
            Fraction(1, cs) * (1 + Fraction(cs - 1, ns // z)),
            witness={"commutator_subgroup_size": cs},
        )
    )
    recs.append(
        _record(
            "pr_above_inverse_commutator_span",
            z != ns,
            ">",
            prf,
            Fraction(1, cs),
        )
    )

    # sandwich between the self-probabilities under image containment
    cond_union = _images_contained(S, K, over_union=True)
    pr_ss = _pair_data(S, S).prf
    recs.append(_record("pr_sandwich_lower", cond_union, "<=", pr_kk, prf))
    recs.append(_record("pr_sandwich_upper", cond_union, "<=", prf, pr_ss))

    s_noncomm = len(_pair_data(S, S).commset) > 1
    cond_s = _images_contained(S, K, over_union=False)
    q = smallest_prime(ns)
    recs.append(
        _record(
            "pr_upper_noncommutative_classic",
            s_noncomm and cond_s and q is not None,
            "<=",
            prf,
            Fraction(q * q + q - 1, q**3) if q is not None else None,
            witness={
                "subring_prime": q,
                "ring_prime": p,
                "primes_differ": q != p,
            },
        )
    )

    return BoundReport(ring.name, S.members, K.members, rr, p, recs)


def check_nested(S1: Subring, S2: Subring, K1: Subring, K2: Subring, r) -> list[CheckRecord]:
    """Monotonicity and refinement bounds over nested pairs S1<=S2, K1<=K2."""
    ring = same_parent(S1, S2, K1, K2)
    if S1.mask & S2.mask != S1.mask or K1.mask & K2.mask != K1.mask:
        raise NotNested("expected S1 inside S2 and K1 inside K2")
    rr = as_index(ring, r)
    recs: list[CheckRecord] = []
    pr_r_11 = pr_r_formula(S1, K1, rr).fraction
    pr_r_22 = pr_r_formula(S2, K2, rr).fraction
    idx = Fraction(S2.size, S1.size) * Fraction(K2.size, K1.size)

    cond_a = all(
        rr not in centralizer_data(K2, s)[1] for s in S2.members if s not in S1
    )
    cond_b = all(
        rr not in centralizer_data(K2, s)[1] or rr in centralizer_data(K1, s)[1]
        for s in S1.members
    )
    cond_c = all(
        centralizer_data(K1, s)[0] == centralizer_data(K2, s)[0]
        for s in S1.members
        if rr in centralizer_data(K1, s)[1]
    )
    recs.append(
        _record(
            "pr_r_nested_index_bound",
            True,
            "<=",
            pr_r_11,
            idx * pr_r_22,
            eq_condition=cond_a and cond_b and cond_c,
        )
    )

    app5 = K1.is_whole() and K2.is_whole()
    recs.append(
        _record(
            "pr_r_nested_full_ring_bound",
            app5,
            "<=",
            pr_r_11,
            Fraction(S2.size, S1.size) * pr(S2, K2).fraction if app5 else None,
            eq_condition=(rr == 0 and S1.mask == S2.mask) if app5 else None,
        )
    )

    app6 = S1.mask == S2.mask
    if app6:
        S = S1
        pr_sk1 = pr(S, K1).fraction
        pr_sk2 = pr(S, K2).fraction
        cond_first = all(
            len(centralizer_data(K1, s)[1]) == len(centralizer_data(K2, s)[1])
            for s in S.members
        )
        recs.append(
            _record(
                "pr_antitone_in_second_argument",
                True,
                ">=",
                pr_sk1,
                pr_sk2,
                eq_condition=cond_first,
            )
        )
        cond_second = all(
            centralizer_data(S, k)[0] == 1 for k in K2.members if k not in K1
        )
        refined = Fraction(K1.size, K2.size) * (
            pr_sk1 + Fraction(K2.size - K1.size, S.size * K1.size)
        )
        recs.append(
            _record(
                "pr_nested_refinement_lower_bound",
                True,
                ">=",
                pr_sk2,
                refined,
                eq_condition=cond_second,
            )
        )
    else:
        recs.append(_record("pr_antitone_in_second_argument", False))
        recs.append(_record("pr_nested_refinement_lower_bound", False))
    return recs


def _prime_from_square_shape(value: Fraction) -> int | None:
    """The prime p with value == (2p-1)/p^2, if one exists."""
    a, b = value.numerator, value.denominator
    p = (a + 1) // 2 if a % 2 == 1 else 0
    return p if p >= 2 and is_prime(p) and p * p == b and 2 * p - 1 == a else None


def _prime_from_cube_shape(value: Fraction) -> int | None:
    """The prime p with value == (p^2+p-1)/p^3, if one exists."""
    b = value.denominator
    p = round(b ** (1 / 3))
    for cand in (p - 1, p, p + 1):
        if cand >= 2 and cand**3 == b and is_prime(cand):
            if value.numerator == cand * cand + cand - 1:
                return cand
    return None


def characterize_quotients(S: Subring, K: Subring) -> list[CheckRecord]:
    """Forward characterizations of special Pr values and their converses."""
    ring = same_parent(S, K)
    pd = _pair_data(S, K)
    p = smallest_prime(ring.order)
    prf = pd.prf
    ns, nk = pd.ns, pd.nk
    recs: list[CheckRecord] = []
    s_type = _quotient_type(S, pd.z_sk)
    s_noncomm = len(_pair_data(S, S).commset) > 1

    q2 = _prime_from_square_shape(prf)
    recs.append(
        _bool_record(
            "pr_value_implies_prime_divides_order",
            q2 is not None,
            ok=(q2 is not None and ring.order % q2 == 0),
            witness={"prime": q2},
        )
    )
    app12 = p is not None and prf == Fraction(2 * p - 1, p * p)
    wit12 = None
    ok12 = True
    if app12:
        k_type = _quotient_type(K, pd.z_ks)
        ok12 = s_type == (p,) and k_type == (p,) and S.mask != K.mask
        wit12 = {
            "s_quotient": list(s_type),
            "k_quotient": list(k_type),
            "s_equals_k": S.mask == K.mask,
        }
    recs.append(
        _bool_record("pr_value_forces_cyclic_central_quotients", app12, ok12, wit12)
    )

    q3 = _prime_from_cube_shape(prf)
    app15a = pd.s_in_k and s_noncomm and q3 is not None
    recs.append(
        _bool_record(
            "pr_value_implies_prime_divides_order_rank_two",
            app15a,
            ok=(q3 is not None and ring.order % q3 == 0),
            witness={"prime": q3},
        )
    )
    app15 = (
        pd.s_in_k
        and s_noncomm
        and p is not None
        and prf == Fraction(p * p + p - 1, p**3)
    )
    recs.append(
        _bool_record(
            "pr_value_forces_rank_two_quotient",
            app15,
            ok=(s_type == (p, p)) if app15 else True,
            witness={"s_quotient": list(s_type)} if app15 else None,
        )
    )

    # converse directions
    cyc = pd.s_in_k and len(s_type) == 1 and is_prime(s_type[0])
    n_idx = nk // ns if pd.s_in_k else None
    qq = s_type[0] if cyc else None
    recs.append(
        _record(
            "cyclic_quotient_lower_bound",
            cyc,
            ">=",
            prf,
            Fraction(n_idx + qq - 1, n_idx * qq) if cyc else None,
            witness={"index": n_idx, "prime": qq} if cyc else None,
        )
    )
    app16a = cyc and p is not None and qq == p and n_idx == p
    wit16a = None
    if app16a:
        wit16a = {
            "k_centralizer_sizes": sorted(
                {
                    centralizer_data(K, s)[0]
                    for s in S.members
                    if s not in pd.z_sk
                }
            )
        }
    recs.append(
        _record(
            "cyclic_quotient_index_p_exact",
            app16a,
            "=",
            prf,
            Fraction(2 * p - 1, p * p) if app16a else None,
            witness=wit16a,
        )
    )
    rank2 = (
        pd.s_in_k
        and len(s_type) == 2
        and s_type[0] == s_type[1]
        and is_prime(s_type[0])
    )
    q4 = s_type[0] if rank2 else None
    recs.append(
        _record(
            "rank_two_quotient_lower_bound",
            rank2,
            ">=",
            prf,
            Fraction((n_idx + 2) * q4 * q4 - 2, n_idx * q4**4) if rank2 else None,
            witness={"index": n_idx, "prime": q4} if rank2 else None,
        )
    )
    app16b = rank2 and p is not None and q4 == p and n_idx == 1
    recs.append(
        _record(
            "rank_two_quotient_equal_exact",
            app16b,
            "=",
            prf,
            Fraction(p * p + p - 1, p**3) if app16b else None,
        )
    )
    recs.append(
        _record(
            "cyclic_quotient_index_two_exact",
            pd.s_in_k and s_type == (2,) and n_idx == 2,
            "=",
            prf,
            Fraction(3, 4),
        )
    )
    recs.append(
        _record(
            "rank_two_quotient_equal_five_eighths",
            pd.s_in_k and s_type == (2, 2) and n_idx == 1,
            "=",
            prf,
            Fraction(5, 8),
        )
    )

    app18 = (
        p is not None
        and s_type == (p, p)
        and all(
            len(centralizer_data(K, s)[1]) == p
            for s in S.members
            if s not in pd.z_sk
        )
    )
    recs.append(
        _record(
            "rank_two_quotient_small_images_exact",
            app18,
            "=",
            prf,
            Fraction(p * p + p - 1, p**3) if app18 else None,
        )
    )
    return recs


def check_factor_inequality(S: Subring, K: Subring, I: Subring) -> CheckRecord:
    """Pr(S,K) against Pr(S/I,K/I)*Pr(I) for an ideal I inside S and K."""
    ring = same_parent(S, K, I)
    if not is_ideal(ring, I):
        raise NotAnIdeal(f"{sorted(I.members)} is not an ideal of {ring.name}")
    if I.mask & S.mask & K.mask != I.mask:
        raise NotContained("the ideal is not contained in both subrings")
    quot, proj = quotient_ring(ring, I)
    s_mask = 0
    for s in S.members:
        s_mask |= 1 << proj[s]
    k_mask = 0
    for k in K.members:
        k_mask |= 1 << proj[k]
    pr_quot = pr(Subring(quot, s_mask), Subring(quot, k_mask)).fraction
    ideal_ring, _ = subring_as_ring(I)
    pr_ideal = pr(whole_ring(ideal_ring), whole_ring(ideal_ring)).fraction
    lhs = _pair_data(S, K).prf
    meets = commutator_subgroup(S, whole_ring(ring)).mask & I.mask
    return _record(
        "pr_factor_ring_upper_bound",
        True,
        "<=",
        lhs,
        pr_quot * pr_ideal,
        eq_condition=(meets == 1),
        eq_mode="if",
        witness={
            "pr_quotient": {"num": pr_quot.numerator, "den": pr_quot.denominator},
            "pr_ideal": {"num": pr_ideal.numerator, "den": pr_ideal.denominator},
        },
    )


def check_centralizer_quotient(H: Subring, N: Subring, x) -> CheckRecord:
    """Image of C_H(x) in R/N against the centralizer computed in R/N."""
    ring = same_parent(H, N)
    xx = as_index(ring, x)
    if not is_ideal(ring, N):
        raise NotAnIdeal(f"{sorted(N.members)} is not an ideal of {ring.name}")
    if N.mask & H.mask != N.mask:
        raise NotContained("the ideal is not contained in the subring")
    quot, proj = quotient_ring(ring, N)
    lhs_set = frozenset(proj[c] for c in centralizer(H, xx).members)
    h_mask = 0
    for h in H.members:
        h_mask |= 1 << proj[h]
    rhs_set = frozenset(centralizer(Subring(quot, h_mask), proj[xx]).members)
    included = lhs_set <= rhs_set
    meets = commutator_subgroup(H, whole_ring(ring)).mask & N.mask
    cond = meets == 1
    rec = _bool_record(
        "centralizer_image_in_quotient_centralizer",
        True,
        ok=included,
        witness={"lhs_size": len(lhs_set), "rhs_size": len(rhs_set), "x": xx},
    )
    rec.equality_condition_met = cond
    rec.equality_ok = (not cond) or lhs_set == rhs_set
    return rec
