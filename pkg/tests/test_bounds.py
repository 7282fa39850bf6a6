from fractions import Fraction

import pytest

from ringprob import (
    NotNested,
    builtin,
    check_all,
    check_centralizer_quotient,
    check_factor_inequality,
    check_nested,
    characterize_quotients,
    closure,
    smallest_prime,
    whole_ring,
    x_set,
    zero_subring,
)

A, B, C = 2, 1, 3


def by_name(records, name):
    found = [r for r in records if r.name == name]
    assert found, f"no record named {name}"
    return found[0]


def test_smallest_prime():
    assert smallest_prime(1) is None
    assert smallest_prime(2) == 2
    assert smallest_prime(15) == 3
    assert smallest_prime(49) == 7


def test_x_set_examples(nc4a):
    R = whole_ring(nc4a)
    assert x_set(R, R) == frozenset()
    assert x_set(R, zero_subring(nc4a)) == frozenset(range(4))
    assert x_set(zero_subring(nc4a), R) == frozenset()


def test_noncentral_share_bound_attained(nc4a):
    R = whole_ring(nc4a)
    rec = by_name(check_all(R, R, B).checks, "pr_r_upper_noncentral_share")
    assert rec.applicable and rec.holds
    assert rec.lhs == Fraction(3, 8) and rec.rhs == Fraction(3, 8)
    strict = by_name(check_all(R, R, B).checks, "pr_r_noncentral_share_below_prime")
    assert strict.holds and strict.rhs == Fraction(1, 2)


def test_commutator_span_bound_attained(nc4a):
    R = whole_ring(nc4a)
    rec = by_name(check_all(R, R, 0).checks, "pr_lower_commutator_span")
    assert rec.holds and rec.lhs == rec.rhs == Fraction(5, 8)


def test_center_pair_lower_bound(nc4a):
    R = whole_ring(nc4a)
    S = closure(nc4a, [A])
    rec = by_name(check_all(S, R, B).checks, "pr_r_lower_center_pair")
    assert rec.holds and rec.lhs == rec.rhs == Fraction(1, 4)


def test_doubled_center_pair_bound_is_falsified(nc4a):
    # The doubled variant demands Pr_B >= 2*|Z(S,K)||Z(K,S)|/|S||K| = 1/2,
    # but the probability is 1/4: the two translated cosets coincide
    # whenever every witness pair has its S-component inside Z(K,S).
    R = whole_ring(nc4a)
    S = closure(nc4a, [A])
    rec = by_name(check_all(S, R, B).checks, "pr_r_lower_center_pair_double")
    assert rec.applicable
    assert rec.lhs == Fraction(1, 4) and rec.rhs == Fraction(1, 2)
    assert rec.holds is False
    assert rec.witness["separating_pair_exists"] is False


def test_full_ring_triple_bound(nc4a):
    R = whole_ring(nc4a)
    rec = by_name(check_all(R, R, B).checks, "pr_r_lower_full_ring_triple")
    assert rec.applicable and rec.holds
    assert rec.rhs == Fraction(3, 16)


def test_pr_r_at_most_pr_equality_iff_zero(nc4a):
    R = whole_ring(nc4a)
    rec0 = by_name(check_all(R, R, 0).checks, "pr_r_at_most_pr")
    assert rec0.holds and rec0.equality_condition_met and rec0.equality_ok
    rec1 = by_name(check_all(R, R, B).checks, "pr_r_at_most_pr")
    assert rec1.holds and not rec1.equality_condition_met and rec1.equality_ok


def test_zero_centralizer_split_bounds(nc4a):
    R = whole_ring(nc4a)
    checks = check_all(R, R, 0).checks
    for name in (
        "pr_lower_zero_centralizer_split",
        "pr_upper_zero_centralizer_split",
        "pr_lower_zero_centralizer_split_swapped",
        "pr_upper_zero_centralizer_split_swapped",
    ):
        rec = by_name(checks, name)
        assert rec.applicable and rec.holds


def test_classic_upper_bounds(nc4a):
    R = whole_ring(nc4a)
    checks = check_all(R, R, 0).checks
    rec = by_name(checks, "pr_upper_classic")
    assert rec.holds and rec.rhs == Fraction(3, 4)
    assert by_name(checks, "pr_upper_three_quarters").holds
    # inapplicable on a commuting pair
    z = zero_subring(nc4a)
    rec = by_name(check_all(z, z, 0).checks, "pr_upper_classic")
    assert not rec.applicable


def test_sandwich_bounds(nc4a):
    R = whole_ring(nc4a)
    checks = check_all(R, R, 0).checks
    assert by_name(checks, "pr_sandwich_lower").applicable
    assert by_name(checks, "pr_sandwich_lower").holds
    assert by_name(checks, "pr_sandwich_upper").holds


def test_nested_checks_examples(nc4a):
    R = whole_ring(nc4a)
    S1 = closure(nc4a, [A])
    recs = check_nested(S1, R, R, R, B)
    rec = by_name(recs, "pr_r_nested_index_bound")
    assert rec.holds and rec.lhs == Fraction(1, 4) and rec.rhs == Fraction(3, 4)
    rec = by_name(recs, "pr_r_nested_full_ring_bound")
    assert rec.applicable and rec.holds

    # K1 = K2 collapses the antitone relations to equalities
    recs = check_nested(S1, S1, R, R, 0)
    rec = by_name(recs, "pr_antitone_in_second_argument")
    assert rec.applicable and rec.lhs == rec.rhs and rec.equality_ok

    # S = {0,A}, K1 = {0,A} inside K2 = R
    recs = check_nested(S1, S1, S1, R, 0)
    rec = by_name(recs, "pr_antitone_in_second_argument")
    assert rec.holds and rec.lhs == 1 and rec.rhs == Fraction(3, 4)
    rec = by_name(recs, "pr_nested_refinement_lower_bound")
    assert rec.holds and rec.lhs == Fraction(3, 4) and rec.rhs == Fraction(3, 4)
    assert rec.equality_condition_met and rec.equality_ok


def test_nested_requires_nesting(nc4a):
    R = whole_ring(nc4a)
    with pytest.raises(NotNested):
        check_nested(R, closure(nc4a, [A]), R, R, 0)


def test_characterize_cyclic_quotients(nc4a):
    R = whole_ring(nc4a)
    S = closure(nc4a, [A])
    recs = characterize_quotients(S, R)
    rec = by_name(recs, "pr_value_forces_cyclic_central_quotients")
    assert rec.applicable and rec.ok()
    assert rec.witness == {
        "s_quotient": [2],
        "k_quotient": [2],
        "s_equals_k": False,
    }
    rec = by_name(recs, "pr_value_implies_prime_divides_order")
    assert rec.applicable and rec.ok() and rec.witness["prime"] == 2
    rec = by_name(recs, "cyclic_quotient_index_two_exact")
    assert rec.applicable and rec.holds and rec.lhs == Fraction(3, 4)
    rec = by_name(recs, "cyclic_quotient_index_p_exact")
    assert rec.applicable and rec.holds
    assert rec.witness["k_centralizer_sizes"] == [2]


def test_characterize_rank_two_quotient(nc4a):
    R = whole_ring(nc4a)
    recs = characterize_quotients(R, R)
    rec = by_name(recs, "pr_value_forces_rank_two_quotient")
    assert rec.applicable and rec.ok()
    assert rec.witness == {"s_quotient": [2, 2]}
    rec = by_name(recs, "rank_two_quotient_equal_five_eighths")
    assert rec.applicable and rec.holds and rec.lhs == Fraction(5, 8)
    rec = by_name(recs, "rank_two_quotient_small_images_exact")
    assert rec.applicable and rec.holds


def test_factor_inequality(nc4a):
    R = whole_ring(nc4a)
    bsub = closure(nc4a, [B])
    rec = check_factor_inequality(R, R, bsub)
    assert rec.holds and rec.lhs == Fraction(5, 8) and rec.rhs == 1
    assert rec.equality_condition_met is False  # I meets [S,R]
    rec = check_factor_inequality(R, R, zero_subring(nc4a))
    assert rec.holds and rec.lhs == rec.rhs and rec.equality_ok
    rec = check_factor_inequality(bsub, bsub, bsub)
    assert rec.holds and rec.lhs == rec.rhs == 1


def test_centralizer_quotient(nc4a):
    R = whole_ring(nc4a)
    bsub = closure(nc4a, [B])
    rec = check_centralizer_quotient(R, bsub, A)
    assert rec.ok()
    rec = check_centralizer_quotient(R, zero_subring(nc4a), A)
    assert rec.ok() and rec.equality_condition_met and rec.equality_ok
