import itertools
from math import lcm, prod

import pytest
from hypothesis import given, settings, strategies as st

from ringprob import (
    CapExceeded,
    NotAnIdeal,
    NotClosed,
    Subring,
    abelian_iso_type,
    additive_closure,
    builtin,
    center,
    centralizer,
    closure,
    commutator_image,
    commutator_subgroup,
    direct_product,
    enumerate_subrings,
    invariant_factors_from_orders,
    is_ideal,
    quotient_group,
    quotient_ring,
    relative_center,
    subring_from_members,
    t_set,
    whole_ring,
    zero_subring,
)

A, B, C = 2, 1, 3  # nc4a coordinates (1,0), (0,1), (1,1)


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def brute_force_subrings(ring):
    """Independent oracle: scan all subsets containing 0 of size dividing n."""
    n = ring.order
    add, mul, neg = ring.add_table, ring.mul_table, ring.neg_table
    found = set()
    for size in divisors(n):
        for rest in itertools.combinations(range(1, n), size - 1):
            members = (0,) + rest
            inside = set(members)
            ok = all(neg[x] in inside for x in members) and all(
                add[x][y] in inside and mul[x][y] in inside
                for x in members
                for y in members
            )
            if ok:
                found.add(members)
    return found


def test_closure_examples(nc4a):
    assert closure(nc4a).members == (0,)
    assert closure(nc4a, [A]).members == (0, A)
    assert closure(nc4a, [A, B]).members == (0, 1, 2, 3)


def test_closure_is_idempotent_and_monotone(nc4a):
    for gens in itertools.chain.from_iterable(
        itertools.combinations(range(4), k) for k in range(3)
    ):
        s = closure(nc4a, gens)
        assert closure(nc4a, s.members).mask == s.mask
        assert all(g in s for g in gens)


def test_enumerate_subrings_z4():
    subs = enumerate_subrings(builtin("zn", (4,)))
    assert [list(s.members) for s in subs] == [[0], [0, 2], [0, 1, 2, 3]]


def test_enumerate_subrings_nc4a(nc4a):
    subs = enumerate_subrings(nc4a)
    assert [list(s.members) for s in subs] == [
        [0],
        [0, 1],
        [0, 2],
        [0, 3],
        [0, 1, 2, 3],
    ]


@pytest.mark.parametrize("spec", ["nc4a", "zn:4", "zn:8", "ut2:2"])
def test_enumeration_matches_brute_force(spec):
    bits = spec.split(":")
    ring = builtin(bits[0], bits[1:])
    oracle = brute_force_subrings(ring)
    ours = {s.members for s in enumerate_subrings(ring)}
    assert ours == oracle


def test_centralizer_examples(nc4a):
    R = whole_ring(nc4a)
    assert centralizer(R, 0).members == (0, 1, 2, 3)
    assert centralizer(R, A).members == (0, A)
    sub = closure(nc4a, [A])
    assert centralizer(sub, B).members == (0,)


def test_relative_center_examples(nc4a):
    R = whole_ring(nc4a)
    assert relative_center(R, R).members == center(nc4a).members == (0,)
    assert relative_center(closure(nc4a, [A]), R).members == (0,)
    assert relative_center(R, zero_subring(nc4a)).members == (0, 1, 2, 3)
    # Z(K,S) for S = {0,A} is the centralizer of A, not just {0}
    assert relative_center(R, closure(nc4a, [A])).members == (0, A)


def test_commutator_image(nc4a):
    R = whole_ring(nc4a)
    assert commutator_image(0, R).members == (0,)
    img = commutator_image(A, R)
    assert img.members == (0, B) and img.size == 2
    for s in nc4a.elements():
        cent = centralizer(R, s)
        assert commutator_image(s, R).size * cent.size == R.size


def test_commutator_subgroup(nc4a):
    R = whole_ring(nc4a)
    assert commutator_subgroup(R, R).members == (0, B)
    z6 = builtin("zn", (6,))
    assert commutator_subgroup(whole_ring(z6), whole_ring(z6)).members == (0,)
    for s in nc4a.elements():
        assert commutator_image(s, R).mask & commutator_subgroup(R, R).mask == commutator_image(s, R).mask


def test_t_set(nc4a):
    R = whole_ring(nc4a)
    for s in nc4a.elements():
        assert t_set(s, 0, R) == frozenset(centralizer(R, s).members)
    assert t_set(A, B, R) == {B, C}
    # nonempty solution sets are cosets of the centralizer
    for s in nc4a.elements():
        cent = centralizer(R, s).members
        for r in nc4a.elements():
            sol = t_set(s, r, R)
            if sol:
                assert len(sol) == len(cent)
                t0 = min(sol)
                assert sol == {nc4a.add(t0, c) for c in cent}


def test_ideals_and_quotient_ring(nc4a):
    bsub = closure(nc4a, [B])
    asub = closure(nc4a, [A])
    assert is_ideal(nc4a, bsub)
    assert not is_ideal(nc4a, asub)
    q, proj = quotient_ring(nc4a, bsub)
    assert q.order == 2
    assert proj[0] == proj[B] == 0 and proj[A] == proj[C] == 1
    with pytest.raises(NotAnIdeal):
        quotient_ring(nc4a, asub)
    # quotient by the zero ideal reproduces the tables
    q0, proj0 = quotient_ring(nc4a, zero_subring(nc4a))
    assert q0.add_table == nc4a.add_table and q0.mul_table == nc4a.mul_table
    assert proj0 == (0, 1, 2, 3)
    qall, _ = quotient_ring(nc4a, whole_ring(nc4a))
    assert qall.order == 1


def test_quotient_group(nc4a):
    R = whole_ring(nc4a)
    assert quotient_group(R, zero_subring(nc4a)).iso_type == (2, 2)
    asub = closure(nc4a, [A])
    assert quotient_group(asub, asub).iso_type == ()
    assert quotient_group(R, closure(nc4a, [B])).iso_type == (2,)
    # the modulus need not be an ideal
    assert quotient_group(R, asub).iso_type == (2,)


def test_abelian_iso_type_examples(nc4a):
    assert abelian_iso_type(nc4a, [0]) == ()
    z6 = builtin("zn", (6,))
    assert abelian_iso_type(z6, range(6)) == (6,)
    assert abelian_iso_type(nc4a, range(4)) == (2, 2)
    assert abelian_iso_type(builtin("zn", (4,)), range(4)) == (4,)
    with pytest.raises(NotClosed):
        abelian_iso_type(nc4a, [0, A, B])


def test_subring_from_members_validates(nc4a):
    assert subring_from_members(nc4a, [0, A]).members == (0, A)
    with pytest.raises(NotClosed):
        subring_from_members(nc4a, [0, A, B])


def test_additive_closure_tracks_iso_type(nc4a):
    grp = additive_closure(nc4a, [A, B])
    assert grp.members == (0, 1, 2, 3)
    assert grp.iso_type == (2, 2)


def _order_multiset_of_type(iso_type):
    """Element orders of Z_{d1} x ... x Z_{dk}, computed independently."""
    if not iso_type:
        return [1]
    return sorted(
        lcm(*(d // __import__("math").gcd(d, c) for d, c in zip(iso_type, coords)))
        for coords in itertools.product(*(range(d) for d in iso_type))
    )


@settings(deadline=None, max_examples=40)
@given(
    st.lists(st.sampled_from([2, 3, 4, 5]), min_size=1, max_size=3).filter(
        lambda m: prod(m) <= 32
    )
)
def test_iso_type_classifies_products(moduli):
    ring = builtin("zn", (moduli[0],))
    for d in moduli[1:]:
        ring = direct_product(ring, builtin("zn", (d,)))
    iso = abelian_iso_type(ring, ring.elements())
    assert prod(iso) == ring.order
    assert all(iso[i] % iso[i - 1] == 0 for i in range(1, len(iso)))
    ours = sorted(ring.add_order(x) for x in ring.elements())
    assert ours == _order_multiset_of_type(iso)


@settings(deadline=None, max_examples=30)
@given(st.data())
def test_closure_invariants_on_random_generators(data):
    ring = builtin(*data.draw(st.sampled_from([("nc4a", ()), ("ut2", (2,)), ("zn", (8,))])))
    gens = data.draw(st.lists(st.integers(0, ring.order - 1), max_size=3))
    s = closure(ring, gens)
    assert 0 in s
    for x in s.members:
        assert ring.neg(x) in s
        for y in s.members:
            assert ring.add(x, y) in s and ring.mul(x, y) in s


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_subrings(builtin("zn", (8,)), cap=4)


def test_quotient_group_requires_subgroup(nc4a):
    from ringprob import NotASubgroup

    R = whole_ring(nc4a)
    bad = Subring(nc4a, 0b0110)  # {1, 2}: no zero, not closed
    with pytest.raises(NotASubgroup):
        quotient_group(R, bad)


def test_center_of_commutative_ring_is_whole():
    z6 = builtin("zn", (6,))
    assert center(z6).members == tuple(range(6))
    assert z6.is_commutative()
