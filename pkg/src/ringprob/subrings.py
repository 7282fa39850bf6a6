"""Subrings, additive subgroups, quotients, and centralizer machinery.

Subsets of a ring are carried as bitmasks over element indices; members
always iterate in ascending index order so that reports are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .rings import FiniteRing, RingError, RingMismatch, CapExceeded, as_index, build_from_tables

ENUMERATION_CAP = 64


class NotClosed(RingError):
    pass


class NotAnIdeal(RingError):
    pass


class NotASubgroup(RingError):
    pass


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _mask(members) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


@dataclass(frozen=True)
class Subring:
    """A subset of a parent ring closed under +, -, *; always contains 0."""

    parent: FiniteRing
    mask: int

    @cached_property
    def members(self) -> tuple[int, ...]:
        return _bits(self.mask)

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def is_whole(self) -> bool:
        return self.mask == self.parent.full_mask

    def __repr__(self) -> str:
        return f"<Subring {{{','.join(map(str, self.members))}}} of {self.parent.name}>"


@dataclass(frozen=True)
class AdditiveSubgroup:
    """A subgroup of the additive group, with its abelian isomorphism type."""

    parent: FiniteRing
    mask: int
    iso_type: tuple[int, ...]

    @cached_property
    def members(self) -> tuple[int, ...]:
        return _bits(self.mask)

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __repr__(self) -> str:
        return (
            f"<AdditiveSubgroup {{{','.join(map(str, self.members))}}}"
            f" iso={list(self.iso_type)} of {self.parent.name}>"
        )


def same_parent(*subsets) -> FiniteRing:
    ring = subsets[0].parent
    for s in subsets[1:]:
        if s.parent is not ring:
            raise RingMismatch(
                f"subsets of {ring.name} and {s.parent.name} cannot be combined"
            )
    return ring


def _close_mask(ring: FiniteRing, gens, with_mul: bool) -> int:
    add, mul, neg = ring.add_table, ring.mul_table, ring.neg_table
    mask = 1
    members = [0]
    todo = []

    def push(v: int) -> None:
        nonlocal mask
        if not mask >> v & 1:
            mask |= 1 << v
            members.append(v)
            todo.append(v)

    for g in gens:
        push(as_index(ring, g))
    while todo:
        x = todo.pop()
        push(neg[x])
        for y in list(members):
            push(add[x][y])
            if with_mul:
                push(mul[x][y])
                push(mul[y][x])
    return mask


def closure(ring: FiniteRing, gens=()) -> Subring:
    """Smallest subring containing the generators."""
    return Subring(ring, _close_mask(ring, gens, with_mul=True))


def additive_closure(ring: FiniteRing, gens=()) -> AdditiveSubgroup:
    """Smallest additive subgroup containing the generators."""
    mask = _close_mask(ring, gens, with_mul=False)
    return AdditiveSubgroup(ring, mask, _iso_type_of_closed(ring, _bits(mask)))


def is_add_closed(ring: FiniteRing, mask: int) -> bool:
    add, neg = ring.add_table, ring.neg_table
    members = _bits(mask)
    if not mask & 1:
        return False
    for x in members:
        if not mask >> neg[x] & 1:
            return False
        for y in members:
            if not mask >> add[x][y] & 1:
                return False
    return True


def is_mul_closed(ring: FiniteRing, mask: int) -> bool:
    mul = ring.mul_table
    members = _bits(mask)
    return all(mask >> mul[x][y] & 1 for x in members for y in members)


def subring_from_members(ring: FiniteRing, members) -> Subring:
    mask = _mask(as_index(ring, x) for x in members) | 1
    if not (is_add_closed(ring, mask) and is_mul_closed(ring, mask)):
        raise NotClosed(f"{sorted(_bits(mask))} is not closed under the ring operations")
    return Subring(ring, mask)


def subgroup_from_members(ring: FiniteRing, members) -> AdditiveSubgroup:
    mask = _mask(as_index(ring, x) for x in members) | 1
    if not is_add_closed(ring, mask):
        raise NotClosed(f"{sorted(_bits(mask))} is not additively closed")
    return AdditiveSubgroup(ring, mask, _iso_type_of_closed(ring, _bits(mask)))


def whole_ring(ring: FiniteRing) -> Subring:
    return Subring(ring, ring.full_mask)


def zero_subring(ring: FiniteRing) -> Subring:
    return Subring(ring, 1)


def enumerate_subrings(ring: FiniteRing, cap: int = ENUMERATION_CAP) -> list[Subring]:
    """All subrings, by breadth-first one-element extension of known subrings.

    Any subring is reachable from {0} by repeatedly adjoining one of its own
    elements and closing, so the search is exhaustive.  Results are sorted by
    (size, mask).
    """
    if ring.order > cap:
        raise CapExceeded(f"ring order {ring.order} exceeds the enumeration cap {cap}")
    cached = ring._cache.get("subrings")
    if cached is None:
        seen = {1}
        frontier = [1]
        while frontier:
            new = []
            for mask in frontier:
                for x in ring.elements():
                    if mask >> x & 1:
                        continue
                    ext = _close_mask(ring, _bits(mask | 1 << x), with_mul=True)
                    if ext not in seen:
                        seen.add(ext)
                        new.append(ext)
            frontier = new
        cached = tuple(sorted(seen, key=lambda m: (m.bit_count(), m)))
        ring._cache["subrings"] = cached
    return [Subring(ring, m) for m in cached]


def centralizer_data(K: Subring, s: int) -> tuple[int, frozenset[int]]:
    """(|C_K(s)|, the commutator-value set {[s,k] : k in K}), memoized."""
    ring = K.parent
    key = ("centdata", K.mask, s)
    data = ring._cache.get(key)
    if data is None:
        row = ring.commutator_table()[s]
        img = set()
        cent = 0
        for k in K.members:
            v = row[k]
            img.add(v)
            if v == 0:
                cent += 1
        data = (cent, frozenset(img))
        ring._cache[key] = data
    return data


def centralizer(S: Subring, r) -> Subring:
    """The subring {s in S : sr = rs}."""
    ring = S.parent
    rr = as_index(ring, r)
    comm = ring.commutator_table()
    return Subring(ring, _mask(s for s in S.members if comm[s][rr] == 0))


def relative_center(S: Subring, K: Subring) -> Subring:
    """Elements of S commuting with every element of K."""
    ring = same_parent(S, K)
    comm = ring.commutator_table()
    km = K.members
    return Subring(
        ring, _mask(s for s in S.members if all(comm[s][k] == 0 for k in km))
    )


def center(ring: FiniteRing) -> Subring:
    return relative_center(whole_ring(ring), whole_ring(ring))


def commutator_image(s, K: Subring) -> AdditiveSubgroup:
    """The set {[s,k] : k in K}, verified to be an additive subgroup."""
    ring = K.parent
    ss = as_index(ring, s)
    _, img = centralizer_data(K, ss)
    mask = _mask(img)
    if not is_add_closed(ring, mask):
        raise NotClosed(f"commutator image of {ss} against K is not additively closed")
    return AdditiveSubgroup(ring, mask, _iso_type_of_closed(ring, _bits(mask)))


def commutator_subgroup(S: Subring, K: Subring) -> AdditiveSubgroup:
    """Additive subgroup generated by all commutators [s,k], s in S, k in K."""
    ring = same_parent(S, K)
    key = ("commsub", S.mask, K.mask)
    mask = ring._cache.get(key)
    if mask is None:
        comm = ring.commutator_table()
        gens = {comm[s][k] for s in S.members for k in K.members}
        mask = _close_mask(ring, gens, with_mul=False)
        ring._cache[key] = mask
    return AdditiveSubgroup(ring, mask, _iso_type_of_closed(ring, _bits(mask)))


def t_set(s, r, K: Subring) -> frozenset[int]:
    """Solution set {k in K : [s,k] = r}; empty or a coset of C_K(s)."""
    ring = K.parent
    ss, rr = as_index(ring, s), as_index(ring, r)
    row = ring.commutator_table()[ss]
    return frozenset(k for k in K.members if row[k] == rr)


def is_ideal(ring: FiniteRing, I: Subring) -> bool:
    if I.parent is not ring:
        raise RingMismatch(f"subring of {I.parent.name} is not a subset of {ring.name}")
    mul = ring.mul_table
    for r in ring.elements():
        row = mul[r]
        for i in I.members:
            if not (I.mask >> row[i] & 1 and I.mask >> mul[i][r] & 1):
                return False
    return True


def quotient_ring(ring: FiniteRing, I: Subring) -> tuple[FiniteRing, tuple[int, ...]]:
    """Factor ring R/I together with the element-to-coset projection."""
    if not is_ideal(ring, I):
        raise NotAnIdeal(f"{sorted(I.members)} is not an ideal of {ring.name}")
    key = ("quotient", I.mask)
    cached = ring._cache.get(key)
    if cached is None:
        n = ring.order
        add = ring.add_table
        rep_of = [-1] * n
        reps = []
        for x in range(n):
            if rep_of[x] < 0:
                for i in I.members:
                    rep_of[add[x][i]] = x
                reps.append(x)
        pos = {rep: t for t, rep in enumerate(reps)}
        proj = tuple(pos[rep_of[x]] for x in range(n))
        m = len(reps)
        add_rows = tuple(
            tuple(proj[add[a][b]] for b in reps) for a in reps
        )
        mul_rows = tuple(
            tuple(proj[ring.mul_table[a][b]] for b in reps) for a in reps
        )
        q = build_from_tables(add_rows, mul_rows, name=f"{ring.name}/{m}cosets")
        cached = (q, proj)
        ring._cache[key] = cached
    return cached


@dataclass(frozen=True)
class QuotientGroup:
    """Additive factor group of a subset by a subgroup; the modulus need not
    be an ideal."""

    parent: FiniteRing
    group_mask: int
    modulus_mask: int
    reps: tuple[int, ...]
    iso_type: tuple[int, ...]

    @cached_property
    def _rep_of(self) -> dict[int, int]:
        add = self.parent.add_table
        out: dict[int, int] = {}
        for rep in self.reps:
            for h in _bits(self.modulus_mask):
                out[add[rep][h]] = rep
        return out

    @property
    def size(self) -> int:
        return len(self.reps)

    def __len__(self) -> int:
        return self.size

    def rep_of(self, x: int) -> int:
        return self._rep_of[x]

    def coset_members(self, rep: int) -> tuple[int, ...]:
        add = self.parent.add_table
        return tuple(sorted(add[rep][h] for h in _bits(self.modulus_mask)))

    def add(self, ra: int, rb: int) -> int:
        return self._rep_of[self.parent.add_table[ra][rb]]

    def neg(self, ra: int) -> int:
        return self._rep_of[self.parent.neg_table[ra]]


def quotient_group(group, modulus) -> QuotientGroup:
    """Coset structure of ``modulus`` inside ``group`` (additively)."""
    if isinstance(group, FiniteRing):
        group = whole_ring(group)
    ring = same_parent(group, modulus)
    gm, hm = group.mask, modulus.mask
    if gm & hm != hm:
        raise NotASubgroup("the modulus is not contained in the group")
    add = ring.add_table
    hmembers = _bits(hm)
    rep_of: dict[int, int] = {}
    reps = []
    orders = []
    for x in _bits(gm):
        if x in rep_of:
            continue
        for h in hmembers:
            y = add[x][h]
            if not gm >> y & 1:
                raise NotASubgroup("the group subset is not closed under the modulus")
            rep_of[y] = x
        reps.append(x)
        # order of the coset x + H
        acc, t = x, 1
        while not hm >> acc & 1:
            acc = add[acc][x]
            t += 1
        orders.append(t)
    if len(reps) * len(hmembers) != gm.bit_count():
        raise NotASubgroup("cosets do not partition the group subset")
    return QuotientGroup(
        ring, gm, hm, tuple(reps), invariant_factors_from_orders(orders)
    )


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors_from_orders(orders) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of the finite abelian group whose
    element-order multiset is ``orders`` (the multiset determines the group).
    """
    orders = list(orders)
    m = len(orders)
    if m == 1:
        return ()
    partitions: dict[int, list[int]] = {}
    for p in _prime_factors(m):
        v = 0
        mm = m
        while mm % p == 0:
            mm //= p
            v += 1
        a = [0]
        k = 1
        while a[-1] < v:
            cnt = sum(1 for o in orders if p**k % o == 0)
            e = 0
            c = 1
            while c < cnt:
                c *= p
                e += 1
            if c != cnt or e <= a[-1]:
                raise NotClosed("order multiset is not that of a finite abelian group")
            a.append(e)
            k += 1
        counts = [a[t] - a[t - 1] for t in range(1, len(a))]
        if any(counts[t] > counts[t - 1] for t in range(1, len(counts))):
            raise NotClosed("order multiset is not that of a finite abelian group")
        parts = [sum(1 for c in counts if c >= i) for i in range(1, counts[0] + 1)]
        partitions[p] = parts  # descending exponents
    width = max(len(parts) for parts in partitions.values())
    desc = []
    for idx in range(width):
        d = 1
        for p, parts in partitions.items():
            if idx < len(parts):
                d *= p ** parts[idx]
        desc.append(d)
    return tuple(reversed(desc))


def _iso_type_of_closed(ring: FiniteRing, members) -> tuple[int, ...]:
    return invariant_factors_from_orders(ring.add_order(x) for x in members)


def abelian_iso_type(ring: FiniteRing, members) -> tuple[int, ...]:
    """Invariant factors of an additively closed subset of the ring."""
    mask = _mask(as_index(ring, x) for x in members) | (1 if members else 1)
    if not is_add_closed(ring, mask):
        raise NotClosed(f"{sorted(_bits(mask))} is not additively closed")
    return _iso_type_of_closed(ring, _bits(mask))


def subring_as_ring(I: Subring) -> tuple[FiniteRing, dict[int, int]]:
    """Re-tabulate a subring as a standalone ring; returns (ring, index map)."""
    ring = I.parent
    key = ("asring", I.mask)
    cached = ring._cache.get(key)
    if cached is None:
        members = I.members
        pos = {x: t for t, x in enumerate(members)}
        add_rows = tuple(
            tuple(pos[ring.add_table[a][b]] for b in members) for a in members
        )
        mul_rows = tuple(
            tuple(pos[ring.mul_table[a][b]] for b in members) for a in members
        )
        sub = build_from_tables(add_rows, mul_rows, name=f"{ring.name}|{len(members)}")
        cached = (sub, pos)
        ring._cache[key] = cached
    return cached
