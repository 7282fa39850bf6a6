"""Additive isomorphism enumeration and commutator-compatibility witnesses.

Search order is deterministic: candidate isomorphisms assign generator
images in ascending element-index order and the first witness passing the
full compatibility scan is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator

from .rings import FiniteRing, RingError
from .subrings import (
    QuotientGroup,
    Subring,
    commutator_subgroup,
    invariant_factors_from_orders,
    quotient_group,
    relative_center,
    same_parent,
    whole_ring,
)
from .probability import pr_r
from .bounds import CheckRecord, _record


class InvalidWitness(RingError):
    pass


class IllDefinedAMap(RingError):
    pass


class SquareDoesNotCommute(RingError):
    pass


class GroupView:
    """A finite abelian group on integer labels with table-based addition."""

    def __init__(self, labels: tuple[int, ...], add_map: dict[tuple[int, int], int]):
        self.labels = tuple(sorted(labels))
        self._add = add_map
        self.zero = self.labels[0]
        if any(add_map[self.zero, x] != x for x in self.labels):
            raise ValueError("smallest label is not the additive identity")
        self._orders: dict[int, int] = {}

    @property
    def size(self) -> int:
        return len(self.labels)

    def add(self, a: int, b: int) -> int:
        return self._add[a, b]

    def order_of(self, a: int) -> int:
        o = self._orders.get(a)
        if o is None:
            acc, o = a, 1
            while acc != self.zero:
                acc = self._add[acc, a]
                o += 1
            self._orders[a] = o
        return o

    def multiple(self, a: int, t: int) -> int:
        acc = self.zero
        for _ in range(t % self.order_of(a)):
            acc = self._add[acc, a]
        return acc

    @cached_property
    def iso_type(self) -> tuple[int, ...]:
        return invariant_factors_from_orders(self.order_of(x) for x in self.labels)

    def __repr__(self) -> str:
        return f"<GroupView size={self.size} iso={list(self.iso_type)}>"


def subgroup_view(ring: FiniteRing, members) -> GroupView:
    labels = tuple(members)
    add = ring.add_table
    table = {(a, b): add[a][b] for a in labels for b in labels}
    return GroupView(labels, table)


def quotient_view(q: QuotientGroup) -> GroupView:
    labels = q.reps
    table = {(a, b): q.add(a, b) for a in labels for b in labels}
    return GroupView(labels, table)


@dataclass(frozen=True, eq=False)
class GroupIso:
    """A bijective additive map between two group views."""

    source: GroupView
    target: GroupView
    image: dict[int, int]

    def apply(self, a: int) -> int:
        return self.image[a]

    def inverse(self) -> "GroupIso":
        return GroupIso(self.target, self.source, {v: k for k, v in self.image.items()})

    def is_valid(self) -> bool:
        src, tgt = self.source, self.target
        if sorted(self.image) != list(src.labels):
            return False
        if sorted(self.image.values()) != list(tgt.labels):
            return False
        return all(
            self.image[src.add(a, b)] == tgt.add(self.image[a], self.image[b])
            for a in src.labels
            for b in src.labels
        )

    def to_json(self) -> dict:
        return {str(k): v for k, v in sorted(self.image.items())}


def _generating_sequence(view: GroupView) -> list[tuple[int, int, int]]:
    """Greedy generating sequence as (generator, m, m*generator) with m the
    first multiple landing in the previously generated span."""
    span = {view.zero}
    gens = []
    for x in view.labels:
        if x in span:
            continue
        acc, m = x, 1
        while acc not in span:
            acc = view.add(acc, x)
            m += 1
        gens.append((x, m, acc))
        new_span = set(span)
        step = view.zero
        for _ in range(m - 1):
            step = view.add(step, x)
            new_span.update(view.add(s, step) for s in span)
        span = new_span
    return gens


def enumerate_group_isomorphisms(g1: GroupView, g2: GroupView) -> Iterator[GroupIso]:
    """Yield every additive isomorphism g1 -> g2; empty iff the types differ."""
    if g1.iso_type != g2.iso_type:
        return
    gens = _generating_sequence(g1)

    def extend(partial: dict[int, int], used: set[int], g: int, m: int, y: int):
        new = dict(partial)
        new_used = set(used)
        src_step, img_step = g1.zero, g2.zero
        for _ in range(m - 1):
            src_step = g1.add(src_step, g)
            img_step = g2.add(img_step, y)
            for s, si in partial.items():
                src = g1.add(s, src_step)
                img = g2.add(si, img_step)
                if img in new_used:
                    return None
                new[src] = img
                new_used.add(img)
        return new, new_used

    def dfs(i: int, partial: dict[int, int], used: set[int]) -> Iterator[GroupIso]:
        if i == len(gens):
            yield GroupIso(g1, g2, dict(partial))
            return
        g, m, mg = gens[i]
        og = g1.order_of(g)
        target_mg = partial[mg]
        for y in g2.labels:
            if y in used or g2.order_of(y) != og:
                continue
            if g2.multiple(y, m) != target_mg:
                continue
            ext = extend(partial, used, g, m, y)
            if ext is not None:
                yield from dfs(i + 1, ext[0], ext[1])

    yield from dfs(0, {g1.zero: g2.zero}, {g2.zero})


@dataclass(frozen=True, eq=False)
class IsoclinismWitness:
    """Compatible pair (phi, psi) between two nested subring pairs."""

    s1: Subring
    k1: Subring
    s2: Subring
    k2: Subring
    phi: GroupIso
    psi: GroupIso

    def to_json(self) -> dict:
        return {
            "pair1": {"s": list(self.s1.members), "k": list(self.k1.members)},
            "pair2": {"s": list(self.s2.members), "k": list(self.k2.members)},
            "phi": self.phi.to_json(),
            "psi": self.psi.to_json(),
        }


def _require_nested(S: Subring, K: Subring) -> None:
    if S.mask & K.mask != S.mask:
        raise ValueError("expected S to be a subring of K")


def _pair_setup(S: Subring, K: Subring):
    ring = same_parent(S, K)
    z = relative_center(S, K)
    q = quotient_group(K, z)
    s_cosets = frozenset(q.rep_of(s) for s in S.members)
    c = commutator_subgroup(S, K)
    return ring, z, q, s_cosets, c


def _compatible(ring1, ring2, q1, q2, s_cosets1, phi: GroupIso, psi: GroupIso) -> bool:
    comm1 = ring1.commutator_table()
    comm2 = ring2.commutator_table()
    for a in s_cosets1:
        fa = phi.apply(a)
        for b in q1.reps:
            fb = phi.apply(b)
            if psi.apply(comm1[a][b]) != comm2[fa][fb]:
                return False
    return True


def find_z_isoclinism(
    S1: Subring, K1: Subring, S2: Subring, K2: Subring
) -> IsoclinismWitness | None:
    """Search for a compatible (phi, psi); None when no witness exists."""
    _require_nested(S1, K1)
    _require_nested(S2, K2)
    ring1, _, q1, s_cosets1, c1 = _pair_setup(S1, K1)
    ring2, _, q2, s_cosets2, c2 = _pair_setup(S2, K2)
    if len(s_cosets1) != len(s_cosets2) or c1.size != c2.size:
        return None
    qv1, qv2 = quotient_view(q1), quotient_view(q2)
    cv1 = subgroup_view(ring1, c1.members)
    cv2 = subgroup_view(ring2, c2.members)
    for phi in enumerate_group_isomorphisms(qv1, qv2):
        if {phi.apply(a) for a in s_cosets1} != s_cosets2:
            continue
        for psi in enumerate_group_isomorphisms(cv1, cv2):
            if _compatible(ring1, ring2, q1, q2, s_cosets1, phi, psi):
                return IsoclinismWitness(S1, K1, S2, K2, phi, psi)
    return None


def verify_witness(w: IsoclinismWitness) -> bool:
    """Re-check every witness invariant from scratch."""
    try:
        _require_nested(w.s1, w.k1)
        _require_nested(w.s2, w.k2)
    except ValueError:
        return False
    ring1, _, q1, s_cosets1, c1 = _pair_setup(w.s1, w.k1)
    ring2, _, q2, s_cosets2, c2 = _pair_setup(w.s2, w.k2)
    if sorted(w.phi.image) != sorted(q1.reps):
        return False
    if sorted(w.phi.image.values()) != sorted(q2.reps):
        return False
    if sorted(w.psi.image) != sorted(c1.members):
        return False
    if sorted(w.psi.image.values()) != sorted(c2.members):
        return False
    if not (w.phi.is_valid() and w.psi.is_valid()):
        return False
    if {w.phi.apply(a) for a in s_cosets1} != s_cosets2:
        return False
    return _compatible(ring1, ring2, q1, q2, s_cosets1, w.phi, w.psi)


def check_invariance(w: IsoclinismWitness) -> list[CheckRecord]:
    """Exact equality of Pr_r across a verified witness, for every r in the
    commutator subgroup."""
    if not verify_witness(w):
        raise InvalidWitness("the isoclinism witness does not verify")
    recs = []
    for r in sorted(w.psi.image):
        lhs = pr_r(w.s1, w.k1, r).fraction
        rhs = pr_r(w.s2, w.k2, w.psi.apply(r)).fraction
        recs.append(
            _record(
                "invariance_under_witness",
                True,
                "=",
                lhs,
                rhs,
                witness={"r": r, "psi_r": w.psi.apply(r)},
            )
        )
    return recs


def check_pairwise_isoclinism(
    phi1: GroupIso, phi2: GroupIso, psi: GroupIso, pairs
) -> list[CheckRecord]:
    """Commuting-square compatibility for independently chosen quotient maps.

    ``pairs`` is ((S1, K1), (S2, K2)).  phi1 maps S1/Z(S1,R1) to S2/Z(S2,R2),
    phi2 maps K1/Z(K1,R1) to K2/Z(K2,R2), psi maps the commutator subgroups.
    The commutator maps on cosets are verified to be well defined before the
    square is checked.
    """
    (S1, K1), (S2, K2) = pairs
    ring1 = same_parent(S1, K1)
    ring2 = same_parent(S2, K2)
    qs1 = quotient_group(S1, relative_center(S1, whole_ring(ring1)))
    qk1 = quotient_group(K1, relative_center(K1, whole_ring(ring1)))
    qs2 = quotient_group(S2, relative_center(S2, whole_ring(ring2)))
    qk2 = quotient_group(K2, relative_center(K2, whole_ring(ring2)))
    c1 = commutator_subgroup(S1, K1)
    c2 = commutator_subgroup(S2, K2)
    for iso, src, tgt in (
        (phi1, qs1.reps, qs2.reps),
        (phi2, qk1.reps, qk2.reps),
        (psi, c1.members, c2.members),
    ):
        if sorted(iso.image) != sorted(src) or sorted(iso.image.values()) != sorted(tgt):
            raise ValueError("a map does not match the expected quotients")

    def a_map(ring, qs, qk, commsub):
        comm = ring.commutator_table()
        table = {}
        for a in qs.reps:
            for b in qk.reps:
                vals = {
                    comm[x][y]
                    for x in qs.coset_members(a)
                    for y in qk.coset_members(b)
                }
                if len(vals) != 1:
                    raise IllDefinedAMap(
                        f"commutator value is not constant on cosets ({a},{b})",
                        (a, b),
                    )
                val = next(iter(vals))
                if val not in commsub:
                    raise IllDefinedAMap(
                        f"commutator value {val} escapes the commutator subgroup",
                        (a, b),
                    )
                table[a, b] = val
        return table

    a1 = a_map(ring1, qs1, qk1, c1)
    a2 = a_map(ring2, qs2, qk2, c2)
    for (a, b), val in a1.items():
        lhs = psi.apply(val)
        rhs = a2[phi1.apply(a), phi2.apply(b)]
        if lhs != rhs:
            raise SquareDoesNotCommute(
                f"psi([{a},{b}]) = {lhs} but the mapped cosets give {rhs}", (a, b)
            )
    recs = [
        _record("pairwise_square_commutes", True, "=", Fraction(1), Fraction(1))
    ]
    for r in sorted(psi.image):
        lhs = pr_r(S1, K1, r).fraction
        rhs = pr_r(S2, K2, psi.apply(r)).fraction
        recs.append(
            _record(
                "pairwise_invariance",
                True,
                "=",
                lhs,
                rhs,
                witness={"r": r, "psi_r": psi.apply(r)},
            )
        )
    return recs
