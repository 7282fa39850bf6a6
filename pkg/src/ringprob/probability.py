"""Exact generalized commuting probabilities for subring pairs.

Two independent computation paths are kept first-class: the defining tally
over all pairs, and the centralizer-sum formula.  With ``CROSS_CHECK`` on
(the default) every formula evaluation is compared against the tally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering

from .rings import FiniteRing, direct_product, as_index
from .subrings import Subring, centralizer_data, same_parent

CROSS_CHECK = True


@total_ordering
@dataclass(frozen=True)
class ProbValue:
    """An exact probability: the raw count and total are kept unreduced,
    the reduced fraction is derived."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        if not 0 <= self.numerator <= self.denominator:
            raise ValueError(f"count {self.numerator}/{self.denominator} is not a probability")

    @cached_property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @staticmethod
    def _coerce(other) -> Fraction | None:
        if isinstance(other, ProbValue):
            return other.fraction
        if isinstance(other, (Fraction, int)):
            return Fraction(other)
        return None

    def __eq__(self, other):
        val = self._coerce(other)
        return NotImplemented if val is None else self.fraction == val

    def __lt__(self, other):
        val = self._coerce(other)
        return NotImplemented if val is None else self.fraction < val

    def __hash__(self):
        return hash(self.fraction)

    def __str__(self) -> str:
        return str(self.fraction)

    def decimal(self, places: int = 6) -> str:
        return f"{float(self.fraction):.{places}f}"

    def to_json(self) -> dict:
        return {
            "num": self.fraction.numerator,
            "den": self.fraction.denominator,
            "raw_num": self.numerator,
            "raw_den": self.denominator,
        }


def pair_tally(S: Subring, K: Subring) -> dict[int, int]:
    """Commutator-value counts over S x K by the defining tally, memoized."""
    ring = same_parent(S, K)
    key = ("tally", S.mask, K.mask)
    tally = ring._cache.get(key)
    if tally is None:
        comm = ring.commutator_table()
        tally = {}
        for s in S.members:
            row = comm[s]
            for k in K.members:
                v = row[k]
                tally[v] = tally.get(v, 0) + 1
        ring._cache[key] = tally
    return tally


def pr_r_naive(S: Subring, K: Subring, r) -> ProbValue:
    """Pr_r(S,K) by counting all |S||K| pairs."""
    ring = same_parent(S, K)
    rr = as_index(ring, r)
    return ProbValue(pair_tally(S, K).get(rr, 0), S.size * K.size)


def _formula_count(S: Subring, K: Subring, rr: int) -> int:
    total = 0
    for s in S.members:
        cent, img = centralizer_data(K, s)
        if rr in img:
            total += cent
    return total


def pr_r_formula(S: Subring, K: Subring, r) -> ProbValue:
    """Pr_r(S,K) as the normalized sum of |C_K(s)| over s with r in [s,K]."""
    ring = same_parent(S, K)
    rr = as_index(ring, r)
    return ProbValue(_formula_count(S, K, rr), S.size * K.size)


def pr_r(S: Subring, K: Subring, r) -> ProbValue:
    """Pr_r(S,K) by the centralizer-sum formula, cross-checked against the
    naive tally when CROSS_CHECK is enabled."""
    value = pr_r_formula(S, K, r)
    if CROSS_CHECK:
        naive = pr_r_naive(S, K, r)
        if naive.numerator != value.numerator:
            raise AssertionError(
                f"computation paths disagree on Pr_r({S!r},{K!r},{r}): "
                f"{naive.numerator} vs {value.numerator} over {value.denominator}"
            )
    return value


def pr(S: Subring, K: Subring) -> ProbValue:
    """Pr(S,K): probability that a random pair commutes."""
    same_parent(S, K)
    total = sum(centralizer_data(K, s)[0] for s in S.members)
    return ProbValue(total, S.size * K.size)


@dataclass(frozen=True)
class PrDistribution:
    """The full family {Pr_r(S,K)} with its support set."""

    S: Subring
    K: Subring
    entries: dict[int, ProbValue]
    support: frozenset[int]

    def total(self) -> Fraction:
        return sum((v.fraction for v in self.entries.values()), Fraction(0))

    def __getitem__(self, r: int) -> ProbValue:
        denom = self.S.size * self.K.size
        return self.entries.get(r, ProbValue(0, denom))


def pr_distribution(S: Subring, K: Subring) -> PrDistribution:
    """Single-pass distribution of commutator values over S x K."""
    same_parent(S, K)
    tally = pair_tally(S, K)
    denom = S.size * K.size
    entries = {r: ProbValue(c, denom) for r, c in sorted(tally.items())}
    dist = PrDistribution(S, K, entries, frozenset(tally))
    if dist.total() != 1:
        raise AssertionError(f"distribution over {S!r} x {K!r} does not sum to 1")
    return dist


def _product_ring(r1: FiniteRing, r2: FiniteRing) -> FiniteRing:
    key = ("product", id(r2))
    cached = r1._cache.get(key)
    if cached is None or cached[0] is not r2:
        cached = (r2, direct_product(r1, r2))
        r1._cache[key] = cached
    return cached[1]


def pr_r_product(S1: Subring, K1: Subring, r1, S2: Subring, K2: Subring, r2) -> ProbValue:
    """Pr over a direct product as the product of factor probabilities.

    The value is also recomputed by the naive tally on the product ring and
    the two must agree exactly.
    """
    ring1 = same_parent(S1, K1)
    ring2 = same_parent(S2, K2)
    rr1, rr2 = as_index(ring1, r1), as_index(ring2, r2)
    p1 = pr_r(S1, K1, rr1)
    p2 = pr_r(S2, K2, rr2)
    result = ProbValue(p1.numerator * p2.numerator, p1.denominator * p2.denominator)

    prod = _product_ring(ring1, ring2)
    n2 = ring2.order
    s_mask = 0
    for a in S1.members:
        for b in S2.members:
            s_mask |= 1 << (a * n2 + b)
    k_mask = 0
    for a in K1.members:
        for b in K2.members:
            k_mask |= 1 << (a * n2 + b)
    check = pr_r_naive(Subring(prod, s_mask), Subring(prod, k_mask), rr1 * n2 + rr2)
    if check != result:
        raise AssertionError(
            f"product factorization failed: {result} != {check} on {prod.name}"
        )
    return result
