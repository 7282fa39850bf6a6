"""Exact finite rings as element-indexed operation tables.

A ring of order n lives on the element indices 0..n-1, with 0 as the zero
element.  All arithmetic is table lookup.  Rings are validated exhaustively
(every axiom checked on every triple) at construction time and never mutated
afterwards, so a ring can be shared freely between threads or worker
processes; the attached cache only ever gains idempotent entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

VALIDATION_CAP = 256

_CHUNK_CELLS = 1 << 22  # cells per chunk in the O(n^3) axiom scans


class RingError(Exception):
    """Base for ring construction and arithmetic failures.

    ``witness`` names the first violating tuple when one exists.
    """

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class NotAbelianGroup(RingError):
    pass


class NotAssociative(RingError):
    pass


class NotDistributive(RingError):
    pass


class ZeroNotAbsorbing(RingError):
    pass


class IllDefinedBilinearity(RingError):
    pass


class RingMismatch(RingError):
    pass


class CapExceeded(RingError):
    pass


@dataclass(frozen=True)
class Basis:
    """Structure-constant presentation: moduli d_1..d_k plus the coordinate
    vector of every generator product e_i * e_j."""

    moduli: tuple[int, ...]
    products: tuple[tuple[tuple[int, ...], ...], ...]


def _as_table(table, what: str) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(x) for x in row) for row in table)
    n = len(rows)
    if n == 0:
        raise ValueError(f"{what} table is empty")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"{what} table row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise ValueError(f"{what} table entry {x} out of range [0,{n})")
    return rows


def _chunk_rows(n: int) -> int:
    return max(1, _CHUNK_CELLS // max(1, n * n))


def _first_bad(lhs: np.ndarray, rhs: np.ndarray) -> tuple[int, ...]:
    return tuple(int(v) for v in np.argwhere(lhs != rhs)[0])


def _check_add(add: np.ndarray) -> None:
    n = add.shape[0]
    idx = np.arange(n)
    if not np.array_equal(add[0], idx):
        j = int(np.nonzero(add[0] != idx)[0][0])
        raise NotAbelianGroup(
            f"0 + {j} = {int(add[0, j])}: index 0 is not an additive identity", (0, j)
        )
    if not np.array_equal(add, add.T):
        i, j = _first_bad(add, add.T)
        raise NotAbelianGroup(f"{i} + {j} != {j} + {i}: addition is not commutative", (i, j))
    if not np.array_equal(np.sort(add, axis=1), np.broadcast_to(idx, (n, n))):
        for i in range(n):
            if len(set(add[i].tolist())) != n:
                raise NotAbelianGroup(f"row {i} of the addition table is not a permutation", (i,))
    step = _chunk_rows(n)
    for lo in range(0, n, step):
        block = add[lo : lo + step]
        lhs = add[block, :]  # (a+b)+c
        rhs = block[:, add]  # a+(b+c)
        if not np.array_equal(lhs, rhs):
            a, b, c = _first_bad(lhs, rhs)
            raise NotAbelianGroup(
                f"({lo + a} + {b}) + {c} != {lo + a} + ({b} + {c})", (lo + a, b, c)
            )


def _check_mul(add: np.ndarray, mul: np.ndarray) -> None:
    n = add.shape[0]
    if not np.array_equal(mul[0], np.zeros(n, dtype=mul.dtype)):
        j = int(np.nonzero(mul[0])[0][0])
        raise ZeroNotAbsorbing(f"0 * {j} = {int(mul[0, j])} != 0", (0, j))
    if not np.array_equal(mul[:, 0], np.zeros(n, dtype=mul.dtype)):
        i = int(np.nonzero(mul[:, 0])[0][0])
        raise ZeroNotAbsorbing(f"{i} * 0 = {int(mul[i, 0])} != 0", (i, 0))
    step = _chunk_rows(n)
    for lo in range(0, n, step):
        block = mul[lo : lo + step]
        lhs = mul[block, :]  # (a*b)*c
        rhs = block[:, mul]  # a*(b*c)
        if not np.array_equal(lhs, rhs):
            a, b, c = _first_bad(lhs, rhs)
            raise NotAssociative(
                f"({lo + a} * {b}) * {c} != {lo + a} * ({b} * {c})", (lo + a, b, c)
            )
    for lo in range(0, n, step):
        addblk = add[lo : lo + step]
        mulblk = mul[lo : lo + step]
        # (a+b)*c == a*c + b*c
        lhs = mul[addblk, :]
        rhs = add[mulblk[:, None, :], mul[None, :, :]]
        if not np.array_equal(lhs, rhs):
            a, b, c = _first_bad(lhs, rhs)
            raise NotDistributive(
                f"({lo + a} + {b}) * {c} != {lo + a}*{c} + {b}*{c}", (lo + a, b, c)
            )
        # c*(a+b) == c*a + c*b
        lhs = mulblk[:, add]
        rhs = add[mulblk[:, :, None], mulblk[:, None, :]]
        if not np.array_equal(lhs, rhs):
            c, a, b = _first_bad(lhs, rhs)
            raise NotDistributive(
                f"{lo + c} * ({a} + {b}) != {lo + c}*{a} + {lo + c}*{b}", (lo + c, a, b)
            )


class FiniteRing:
    """A validated finite ring.

    Construct through :func:`build_from_tables`,
    :func:`build_from_structure_constants` or :func:`direct_product`.
    """

    __slots__ = ("name", "order", "add_table", "mul_table", "neg_table", "basis", "_cache")

    zero_index = 0

    def __init__(self, add_table, mul_table, neg_table, *, name: str, basis: Basis | None):
        self.name = name
        self.order = len(add_table)
        self.add_table = add_table
        self.mul_table = mul_table
        self.neg_table = neg_table
        self.basis = basis
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"<FiniteRing {self.name} order={self.order}>"

    def __reduce__(self):
        return (
            _rebuild_ring,
            (self.add_table, self.mul_table, self.neg_table, self.name, self.basis),
        )

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def elements(self) -> range:
        return range(self.order)

    def element(self, index: int) -> "RingElement":
        return RingElement(self, index)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def commutator(self, a: int, b: int) -> int:
        """a*b - b*a."""
        return self.commutator_table()[a][b]

    def commutator_table(self) -> tuple[tuple[int, ...], ...]:
        tab = self._cache.get("comm")
        if tab is None:
            add, mul, neg = self.add_table, self.mul_table, self.neg_table
            rng = range(self.order)
            tab = tuple(
                tuple(add[mul[a][b]][neg[mul[b][a]]] for b in rng) for a in rng
            )
            self._cache["comm"] = tab
        return tab

    def add_order(self, a: int) -> int:
        """Order of a in the additive group."""
        orders = self._cache.get("addorder")
        if orders is None:
            add = self.add_table
            orders = []
            for x in self.elements():
                acc, k = x, 1
                while acc != 0:
                    acc = add[acc][x]
                    k += 1
                orders.append(k)
            orders = tuple(orders)
            self._cache["addorder"] = orders
        return orders[a]

    def scalar(self, c: int, a: int) -> int:
        """c-fold additive multiple of a, c >= 0."""
        acc = 0
        add = self.add_table
        for _ in range(c % self.add_order(a) if a else 0):
            acc = add[acc][a]
        return acc

    def is_commutative(self) -> bool:
        flag = self._cache.get("commutative")
        if flag is None:
            mul = self.mul_table
            flag = all(
                mul[a][b] == mul[b][a]
                for a in range(self.order)
                for b in range(a + 1, self.order)
            )
            self._cache["commutative"] = flag
        return flag

    def coords(self, index: int) -> tuple[int, ...]:
        """Mixed-radix coordinates of an element (requires a basis)."""
        if self.basis is None:
            raise ValueError(f"ring {self.name} has no structure-constant basis")
        out = []
        for d in reversed(self.basis.moduli):
            index, c = divmod(index, d)
            out.append(c)
        return tuple(reversed(out))

    def index_of(self, coords) -> int:
        if self.basis is None:
            raise ValueError(f"ring {self.name} has no structure-constant basis")
        moduli = self.basis.moduli
        if len(coords) != len(moduli):
            raise ValueError(f"expected {len(moduli)} coordinates, got {len(coords)}")
        idx = 0
        for c, d in zip(coords, moduli):
            c = int(c)
            if not 0 <= c < d:
                raise ValueError(f"coordinate {c} out of range [0,{d})")
            idx = idx * d + c
        return idx

    def revalidate(self) -> None:
        """Re-run the full exhaustive axiom validation."""
        add = np.array(self.add_table, dtype=np.int32)
        mul = np.array(self.mul_table, dtype=np.int32)
        _check_add(add)
        _check_mul(add, mul)


def _rebuild_ring(add_table, mul_table, neg_table, name, basis) -> FiniteRing:
    # Pickle support: the tables came from a validated instance.
    return FiniteRing(add_table, mul_table, neg_table, name=name, basis=basis)


def build_from_tables(
    add_table,
    mul_table,
    *,
    name: str | None = None,
    cap: int = VALIDATION_CAP,
    basis: Basis | None = None,
) -> FiniteRing:
    """Validate raw addition/multiplication tables and build a ring.

    Index 0 must be the zero element.  Raises NotAbelianGroup,
    NotAssociative, NotDistributive or ZeroNotAbsorbing, naming the first
    violating tuple.
    """
    add_rows = _as_table(add_table, "addition")
    mul_rows = _as_table(mul_table, "multiplication")
    n = len(add_rows)
    if len(mul_rows) != n:
        raise ValueError(f"table sizes differ: {n} vs {len(mul_rows)}")
    if n > cap:
        raise CapExceeded(f"ring order {n} exceeds the validation cap {cap}")
    add = np.array(add_rows, dtype=np.int32)
    mul = np.array(mul_rows, dtype=np.int32)
    _check_add(add)
    _check_mul(add, mul)
    neg = tuple(int(v) for v in np.argmax(add == 0, axis=1))
    return FiniteRing(add_rows, mul_rows, neg, name=name or f"ring{n}", basis=basis)


def build_from_structure_constants(
    moduli,
    products,
    *,
    name: str | None = None,
    cap: int = VALIDATION_CAP,
) -> FiniteRing:
    """Build a ring from moduli d_1..d_k and generator products.

    Elements are mixed-radix coordinate vectors over the moduli (first
    coordinate most significant); addition is componentwise and
    multiplication the bilinear extension of ``products[i][j] = e_i*e_j``.
    Presentations where the extension is ill-defined (d_i*(e_i*e_j) != 0 or
    d_j*(e_i*e_j) != 0) are rejected.
    """
    moduli = tuple(int(d) for d in moduli)
    k = len(moduli)
    for d in moduli:
        if d < 2:
            raise ValueError(f"modulus {d} < 2")
    n = prod(moduli) if k else 1
    if n > cap:
        raise CapExceeded(f"ring order {n} exceeds the validation cap {cap}")

    prods = tuple(tuple(tuple(int(c) for c in vec) for vec in row) for row in products)
    if len(prods) != k or any(len(row) != k for row in prods):
        raise ValueError(f"structure constants must form a {k}x{k} tensor")
    for i in range(k):
        for j in range(k):
            vec = prods[i][j]
            if len(vec) != k:
                raise ValueError(f"product e{i + 1}*e{j + 1} has {len(vec)} coordinates")
            for t, c in enumerate(vec):
                if not 0 <= c < moduli[t]:
                    raise ValueError(
                        f"coordinate {c} of e{i + 1}*e{j + 1} out of range [0,{moduli[t]})"
                    )
            for d in (moduli[i], moduli[j]):
                if any((d * c) % moduli[t] for t, c in enumerate(vec)):
                    raise IllDefinedBilinearity(
                        f"{d}*(e{i + 1}*e{j + 1}) != 0: bilinear extension is ill-defined",
                        (i, j),
                    )

    def decode(idx: int) -> tuple[int, ...]:
        out = []
        for d in reversed(moduli):
            idx, c = divmod(idx, d)
            out.append(c)
        return tuple(reversed(out))

    def encode(vec) -> int:
        idx = 0
        for c, d in zip(vec, moduli):
            idx = idx * d + c
        return idx

    coords = [decode(x) for x in range(n)]

    def vec_add(u, v):
        return tuple((a + b) % d for a, b, d in zip(u, v, moduli))

    def vec_scale(c, u):
        return tuple((c * a) % d for a, d in zip(u, moduli))

    add_rows = tuple(
        tuple(encode(vec_add(coords[x], coords[y])) for y in range(n)) for x in range(n)
    )
    zero = (0,) * k
    mul_rows = []
    for x in range(n):
        xc = coords[x]
        row = []
        for y in range(n):
            yc = coords[y]
            acc = zero
            for i, xi in enumerate(xc):
                if not xi:
                    continue
                for j, yj in enumerate(yc):
                    if not yj:
                        continue
                    acc = vec_add(acc, vec_scale(xi * yj, prods[i][j]))
            row.append(encode(acc))
        mul_rows.append(tuple(row))
    basis = Basis(moduli, prods)
    return build_from_tables(
        add_rows, tuple(mul_rows), name=name or f"sc{n}", cap=cap, basis=basis
    )


def direct_product(
    r1: FiniteRing, r2: FiniteRing, *, name: str | None = None, cap: int = VALIDATION_CAP
) -> FiniteRing:
    """Componentwise product ring on pair indices i1*|R2| + i2."""
    n1, n2 = r1.order, r2.order
    n = n1 * n2
    if n > cap:
        raise CapExceeded(f"product order {n} exceeds the validation cap {cap}")
    a1, a2 = r1.add_table, r2.add_table
    m1, m2 = r1.mul_table, r2.mul_table
    pairs = [(x // n2, x % n2) for x in range(n)]
    add_rows = tuple(
        tuple(a1[i1][j1] * n2 + a2[i2][j2] for (j1, j2) in pairs) for (i1, i2) in pairs
    )
    mul_rows = tuple(
        tuple(m1[i1][j1] * n2 + m2[i2][j2] for (j1, j2) in pairs) for (i1, i2) in pairs
    )
    basis = None
    if r1.basis is not None and r2.basis is not None:
        k1, k2 = len(r1.basis.moduli), len(r2.basis.moduli)
        moduli = r1.basis.moduli + r2.basis.moduli
        zero = (0,) * (k1 + k2)
        prods = []
        for i in range(k1 + k2):
            row = []
            for j in range(k1 + k2):
                if i < k1 and j < k1:
                    row.append(r1.basis.products[i][j] + (0,) * k2)
                elif i >= k1 and j >= k1:
                    row.append((0,) * k1 + r2.basis.products[i - k1][j - k1])
                else:
                    row.append(zero)
            prods.append(tuple(row))
        basis = Basis(moduli, tuple(prods))
    return build_from_tables(
        add_rows, mul_rows, name=name or f"{r1.name}x{r2.name}", cap=cap, basis=basis
    )


@dataclass(frozen=True)
class RingElement:
    """An element of a specific ring, with operator sugar."""

    ring: FiniteRing
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.ring.order:
            raise ValueError(f"index {self.index} out of range for {self.ring!r}")

    def _peer(self, other: "RingElement") -> int:
        if not isinstance(other, RingElement):
            raise TypeError(f"expected RingElement, got {type(other).__name__}")
        if other.ring is not self.ring:
            raise RingMismatch(
                f"elements of {self.ring.name} and {other.ring.name} cannot be combined"
            )
        return other.index

    def __add__(self, other):
        return RingElement(self.ring, self.ring.add(self.index, self._peer(other)))

    def __sub__(self, other):
        return RingElement(self.ring, self.ring.sub(self.index, self._peer(other)))

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.index))

    def __mul__(self, other):
        return RingElement(self.ring, self.ring.mul(self.index, self._peer(other)))

    def commutator(self, other) -> "RingElement":
        return RingElement(self.ring, self.ring.commutator(self.index, self._peer(other)))

    def __int__(self) -> int:
        return self.index

    @property
    def coords(self) -> tuple[int, ...]:
        return self.ring.coords(self.index)


def as_index(ring: FiniteRing, element) -> int:
    """Normalize an int or RingElement argument to a checked index."""
    if isinstance(element, RingElement):
        if element.ring is not ring:
            raise RingMismatch(
                f"element of {element.ring.name} used with ring {ring.name}"
            )
        return element.index
    idx = int(element)
    if not 0 <= idx < ring.order:
        raise ValueError(f"element index {idx} out of range for {ring!r}")
    return idx
