"""Built-in rings, ring-file ingestion, and small-ring generation.

Generation enumerates structure-constant tensors over each abelian group of
the requested order with associativity pruning on generator triples, then
keeps one lexicographically minimal representative per orbit of the additive
automorphism group (ring isomorphisms between rings on the same additive
group are exactly the multiplication-preserving additive automorphisms).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from math import prod

from .rings import (
    CapExceeded,
    FiniteRing,
    RingError,
    VALIDATION_CAP,
    build_from_structure_constants,
    build_from_tables,
    direct_product,
)
from .isoclinism import enumerate_group_isomorphisms, subgroup_view

GENERATION_CAP = 8

BUILTIN_NAMES = ("zn", "nc4a", "row2", "ut2", "m2", "product")


class UnknownBuiltin(RingError):
    pass


class ParseError(RingError):
    def __init__(self, message: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line


@dataclass
class CatalogEntry:
    name: str
    ring: FiniteRing
    provenance: str  # builtin | file | generated
    notes: str = ""


def builtin(name: str, params=()) -> FiniteRing:
    """Built-in ring constructors.

    zn n          -- the cyclic ring Z_n
    nc4a          -- the non-commutative ring of order 4 (row2 over Z_2)
    row2 n        -- pairs with (x,y)*(x',y') = (xx', xy') over Z_n
    ut2 n         -- upper triangular 2x2 matrices over Z_n
    m2 n          -- full 2x2 matrices over Z_n

    Products of builtins are available through parse_ring_spec.
    """
    params = [int(x) for x in params]

    def need(count: int) -> None:
        if len(params) != count:
            raise UnknownBuiltin(f"builtin {name} expects {count} parameter(s)")

    if name == "zn":
        need(1)
        (n,) = params
        return build_from_structure_constants([n], [[(1,)]], name=f"z{n}")
    if name == "nc4a":
        need(0)
        return _row2(2, "nc4a")
    if name == "row2":
        need(1)
        return _row2(params[0], f"row2_{params[0]}")
    if name == "ut2":
        need(1)
        (n,) = params
        zero = (0, 0, 0)
        prods = [[zero, zero, zero] for _ in range(3)]
        prods[0][0] = (1, 0, 0)  # E11*E11 = E11
        prods[0][1] = (0, 1, 0)  # E11*E12 = E12
        prods[1][2] = (0, 1, 0)  # E12*E22 = E12
        prods[2][2] = (0, 0, 1)  # E22*E22 = E22
        return build_from_structure_constants([n] * 3, prods, name=f"ut2_{n}")
    if name == "m2":
        need(1)
        (n,) = params
        # generators E11, E12, E21, E22; Eab*Ecd = [b=c] Ead
        units = [(1, 1), (1, 2), (2, 1), (2, 2)]
        pos = {u: t for t, u in enumerate(units)}
        prods = [[(0, 0, 0, 0) for _ in range(4)] for _ in range(4)]
        for (a, b), i in pos.items():
            for (c, d), j in pos.items():
                if b == c:
                    vec = [0, 0, 0, 0]
                    vec[pos[(a, d)]] = 1
                    prods[i][j] = tuple(vec)
        return build_from_structure_constants([n] * 4, prods, name=f"m2_{n}")
    raise UnknownBuiltin(f"unknown builtin ring {name!r}")


def _row2(n: int, name: str) -> FiniteRing:
    prods = [[(1, 0), (0, 1)], [(0, 0), (0, 0)]]
    return build_from_structure_constants([n, n], prods, name=name)


def parse_ring_spec(spec: str, *, cap: int = VALIDATION_CAP) -> FiniteRing:
    """Resolve ``builtin:name[:p...]`` or a ring-file path to a ring."""
    if spec.startswith("builtin:"):
        body = spec[len("builtin:") :]
        if body.startswith("product:"):
            parts = body[len("product:") :].split(",")
            if len(parts) < 2:
                raise UnknownBuiltin("product needs at least two factor specs")
            rings = [parse_ring_spec(f"builtin:{p}", cap=cap) for p in parts]
            out = rings[0]
            for nxt in rings[1:]:
                out = direct_product(out, nxt, cap=cap)
            return out
        bits = body.split(":")
        return builtin(bits[0], bits[1:])
    if spec.startswith("file:"):
        spec = spec[len("file:") :]
    with open(spec, "r", encoding="utf-8") as fh:
        return parse_ring_file(fh.read(), cap=cap).ring


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_ring_file(text: str, *, cap: int = VALIDATION_CAP) -> CatalogEntry:
    """Parse the plain-text ring format.

    ``ring NAME`` then either ``moduli d1 .. dk`` with ``mul i j = c1 .. ck``
    lines (1-based generator indices, omitted products zero), or ``order n``
    with ``add:`` and ``mul:`` table blocks.  Table files with the zero
    element away from index 0 are renumbered on load.
    """
    rows = list(_tokens(text))
    if not rows:
        raise ParseError("empty ring file")
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(rows):
            raise ParseError("unexpected end of file", rows[-1][0])
        item = rows[pos]
        pos += 1
        return item

    lineno, head = take()
    if head[0] != "ring" or len(head) != 2:
        raise ParseError("expected header 'ring NAME'", lineno)
    name = head[1]

    lineno, kind = take()
    if kind[0] == "moduli":
        try:
            moduli = [int(d) for d in kind[1:]]
        except ValueError:
            raise ParseError("bad moduli", lineno) from None
        if not moduli:
            raise ParseError("moduli line needs at least one modulus", lineno)
        k = len(moduli)
        prods = [[(0,) * k for _ in range(k)] for _ in range(k)]
        while pos < len(rows):
            lineno, toks = take()
            if toks[0] != "mul" or len(toks) != 4 + k or toks[3] != "=":
                raise ParseError("expected 'mul i j = c1 .. ck'", lineno)
            try:
                i, j = int(toks[1]), int(toks[2])
                vec = tuple(int(c) for c in toks[4:])
            except ValueError:
                raise ParseError("bad product entry", lineno) from None
            if not (1 <= i <= k and 1 <= j <= k):
                raise ParseError(f"generator index out of range 1..{k}", lineno)
            for t, c in enumerate(vec):
                if not 0 <= c < moduli[t]:
                    raise ParseError(
                        f"coordinate {c} out of range [0,{moduli[t]})", lineno
                    )
            prods[i - 1][j - 1] = vec
        try:
            ring = build_from_structure_constants(moduli, prods, name=name, cap=cap)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        return CatalogEntry(name, ring, "file")

    if kind[0] != "order" or len(kind) != 2:
        raise ParseError("expected 'moduli ...' or 'order n'", lineno)
    try:
        n = int(kind[1])
    except ValueError:
        raise ParseError("bad order", lineno) from None

    def block(tag: str) -> list[list[int]]:
        lineno, toks = take()
        if toks != [f"{tag}:"]:
            raise ParseError(f"expected '{tag}:'", lineno)
        out = []
        for _ in range(n):
            lineno, toks = take()
            try:
                row = [int(x) for x in toks]
            except ValueError:
                raise ParseError("bad table row", lineno) from None
            if len(row) != n:
                raise ParseError(f"expected {n} entries per row", lineno)
            for x in row:
                if not 0 <= x < n:
                    raise ParseError(f"index {x} out of range [0,{n})", lineno)
            out.append(row)
        return out

    add_rows = block("add")
    mul_rows = block("mul")
    add_rows, mul_rows = _normalize_zero(add_rows, mul_rows)
    try:
        ring = build_from_tables(add_rows, mul_rows, name=name, cap=cap)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return CatalogEntry(name, ring, "file")


def _normalize_zero(add_rows, mul_rows):
    n = len(add_rows)
    zero = next(
        (i for i in range(n) if all(add_rows[i][j] == j for j in range(n))), None
    )
    if zero is None or zero == 0:
        return add_rows, mul_rows

    def p(x: int) -> int:
        return 0 if x == zero else zero if x == 0 else x

    new_add = [[p(add_rows[p(i)][p(j)]) for j in range(n)] for i in range(n)]
    new_mul = [[p(mul_rows[p(i)][p(j)]) for j in range(n)] for i in range(n)]
    return new_add, new_mul


def serialize_ring(entry) -> str:
    """Deterministic text form; round-trips through parse_ring_file."""
    ring = entry.ring if isinstance(entry, CatalogEntry) else entry
    out = [f"ring {ring.name}"]
    if ring.basis is not None:
        out.append("moduli " + " ".join(str(d) for d in ring.basis.moduli))
        k = len(ring.basis.moduli)
        for i in range(k):
            for j in range(k):
                vec = ring.basis.products[i][j]
                if any(vec):
                    out.append(
                        f"mul {i + 1} {j + 1} = " + " ".join(str(c) for c in vec)
                    )
    else:
        out.append(f"order {ring.order}")
        out.append("add:")
        out.extend(" ".join(str(x) for x in row) for row in ring.add_table)
        out.append("mul:")
        out.extend(" ".join(str(x) for x in row) for row in ring.mul_table)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# generation of all rings of a given order, up to isomorphism


def _partitions(total: int):
    """Non-increasing positive partitions of ``total``."""

    def rec(rest: int, bound: int):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, bound), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    yield from rec(total, total)


def abelian_moduli_chains(n: int) -> list[tuple[int, ...]]:
    """Invariant-factor chains d1 | d2 | ... | dk with product n, ascending."""
    if n == 1:
        return [()]
    factors: dict[int, int] = {}
    m, d = n, 2
    while d * d <= m:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    primes = sorted(factors)
    per_prime = [list(_partitions(factors[p])) for p in primes]
    chains = set()
    for combo in iproduct(*per_prime):
        width = max(len(part) for part in combo)
        desc = []
        for idx in range(width):
            dd = 1
            for p, part in zip(primes, combo):
                if idx < len(part):
                    dd *= p ** part[idx]
            desc.append(dd)
        chains.add(tuple(reversed(desc)))
    return sorted(chains, key=lambda c: (len(c), c))


class _GroupTables:
    """Dense helper tables for one abelian group given by moduli."""

    def __init__(self, moduli: tuple[int, ...]):
        self.moduli = tuple(moduli)
        k = len(self.moduli)
        self.k = k
        self.n = prod(self.moduli) if k else 1
        coords = []
        for x in range(self.n):
            rem, vec = x, []
            for d in reversed(self.moduli):
                rem, c = divmod(rem, d)
                vec.append(c)
            coords.append(tuple(reversed(vec)))
        self.coords = coords
        enc = {c: i for i, c in enumerate(coords)}
        self.add = [
            [
                enc[
                    tuple(
                        (a + b) % d
                        for a, b, d in zip(coords[x], coords[y], self.moduli)
                    )
                ]
                for y in range(self.n)
            ]
            for x in range(self.n)
        ]
        self.order = [
            next(
                t
                for t in range(1, self.n + 1)
                if all((t * c) % d == 0 for c, d in zip(coords[x], self.moduli))
            )
            for x in range(self.n)
        ]
        self.basis = [
            enc[tuple(int(t == i) for t in range(k))] for i in range(k)
        ]
        self.supp = [
            tuple((t, c) for t, c in enumerate(coords[x]) if c)
            for x in range(self.n)
        ]

    def scale(self, c: int, x: int) -> int:
        acc = 0
        for _ in range(c % self.order[x]):
            acc = self.add[acc][x]
        return acc


def _associative_tensors(g: _GroupTables) -> list[tuple[int, ...]]:
    """All structure-constant tensors (flat, row-major) whose bilinear
    extension is well defined and associative.

    Backtracks over generator products, pruning with every generator-triple
    associativity constraint that is already fully determined; associativity
    on generators extends to the whole ring by trilinearity of the
    associator.
    """
    k, n = g.k, g.n
    if k == 0:
        return [()]
    moduli = g.moduli
    add, supp = g.add, g.supp
    scale = g.scale
    domains = {}
    for i in range(k):
        for j in range(k):
            bound = min(moduli[i], moduli[j])
            domains[i, j] = tuple(
                v
                for v in range(n)
                if all((bound * c) % moduli[t] == 0 for t, c in supp[v])
            )
    slots = [(i, j) for i in range(k) for j in range(k)]
    p: list[int | None] = [None] * (k * k)
    triples = [(a, b, c) for a in range(k) for b in range(k) for c in range(k)]
    out: list[tuple[int, ...]] = []

    def mul_vec_basis(x: int, c: int) -> int | None:
        acc = 0
        for t, ct in supp[x]:
            ptc = p[t * k + c]
            if ptc is None:
                return None
            acc = add[acc][scale(ct, ptc)]
        return acc

    def mul_basis_vec(a: int, x: int) -> int | None:
        acc = 0
        for t, ct in supp[x]:
            pat = p[a * k + t]
            if pat is None:
                return None
            acc = add[acc][scale(ct, pat)]
        return acc

    def consistent() -> bool:
        for a, b, c in triples:
            pab = p[a * k + b]
            pbc = p[b * k + c]
            if pab is None or pbc is None:
                continue
            left = mul_vec_basis(pab, c)
            if left is None:
                continue
            right = mul_basis_vec(a, pbc)
            if right is None:
                continue
            if left != right:
                return False
        return True

    def dfs(slot: int) -> None:
        if slot == len(slots):
            out.append(tuple(p))  # type: ignore[arg-type]
            return
        for v in domains[slots[slot]]:
            p[slot] = v
            if consistent():
                dfs(slot + 1)
        p[slot] = None

    dfs(0)
    return out


def _tensor_mul_table(t: tuple[int, ...], g: _GroupTables) -> list[list[int]]:
    k, n = g.k, g.n
    mul = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            acc = 0
            for i, xi in g.supp[x]:
                for j, yj in g.supp[y]:
                    acc = g.add[acc][g.scale(xi * yj, t[i * k + j])]
            mul[x][y] = acc
    return mul


def _automorphism_perms(g: _GroupTables) -> list[tuple[int, ...]]:
    """Additive automorphisms as permutations of element indices."""
    k, n = g.k, g.n
    if k == 0:
        return [(0,)]
    candidates = [
        [v for v in range(n) if g.moduli[i] % g.order[v] == 0] for i in range(k)
    ]
    perms = []
    for images in iproduct(*candidates):
        perm = []
        for x in range(n):
            acc = 0
            for t, c in g.supp[x]:
                acc = g.add[acc][g.scale(c, images[t])]
            perm.append(acc)
        if len(set(perm)) == n:
            perms.append(tuple(perm))
    return perms


def _orbit_representatives(
    tensors: list[tuple[int, ...]], g: _GroupTables
) -> list[tuple[int, ...]]:
    """Lexicographically minimal tensor per additive-automorphism orbit."""
    k, n = g.k, g.n
    if k == 0:
        return list(tensors)
    perms = _automorphism_perms(g)
    inverses = [tuple(sorted(range(n), key=lambda x: perm[x])) for perm in perms]
    tensor_set = set(tensors)
    seen: set[tuple[int, ...]] = set()
    reps = []
    for t in sorted(tensor_set):
        if t in seen:
            continue
        reps.append(t)
        mul = _tensor_mul_table(t, g)
        for perm, inv in zip(perms, inverses):
            image = tuple(
                perm[mul[inv[g.basis[i]]][inv[g.basis[j]]]]
                for i in range(k)
                for j in range(k)
            )
            if image not in tensor_set:
                raise AssertionError("automorphism image escaped the tensor set")
            seen.add(image)
    return reps


def generate_rings(order: int, cap: int = GENERATION_CAP):
    """Yield every ring of the given order, one per isomorphism class."""
    if order > cap:
        raise CapExceeded(f"generation order {order} exceeds the cap {cap}")
    seq = 0
    for moduli in abelian_moduli_chains(order):
        g = _GroupTables(moduli)
        tensors = _associative_tensors(g)
        for t in _orbit_representatives(tensors, g):
            k = g.k
            prods = tuple(
                tuple(g.coords[t[i * k + j]] for j in range(k)) for i in range(k)
            )
            yield build_from_structure_constants(
                moduli, prods, name=f"gen{order}_{seq}"
            )
            seq += 1


def are_isomorphic(r1: FiniteRing, r2: FiniteRing) -> bool:
    """Ring isomorphism test by searching additive isomorphisms that also
    preserve multiplication; exponential, intended for small orders."""
    if r1.order != r2.order:
        return False
    v1 = subgroup_view(r1, range(r1.order))
    v2 = subgroup_view(r2, range(r2.order))
    m1, m2 = r1.mul_table, r2.mul_table
    for iso in enumerate_group_isomorphisms(v1, v2):
        img = iso.image
        if all(
            img[m1[a][b]] == m2[img[a]][img[b]]
            for a in range(r1.order)
            for b in range(r1.order)
        ):
            return True
    return False


def default_catalog(
    gen_max_order: int = GENERATION_CAP, max_order: int = 16
) -> list[CatalogEntry]:
    """The standard verification catalog: every ring of order up to
    ``gen_max_order`` plus the named fixtures."""
    entries: list[CatalogEntry] = []
    for order in range(1, gen_max_order + 1):
        if order > max_order:
            break
        for ring in generate_rings(order):
            entries.append(CatalogEntry(ring.name, ring, "generated"))
    fixtures = [
        builtin("nc4a"),
        builtin("ut2", (2,)),
        builtin("m2", (2,)),
        direct_product(builtin("nc4a"), builtin("zn", (2,)), name="nc4axz2"),
    ]
    for ring in fixtures:
        if ring.order <= max_order:
            entries.append(CatalogEntry(ring.name, ring, "builtin"))
    return entries
