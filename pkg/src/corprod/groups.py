"""Exact arithmetic for finite groups given by Cayley tables.

Elements are indices 0..order-1 with 0 the identity by convention of all
factory functions.  Tables built by the factories here are valid by
construction; tables from untrusted input go through
:func:`group_from_table`, which checks the Latin square property,
identity laws and associativity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .abelian import FiniteAbelianGroup
from .errors import (
    InvariantViolation,
    NotASubgroup,
    NotNormal,
    SizeCapExceeded,
)

DEFAULT_ORDER_CAP = 2000


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    label: str = "G"

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(int(x) for x in r) for r in self.table))
        n = len(self.table)
        e = self.identity
        if not 0 <= e < n:
            raise InvariantViolation("identity index out of range")
        for g in range(n):
            if self.table[e][g] != g or self.table[g][e] != g:
                raise InvariantViolation("identity row/column is not the identity map")

    def __hash__(self):
        return hash((self.table, self.identity))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.table == other.table
            and self.identity == other.identity
        )

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inv(self) -> tuple[int, ...]:
        n = self.order
        out = [None] * n
        for a in range(n):
            row = self.table[a]
            for b in range(n):
                if row[b] == self.identity:
                    out[a] = b
                    break
            if out[a] is None:
                raise InvariantViolation(f"element {a} has no right inverse")
        return tuple(out)

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv[g])

    def commutator(self, g: int, h: int) -> int:
        """g h g^-1 h^-1."""
        return self.mul(self.conj(g, h), self.inv[h])

    def element_order(self, g: int) -> int:
        n, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    def power(self, g: int, k: int) -> int:
        k %= self.element_order(g)
        x = self.identity
        for _ in range(k):
            x = self.mul(x, g)
        return x

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(self.order))


def validate_cayley_table(table, identity: int = 0) -> None:
    """Full validation: Latin square, identity, associativity.

    Any single-entry corruption of a valid table breaks the Latin square
    property and is rejected here.  Associativity uses Light's test:
    with the identity laws already checked, the elements that associate
    in the middle form a multiplicatively closed set, so it suffices to
    test a set that generates the loop.
    """
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvariantViolation("Cayley table must be square")
    n = arr.shape[0]
    if n == 0:
        raise InvariantViolation("empty Cayley table")
    if arr.min() < 0 or arr.max() >= n:
        raise InvariantViolation("table entries out of range")
    want = np.arange(n, dtype=np.int64)
    if not (np.array_equal(np.sort(arr, axis=1), np.tile(want, (n, 1)))
            and np.array_equal(np.sort(arr, axis=0), np.tile(want[:, None], (1, n)))):
        raise InvariantViolation("table rows/columns are not permutations")
    if not (np.array_equal(arr[identity], want) and np.array_equal(arr[:, identity], want)):
        raise InvariantViolation("identity row/column is not the identity map")
    for g in _loop_generating_set(arr, identity):
        # (x g) y == x (g y) for all x, y
        if not np.array_equal(arr[arr[:, g], :], arr[:, arr[g, :]]):
            raise InvariantViolation(f"associativity fails with middle element {g}")


def _loop_generating_set(arr: np.ndarray, identity: int) -> list[int]:
    """Elements whose multiplicative closure is the whole table."""
    n = len(arr)
    closed = np.zeros(n, dtype=bool)
    closed[identity] = True
    gens: list[int] = []
    while not closed.all():
        x = int(np.flatnonzero(~closed)[0])
        gens.append(x)
        closed[x] = True
        while True:
            idx = np.flatnonzero(closed)
            products = arr[np.ix_(idx, idx)]
            before = int(closed.sum())
            closed[products.ravel()] = True
            if int(closed.sum()) == before:
                break
    return gens


def group_from_table(table, identity: int = 0, label: str = "G") -> FiniteGroup:
    """Construct from an untrusted Cayley table; validates everything."""
    validate_cayley_table(table, identity)
    return FiniteGroup(tuple(tuple(int(x) for x in row) for row in table), identity, label)


def group_from_mul(elements, mul, identity_elem, label: str = "G") -> FiniteGroup:
    """Build a group from abstract elements and a multiplication callable.

    The identity is moved to index 0; the rest keep the given order.
    """
    elems = [identity_elem] + [x for x in elements if x != identity_elem]
    index = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    table = tuple(
        tuple(index[mul(elems[i], elems[j])] for j in range(n)) for i in range(n)
    )
    return FiniteGroup(table, 0, label)


# ---------------------------------------------------------------------------
# permutation closures
# ---------------------------------------------------------------------------


def _compose(p, q):
    # apply q first, then p
    return tuple(p[q[i]] for i in range(len(p)))


def group_from_generators(
    degree: int, generators, cap: int = DEFAULT_ORDER_CAP, label: str = "G"
) -> FiniteGroup:
    """Closure of permutations of 0..degree-1 under composition.

    Element 0 is the identity; the remaining elements are enumerated by
    breadth-first search, which makes the numbering reproducible.
    """
    idp = tuple(range(degree))
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if sorted(g) != list(range(degree)):
            raise InvariantViolation(f"not a permutation of 0..{degree-1}: {g}")
        gens.append(g)
    elems = [idp]
    seen = {idp: 0}
    frontier = [idp]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in seen:
                    if len(elems) >= cap:
                        raise SizeCapExceeded(
                            f"closure exceeds the order cap {cap}"
                        )
                    seen[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    n = len(elems)
    table = tuple(
        tuple(seen[_compose(elems[i], elems[j])] for j in range(n)) for i in range(n)
    )
    return FiniteGroup(table, 0, label)


# ---------------------------------------------------------------------------
# standard small groups
# ---------------------------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteGroup(table, 0, f"C{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n (symmetries of the n-gon)."""
    elems = [(r, f) for f in (0, 1) for r in range(n)]

    def mul(a, b):
        (i, e), (j, d) = a, b
        return ((i + (j if e == 0 else -j)) % n, (e + d) % 2)

    return group_from_mul(elems, mul, (0, 0), f"D{n}")


def quaternion_group() -> FiniteGroup:
    """Order-8 quaternion group {+-1, +-i, +-j, +-k}."""
    base = {
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"),
        ("k", "i"): (1, "j"), ("i", "k"): (-1, "j"),
    }

    def mul(a, b):
        (sa, xa), (sb, xb) = a, b
        s = sa * sb
        if xa == "1":
            return (s, xb)
        if xb == "1":
            return (s, xa)
        s2, x = base[(xa, xb)]
        return (s * s2, x)

    elems = [(s, x) for x in ("1", "i", "j", "k") for s in (1, -1)]
    return group_from_mul(elems, mul, (1, "1"), "Q8")


def heisenberg_group(p: int) -> FiniteGroup:
    """Unitriangular 3x3 matrices over F_p; order p^3, exponent p for odd p."""
    elems = list(itertools.product(range(p), repeat=3))

    def mul(x, y):
        (a, b, c), (d, e, f) = x, y
        return ((a + d) % p, (b + e) % p, (c + f + a * e) % p)

    return group_from_mul(elems, mul, (0, 0, 0), f"Heis{p**3}")


def symmetric_group(n: int) -> FiniteGroup:
    gens = []
    if n >= 2:
        gens.append(tuple([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(tuple(list(range(1, n)) + [0]))
    g = group_from_generators(n, gens, cap=max(DEFAULT_ORDER_CAP, 2 * 720))
    return FiniteGroup(g.table, 0, f"S{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, label: str | None = None) -> FiniteGroup:
    elems = [(a, b) for a in range(g.order) for b in range(h.order)]

    def mul(x, y):
        return (g.mul(x[0], y[0]), h.mul(x[1], y[1]))

    return group_from_mul(elems, mul, (g.identity, h.identity), label or f"{g.label}x{h.label}")


def abelian_group_from_factors(factors) -> FiniteGroup:
    """The group prod Z/d as a Cayley table (for building fibers)."""
    factors = tuple(factors)
    elems = list(itertools.product(*(range(d) for d in factors)))

    def mul(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, factors))

    label = "x".join(f"C{d}" for d in factors) or "C1"
    return group_from_mul(elems, mul, tuple(0 for _ in factors), label)


def trivial_group() -> FiniteGroup:
    return FiniteGroup(((0,),), 0, "1")


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(int(x) for x in self.elements)))
        object.__setattr__(self, "elements", elems)
        g = self.parent
        eset = set(elems)
        if g.identity not in eset:
            raise NotASubgroup("subgroup does not contain the identity")
        for a in elems:
            if not 0 <= a < g.order:
                raise NotASubgroup(f"element {a} out of range")
            if g.inv[a] not in eset:
                raise NotASubgroup(f"subgroup not closed under inversion at {a}")
            for b in elems:
                if g.mul(a, b) not in eset:
                    raise NotASubgroup(f"subgroup not closed under product {a},{b}")

    def __hash__(self):
        return hash((self.parent, self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, g: int) -> bool:
        return g in set(self.elements)

    def is_normal(self) -> bool:
        g = self.parent
        eset = set(self.elements)
        return all(g.conj(x, a) in eset for x in range(g.order) for a in self.elements)

    def is_full(self) -> bool:
        return self.order == self.parent.order

    def is_trivial(self) -> bool:
        return self.order == 1


def subgroup_from_generators(g: FiniteGroup, gens) -> Subgroup:
    closure = {g.identity}
    frontier = [g.identity]
    gens = [int(x) for x in gens]
    for x in gens:
        if not 0 <= x < g.order:
            raise NotASubgroup(f"generator index {x} out of range")
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul(x, s)
                if y not in closure:
                    closure.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(g, tuple(sorted(closure)))


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, (g.identity,))


def full_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)))


def normal_closure(g: FiniteGroup, s: Subgroup) -> Subgroup:
    """Smallest normal subgroup of g containing s."""
    if s.parent is not g and s.parent != g:
        raise NotASubgroup("subgroup belongs to a different group")
    gens = set(s.elements)
    for x in range(g.order):
        for a in s.elements:
            gens.add(g.conj(x, a))
    return subgroup_from_generators(g, gens)


def generating_set(g: FiniteGroup) -> tuple[int, ...]:
    """Small deterministic generating set.

    For small groups each step picks the element whose addition grows the
    closure the most; larger groups fall back to a cheaper greedy pass
    preferring high-order elements.
    """
    if g.order == 1:
        return ()
    gens: list[int] = []
    closure = {g.identity}
    if g.order <= 128:
        # prefer elements with small centralizers among equal closure
        # growth; central picks tend to force an extra generator
        cent = {
            x: sum(1 for y in range(g.order) if g.mul(x, y) == g.mul(y, x))
            for x in range(g.order)
        }
        while len(closure) < g.order:
            best, best_key = None, None
            for x in range(g.order):
                if x in closure:
                    continue
                size = len(subgroup_from_generators(g, gens + [x]).elements)
                key = (-size, cent[x], x)
                if best_key is None or key < best_key:
                    best, best_key = x, key
            gens.append(best)
            closure = set(subgroup_from_generators(g, gens).elements)
        return tuple(gens)
    order = {x: g.element_order(x) for x in range(g.order)}
    candidates = sorted(range(g.order), key=lambda x: (-order[x], x))
    for x in candidates:
        if x in closure:
            continue
        gens.append(x)
        closure = set(subgroup_from_generators(g, gens).elements)
        if len(closure) == g.order:
            break
    return tuple(gens)


# ---------------------------------------------------------------------------
# homomorphisms and quotients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        s, t, im = self.source, self.target, self.images
        if len(im) != s.order:
            raise InvariantViolation("image list has wrong length")
        if any(not 0 <= x < t.order for x in im):
            raise InvariantViolation("image index out of range")
        if im[s.identity] != t.identity:
            raise InvariantViolation("identity is not mapped to the identity")
        for a in range(s.order):
            for b in range(s.order):
                if im[s.mul(a, b)] != t.mul(im[a], im[b]):
                    raise InvariantViolation(
                        f"not a homomorphism at pair ({a},{b})"
                    )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def apply(self, g: int) -> int:
        return self.images[g]

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        return GroupHom(
            other.source, self.target, tuple(self.images[x] for x in other.images)
        )

    def kernel(self) -> Subgroup:
        return Subgroup(
            self.source,
            tuple(g for g in range(self.source.order) if self.images[g] == self.target.identity),
        )

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.images))))

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order


def identity_hom(g: FiniteGroup) -> GroupHom:
    return GroupHom(g, g, tuple(range(g.order)))


def quotient_group(g: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """G/N with minimal-index coset representatives, plus the projection."""
    if not n.is_normal():
        raise NotNormal("quotient requires a normal subgroup")
    rep_of = {}
    for x in range(g.order):
        if x in rep_of:
            continue
        coset = sorted(g.mul(a, x) for a in n.elements)
        r = coset[0]
        for y in coset:
            rep_of[y] = r
    reps = sorted(set(rep_of.values()))
    index = {r: i for i, r in enumerate(reps)}
    table = tuple(
        tuple(index[rep_of[g.mul(reps[i], reps[j])]] for j in range(len(reps)))
        for i in range(len(reps))
    )
    q = FiniteGroup(table, 0, f"{g.label}/N")
    proj = GroupHom(g, q, tuple(index[rep_of[x]] for x in range(g.order)))
    return q, proj


def commutator_subgroup(g: FiniteGroup) -> Subgroup:
    gens = {g.commutator(a, b) for a in range(g.order) for b in range(g.order)}
    return subgroup_from_generators(g, gens)


@dataclass(frozen=True)
class AbelianizationMap:
    """Projection of a finite group onto its abelianization.

    Plays the role of a homomorphism whose target is a
    :class:`FiniteAbelianGroup`; images are coordinate vectors.
    """

    group: FiniteGroup
    target: FiniteAbelianGroup
    images: tuple[tuple[int, ...], ...]

    def apply(self, g: int) -> tuple[int, ...]:
        return self.images[g]

    def kernel_elements(self) -> tuple[int, ...]:
        zero = self.target.zero
        return tuple(g for g in range(self.group.order) if self.images[g] == zero)


def abelianization(g: FiniteGroup) -> tuple[FiniteAbelianGroup, AbelianizationMap]:
    """G/[G,G] in invariant-factor form with the projection on elements."""
    comm = commutator_subgroup(g)
    q, proj = quotient_group(g, comm)
    structure = abelian_structure_from_elements(
        list(range(q.order)), q.mul, q.identity
    )
    target = FiniteAbelianGroup(structure.factors)
    images = tuple(structure.coordinates(proj.apply(x)) for x in range(g.order))
    return target, AbelianizationMap(g, target, images)


# ---------------------------------------------------------------------------
# structure of an enumerated abelian group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumeratedAbelianStructure:
    """Invariant factors of an abelian group given by enumeration.

    ``coordinates`` sends an element to its vector in prod Z/factors;
    ``representatives`` lifts each canonical generator back.
    """

    factors: tuple[int, ...]
    _coords: dict
    representatives: tuple

    def coordinates(self, element):
        return self._coords[element]


def abelian_structure_from_elements(elements, add, zero) -> EnumeratedAbelianStructure:
    """Digit decomposition of a finite abelian group given by a full
    element list and an addition callable.

    Works by building a polycyclic generating sequence: each new
    generator gets a relative order over the span so far, the resulting
    triangular relation matrix goes through the Smith normal form.
    """
    from . import lattice

    span = {zero: ()}
    gens = []
    rel_orders = []
    rel_tails = []
    for x in elements:
        if x in span:
            continue
        k = len(gens)
        gens.append(x)
        powers = [zero]
        cur = x
        while cur not in span:
            powers.append(cur)
            cur = add(cur, x)
        m = len(powers)
        rel_orders.append(m)
        rel_tails.append(span[cur])
        new_span = dict(span)
        for e in range(1, m):
            ge = powers[e]
            for h, hc in span.items():
                vec = hc + (0,) * (k - len(hc)) + (e,)
                new_span[add(ge, h)] = vec
        span = new_span
    k = len(gens)
    coords = {x: c + (0,) * (k - len(c)) for x, c in span.items()}
    rel = [
        tuple(
            (rel_orders[i] if j == i else -(rel_tails[i][j] if j < len(rel_tails[i]) else 0))
            for j in range(k)
        )
        for i in range(k)
    ]
    diag, _, v, vinv = lattice.snf_transforms(rel) if k else ((), (), (), ())
    kept = [i for i in range(k) if diag[i] != 1]
    factors = tuple(diag[i] for i in kept)

    def element_from_gen_vector(y):
        out = zero
        for j, c in enumerate(y):
            c %= rel_orders[j]
            g = gens[j]
            for _ in range(c):
                out = add(out, g)
        return out

    reps = tuple(element_from_gen_vector(vinv[i]) for i in kept)
    classified = {
        x: tuple(lattice.vec_mat(c, v)[i] % diag[i] for i in kept) if k else ()
        for x, c in coords.items()
    }
    return EnumeratedAbelianStructure(factors, classified, reps)
