"""Cohomology of finite groups with finite abelian coefficients.

Degree 0 is the fixed submodule.  Degree 1 is crossed homomorphisms
modulo principal ones; a crossed homomorphism is determined by its
values on a generating set, so the cocycle space is the solution group
of a small congruence system indexed by the Schreier basis of the
relation module.  Degree 2 uses the classical correspondence between
normalized factor sets and G-equivariant homomorphisms from the
abelianized relation module: the class group is

    Hom_G(N^ab, A) / (restrictions of derivations of the free group),

and each class is materialized as an explicit normalized 2-cocycle
f(g, h) = phi(w_g w_h w_{gh}^{-1}), so all returned representatives
satisfy the inhomogeneous cocycle identities exactly.

Degrees >= 3 are reached only by iterated dimension shifting through
coinduced modules, mirroring how one proves anything about them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from . import lattice, modular
from .abelian import AbHom, AbSubgroup, FiniteAbelianGroup
from .errors import (
    InvariantViolation,
    PreconditionError,
    SizeCapExceeded,
    VerificationFailure,
)
from .groups import FiniteGroup, Subgroup, normal_closure, quotient_group
from .lattice import Matrix, Vector
from .presentation import FreePresentation, free_presentation

DEFAULT_COH_CAP = 20_000


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GModule:
    """A finite abelian group with an action of a finite group by
    automorphism matrices (column convention, one matrix per element)."""

    group: FiniteGroup
    coeff: FiniteAbelianGroup
    action: tuple[Matrix, ...]

    def __post_init__(self):
        acts = tuple(lattice.freeze(m) for m in self.action)
        object.__setattr__(self, "action", acts)
        g, a = self.group, self.coeff
        if len(acts) != g.order:
            raise InvariantViolation("need one action matrix per group element")
        r = a.rank
        ident = lattice.identity_matrix(r)
        if self._reduced(acts[g.identity]) != ident:
            raise InvariantViolation("identity must act as the identity matrix")
        if r == 0 or g.order == 1:
            return
        # multiplicativity against a generating set implies it everywhere
        import numpy as np

        from .groups import generating_set

        arr = np.array(acts, dtype=np.int64)
        mods = np.array(a.factors, dtype=np.int64)[:, None]
        for s in generating_set(g):
            prod = np.mod(arr @ arr[s], mods)
            target = np.mod(arr[[g.mul(x, s) for x in range(g.order)]], mods)
            if not np.array_equal(prod, target):
                raise InvariantViolation(
                    f"action is not a homomorphism against generator {s}"
                )

    def _reduced(self, m: Matrix) -> Matrix:
        return tuple(
            tuple(x % d for x in row) for row, d in zip(m, self.coeff.factors)
        )

    def __hash__(self):
        return hash((self.group, self.coeff, self.action))

    def act(self, g: int, vec) -> Vector:
        return self.coeff.reduce(lattice.mat_vec(self.action[g], vec))

    def is_trivial_action(self) -> bool:
        ident = lattice.identity_matrix(self.coeff.rank)
        return all(self._reduced(m) == ident for m in self.action)


def trivial_module(group: FiniteGroup, coeff: FiniteAbelianGroup) -> GModule:
    ident = lattice.identity_matrix(coeff.rank)
    return GModule(group, coeff, tuple(ident for _ in range(group.order)))


def module_from_generator_matrices(
    group: FiniteGroup, coeff: FiniteAbelianGroup, gen_matrices: dict[int, Matrix]
) -> GModule:
    """Extend matrices given on a generating set to the whole group.

    The listed elements must generate the group; the extension is by
    multiplicativity and the result is validated as a homomorphism.
    """
    n = group.order
    acts: list[Matrix | None] = [None] * n
    acts[group.identity] = lattice.identity_matrix(coeff.rank)
    gens = {int(g): lattice.freeze(m) for g, m in gen_matrices.items()}
    r = coeff.rank
    for g, m in gens.items():
        if not 0 <= g < n:
            raise PreconditionError(f"action element {g} out of range")
        if len(m) != r or any(len(row) != r for row in m):
            raise PreconditionError(
                f"action matrix for element {g} must be {r}x{r}"
            )
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, mg in gens.items():
                y = group.mul(x, g)
                if acts[y] is None:
                    acts[y] = lattice.mat_mul(acts[x], mg)
                    nxt.append(y)
        frontier = nxt
    if any(m is None for m in acts):
        raise PreconditionError(
            "the provided action elements do not generate the group"
        )
    module = GModule(group, coeff, tuple(acts))  # type: ignore[arg-type]
    # redundantly listed elements must agree with the extension
    for g, mg in gens.items():
        if module._reduced(mg) != module._reduced(module.action[g]):
            raise PreconditionError(
                f"matrix given for element {g} contradicts the multiplicative extension"
            )
    return module


# ---------------------------------------------------------------------------
# fixed submodules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedSubmodule:
    """A^H with its inclusion into A."""

    value: FiniteAbelianGroup
    subgroup: AbSubgroup
    inclusion: AbHom

    def coordinates(self, vec) -> Vector:
        return self.subgroup.coordinates(vec)


def fixed_submodule(m: GModule, h: Subgroup) -> FixedSubmodule:
    """{a : x.a = a for all x in h} as a subgroup of the coefficients."""
    a = m.coeff
    r = a.rank
    gens = [x for x in h.elements if x != m.group.identity]
    rows: list[Vector] = []
    row_moduli: list[int] = []
    for x in gens:
        mat = m.action[x]
        for i in range(r):
            rows.append(tuple(mat[i][j] - (1 if i == j else 0) for j in range(r)))
            row_moduli.append(a.factors[i])
    sol = modular.congruence_kernel(rows, row_moduli, a.factors)
    sub = AbSubgroup(a, tuple(sol))
    return FixedSubmodule(sub.structure, sub, sub.inclusion())


def induced_quotient_action(m: GModule, n: Subgroup) -> tuple[GModule, "object", FixedSubmodule]:
    """The G/N-module structure on A^N, for normal N.

    Returns (module over G/N, projection G -> G/N, fixed submodule data).
    """
    q, proj = quotient_group(m.group, n)
    fixed = fixed_submodule(m, n)
    inc = fixed.inclusion.matrix
    k = fixed.value.rank
    section = [None] * q.order
    for x in range(m.group.order):
        if section[proj.apply(x)] is None:
            section[proj.apply(x)] = x
    acts = []
    for qi in range(q.order):
        x = section[qi]
        cols = []
        for j in range(k):
            col = tuple(inc[i][j] for i in range(m.coeff.rank))
            cols.append(fixed.coordinates(m.act(x, col)))
        acts.append(tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)))
    return GModule(q, fixed.value, tuple(acts)), proj, fixed


# ---------------------------------------------------------------------------
# cohomology groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CocycleSpace:
    degree: int
    group_order: int
    coeff_factors: tuple[int, ...]
    description: str


@dataclass
class CohomologyGroup:
    """H^degree with explicit representatives.

    Degree-1 representatives are full value tables (one coefficient
    vector per group element); degree-2 representatives are normalized
    tables indexed by ordered pairs.  ``classify`` sends any cocycle in
    the same format to its coordinate vector in ``value``.
    """

    degree: int
    value: FiniteAbelianGroup
    representatives: tuple
    ambient: CocycleSpace
    module: GModule = field(repr=False, compare=False)
    _classify: object = field(repr=False, compare=False)

    def classify(self, cocycle) -> Vector:
        return self._classify(cocycle)

    @property
    def order(self) -> int:
        return self.value.order


def _check_cap(m: GModule, degree: int, cap: int) -> None:
    weight = m.group.order**degree * max(m.coeff.rank, 1)
    if weight > cap:
        raise SizeCapExceeded(
            f"|G|^{degree} * rank = {weight} exceeds the cohomology cap {cap}"
        )


def _coprime_shortcut(m: GModule) -> bool:
    return gcd(m.group.order, m.coeff.exponent) == 1


def _extend_cocycle_over_tree(m: GModule, pres: FreePresentation, gen_values) -> tuple[Vector, ...]:
    """Full value table of the crossed homomorphism with the given
    generator values (which must satisfy the edge relations)."""
    g = m.group
    a = m.coeff
    table: list[Vector | None] = [None] * g.order
    table[g.identity] = a.zero
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, gelt in enumerate(pres.gens):
                y = g.mul(x, gelt)
                if table[y] is None:
                    table[y] = a.add(table[x], m.act(x, gen_values[s]))
                    nxt.append(y)
        frontier = nxt
    return tuple(table)  # type: ignore[return-value]


def cohomology(m: GModule, degree: int, cap: int = DEFAULT_COH_CAP) -> CohomologyGroup:
    """H^1 (crossed homomorphisms) or H^2 (normalized factor sets)."""
    if degree not in (1, 2):
        raise PreconditionError("direct computation only in degrees 1 and 2")
    return _cohomology_cached(m, degree, cap)


@lru_cache(maxsize=None)
def _cohomology_cached(m: GModule, degree: int, cap: int) -> CohomologyGroup:
    _check_cap(m, degree, cap)
    if degree == 1:
        return _h1(m)
    return _h2(m)


def _h1(m: GModule) -> CohomologyGroup:
    g, a = m.group, m.coeff
    pres = free_presentation(g)
    r = a.rank
    k = len(pres.gens)
    col_moduli = a.factors * k
    space = CocycleSpace(1, g.order, a.factors, "crossed homomorphisms f: G -> A")

    if _coprime_shortcut(m) or r == 0 or g.order == 1:
        value = FiniteAbelianGroup(())
        return CohomologyGroup(1, value, (), space, m, lambda cocycle: ())

    rows: list[Vector] = []
    row_moduli: list[int] = []
    for e in range(pres.rank):
        block = [[0] * (k * r) for _ in range(r)]
        for sign, prefix, s in pres.derivation_terms(e):
            mat = m.action[prefix]
            for i in range(r):
                for j in range(r):
                    block[i][s * r + j] += sign * mat[i][j]
        rows.extend(tuple(row) for row in block)
        row_moduli.extend(a.factors)
    z1 = modular.congruence_kernel(rows, row_moduli, col_moduli)
    b1 = []
    for i in range(r):
        e_i = tuple(1 if j == i else 0 for j in range(r))
        vec = []
        for s in range(k):
            img = m.act(pres.gens[s], e_i)
            vec.extend((img[j] - e_i[j]) % a.factors[j] for j in range(r))
        b1.append(tuple(vec))
    sq = modular.subquotient(col_moduli, z1, b1)
    value = FiniteAbelianGroup(sq.factors)
    reps = tuple(
        _extend_cocycle_over_tree(
            m, pres, [rep[s * r : (s + 1) * r] for s in range(k)]
        )
        for rep in sq.reps
    )

    def classify(cocycle) -> Vector:
        vec = []
        for s in range(k):
            vec.extend(cocycle[pres.gens[s]])
        return sq.classify(tuple(vec))

    return CohomologyGroup(1, value, reps, space, m, classify)


def _h2(m: GModule) -> CohomologyGroup:
    g, a = m.group, m.coeff
    pres = free_presentation(g)
    r = a.rank
    rho = pres.rank
    col_moduli = a.factors * rho
    space = CocycleSpace(
        2, g.order, a.factors, "normalized 2-cocycles f: G x G -> A (bar cochains)"
    )

    if _coprime_shortcut(m) or r == 0 or g.order == 1:
        value = FiniteAbelianGroup(())
        return CohomologyGroup(2, value, (), space, m, lambda cocycle: ())

    # solution space: G-equivariant homs from the relation module to A
    rows: list[Vector] = []
    row_moduli: list[int] = []
    for s, gelt in enumerate(pres.gens):
        conj = pres.conjugation_matrix(s)
        mat = m.action[gelt]
        for e in range(rho):
            block = [[0] * (rho * r) for _ in range(r)]
            for e2 in range(rho):
                c = conj[e][e2]
                if c:
                    for i in range(r):
                        block[i][e2 * r + i] += c
            for i in range(r):
                for j in range(r):
                    block[i][e * r + j] -= mat[i][j]
            rows.extend(tuple(row) for row in block)
            row_moduli.extend(a.factors)
    hom_gens = modular.congruence_kernel(rows, row_moduli, col_moduli)

    # denominator: restrictions of free-group derivations
    den = []
    derivs = [pres.derivation_terms(e) for e in range(rho)]
    for s0 in range(len(pres.gens)):
        for i in range(r):
            e_i = tuple(1 if j == i else 0 for j in range(r))
            vec = [0] * (rho * r)
            for e in range(rho):
                acc = a.zero
                for sign, prefix, s in derivs[e]:
                    if s != s0:
                        continue
                    term = m.act(prefix, e_i)
                    acc = a.add(acc, term if sign > 0 else a.neg(term))
                for j in range(r):
                    vec[e * r + j] = acc[j]
            den.append(tuple(vec))
    sq = modular.subquotient(col_moduli, hom_gens, den)
    value = FiniteAbelianGroup(sq.factors)

    pair_cache: dict[tuple[int, int], Vector] = {}

    def pair_vec(x: int, y: int) -> Vector:
        key = (x, y)
        if key not in pair_cache:
            pair_cache[key] = pres.pair_vector(x, y)
        return pair_cache[key]

    def phi_to_table(phi: Vector):
        table = []
        for x in range(g.order):
            row = []
            for y in range(g.order):
                coeffs = pair_vec(x, y)
                acc = a.zero
                for e, c in enumerate(coeffs):
                    if c:
                        acc = a.add(acc, a.scale(c, phi[e * r : (e + 1) * r]))
                row.append(acc)
            table.append(tuple(row))
        return tuple(table)

    reps = tuple(phi_to_table(rep) for rep in sq.reps)

    def table_to_phi(cocycle) -> Vector:
        # evaluate each Schreier generator word in the extension defined
        # by the (normalized) cocycle
        phi = []
        for e in range(rho):
            acc = a.zero
            cur = g.identity
            for letter in pres.edge_word(e):
                if letter > 0:
                    s = letter - 1
                    gelt = pres.gens[s]
                    acc = a.add(acc, cocycle[cur][gelt])
                    cur = g.mul(cur, gelt)
                else:
                    s = -letter - 1
                    gelt = pres.gens[s]
                    y = g.inv[gelt]
                    b = a.neg(m.act(y, cocycle[gelt][y]))
                    acc = a.add(a.add(acc, m.act(cur, b)), cocycle[cur][y])
                    cur = g.mul(cur, y)
            if cur != g.identity:
                raise VerificationFailure("edge word did not close up")
            phi.extend(acc)
        return tuple(phi)

    def classify(cocycle) -> Vector:
        return sq.classify(table_to_phi(cocycle))

    return CohomologyGroup(2, value, reps, space, m, classify)


def is_cocycle(m: GModule, degree: int, cocycle) -> bool:
    """Exhaustive check of the degree-1 or degree-2 cocycle identity."""
    g, a = m.group, m.coeff
    if degree == 1:
        if cocycle[g.identity] != a.zero:
            return False
        return all(
            cocycle[g.mul(x, y)] == a.add(cocycle[x], m.act(x, cocycle[y]))
            for x in range(g.order)
            for y in range(g.order)
        )
    if degree == 2:
        e = g.identity
        if any(cocycle[e][x] != a.zero or cocycle[x][e] != a.zero for x in range(g.order)):
            return False
        for x in range(g.order):
            for y in range(g.order):
                for z in range(g.order):
                    lhs = a.add(m.act(x, cocycle[y][z]), cocycle[x][g.mul(y, z)])
                    rhs = a.add(cocycle[g.mul(x, y)][z], cocycle[x][y])
                    if lhs != rhs:
                        return False
        return True
    raise PreconditionError("cocycle check only for degrees 1 and 2")


# ---------------------------------------------------------------------------
# inflation, restriction, unramified parts
# ---------------------------------------------------------------------------


def inflation(m: GModule, n: Subgroup, degree: int, cap: int = DEFAULT_COH_CAP) -> AbHom:
    """H^degree(G/N, A^N) -> H^degree(G, A) by cocycle pullback."""
    if not n.is_normal():
        raise PreconditionError("inflation requires a normal subgroup")
    mq, proj, fixed = induced_quotient_action(m, n)
    h_q = cohomology(mq, degree, cap)
    h_g = cohomology(m, degree, cap)
    inc = fixed.inclusion
    cols = []
    for rep in h_q.representatives:
        if degree == 1:
            pulled = tuple(inc.apply(rep[proj.apply(x)]) for x in range(m.group.order))
        else:
            pulled = tuple(
                tuple(inc.apply(rep[proj.apply(x)][proj.apply(y)]) for y in range(m.group.order))
                for x in range(m.group.order)
            )
        cols.append(h_g.classify(pulled))
    mat = tuple(
        tuple(cols[j][i] for j in range(len(cols))) for i in range(h_g.value.rank)
    )
    return AbHom(h_q.value, h_g.value, mat)


def subgroup_as_group(h: Subgroup) -> tuple[FiniteGroup, tuple[int, ...]]:
    """The subgroup as a standalone group plus the element translation."""
    parent = h.parent
    # keep ambient ordering but identity first
    ordered = [parent.identity] + [x for x in h.elements if x != parent.identity]
    index = {x: i for i, x in enumerate(ordered)}
    table = tuple(
        tuple(index[parent.mul(x, y)] for y in ordered) for x in ordered
    )
    return FiniteGroup(table, 0, f"{parent.label}|sub"), tuple(ordered)


def restricted_module(m: GModule, h: Subgroup) -> tuple[GModule, tuple[int, ...]]:
    sub, ordered = subgroup_as_group(h)
    acts = tuple(m.action[x] for x in ordered)
    return GModule(sub, m.coeff, acts), ordered


def restriction(m: GModule, h: Subgroup, degree: int, cap: int = DEFAULT_COH_CAP) -> AbHom:
    """Restriction of cocycle classes to a subgroup."""
    mh, ordered = restricted_module(m, h)
    h_g = cohomology(m, degree, cap)
    h_h = cohomology(mh, degree, cap)
    cols = []
    for rep in h_g.representatives:
        if degree == 1:
            restricted = tuple(rep[x] for x in ordered)
        else:
            restricted = tuple(tuple(rep[x][y] for y in ordered) for x in ordered)
        cols.append(h_h.classify(restricted))
    mat = tuple(
        tuple(cols[j][i] for j in range(len(cols))) for i in range(h_h.value.rank)
    )
    return AbHom(h_g.value, h_h.value, mat)


@dataclass(frozen=True)
class UnramifiedPart:
    """Image of inflation from G/closure(U): the 'nr' subgroup of H^i."""

    cohomology: CohomologyGroup
    subgroup: AbSubgroup
    structure: FiniteAbelianGroup
    inflation_map: AbHom
    closure: Subgroup


def unramified_subgroup(
    g: FiniteGroup, u: Subgroup, m: GModule, degree: int, cap: int = DEFAULT_COH_CAP
) -> UnramifiedPart:
    """H^i_nr(G, A): the inflation image from the quotient by the normal
    closure of ``u``.  Replacing u by its closure changes nothing."""
    closure = normal_closure(g, u)
    infl = inflation(m, closure, degree, cap)
    h_g = cohomology(m, degree, cap)
    sub = infl.image()
    return UnramifiedPart(h_g, sub, sub.structure, infl, closure)


# ---------------------------------------------------------------------------
# coinduced modules and dimension shifting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoinducedModule:
    """Maps(G, A) with the translation action, with A embedded
    equivariantly and the quotient module A' = Maps(G, A)/A."""

    base: GModule
    module: GModule
    embedding: AbHom
    quotient: GModule
    projection: AbHom
    lift: Matrix  # one column per quotient generator

    def project_table(self, table):
        return tuple(self.projection.apply(v) for v in table)


def coinduced_module(group: FiniteGroup, coeff) -> CoinducedModule:
    """Coinduced module of a GModule (or of a plain abelian group with
    the trivial action)."""
    if isinstance(coeff, GModule):
        m = coeff
        if m.group != group:
            raise PreconditionError("module is over a different group")
    else:
        m = trivial_module(group, coeff)
    g, a = m.group, m.coeff
    n, r = g.order, a.rank
    # component (i, x) at position i*n + x keeps the invariant chain valid
    factors = tuple(d for d in a.factors for _ in range(n))
    coind_ab = FiniteAbelianGroup(factors)

    acts = []
    for x in range(n):
        mat = [[0] * (n * r) for _ in range(n * r)]
        for i in range(r):
            for y in range(n):
                mat[i * n + y][i * n + g.mul(y, x)] = 1
        acts.append(tuple(tuple(row) for row in mat))
    coind = GModule(g, coind_ab, tuple(acts))

    emb_cols = []
    for i in range(r):
        e_i = tuple(1 if j == i else 0 for j in range(r))
        vec = [0] * (n * r)
        for x in range(n):
            img = m.act(x, e_i)
            for j in range(r):
                vec[j * n + x] = img[j]
        emb_cols.append(tuple(vec))
    embedding = AbHom(
        a,
        coind_ab,
        tuple(tuple(emb_cols[j][i] for j in range(r)) for i in range(n * r)),
    )

    qpres = modular.quotient_presentation(factors, emb_cols)
    quotient_ab = FiniteAbelianGroup(qpres.factors)
    basis = [tuple(1 if j == i else 0 for j in range(n * r)) for i in range(n * r)]
    proj_cols = [qpres.classify(b) for b in basis]
    projection = AbHom(
        coind_ab,
        quotient_ab,
        tuple(tuple(proj_cols[j][i] for j in range(n * r)) for i in range(quotient_ab.rank)),
    )
    lift = tuple(
        tuple(qpres.reps[j][i] for j in range(quotient_ab.rank)) for i in range(n * r)
    )
    q_acts = []
    for x in range(n):
        cols = []
        for j in range(quotient_ab.rank):
            v = coind.act(x, qpres.reps[j])
            cols.append(projection.apply(v))
        q_acts.append(
            tuple(tuple(cols[j][i] for j in range(quotient_ab.rank)) for i in range(quotient_ab.rank))
        )
    quotient = GModule(g, quotient_ab, tuple(q_acts))
    return CoinducedModule(m, coind, embedding, quotient, projection, lift)


@dataclass(frozen=True)
class DimensionShiftReport:
    h2_factors: tuple[int, ...]
    shifted_h1_factors: tuple[int, ...]
    coind_h1_factors: tuple[int, ...]
    connecting_bijective: bool

    @property
    def passed(self) -> bool:
        return (
            self.h2_factors == self.shifted_h1_factors
            and self.coind_h1_factors == ()
            and self.connecting_bijective
        )


def connecting_map(coind: CoinducedModule, cap: int = DEFAULT_COH_CAP) -> AbHom:
    """The shift isomorphism H^1(G, A') -> H^2(G, A) on representatives."""
    m = coind.base
    g, a = m.group, m.coeff
    h1q = cohomology(coind.quotient, 1, cap)
    h2 = cohomology(m, 2, cap)
    solver = modular.CongruenceSolver(
        coind.embedding.matrix, coind.module.coeff.factors, a.factors
    )
    cols = []
    for rep in h1q.representatives:
        lifted = tuple(
            coind.module.coeff.reduce(lattice.mat_vec(coind.lift, rep[x]))
            for x in range(g.order)
        )
        table = []
        for x in range(g.order):
            row = []
            for y in range(g.order):
                v = coind.module.coeff.add(
                    coind.module.coeff.add(lifted[x], coind.module.act(x, lifted[y])),
                    coind.module.coeff.neg(lifted[g.mul(x, y)]),
                )
                pre = solver.solve(v)
                if pre is None:
                    raise VerificationFailure(
                        "shift cocycle does not lie in the embedded coefficients"
                    )
                row.append(a.reduce(pre))
            table.append(tuple(row))
        cols.append(h2.classify(tuple(table)))
    mat = tuple(
        tuple(cols[j][i] for j in range(len(cols))) for i in range(h2.value.rank)
    )
    return AbHom(h1q.value, h2.value, mat)


def dimension_shift_check(m: GModule, cap: int = DEFAULT_COH_CAP) -> DimensionShiftReport:
    """Verify H^1(G, A') = H^2(G, A) and the acyclicity of Maps(G, A)."""
    coind = coinduced_module(m.group, m)
    h2 = cohomology(m, 2, cap)
    h1q = cohomology(coind.quotient, 1, cap)
    h1c = cohomology(coind.module, 1, cap)
    delta = connecting_map(coind, cap)
    bijective = delta.is_injective() and delta.is_surjective()
    return DimensionShiftReport(
        h2.value.factors, h1q.value.factors, h1c.value.factors, bijective
    )


def shifted_cohomology(m: GModule, degree: int, cap: int = DEFAULT_COH_CAP) -> CohomologyGroup:
    """H^i for i >= 3 via iterated dimension shifting; H^i(G, A) is
    computed as H^2(G, A^(i-2)) with A^(k+1) = Maps(G, A^(k)) / A^(k)."""
    if degree < 3:
        return cohomology(m, degree, cap)
    current = m
    for _ in range(degree - 2):
        _check_cap(current, 2, cap)
        current = coinduced_module(current.group, current).quotient
    return cohomology(current, 2, cap)
