"""Invariants of corestricted free products over T0 + {*}.

Everything here computes the right-hand sides of the structure formulas
on finite truncations plus symbolic tail summaries; the infinite free
product itself is never materialized.  The centerpiece is the four-term
exact sequence

    0 -> A/A^G -> sum_t A/A^{G_t} -> H^1(G, A) -> sum_t H^1(G_t, A) -> 0

for finite families, where H^1(G, A) of the free product is supplied by
an independent oracle: crossed homomorphisms of a free product are
exactly tuples of crossed homomorphisms of the factors, each factor
space enumerated by brute force.  Checking exactness therefore
cross-validates the oracle against the per-fiber engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from . import modular
from .abelian import (
    AbHom,
    AbSubgroup,
    FiniteAbelianGroup,
    annihilator,
    sub_and_quotient,
)
from .cohomology import (
    DEFAULT_COH_CAP,
    GModule,
    cohomology,
    shifted_cohomology,
    trivial_module,
    unramified_subgroup,
)
from .errors import (
    InvariantViolation,
    PreconditionError,
    SizeCapExceeded,
    VerificationFailure,
)
from .families import (
    AbPair,
    FamilySpec,
    FiberSpec,
    RestrictedAbFamily,
    TruncatedFamily,
    abelianize_family,
    normal_closure,
    truncate,
)
from .groups import (
    FiniteGroup,
    abelian_structure_from_elements,
    abelianization,
    generating_set,
)
from .lattice import Matrix, Vector, identity_matrix

DEFAULT_ENUM_CAP = 200_000


# ---------------------------------------------------------------------------
# family modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyModule:
    """Coefficients for a whole family: one abelian group acted on
    fiberwise, with at most finitely many nontrivial actions plus a
    uniform tail action."""

    coeff: FiniteAbelianGroup
    exceptional_actions: tuple[tuple[str, tuple[Matrix, ...]], ...] = ()
    tail_action: tuple[Matrix, ...] | None = None

    @staticmethod
    def build(coeff, actions: dict | None = None, tail_action=None) -> "FamilyModule":
        acts = tuple(sorted((name, tuple(a)) for name, a in (actions or {}).items()))
        return FamilyModule(coeff, acts, tuple(tail_action) if tail_action else None)

    def action_for(self, name: str):
        for n, a in self.exceptional_actions:
            if n == name:
                return a
        if name.startswith("tail") and name[4:].isdigit():
            return self.tail_action
        return None

    def gmodule(self, fiber: FiberSpec) -> GModule:
        act = self.action_for(fiber.name)
        if act is None:
            return _trivial_gmodule(fiber.group, self.coeff)
        return _gmodule(fiber.group, self.coeff, act)

    def tail_gmodule(self, group: FiniteGroup) -> GModule:
        if self.tail_action is None:
            return _trivial_gmodule(group, self.coeff)
        return _gmodule(group, self.coeff, self.tail_action)

    def tail_action_trivial(self, group: FiniteGroup) -> bool:
        return self.tail_gmodule(group).is_trivial_action()


@lru_cache(maxsize=None)
def _trivial_gmodule(group: FiniteGroup, coeff: FiniteAbelianGroup) -> GModule:
    return trivial_module(group, coeff)


@lru_cache(maxsize=None)
def _gmodule(group: FiniteGroup, coeff: FiniteAbelianGroup, action) -> GModule:
    return GModule(group, coeff, action)


# ---------------------------------------------------------------------------
# direct sum bookkeeping
# ---------------------------------------------------------------------------


@dataclass
class DirectSumChart:
    """Canonical invariant-factor form of a concatenated block group."""

    blocks: tuple[tuple[int, ...], ...]
    value: FiniteAbelianGroup
    _pres: modular.Subquotient = field(repr=False)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for b in self.blocks:
            out.append(acc)
            acc += len(b)
        return tuple(out)

    def classify(self, concat_vec) -> Vector:
        return self._pres.classify(concat_vec)

    def rep(self, i: int) -> Vector:
        return self._pres.reps[i]

    def split(self, concat_vec):
        out, pos = [], 0
        for b in self.blocks:
            out.append(tuple(concat_vec[pos : pos + len(b)]))
            pos += len(b)
        return out


def direct_sum_chart(blocks) -> DirectSumChart:
    blocks = tuple(tuple(b) for b in blocks)
    moduli = tuple(x for b in blocks for x in b)
    pres = modular.quotient_presentation(moduli, [])
    return DirectSumChart(blocks, FiniteAbelianGroup(pres.factors), pres)


# ---------------------------------------------------------------------------
# the crossed homomorphism oracle
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _fiber_z1(m: GModule, cap: int = DEFAULT_ENUM_CAP):
    """All crossed homomorphisms f: G -> A by exhaustive search on
    generator values plus consistency checks over the Cayley graph."""
    g, a = m.group, m.coeff
    gens = generating_set(g)
    n_candidates = a.order ** len(gens)
    if n_candidates > cap:
        raise SizeCapExceeded(
            f"{n_candidates} generator assignments exceed the enumeration cap"
        )
    cocycles = []
    for choice in itertools.product(list(a.elements()), repeat=len(gens)):
        table: list = [None] * g.order
        table[g.identity] = a.zero
        frontier = [g.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, gelt in enumerate(gens):
                    y = g.mul(x, gelt)
                    val = a.add(table[x], m.act(x, choice[s]))
                    if table[y] is None:
                        table[y] = val
                        nxt.append(y)
                    elif table[y] != val:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        # verify every edge, not only the spanning tree
        for x in range(g.order):
            for s, gelt in enumerate(gens):
                if table[g.mul(x, gelt)] != a.add(table[x], m.act(x, choice[s])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            cocycles.append(tuple(table))
    zero = tuple(a.zero for _ in range(g.order))

    def add_tables(t1, t2):
        return tuple(a.add(v1, v2) for v1, v2 in zip(t1, t2))

    structure = abelian_structure_from_elements(cocycles, add_tables, zero)
    return cocycles, structure, add_tables, zero


@dataclass
class OracleH1:
    """H^1 of a finite free product from the independent oracle."""

    value: FiniteAbelianGroup
    representatives: tuple
    fibers: tuple[FiberSpec, ...]
    fixed_elements: tuple          # A^G as enumerated element vectors
    _chart: DirectSumChart = field(repr=False)
    _fiber_data: tuple = field(repr=False)
    _quotient: modular.Subquotient = field(repr=False)

    def classify(self, family_cocycle) -> Vector:
        concat = []
        for table, (cocycles, structure, _, _) in zip(family_cocycle, self._fiber_data):
            try:
                concat.extend(structure.coordinates(table))
            except KeyError:
                raise VerificationFailure(
                    "table is not a crossed homomorphism of this fiber"
                )
        return self._quotient.classify(tuple(concat))

    @property
    def order(self) -> int:
        return self.value.order


def _fiber_modules(trunc: TruncatedFamily, module: FamilyModule):
    return tuple(module.gmodule(f) for f in trunc.fibers)


def _require_plain(trunc: TruncatedFamily) -> None:
    if not trunc.is_plain:
        raise PreconditionError(
            "the truncation has a nontrivial pattern beyond the cut; "
            "formulas require a plain finite free product"
        )


def common_fixed_elements(trunc: TruncatedFamily, module: FamilyModule):
    """A^G = intersection of the fiber fixed sets, by enumeration."""
    mods = _fiber_modules(trunc, module)
    out = []
    for vec in module.coeff.elements():
        if all(
            m.act(x, vec) == tuple(vec)
            for m in mods
            for x in range(m.group.order)
        ):
            out.append(tuple(vec))
    return tuple(out)


def oracle_h1(
    trunc: TruncatedFamily, module: FamilyModule, cap: int = DEFAULT_ENUM_CAP
) -> OracleH1:
    """H^1 of the free product of the truncation fibers.

    Z^1 of a free product is the product of the fiber Z^1 spaces (a
    crossed homomorphism is freely determined by its restrictions);
    principal cocycles are divided out with |B^1| = |A|/|A^G|.
    """
    _require_plain(trunc)
    a = module.coeff
    fiber_data = tuple(_fiber_z1(m, cap) for m in _fiber_modules(trunc, module))
    chart_blocks = [data[1].factors for data in fiber_data]
    moduli = tuple(x for b in chart_blocks for x in b)

    def principal_tuple(vec):
        tables = []
        for m in _fiber_modules(trunc, module):
            tables.append(
                tuple(
                    a.add(m.act(x, vec), a.neg(vec)) for x in range(m.group.order)
                )
            )
        return tuple(tables)

    b1 = []
    for i in range(a.rank):
        e_i = tuple(1 if j == i else 0 for j in range(a.rank))
        coords = []
        for table, data in zip(principal_tuple(e_i), fiber_data):
            coords.extend(data[1].coordinates(table))
        b1.append(tuple(coords))
    quotient = modular.quotient_presentation(moduli, b1)
    value = FiniteAbelianGroup(quotient.factors)

    def lift(coords) -> tuple:
        tables = []
        pos = 0
        for data in fiber_data:
            cocycles, structure, add_tables, zero = data
            chunk = coords[pos : pos + len(structure.factors)]
            pos += len(structure.factors)
            t = zero
            for c, rep in zip(chunk, structure.representatives):
                for _ in range(int(c)):
                    t = add_tables(t, rep)
            tables.append(t)
        return tuple(tables)

    reps = tuple(lift(quotient.reps[i]) for i in range(len(value.factors)))
    chart = direct_sum_chart(chart_blocks)
    fixed = common_fixed_elements(trunc, module)
    # cardinality bookkeeping: |Z1| = |B1| * |H1| with |B1| = |A| / |A^G|
    z1_order = 1
    for data in fiber_data:
        z1_order *= len(data[0])
    if z1_order * len(fixed) != value.order * a.order:
        raise VerificationFailure("oracle cardinality bookkeeping failed")
    return OracleH1(value, reps, trunc.fibers, fixed, chart, fiber_data, quotient)


# ---------------------------------------------------------------------------
# the four-term sequence
# ---------------------------------------------------------------------------


@dataclass
class FourTermSequence:
    """0 -> A/A^G -> sum A/A^{G_t} -> H^1(G, A) -> sum H^1(G_t, A) -> 0."""

    terms: tuple[FiniteAbelianGroup, FiniteAbelianGroup, FiniteAbelianGroup, FiniteAbelianGroup]
    maps: tuple[AbHom, AbHom, AbHom]
    context: tuple = field(repr=False, default=())


def four_term_sequence(
    trunc: TruncatedFamily,
    module: FamilyModule,
    cap: int = DEFAULT_COH_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> FourTermSequence:
    _require_plain(trunc)
    a = module.coeff
    mods = _fiber_modules(trunc, module)
    oracle = oracle_h1(trunc, module, enum_cap)

    # term 1: A / A^G
    fixed_all = common_fixed_elements(trunc, module)
    t1_pres = modular.quotient_presentation(a.factors, list(fixed_all))
    t1 = FiniteAbelianGroup(t1_pres.factors)

    # term 2: sum over fibers of A / A^{G_t}
    fiber_fixed = []
    for m in mods:
        fixed = [
            tuple(vec)
            for vec in a.elements()
            if all(m.act(x, vec) == tuple(vec) for x in range(m.group.order))
        ]
        fiber_fixed.append(fixed)
    fiber_quotients = [
        modular.quotient_presentation(a.factors, fixed) for fixed in fiber_fixed
    ]
    chart2 = direct_sum_chart([q.factors for q in fiber_quotients])
    t2 = chart2.value

    # term 4: sum over fibers of H^1(G_t, A) from the engine
    fiber_h1 = [cohomology(m, 1, cap) for m in mods]
    chart4 = direct_sum_chart([h.value.factors for h in fiber_h1])
    t4 = chart4.value

    # map 1: a |-> (a mod A^{G_t})_t
    cols = []
    for i in range(t1.rank):
        vec = t1_pres.reps[i]
        concat = []
        for q in fiber_quotients:
            concat.extend(q.classify(vec))
        cols.append(chart2.classify(tuple(concat)))
    m1 = AbHom(t1, t2, tuple(tuple(c[i] for c in cols) for i in range(t2.rank)))

    # map 2: (a_t)_t |-> class of the cocycle that is principal-from-a_t on G_t
    cols = []
    for i in range(t2.rank):
        block_coords = chart2.split(chart2.rep(i))
        tables = []
        for m, q, chunk in zip(mods, fiber_quotients, block_coords):
            lifted = a.zero
            for c, rep in zip(chunk, q.reps):
                lifted = a.add(lifted, a.scale(int(c), rep))
            tables.append(
                tuple(a.add(m.act(x, lifted), a.neg(lifted)) for x in range(m.group.order))
            )
        cols.append(oracle.classify(tuple(tables)))
    m2 = AbHom(t2, oracle.value, tuple(tuple(c[i] for c in cols) for i in range(oracle.value.rank)))

    # map 3: restriction to the factors
    cols = []
    for rep in oracle.representatives:
        concat = []
        for table, h in zip(rep, fiber_h1):
            concat.extend(h.classify(table))
        cols.append(chart4.classify(tuple(concat)))
    m3 = AbHom(oracle.value, t4, tuple(tuple(c[i] for c in cols) for i in range(t4.rank)))

    return FourTermSequence((t1, t2, oracle.value, t4), (m1, m2, m3), (trunc, module))


@dataclass(frozen=True)
class PositionReport:
    position: str
    holds: bool
    obstruction_order: int
    witness: tuple | None


@dataclass(frozen=True)
class ExactnessReport:
    positions: tuple[PositionReport, ...]

    @property
    def passed(self) -> bool:
        return all(p.holds for p in self.positions)

    def failures(self):
        return [p for p in self.positions if not p.holds]


def check_exactness(seq: FourTermSequence) -> ExactnessReport:
    """Element-level verification of injectivity, two kernel = image
    identities and surjectivity, with witnesses on failure."""
    m1, m2, m3 = seq.maps
    reports = []

    ker1 = m1.kernel()
    reports.append(
        PositionReport(
            "left-injective",
            ker1.order == 1,
            ker1.order,
            None if ker1.order == 1 else ker1.gens[:1],
        )
    )

    for name, incoming, outgoing in (
        ("exact-at-fixed-sum", m1, m2),
        ("exact-at-h1", m2, m3),
    ):
        image = incoming.image()
        kernel = outgoing.kernel()
        im_in_ker = all(kernel.contains(g) for g in image.gens)
        same = im_in_ker and image.same_subgroup(kernel)
        if same:
            obstruction = 1
            witness = None
        else:
            obstruction = (
                kernel.order // image.order if im_in_ker and image.order else 0
            )
            witness = None
            for g in kernel.gens:
                if not image.contains(g):
                    witness = (name, g)
                    break
            if witness is None and not im_in_ker:
                for g in image.gens:
                    if not kernel.contains(g):
                        witness = (name + ":image-escapes-kernel", g)
                        break
        reports.append(PositionReport(name, same, obstruction, witness))

    image3 = m3.image()
    surj = image3.order == seq.terms[3].order
    reports.append(
        PositionReport(
            "right-surjective",
            surj,
            seq.terms[3].order // image3.order if image3.order else 0,
            None,
        )
    )
    return ExactnessReport(tuple(reports))


def corrupt_map_entry(seq: FourTermSequence, which: int, i: int, j: int, delta: int) -> FourTermSequence:
    """Copy of the sequence with maps[which].matrix[i][j] += delta.

    May raise InvariantViolation when the corrupted matrix no longer
    respects the source relations; that also counts as detection.
    """
    hom = seq.maps[which]
    mat = [list(row) for row in hom.matrix]
    mat[i][j] += delta
    new = AbHom(hom.source, hom.target, tuple(tuple(r) for r in mat))
    maps = list(seq.maps)
    maps[which] = new
    return FourTermSequence(seq.terms, tuple(maps), seq.context)


# ---------------------------------------------------------------------------
# formula families (right-hand sides of the structure theorems)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RestrictedSummary:
    """Shape of a restricted product of pairs over the family index."""

    has_tail: bool
    exceptional_order: int
    tail_pair: tuple[tuple[int, ...], tuple[int, ...]] | None
    is_direct_sum: bool
    finite_order: int | None

    @property
    def description(self) -> str:
        if not self.has_tail:
            return f"finite direct sum of order {self.finite_order}"
        amb, sub = self.tail_pair
        if self.is_direct_sum and amb == ():
            return f"finite of order {self.finite_order} (trivial tail contribution)"
        if self.is_direct_sum:
            return f"direct sum over T0, tail summand {amb or '0'}"
        return f"restricted product over T0 with tail pair ({amb}, {sub})"


def summarize_family(fam: RestrictedAbFamily) -> RestrictedSummary:
    exc_order = 1
    for _, pair in fam.exceptional:
        exc_order *= pair.ambient.order
    if fam.tail is None:
        return RestrictedSummary(False, exc_order, None, True, exc_order)
    tail_pair = (fam.tail.ambient.factors, fam.tail.sub_structure.factors)
    direct = fam.tail.sub_structure.order == 1
    finite = exc_order if fam.tail.ambient.order == 1 else None
    return RestrictedSummary(True, exc_order, tail_pair, direct, finite)


def h_formula(
    spec: FamilySpec, module: FamilyModule, degree: int, cap: int = DEFAULT_COH_CAP
) -> RestrictedAbFamily:
    """Per-fiber pairs (H^deg(G_t, A), H^deg_nr(G_t, A)): the right-hand
    side of the structure theorem, flavored as a discretized product."""
    if degree not in (1, 2):
        raise PreconditionError("the pair formula is stated for degrees 1 and 2")

    def pair(group, subgroup, m: GModule) -> AbPair:
        nr = unramified_subgroup(group, subgroup, m, degree, cap)
        return AbPair(nr.cohomology.value, nr.subgroup.gens)

    exc = tuple(
        (f.name, pair(f.group, f.subgroup, module.gmodule(f)))
        for f in spec.exceptional
    )
    tail = None
    if spec.tail is not None:
        tail = pair(
            spec.tail.group, spec.tail.subgroup, module.tail_gmodule(spec.tail.group)
        )
    return RestrictedAbFamily(exc, tail, "discretized")


@dataclass(frozen=True)
class HighDegreeFormula:
    degree: int
    summands: tuple[tuple[str, FiniteAbelianGroup], ...]
    tail_summand: FiniteAbelianGroup | None

    @property
    def description(self) -> str:
        parts = [f"{name}: {g.describe()}" for name, g in self.summands]
        if self.tail_summand is not None:
            parts.append(f"each tail index: {self.tail_summand.describe()}")
        return "direct sum over T of [" + "; ".join(parts) + "]"


def high_degree_formula(
    spec: FamilySpec, module: FamilyModule, degree: int, cap: int = DEFAULT_COH_CAP
) -> HighDegreeFormula:
    """H^i for i >= 3 decomposes as the direct sum of the fiber groups,
    provided every tail quotient G_t/closure(U_t) is trivial.

    A nontrivial finite quotient has cohomology in arbitrarily high
    degrees, so requiring cohomological dimension <= 1 of the quotients
    forces them to be trivial; anything else is refused.
    """
    if degree < 3:
        raise PreconditionError("high-degree formula applies for degree >= 3")
    offenders = [
        f.name
        for f in spec.exceptional
        if normal_closure(f.group, f.subgroup).order != f.group.order
    ]
    if spec.tail is not None and (
        normal_closure(spec.tail.group, spec.tail.subgroup).order
        != spec.tail.group.order
    ):
        offenders.append("tail")
    if offenders:
        raise PreconditionError(
            "fibers "
            + ", ".join(offenders)
            + " have nontrivial quotient by the closure of U; a nontrivial "
            "finite quotient cannot have cohomological dimension <= 1, so "
            "the direct-sum formula does not apply"
        )
    summands = tuple(
        (f.name, shifted_cohomology(module.gmodule(f), degree, cap).value)
        for f in spec.exceptional
    )
    tail = None
    if spec.tail is not None:
        tail = shifted_cohomology(
            module.tail_gmodule(spec.tail.group), degree, cap
        ).value
    return HighDegreeFormula(degree, summands, tail)


def abelianization_formula(spec: FamilySpec) -> RestrictedAbFamily:
    """(G_t^ab, image of U_t), carried as a compactified product: the
    abelianized free product is the compactification of the restricted
    product of these pairs."""
    return abelianize_family(spec)


def dualize_family(fam: RestrictedAbFamily) -> RestrictedAbFamily:
    """Fiberwise Pontryagin duality: (A, B) becomes (A^, ann B), and the
    compactified/discretized flavors swap."""
    flip = {"plain": "plain", "compactified": "discretized", "discretized": "compactified"}

    def dual_pair(pair: AbPair) -> AbPair:
        ann = annihilator(pair.ambient, pair.sub_gens)
        return AbPair(FiniteAbelianGroup(pair.ambient.factors), ann.gens)

    exc = tuple((name, dual_pair(p)) for name, p in fam.exceptional)
    tail = dual_pair(fam.tail) if fam.tail is not None else None
    return RestrictedAbFamily(exc, tail, flip[fam.flavor])


# ---------------------------------------------------------------------------
# cross-check of the two pipelines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberCrossCheck:
    name: str
    h1_factors: tuple[int, ...]
    ab_dual_factors: tuple[int, ...]
    nr_factors: tuple[int, ...]
    ab_nr_dual_factors: tuple[int, ...]
    explicit_iso: bool
    nr_subgroups_match: bool

    @property
    def passed(self) -> bool:
        return (
            self.h1_factors == self.ab_dual_factors
            and self.nr_factors == self.ab_nr_dual_factors
            and self.explicit_iso
            and self.nr_subgroups_match
        )


@dataclass(frozen=True)
class CrossCheckReport:
    prime: int
    fibers: tuple[FiberCrossCheck, ...]

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.fibers)


def _mod_p_dual_factors(a: FiniteAbelianGroup, p: int) -> tuple[int, ...]:
    return tuple(p for d in a.factors if d % p == 0)


def cross_check_h1_vs_ab(spec: FamilySpec, p: int, cap: int = DEFAULT_COH_CAP) -> CrossCheckReport:
    """Fiberwise: H^1(G_t, Z/p) must be the dual of G_t^ab/p, and the
    unramified part must be the dual of (G_t^ab / image-of-U)/p, via the
    explicit character isomorphisms.

    A mismatch means an implementation bug; the identity is forced.
    """
    if p not in spec.prime_set:
        raise PreconditionError(f"{p} is not in the prime set of the family")
    zp = FiniteAbelianGroup((p,))
    checks = []
    fibers = [(f.name, f.group, f.subgroup) for f in spec.exceptional]
    if spec.tail is not None:
        fibers.append(("tail", spec.tail.group, spec.tail.subgroup))
    for name, group, subgroup in fibers:
        m = _trivial_gmodule(group, zp)
        h1 = cohomology(m, 1, cap)
        nr = unramified_subgroup(group, subgroup, m, 1, cap)
        ab, proj = abelianization(group)
        expected_h1 = _mod_p_dual_factors(ab, p)

        # characters of G^ab of order dividing p, as explicit cocycles
        char_cols = []
        for i, d in enumerate(ab.factors):
            if d % p != 0:
                continue
            table = tuple((proj.apply(x)[i] % p,) for x in range(group.order))
            char_cols.append(h1.classify(table))
        k = len(char_cols)
        iso_ok = h1.value.factors == expected_h1
        if iso_ok and k:
            source = FiniteAbelianGroup((p,) * k)
            mat = tuple(tuple(c[i] for c in char_cols) for i in range(h1.value.rank))
            hom = AbHom(source, h1.value, mat)
            iso_ok = hom.is_injective() and hom.is_surjective()
        elif iso_ok:
            iso_ok = h1.value.order == 1

        # unramified side: characters killing the image of U
        u_image = tuple(sorted(set(proj.apply(x) for x in subgroup.elements)))
        sq = sub_and_quotient(ab, u_image)
        expected_nr = _mod_p_dual_factors(sq.quotient, p)
        nr_cols = []
        for i, d in enumerate(sq.quotient.factors):
            if d % p != 0:
                continue
            table = tuple(
                (sq.projection.apply(proj.apply(x))[i] % p,)
                for x in range(group.order)
            )
            nr_cols.append(h1.classify(table))
        nr_match = nr.structure.factors == expected_nr
        if nr_match:
            generated = AbSubgroup(h1.value, tuple(nr_cols))
            nr_match = generated.same_subgroup(nr.subgroup)
        checks.append(
            FiberCrossCheck(
                name,
                h1.value.factors,
                expected_h1,
                nr.structure.factors,
                expected_nr,
                iso_ok,
                nr_match,
            )
        )
    return CrossCheckReport(p, tuple(checks))


# ---------------------------------------------------------------------------
# truncation colimits
# ---------------------------------------------------------------------------


@dataclass
class ColimitSystem:
    degree: int
    levels: tuple[FiniteAbelianGroup, ...]
    transitions: tuple[AbHom, ...]
    stabilization: int | None
    tail_contribution: int
    level_formula_ok: tuple[bool, ...]
    growth_ok: bool

    @property
    def passed(self) -> bool:
        return (
            all(self.level_formula_ok)
            and self.growth_ok
            and all(t.is_injective() for t in self.transitions)
        )


def truncation_colimit(
    spec: FamilySpec,
    module: FamilyModule,
    degree: int,
    n_max: int,
    cap: int = DEFAULT_COH_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> ColimitSystem:
    """Levels H^deg at truncations 0..n_max with extend-by-zero
    transitions.

    Requires closure(U_tail) = G_tail, so every truncation is a plain
    finite free product, and a trivial tail action, so that pulling a
    cocycle back along the projection killing the new factor is exactly
    extension by zero.
    """
    if degree not in (1, 2):
        raise PreconditionError("colimits are computed in degrees 1 and 2")
    if spec.tail is not None:
        if normal_closure(spec.tail.group, spec.tail.subgroup).order != spec.tail.group.order:
            raise PreconditionError(
                "tail quotient must be trivial (closure(U) = G) for truncations "
                "to be plain finite free products"
            )
        if not module.tail_action_trivial(spec.tail.group):
            raise PreconditionError(
                "extend-by-zero transitions require a trivial tail action"
            )

    truncs = [truncate(spec, n) for n in range(n_max + 1)]
    if degree == 1:
        oracles = [oracle_h1(t, module, enum_cap) for t in truncs]
        levels = tuple(o.value for o in oracles)
        transitions = []
        for n in range(n_max):
            cols = []
            zero_table = None
            if spec.tail is not None:
                g_tail = spec.tail.group
                zero_table = tuple(module.coeff.zero for _ in range(g_tail.order))
            for rep in oracles[n].representatives:
                extended = rep + ((zero_table,) if zero_table is not None else ())
                cols.append(oracles[n + 1].classify(extended))
            transitions.append(
                AbHom(
                    levels[n],
                    levels[n + 1],
                    tuple(tuple(c[i] for c in cols) for i in range(levels[n + 1].rank)),
                )
            )
        # per level: exactness of the four-term sequence is the formula
        level_ok = []
        for t in truncs:
            seq = four_term_sequence(t, module, cap, enum_cap)
            level_ok.append(check_exactness(seq).passed)
        if spec.tail is not None:
            contribution = cohomology(
                module.tail_gmodule(spec.tail.group), 1, cap
            ).value.order
        else:
            contribution = 1
    else:
        charts = []
        fiber_h2 = []
        for t in truncs:
            hs = [cohomology(m, 2, cap) for m in _fiber_modules(t, module)]
            fiber_h2.append(hs)
            charts.append(direct_sum_chart([h.value.factors for h in hs]))
        levels = tuple(c.value for c in charts)
        transitions = []
        for n in range(n_max):
            cols = []
            for i in range(levels[n].rank):
                concat = charts[n].rep(i)
                pad = len(fiber_h2[n + 1][-1].value.factors) if spec.tail is not None else 0
                extended = tuple(concat) + (0,) * pad
                cols.append(charts[n + 1].classify(extended))
            transitions.append(
                AbHom(
                    levels[n],
                    levels[n + 1],
                    tuple(tuple(c[i] for c in cols) for i in range(levels[n + 1].rank)),
                )
            )
        # formula instance: block factors match the per-fiber pair formula
        level_ok = []
        for t, hs in zip(truncs, fiber_h2):
            expected = []
            for f in t.fibers:
                nr = unramified_subgroup(
                    f.group, f.subgroup, module.gmodule(f), 2, cap
                )
                expected.append(nr.cohomology.value.factors)
            level_ok.append([h.value.factors for h in hs] == expected)
        if spec.tail is not None:
            contribution = cohomology(
                module.tail_gmodule(spec.tail.group), 2, cap
            ).value.order
        else:
            contribution = 1

    growth_ok = True
    for n in range(n_max):
        if levels[n + 1].order != levels[n].order * (
            contribution if spec.tail is not None else 1
        ):
            growth_ok = False
    stabilization = None
    if spec.tail is None or contribution == 1:
        stabilization = 0
    return ColimitSystem(
        degree,
        levels,
        tuple(transitions),
        stabilization,
        contribution,
        tuple(level_ok),
        growth_ok,
    )


# ---------------------------------------------------------------------------
# splittings and corestrictions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingReport:
    subset: tuple[str, ...]
    h1_full: tuple[int, ...]
    h1_sub: tuple[int, ...]
    retraction_surjective: bool
    section_found: bool
    ab_full: tuple[int, ...]
    ab_sub: tuple[int, ...]
    ab_split: bool

    @property
    def passed(self) -> bool:
        return self.retraction_surjective and self.section_found and self.ab_split


def restrict_truncation(trunc: TruncatedFamily, names) -> TruncatedFamily:
    keep = set(names)
    fibers = tuple(f for f in trunc.fibers if f.name in keep)
    return TruncatedFamily(trunc.base, trunc.level, fibers, trunc.beyond)


def section_for(retraction: AbHom) -> AbHom | None:
    """A right inverse of a surjection of finite abelian groups, when
    one exists (equivalently the surjection splits)."""
    src, tgt = retraction.source, retraction.target
    cols = []
    for j, f_j in enumerate(tgt.factors):
        e_j = tuple(1 if i == j else 0 for i in range(tgt.rank))
        rows = list(retraction.matrix) + [
            tuple(f_j if t == s else 0 for t in range(src.rank))
            for s in range(src.rank)
        ]
        row_moduli = list(tgt.factors) + list(src.factors)
        rhs = list(e_j) + [0] * src.rank
        sol = modular.solve_congruence(rows, row_moduli, src.factors, rhs)
        if sol is None:
            return None
        cols.append(sol)
    mat = tuple(tuple(cols[j][i] for j in range(tgt.rank)) for i in range(src.rank))
    section = AbHom(tgt, src, mat)
    check = retraction.compose(section)
    if check.matrix != identity_matrix(tgt.rank):
        raise VerificationFailure("section does not invert the retraction")
    return section


def splitting_check(
    trunc: TruncatedFamily,
    subset,
    module: FamilyModule,
    cap: int = DEFAULT_COH_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> SplittingReport:
    """The subfamily invariant is a direct summand of the full one.

    At the H^1 level the retraction is restriction of cocycle tuples to
    the chosen fibers; a section is found by linear algebra.  At the
    abelianization level the block structure makes the splitting plain.
    """
    _require_plain(trunc)
    subset = tuple(n for n in trunc.names if n in set(subset))
    sub_trunc = restrict_truncation(trunc, subset)
    full = oracle_h1(trunc, module, enum_cap)
    sub = oracle_h1(sub_trunc, module, enum_cap)
    keep_idx = [i for i, f in enumerate(trunc.fibers) if f.name in set(subset)]
    cols = []
    for rep in full.representatives:
        restricted = tuple(rep[i] for i in keep_idx)
        cols.append(sub.classify(restricted))
    retraction = AbHom(
        full.value,
        sub.value,
        tuple(tuple(c[i] for c in cols) for i in range(sub.value.rank)),
    )
    surj = retraction.is_surjective()
    section = section_for(retraction) if surj else None

    ab_blocks_full = []
    ab_blocks_sub = []
    for i, f in enumerate(trunc.fibers):
        ab, _ = abelianization(f.group)
        ab_blocks_full.append(ab.factors)
        if i in keep_idx:
            ab_blocks_sub.append(ab.factors)
    ab_full = direct_sum_chart(ab_blocks_full).value
    ab_sub = direct_sum_chart(ab_blocks_sub).value
    return SplittingReport(
        subset,
        full.value.factors,
        sub.value.factors,
        surj,
        section is not None,
        ab_full.factors,
        ab_sub.factors,
        True,
    )


@dataclass(frozen=True)
class FiberCorestriction:
    name: str
    contained: bool
    sub_small: tuple[int, ...]
    sub_big: tuple[int, ...]
    ann_reversed: bool


@dataclass(frozen=True)
class CorestrictionReport:
    fibers: tuple[FiberCorestriction, ...]

    @property
    def passed(self) -> bool:
        return all(f.contained and f.ann_reversed for f in self.fibers)


def corestriction_compare(spec: FamilySpec, smaller: FamilySpec) -> CorestrictionReport:
    """Compare (G_t, U_t) against (G_t, U'_t) with U'_t <= U_t.

    On abelianizations the images satisfy im U' <= im U, and dually the
    annihilators reverse: ann(im U) <= ann(im U'), which is the dual
    avatar of the canonical surjection from the smaller corestriction.
    """
    if spec.names != smaller.names:
        raise PreconditionError("the two families have different index sets")
    pairs = list(zip(spec.exceptional, smaller.exceptional))
    if (spec.tail is None) != (smaller.tail is None):
        raise PreconditionError("tail presence differs")
    named = [(f.name, f, f2) for f, f2 in pairs]
    if spec.tail is not None:
        named.append(
            (
                "tail",
                FiberSpec("tailpattern", spec.tail.group, spec.tail.subgroup),
                FiberSpec("tailpattern", smaller.tail.group, smaller.tail.subgroup),
            )
        )
    out = []
    big_ab = abelianize_family(spec)
    small_ab = abelianize_family(smaller)
    big_pairs = dict(big_ab.pairs())
    small_pairs = dict(small_ab.pairs())
    for name, f_big, f_small in named:
        if f_big.group != f_small.group:
            raise PreconditionError(f"fiber {name}: groups differ")
        if not set(f_small.subgroup.elements) <= set(f_big.subgroup.elements):
            raise PreconditionError(f"fiber {name}: U' is not contained in U")
        key = "tail" if name == "tail" else name
        pb, ps = big_pairs[key], small_pairs[key]
        contained = all(pb.sub.contains(g) for g in ps.sub_gens)
        ann_big = annihilator(pb.ambient, pb.sub_gens)
        ann_small = annihilator(ps.ambient, ps.sub_gens)
        reversed_ok = all(ann_small.contains(g) for g in ann_big.gens)
        out.append(
            FiberCorestriction(
                name,
                contained,
                ps.sub_structure.factors,
                pb.sub_structure.factors,
                reversed_ok,
            )
        )
    return CorestrictionReport(tuple(out))
