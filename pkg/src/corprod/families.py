"""Finitely described families (G_t, U_t) over T = T0 + {*}.

A family has finitely many named exceptional fibers plus an optional
uniform tail pattern standing for countably many identical fibers
tau_1, tau_2, ...; the point at infinity always carries the trivial
group.  Morphisms map exceptional names to exceptional names or to the
star, and tail to tail; towers are chains of such morphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .abelian import AbSubgroup, FiniteAbelianGroup
from .errors import InvariantViolation, PreconditionError
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    abelianization,
    normal_closure,
    quotient_group,
    subgroup_from_generators,
)
from .lattice import factorint

STAR = "*"


@dataclass(frozen=True)
class FiberSpec:
    name: str
    group: FiniteGroup
    subgroup: Subgroup

    def __post_init__(self):
        if self.name == STAR:
            raise InvariantViolation("'*' is reserved for the point at infinity")
        if self.subgroup.parent != self.group:
            raise InvariantViolation(f"subgroup of fiber {self.name} has wrong parent")


def _is_tail_name(name: str) -> bool:
    return name.startswith("tail") and name[4:].isdigit()


@dataclass(frozen=True)
class TailSpec:
    group: FiniteGroup
    subgroup: Subgroup

    def __post_init__(self):
        if self.subgroup.parent != self.group:
            raise InvariantViolation("tail subgroup has wrong parent")


@dataclass(frozen=True)
class FamilySpec:
    exceptional: tuple[FiberSpec, ...]
    tail: TailSpec | None = None
    prime_set: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "prime_set", frozenset(int(p) for p in self.prime_set))
        names = [f.name for f in self.exceptional]
        if len(set(names)) != len(names):
            raise InvariantViolation("duplicate fiber names")
        for f in self.exceptional:
            if self.tail is not None and _is_tail_name(f.name):
                raise InvariantViolation(
                    f"fiber name {f.name!r} collides with the tail copy names"
                )
            self._check_primes(f.group, f.name)
        if self.tail is not None:
            self._check_primes(self.tail.group, "tail")

    def _check_primes(self, g: FiniteGroup, where: str) -> None:
        for p in factorint(g.order):
            if p not in self.prime_set:
                raise InvariantViolation(
                    f"fiber {where} has order divisible by {p}, outside the prime set"
                )

    def __hash__(self):
        return hash((self.exceptional, self.tail, self.prime_set))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.exceptional)

    def fiber(self, name: str) -> FiberSpec:
        for f in self.exceptional:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def is_finite(self) -> bool:
        return self.tail is None


def family(exceptional, tail=None, prime_set=None) -> FamilySpec:
    """Convenience constructor; infers the prime set when not given."""
    fibers = tuple(
        FiberSpec(name, g, u) if not isinstance(name, FiberSpec) else name
        for (name, g, u) in exceptional
    )
    tl = TailSpec(*tail) if isinstance(tail, tuple) else tail
    if prime_set is None:
        primes: set[int] = set()
        for f in fibers:
            primes.update(factorint(f.group.order))
        if tl is not None:
            primes.update(factorint(tl.group.order))
        prime_set = primes or {2}
    return FamilySpec(fibers, tl, frozenset(prime_set))


# ---------------------------------------------------------------------------
# validation and closure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberClosureInfo:
    name: str
    already_normal: bool
    closure_order: int
    closure_elements: tuple[int, ...]


@dataclass(frozen=True)
class FamilyValidation:
    ok: bool
    fibers: tuple[FiberClosureInfo, ...]
    tail: FiberClosureInfo | None


def validate_family(spec: FamilySpec) -> FamilyValidation:
    """Check the family invariants and report the normal closures.

    Structural violations raise at construction time; this reports the
    derived data (which U_t are already normal, their closures).
    """
    infos = []
    for f in spec.exceptional:
        cl = normal_closure(f.group, f.subgroup)
        infos.append(
            FiberClosureInfo(f.name, f.subgroup.is_normal(), cl.order, cl.elements)
        )
    tail_info = None
    if spec.tail is not None:
        cl = normal_closure(spec.tail.group, spec.tail.subgroup)
        tail_info = FiberClosureInfo(
            "tail", spec.tail.subgroup.is_normal(), cl.order, cl.elements
        )
    return FamilyValidation(True, tuple(infos), tail_info)


def normal_closure_family(spec: FamilySpec) -> FamilySpec:
    """Replace every U_t by its normal closure; the free product does
    not change, so all formula operations treat this as canonical."""
    fibers = tuple(
        FiberSpec(f.name, f.group, normal_closure(f.group, f.subgroup))
        for f in spec.exceptional
    )
    tl = None
    if spec.tail is not None:
        tl = TailSpec(
            spec.tail.group, normal_closure(spec.tail.group, spec.tail.subgroup)
        )
    return FamilySpec(fibers, tl, spec.prime_set)


# ---------------------------------------------------------------------------
# abelianized families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbPair:
    """A finite abelian group with a distinguished subgroup, the fiber
    datum of a restricted product."""

    ambient: FiniteAbelianGroup
    sub_gens: tuple[tuple[int, ...], ...]

    @cached_property
    def sub(self) -> AbSubgroup:
        return AbSubgroup(self.ambient, self.sub_gens)

    @property
    def sub_structure(self) -> FiniteAbelianGroup:
        return self.sub.structure

    def canonical(self):
        return (self.ambient.factors, self.sub.canonical_rows)

    def __hash__(self):
        return hash((self.ambient, self.sub_gens))


FLAVORS = ("plain", "discretized", "compactified")


@dataclass(frozen=True)
class RestrictedAbFamily:
    """Family (A_t, B_t) of abelian pairs with a topological flavor tag."""

    exceptional: tuple[tuple[str, AbPair], ...]
    tail: AbPair | None
    flavor: str

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise InvariantViolation(f"unknown flavor {self.flavor}")

    def canonical(self):
        return (
            self.flavor,
            tuple((name, pair.canonical()) for name, pair in self.exceptional),
            self.tail.canonical() if self.tail else None,
        )

    def pairs(self):
        out = list(self.exceptional)
        if self.tail is not None:
            out.append(("tail", self.tail))
        return out


def abelianize_family(spec: FamilySpec) -> RestrictedAbFamily:
    """Fiberwise (G_t^ab, image of U_t); tagged compactified because the
    abelianized free product is the compactified restricted product."""

    def pair(g: FiniteGroup, u: Subgroup) -> AbPair:
        a, proj = abelianization(g)
        gens = tuple(sorted(set(proj.apply(x) for x in u.elements)))
        return AbPair(a, gens)

    exc = tuple((f.name, pair(f.group, f.subgroup)) for f in spec.exceptional)
    tl = pair(spec.tail.group, spec.tail.subgroup) if spec.tail else None
    return RestrictedAbFamily(exc, tl, "compactified")


# ---------------------------------------------------------------------------
# quotient families
# ---------------------------------------------------------------------------


def quotient_family(
    spec: FamilySpec, choices: dict[str, Subgroup], tail_choice: Subgroup | None = None
) -> FamilySpec:
    """Fiberwise quotients G_t/V_t with the images of U_t."""
    new_spec, _ = quotient_family_morphism(spec, choices, tail_choice)
    return new_spec


def quotient_family_morphism(
    spec: FamilySpec, choices: dict[str, Subgroup], tail_choice: Subgroup | None = None
) -> tuple[FamilySpec, "FamilyMorphism"]:
    fibers = []
    fiber_maps = {}
    for f in spec.exceptional:
        v = choices.get(f.name)
        if v is None:
            v = Subgroup(f.group, (f.group.identity,))
        q, proj = quotient_group(f.group, v)
        u_image = subgroup_from_generators(
            q, [proj.apply(x) for x in f.subgroup.elements]
        )
        fibers.append(FiberSpec(f.name, q, u_image))
        fiber_maps[f.name] = proj
    tl = None
    tail_map = None
    if spec.tail is not None:
        v = tail_choice if tail_choice is not None else Subgroup(
            spec.tail.group, (spec.tail.group.identity,)
        )
        q, proj = quotient_group(spec.tail.group, v)
        u_image = subgroup_from_generators(
            q, [proj.apply(x) for x in spec.tail.subgroup.elements]
        )
        tl = TailSpec(q, u_image)
        tail_map = proj
    target = FamilySpec(tuple(fibers), tl, spec.prime_set)
    morphism = FamilyMorphism(
        spec,
        target,
        {f.name: f.name for f in spec.exceptional},
        fiber_maps,
        tail_map,
    )
    return target, morphism


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyMorphism:
    """Morphism of families: exceptional names map to names or to the
    star; tails map to tails uniformly; the star maps to the star."""

    source: FamilySpec
    target: FamilySpec
    index_map: dict[str, str] = field(hash=False)
    fiber_maps: dict[str, GroupHom] = field(hash=False)
    tail_map: GroupHom | None = None

    def __post_init__(self):
        src_names = set(self.source.names)
        tgt_names = set(self.target.names)
        if set(self.index_map) != src_names:
            raise InvariantViolation("index map must cover the exceptional names")
        for name, tgt in self.index_map.items():
            f = self.source.fiber(name)
            if tgt == STAR:
                if name in self.fiber_maps:
                    hom = self.fiber_maps[name]
                    if hom.target.order != 1:
                        raise InvariantViolation(
                            f"{name} maps to the star but its fiber map is not trivial"
                        )
                continue
            if tgt not in tgt_names:
                raise InvariantViolation(f"unknown target fiber {tgt}")
            hom = self.fiber_maps.get(name)
            if hom is None:
                raise InvariantViolation(f"missing fiber map for {name}")
            if hom.source != f.group or hom.target != self.target.fiber(tgt).group:
                raise InvariantViolation(f"fiber map for {name} has wrong type")
        if self.source.tail is not None:
            if self.target.tail is None:
                raise InvariantViolation("tail cannot map into a finite family")
            if self.tail_map is None:
                raise InvariantViolation("missing tail map")
            if (
                self.tail_map.source != self.source.tail.group
                or self.tail_map.target != self.target.tail.group
            ):
                raise InvariantViolation("tail map has wrong type")

    def fiber_map(self, name: str) -> GroupHom | None:
        return self.fiber_maps.get(name)


def identity_morphism(spec: FamilySpec) -> FamilyMorphism:
    from .groups import identity_hom

    return FamilyMorphism(
        spec,
        spec,
        {n: n for n in spec.names},
        {n: identity_hom(spec.fiber(n).group) for n in spec.names},
        identity_hom(spec.tail.group) if spec.tail else None,
    )


@dataclass(frozen=True)
class MorphismPredicates:
    strict: bool
    fibrewise_surjective: bool
    star_unique_preimage: bool
    index_map_open: bool

    @property
    def all_hold(self) -> bool:
        return (
            self.strict
            and self.fibrewise_surjective
            and self.star_unique_preimage
            and self.index_map_open
        )


def _preimage_elements(hom: GroupHom, subset) -> tuple[int, ...]:
    target = set(subset)
    return tuple(
        x for x in range(hom.source.order) if hom.images[x] in target
    )


def morphism_predicates(m: FamilyMorphism) -> MorphismPredicates:
    """Decide strictness, fibrewise surjectivity, unique star preimage
    and openness of the index map for one-point-compactified shapes."""
    strict = True
    surjective = True
    for name, tgt in m.index_map.items():
        f = m.source.fiber(name)
        if tgt == STAR:
            # the star fiber is trivial with U_* = {*}
            if set(f.subgroup.elements) != set(range(f.group.order)):
                strict = False
            continue
        hom = m.fiber_maps[name]
        pre = _preimage_elements(hom, m.target.fiber(tgt).subgroup.elements)
        if set(pre) != set(f.subgroup.elements):
            strict = False
        if not hom.is_surjective():
            surjective = False
    if m.source.tail is not None:
        pre = _preimage_elements(m.tail_map, m.target.tail.subgroup.elements)
        if set(pre) != set(m.source.tail.subgroup.elements):
            strict = False
        if not m.tail_map.is_surjective():
            surjective = False
    # total-space surjectivity: every target fiber must be reached
    covered = {t for t in m.index_map.values() if t != STAR}
    if set(m.target.names) - covered:
        surjective = False
    if m.target.tail is not None and m.source.tail is None:
        surjective = False

    star_unique = all(t != STAR for t in m.index_map.values())

    src_infinite = m.source.tail is not None
    tgt_infinite = m.target.tail is not None
    if not src_infinite and not tgt_infinite:
        index_open = True
    elif src_infinite and tgt_infinite:
        index_open = star_unique
    else:
        # finite source into an infinite target: {*} is open upstairs but
        # its image is not open downstairs
        index_open = False
    return MorphismPredicates(strict, surjective, star_unique, index_open)


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tower:
    """Projective system: transitions[i] maps levels[i+1] -> levels[i]."""

    levels: tuple[FamilySpec, ...]
    transitions: tuple[FamilyMorphism, ...]

    def __post_init__(self):
        if len(self.transitions) != max(len(self.levels) - 1, 0):
            raise InvariantViolation("need one transition per adjacent pair")
        for i, t in enumerate(self.transitions):
            if t.source != self.levels[i + 1] or t.target != self.levels[i]:
                raise InvariantViolation(f"transition {i} connects wrong levels")


@dataclass(frozen=True)
class TowerCertificate:
    """Certified hypotheses for the limit theorem: every transition must
    be fibrewise surjective and strict, with a unique star preimage."""

    steps: tuple[MorphismPredicates, ...]
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def check_tower(t: Tower) -> TowerCertificate:
    steps = []
    failures = []
    for i, tr in enumerate(t.transitions):
        preds = morphism_predicates(tr)
        steps.append(preds)
        if not preds.fibrewise_surjective:
            failures.append(f"transition {i}: not fibrewise surjective")
        if not preds.strict:
            failures.append(f"transition {i}: not strict")
        if not preds.star_unique_preimage:
            failures.append(f"transition {i}: star preimage is not unique")
    return TowerCertificate(tuple(steps), tuple(failures))


# ---------------------------------------------------------------------------
# truncation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BeyondPattern:
    """What the family looks like past the truncation: the quotient of
    the tail group by the closure of the tail subgroup."""

    group: FiniteGroup
    projection: GroupHom

    @property
    def is_trivial(self) -> bool:
        return self.group.order == 1


@dataclass(frozen=True)
class TruncatedFamily:
    base: FamilySpec
    level: int
    fibers: tuple[FiberSpec, ...]
    beyond: BeyondPattern | None

    @property
    def is_plain(self) -> bool:
        """True when nothing lives past the truncation, so the family is
        an honest finite free product."""
        return self.beyond is None or self.beyond.is_trivial

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.fibers)

    def fiber(self, name: str) -> FiberSpec:
        for f in self.fibers:
            if f.name == name:
                return f
        raise KeyError(name)


def tail_name(i: int) -> str:
    return f"tail{i}"


def truncate(spec: FamilySpec, level: int) -> TruncatedFamily:
    """Finite family on the exceptional fibers plus ``level`` tail
    copies; beyond the truncation only the quotient pattern remains."""
    if level < 0:
        raise PreconditionError("truncation level must be >= 0")
    fibers = list(spec.exceptional)
    beyond = None
    if spec.tail is not None:
        for i in range(1, level + 1):
            fibers.append(FiberSpec(tail_name(i), spec.tail.group, spec.tail.subgroup))
        closure = normal_closure(spec.tail.group, spec.tail.subgroup)
        q, proj = quotient_group(spec.tail.group, closure)
        beyond = BeyondPattern(q, proj)
    return TruncatedFamily(spec, level, tuple(fibers), beyond)
