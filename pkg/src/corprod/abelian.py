"""Finite abelian groups in invariant-factor form.

A group is a chain Z/d1 + ... + Z/dr with d1 | d2 | ... | dr, elements
are integer vectors reduced componentwise, and homomorphisms are integer
matrices acting on column vectors.  Values in Q/Z are reduced fractions,
never floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from . import lattice, modular
from .errors import InvariantViolation, VerificationFailure
from .lattice import Matrix, Vector


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d1 + ... + Z/dr with d1 | d2 | ... | dr, each di >= 2.

    The empty factor list is the trivial group.
    """

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", fs)
        for d in fs:
            if d < 2:
                raise InvariantViolation(f"invariant factor {d} < 2")
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise InvariantViolation(f"broken divisibility chain {fs}")

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @property
    def zero(self) -> Vector:
        return (0,) * self.rank

    def reduce(self, vec) -> Vector:
        return tuple(int(x) % d for x, d in zip(vec, self.factors))

    def add(self, u, v) -> Vector:
        return tuple((x + y) % d for x, y, d in zip(u, v, self.factors))

    def neg(self, v) -> Vector:
        return tuple((-x) % d for x, d in zip(v, self.factors))

    def scale(self, c: int, v) -> Vector:
        return tuple((c * x) % d for x, d in zip(v, self.factors))

    def elements(self):
        return itertools.product(*(range(d) for d in self.factors))

    def element_order(self, v) -> int:
        n = 1
        for x, d in zip(v, self.factors):
            n = n * (d // gcd(x, d)) // gcd(n, d // gcd(x, d))
        return n

    def describe(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.factors)


TRIVIAL = FiniteAbelianGroup(())


def group_from_moduli(moduli) -> FiniteAbelianGroup:
    """Invariant-factor form of prod Z/moduli (entries may be unordered)."""
    return FiniteAbelianGroup(lattice.invariant_factors_of_diagonal(moduli))


@dataclass(frozen=True)
class AbHom:
    """Homomorphism between finite abelian groups as an integer matrix
    acting on column vectors; shape is (target.rank, source.rank)."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    matrix: Matrix

    def __post_init__(self):
        mat = lattice.freeze(
            tuple(
                tuple(self.matrix[i][j] % self.target.factors[i] for j in range(self.source.rank))
                for i in range(self.target.rank)
            )
        )
        object.__setattr__(self, "matrix", mat)
        for j, d in enumerate(self.source.factors):
            for i, e in enumerate(self.target.factors):
                if (mat[i][j] * d) % e != 0:
                    raise InvariantViolation(
                        f"matrix entry ({i},{j}) does not respect the source relation {d}"
                    )

    def apply(self, vec) -> Vector:
        return self.target.reduce(lattice.mat_vec(self.matrix, vec))

    def compose(self, other: "AbHom") -> "AbHom":
        """self after other."""
        if other.target.factors != self.source.factors:
            raise InvariantViolation("composition type mismatch")
        return AbHom(other.source, self.target, lattice.mat_mul(self.matrix, other.matrix))

    def kernel(self) -> "AbSubgroup":
        gens = modular.congruence_kernel(
            self.matrix, self.target.factors, self.source.factors
        )
        return AbSubgroup(self.source, tuple(gens))

    def image(self) -> "AbSubgroup":
        cols = tuple(
            tuple(self.matrix[i][j] for i in range(self.target.rank))
            for j in range(self.source.rank)
        )
        return AbSubgroup(self.target, cols)

    def is_injective(self) -> bool:
        return self.kernel().order == 1

    def is_surjective(self) -> bool:
        return self.image().order == self.target.order

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.matrix)


def identity_hom(a: FiniteAbelianGroup) -> AbHom:
    return AbHom(a, a, lattice.identity_matrix(a.rank))


def zero_hom(a: FiniteAbelianGroup, b: FiniteAbelianGroup) -> AbHom:
    return AbHom(a, b, lattice.zero_matrix(b.rank, a.rank))


def hom_from_images(a: FiniteAbelianGroup, b: FiniteAbelianGroup, images) -> AbHom:
    """Homomorphism sending the i-th canonical generator of ``a`` to
    ``images[i]``."""
    mat = tuple(tuple(images[j][i] for j in range(a.rank)) for i in range(b.rank))
    return AbHom(a, b, mat)


@dataclass(frozen=True)
class AbSubgroup:
    """Subgroup of a finite abelian group, given by generating vectors."""

    ambient: FiniteAbelianGroup
    gens: tuple[Vector, ...]

    @cached_property
    def canonical_rows(self) -> Matrix:
        n = self.ambient.rank
        rel = [
            tuple(self.ambient.factors[i] if j == i else 0 for j in range(n))
            for i in range(n)
        ]
        return lattice.hnf(list(self.gens) + rel, n)

    @cached_property
    def presentation(self) -> modular.Subquotient:
        return modular.subgroup_presentation(self.ambient.factors, self.gens)

    @property
    def structure(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.presentation.factors)

    @cached_property
    def order(self) -> int:
        pivots = lattice.hnf_pivots(self.canonical_rows)
        det = 1
        for row, p in zip(self.canonical_rows, pivots):
            det *= row[p]
        return self.ambient.order // det

    def contains(self, vec) -> bool:
        return lattice.in_rowspan(self.canonical_rows, self.ambient.reduce(vec))

    def same_subgroup(self, other: "AbSubgroup") -> bool:
        return (
            self.ambient.factors == other.ambient.factors
            and self.canonical_rows == other.canonical_rows
        )

    def inclusion(self) -> AbHom:
        """Inclusion of the canonical generators into the ambient group."""
        reps = self.presentation.reps
        mat = tuple(
            tuple(reps[j][i] for j in range(len(reps)))
            for i in range(self.ambient.rank)
        )
        return AbHom(self.structure, self.ambient, mat)

    def coordinates(self, vec) -> Vector:
        """Coordinates of ``vec`` with respect to the canonical generators."""
        return self.presentation.classify(self.ambient.reduce(vec))


def full_subgroup(a: FiniteAbelianGroup) -> AbSubgroup:
    n = a.rank
    basis = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    return AbSubgroup(a, basis)


# ---------------------------------------------------------------------------
# Smith normal form (public operation)
# ---------------------------------------------------------------------------


def smith_normal_form(mat):
    """U . M . V = diag(s1, ...) with s1 | s2 | ... and unimodular U, V."""
    return lattice.smith_normal_form(lattice.freeze(mat))


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualPairing:
    """Evaluation pairing A x A^ into Q/Z, exact fractions in [0, 1)."""

    left: FiniteAbelianGroup
    right: FiniteAbelianGroup

    def value(self, x, chi) -> Fraction:
        m = self.left.exponent
        total = 0
        for xi, ci, d in zip(x, chi, self.left.factors):
            total += xi * ci * (m // d)
        return Fraction(total % m, m)

    def is_nondegenerate(self) -> bool:
        left_ok = all(
            any(self.value(x, chi) != 0 for chi in self.right.elements())
            for x in self.left.elements()
            if any(x)
        )
        right_ok = all(
            any(self.value(x, chi) != 0 for x in self.left.elements())
            for chi in self.right.elements()
            if any(chi)
        )
        return left_ok and right_ok


def dual_group(a: FiniteAbelianGroup) -> tuple[FiniteAbelianGroup, DualPairing]:
    """Pontryagin dual; for finite groups the invariant factors repeat.

    A character vector chi acts by x -> sum x_i chi_i / d_i in Q/Z.
    """
    dual = FiniteAbelianGroup(a.factors)
    return dual, DualPairing(a, dual)


def annihilator(a: FiniteAbelianGroup, gens) -> AbSubgroup:
    """{chi in A^ : chi(B) = 0} for the subgroup B generated by ``gens``."""
    dual, _ = dual_group(a)
    m = a.exponent
    rows = [
        tuple((g[i] * (m // d)) % m for i, d in enumerate(a.factors))
        for g in gens
    ]
    chars = modular.congruence_kernel(rows, [m] * len(rows), a.factors)
    return AbSubgroup(dual, tuple(chars))


# ---------------------------------------------------------------------------
# hom groups, subgroups and quotients
# ---------------------------------------------------------------------------


def hom_group(a: FiniteAbelianGroup, b: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """Hom(A, B) = sum over factor pairs of Z/gcd(di, ej)."""
    return group_from_moduli(
        [gcd(d, e) for d in a.factors for e in b.factors] or [1]
    )


@dataclass(frozen=True)
class SubQuotient:
    """A subgroup B of A with the quotient A/B and the annihilator of B."""

    ambient: FiniteAbelianGroup
    sub: AbSubgroup
    sub_group: FiniteAbelianGroup
    quotient: FiniteAbelianGroup
    projection: AbHom
    ann: AbSubgroup


def sub_and_quotient(a: FiniteAbelianGroup, gens) -> SubQuotient:
    """Split A along the subgroup generated by ``gens``.

    The annihilator is certified against (A/B)^: they must have the
    same invariant factors, and |B| * |ann(B)| = |A|.
    """
    gens = tuple(a.reduce(g) for g in gens)
    sub = AbSubgroup(a, gens)
    qpres = modular.quotient_presentation(a.factors, gens)
    quotient = FiniteAbelianGroup(qpres.factors)
    n = a.rank
    cols = [qpres.classify(tuple(1 if j == i else 0 for j in range(n))) for i in range(n)]
    proj = AbHom(
        a,
        quotient,
        tuple(tuple(cols[j][i] for j in range(n)) for i in range(quotient.rank)),
    )
    ann = annihilator(a, gens)
    if ann.structure.factors != quotient.factors:
        raise VerificationFailure(
            "annihilator is not isomorphic to the dual of the quotient"
        )
    if sub.order * ann.order != a.order:
        raise VerificationFailure("annihilator order law |B|*|ann B| = |A| failed")
    return SubQuotient(a, sub, sub.structure, quotient, proj, ann)
