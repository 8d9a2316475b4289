"""Linear algebra over Z/p^k and finite abelian subquotients.

The heavy computations of the package (cocycle solution spaces, fixed
submodules, quotient presentations) all reduce to two primitives:

* ``congruence_kernel``     -- solve C.x = 0 with per-row and per-column
                               moduli, returning subgroup generators;
* ``subquotient``           -- present N/D for subgroups D <= N of a
                               finite coordinate group, with invariant
                               factors, representatives and a coordinate
                               map for arbitrary members of N.

Both work prime by prime.  Modulo p^k every matrix can be diagonalized
exactly with numpy int64 arithmetic because the entries stay below p^k;
the results are then glued with the Chinese remainder theorem.  A pure
integer fallback (``subquotient_int``) built on the Smith normal form is
kept as an independent oracle for the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import lattice
from .errors import VerificationFailure
from .lattice import Vector, factorint


def _valuation(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
        if v >= cap:
            break
    return v


def _unit_inverse(u: int, q: int) -> int:
    return pow(u, -1, q)


def local_diagonalize(mat: np.ndarray, p: int, k: int, need_u: bool = True):
    """Diagonalize ``mat`` over Z/p^k: U.M.V = diag(p^a_i) with U, V
    invertible mod p^k.

    Returns ``(exps, U, V, Vinv)`` where ``exps[i]`` is the valuation of
    the i-th diagonal entry (k encodes a zero block).  With
    ``need_u=False`` the (potentially large) U is not tracked and None
    is returned in its place.
    """
    q = p**k
    m, n = mat.shape
    a = np.mod(mat.astype(np.int64), q)
    u = np.eye(m, dtype=np.int64) if need_u else None
    v = np.eye(n, dtype=np.int64)
    vinv = np.eye(n, dtype=np.int64)
    # valuation lookup for residues 0..q-1
    val = np.full(q, k, dtype=np.int64)
    for r in range(1, q):
        val[r] = _valuation(r, p, k)

    exps: list[int] = []
    t = 0
    size = min(m, n)
    while t < size:
        block = a[t:, t:]
        vals = val[block]
        vmin = vals.min() if vals.size else k
        if vmin >= k:
            break
        bi, bj = np.unravel_index(int(vals.argmin()), vals.shape)
        bi, bj = bi + t, bj + t
        if bi != t:
            a[[t, bi], :] = a[[bi, t], :]
            if need_u:
                u[[t, bi], :] = u[[bi, t], :]
        if bj != t:
            a[:, [t, bj]] = a[:, [bj, t]]
            v[:, [t, bj]] = v[:, [bj, t]]
            vinv[[t, bj], :] = vinv[[bj, t], :]
        piv_val = int(vmin)
        unit = int(a[t, t]) // p**piv_val
        inv = _unit_inverse(unit % q, q)
        a[t, t:] = (a[t, t:] * inv) % q
        if need_u:
            u[t, :] = (u[t, :] * inv) % q
        # pivot is now exactly p^piv_val; clear column t then row t
        col = a[t:, t].copy()
        col[0] = 0
        w = col // (p**piv_val)
        if np.any(w):
            a[t:, t:] -= np.outer(w, a[t, t:])
            np.mod(a[t:, t:], q, out=a[t:, t:])
            if need_u:
                u[t:, :] -= np.outer(w, u[t, :])
                np.mod(u[t:, :], q, out=u[t:, :])
        row = a[t, t:].copy()
        row[0] = 0
        w = row // (p**piv_val)
        if np.any(w):
            # col_j -= w_j * col_t;  inverse acts on Vinv as row_t += w . rows
            a[t:, t:] -= np.outer(a[t:, t], w)
            np.mod(a[t:, t:], q, out=a[t:, t:])
            v[:, t:] -= np.outer(v[:, t], w)
            np.mod(v[:, t:], q, out=v[:, t:])
            vinv[t, :] = (vinv[t, :] + w @ vinv[t:, :]) % q
        exps.append(piv_val)
        t += 1
    return exps, (u % q) if need_u else None, v % q, vinv % q


def _kernel_gens_mod(mat: np.ndarray, p: int, k: int) -> list[np.ndarray]:
    """Generators of {x in (Z/p^k)^n : mat.x = 0 mod p^k} (column kernel)."""
    q = p**k
    m, n = mat.shape
    if n == 0:
        return []
    if m == 0:
        return [np.eye(n, dtype=np.int64)[:, j] for j in range(n)]
    exps, _, v, _ = local_diagonalize(mat, p, k, need_u=False)
    gens = []
    for j in range(n):
        a = exps[j] if j < len(exps) else k
        if a == 0:
            continue
        g = (v[:, j] * (p ** (k - a))) % q
        if np.any(g):
            gens.append(g)
    return gens


# ---------------------------------------------------------------------------
# prime decomposition of a coordinate group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _PrimePart:
    prime: int
    k: int                       # exponent precision: p^k kills the part
    comps: tuple[int, ...]       # ambient components with p | modulus
    exps: tuple[int, ...]        # p-adic exponent of each such component

    def project(self, vec) -> np.ndarray:
        q = self.prime**self.k
        return np.array([int(vec[c]) % q for c in self.comps], dtype=np.int64)


def _prime_parts(moduli) -> list[_PrimePart]:
    primes: dict[int, dict[int, int]] = {}
    for j, m in enumerate(moduli):
        if m <= 0:
            raise ValueError("coordinate moduli must be positive")
        for p, e in factorint(m).items():
            primes.setdefault(p, {})[j] = e
    out = []
    for p in sorted(primes):
        comp_exp = primes[p]
        comps = tuple(sorted(comp_exp))
        exps = tuple(comp_exp[c] for c in comps)
        out.append(_PrimePart(p, max(exps), comps, exps))
    return out


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    # residue mod m1*m2 agreeing with r1 mod m1 and r2 mod m2 (coprime)
    g = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * g % m2)) % (m1 * m2)


# ---------------------------------------------------------------------------
# subquotients
# ---------------------------------------------------------------------------


@dataclass
class Subquotient:
    """Presentation of N/D for subgroups D <= N of prod Z/moduli.

    ``factors`` are the invariant factors (ascending divisibility chain),
    ``reps`` lifts one generator per factor back into the ambient group,
    and ``classify`` maps any element of N to its coordinates in
    ``prod Z/factors``.
    """

    ambient: tuple[int, ...]
    factors: tuple[int, ...]
    reps: tuple[Vector, ...]
    _classify: Callable[[Vector], Vector] = field(repr=False)

    @property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f
        return n

    def classify(self, vec) -> Vector:
        return self._classify(tuple(int(x) for x in vec))


class _PrimarySubquotient:
    """The p-primary engine behind :class:`Subquotient`."""

    def __init__(self, part: _PrimePart, num_gens, den_gens):
        p, k = part.prime, part.k
        q = p**k
        n = len(part.comps)
        self.part, self.q = part, q
        relation_rows = np.diag([p**e for e in part.exps]).astype(np.int64) if n else np.zeros((0, 0), dtype=np.int64)
        num = [part.project(g) for g in num_gens]
        num_mat = np.vstack([np.array(num, dtype=np.int64).reshape(len(num), n), relation_rows]) if n else np.zeros((0, 0), dtype=np.int64)
        exps, _, v_n, vinv_n = local_diagonalize(num_mat, p, k, need_u=False)
        # pad the diagonal to full width; missing columns are zero mod q
        self.a = [exps[i] if i < len(exps) else k for i in range(n)]
        self.v_n, self.vinv_n = v_n, vinv_n
        # coordinates of the denominator in the basis p^{a_i} * Vinv_n[i]
        den = [part.project(g) for g in den_gens] + [r for r in relation_rows]
        c_rows = [self._coords_in_basis(d) for d in den]
        c_rows += [np.eye(n, dtype=np.int64)[i] * (p ** (k - self.a[i])) for i in range(n)]
        c_mat = np.array(c_rows, dtype=np.int64).reshape(len(c_rows), n)
        b_exps, _, v_c, vinv_c = local_diagonalize(c_mat, p, k, need_u=False)
        self.b = [b_exps[i] if i < len(b_exps) else k for i in range(n)]
        self.v_c, self.vinv_c = v_c, vinv_c
        self.kept = [i for i in range(n) if self.b[i] > 0]
        self.factors = tuple(self.part.prime ** self.b[i] for i in self.kept)

    def _coords_in_basis(self, d: np.ndarray) -> np.ndarray:
        p, k, q = self.part.prime, self.part.k, self.q
        y = (d @ self.v_n) % q
        for i, ai in enumerate(self.a):
            pa = p**ai
            if int(y[i]) % pa != 0:
                raise VerificationFailure("vector is not in the numerator subgroup")
            y[i] = int(y[i]) // pa
        return y % q

    def rep(self, idx: int) -> np.ndarray:
        # ambient vector of the generator of factor idx
        p, q = self.part.prime, self.q
        i = self.kept[idx]
        y = self.vinv_c[i, :].copy()
        y = (y * np.array([p**ai for ai in self.a], dtype=np.int64)) % q
        return (y @ self.vinv_n) % q

    def classify(self, vec) -> list[int]:
        q = self.q
        y = self._coords_in_basis(self.part.project(vec))
        z = (y @ self.v_c) % q
        return [int(z[i]) % (self.part.prime ** self.b[i]) for i in self.kept]


def subquotient(moduli, num_gens, den_gens) -> Subquotient:
    """Present the quotient of subgroups <num_gens> / <den_gens> of
    prod Z/moduli.  The denominator must be contained in the numerator.
    """
    moduli = tuple(int(m) for m in moduli)
    parts = _prime_parts(moduli)
    engines = [_PrimarySubquotient(part, num_gens, den_gens) for part in parts]

    # align the per-prime factor lists so that the largest factors pair up
    length = max((len(e.factors) for e in engines), default=0)
    aligned: list[list[tuple[_PrimarySubquotient, int] | None]] = []
    for e in engines:
        pad: list[tuple[_PrimarySubquotient, int] | None] = [None] * (length - len(e.factors))
        aligned.append(pad + [(e, i) for i in range(len(e.factors))])
    factors = []
    reps = []
    for pos in range(length):
        f = 1
        rep = [0] * len(moduli)
        for slot in (col[pos] for col in aligned):
            if slot is None:
                continue
            engine, i = slot
            f *= engine.factors[i]
            part_rep = engine.rep(i)
            for c, comp in enumerate(engine.part.comps):
                m = moduli[comp]
                pe = engine.part.prime ** engine.part.exps[c]
                cof = m // pe
                if cof == 1:
                    rep[comp] = (rep[comp] + int(part_rep[c])) % m
                else:
                    # lift the p-part without touching the other primes
                    add = _crt_pair(int(part_rep[c]) % pe, pe, 0, cof)
                    rep[comp] = (rep[comp] + add) % m
        factors.append(f)
        reps.append(tuple(rep))

    align_map = aligned  # capture for the closure

    def classify(vec: Vector) -> Vector:
        per_engine = {id(e): e.classify(vec) for e in engines}
        out = []
        for pos in range(length):
            residue, modulus = 0, 1
            for col in align_map:
                slot = col[pos]
                if slot is None:
                    continue
                engine, i = slot
                r = per_engine[id(engine)][i]
                residue = _crt_pair(residue, modulus, r, engine.factors[i])
                modulus *= engine.factors[i]
            out.append(residue)
        return tuple(out)

    return Subquotient(moduli, tuple(factors), tuple(reps), classify)


def subgroup_presentation(moduli, gens) -> Subquotient:
    """Structure of the subgroup generated by ``gens`` (quotient by 0)."""
    return subquotient(moduli, list(gens), [])


def quotient_presentation(moduli, den_gens) -> Subquotient:
    """Structure of (prod Z/moduli) / <den_gens>, with coordinate map."""
    n = len(moduli)
    basis = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    return subquotient(moduli, basis, list(den_gens))


# ---------------------------------------------------------------------------
# congruence kernels
# ---------------------------------------------------------------------------


def congruence_kernel(rows, row_moduli, col_moduli) -> list[Vector]:
    """Generators of {x in prod Z/col_moduli : rows . x = 0 mod row_moduli}.

    ``rows`` acts on column vectors; equation i must hold modulo
    ``row_moduli[i]``.  The system must be compatible with the column
    moduli (rows[i][j] * col_moduli[j] = 0 mod row_moduli[i]), which
    holds for every system assembled from valid module matrices.
    """
    n = len(col_moduli)
    if n == 0:
        return []
    exp_of = [factorint(m) if m > 1 else {} for m in col_moduli]
    row_exp = [factorint(m) if m > 1 else {} for m in row_moduli]
    primes: set[int] = set()
    for f in exp_of + row_exp:
        primes.update(f)
    out: list[Vector] = []
    for p in sorted(primes):
        k = max(
            [f.get(p, 0) for f in exp_of] + [f.get(p, 0) for f in row_exp],
            default=0,
        )
        q = p**k
        scaled = []
        for row, rexp in zip(rows, row_exp):
            e = rexp.get(p, 0)
            if e == 0:
                continue
            scale = p ** (k - e)
            scaled.append([(int(x) * scale) % q for x in row])
        mat = np.array(scaled, dtype=np.int64).reshape(len(scaled), n)
        for g in _kernel_gens_mod(mat, p, k):
            # keep the p-part of each component, zero at the other primes
            vec = []
            for j, m in enumerate(col_moduli):
                e = exp_of[j].get(p, 0)
                if e == 0:
                    vec.append(0)
                    continue
                pe = p**e
                cof = m // pe
                r = int(g[j]) % pe
                vec.append(r if cof == 1 else _crt_pair(r, pe, 0, cof))
            if any(vec):
                out.append(tuple(vec))
    return out


# ---------------------------------------------------------------------------
# pure integer oracle
# ---------------------------------------------------------------------------


def subquotient_int(moduli, num_gens, den_gens) -> Subquotient:
    """Pure-integer reference implementation of :func:`subquotient`."""
    n = len(moduli)
    relations = [tuple(moduli[i] if j == i else 0 for j in range(n)) for i in range(n)]
    num_basis = lattice.hnf(list(num_gens) + relations, n)
    den_rows = list(den_gens) + relations
    coords = []
    for d in den_rows:
        y = lattice.solve_against_basis(num_basis, d)
        if y is None:
            raise VerificationFailure("denominator is not inside the numerator")
        coords.append(y)
    k = len(num_basis)
    diag, _, v, vinv = lattice.snf_transforms(
        coords if coords else [tuple(0 for _ in range(k))]
    )
    factors, reps = [], []
    for i in range(k):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            raise VerificationFailure("subquotient is not finite")
        if d == 1:
            continue
        factors.append(d)
        y = vinv[i]
        reps.append(lattice.vec_mod(lattice.vec_mat(y, num_basis), moduli))

    kept = [i for i in range(k) if (diag[i] if i < len(diag) else 0) != 1]

    def classify(vec: Vector) -> Vector:
        y = lattice.solve_against_basis(num_basis, vec)
        if y is None:
            raise VerificationFailure("vector is not in the numerator subgroup")
        z = lattice.vec_mat(y, v)
        return tuple(z[i] % diag[i] for i in kept)

    return Subquotient(tuple(moduli), tuple(factors), tuple(reps), classify)


class CongruenceSolver:
    """Repeated-right-hand-side solver for rows . x = rhs (mod
    row_moduli) with x in prod Z/col_moduli.

    Diagonalizes the system once per prime; ``solve`` then costs one
    matrix-vector product per prime.  Same compatibility requirement as
    :func:`congruence_kernel`.
    """

    def __init__(self, rows, row_moduli, col_moduli):
        self.rows = [tuple(int(x) for x in r) for r in rows]
        self.row_moduli = [int(m) for m in row_moduli]
        self.col_moduli = [int(m) for m in col_moduli]
        n = len(self.col_moduli)
        self.n = n
        self.exp_of = [factorint(m) if m > 1 else {} for m in self.col_moduli]
        row_exp = [factorint(m) if m > 1 else {} for m in self.row_moduli]
        primes: set[int] = set()
        for f in self.exp_of + row_exp:
            primes.update(f)
        self.systems = []
        for p in sorted(primes):
            k = max(
                [f.get(p, 0) for f in self.exp_of] + [f.get(p, 0) for f in row_exp],
                default=0,
            )
            q = p**k
            keep = [i for i, f in enumerate(row_exp) if f.get(p, 0) > 0]
            scales = [p ** (k - row_exp[i][p]) for i in keep]
            mat = np.array(
                [
                    [(x * s) % q for x in self.rows[i]]
                    for i, s in zip(keep, scales)
                ],
                dtype=np.int64,
            ).reshape(len(keep), n)
            if mat.shape[0]:
                exps, u, v, _ = local_diagonalize(mat, p, k)
            else:
                exps, u, v = [], np.zeros((0, 0), dtype=np.int64), np.eye(n, dtype=np.int64)
            self.systems.append((p, k, q, keep, scales, exps, u, v, mat.shape[0]))

    def solve(self, rhs) -> Vector | None:
        rhs = [int(b) for b in rhs]
        solution = [0] * self.n
        for p, k, q, keep, scales, exps, u, v, nrows in self.systems:
            if nrows:
                vec = np.array(
                    [(rhs[i] * s) % q for i, s in zip(keep, scales)], dtype=np.int64
                )
                ub = (u @ vec) % q
                z = np.zeros(self.n, dtype=np.int64)
                for i in range(nrows):
                    a = exps[i] if i < len(exps) else k
                    pa = p**a
                    if int(ub[i]) % pa != 0:
                        return None
                    if i < self.n:
                        z[i] = int(ub[i]) // pa
                xp = (v @ z) % q
            else:
                xp = np.zeros(self.n, dtype=np.int64)
            for j, mm in enumerate(self.col_moduli):
                e = self.exp_of[j].get(p, 0)
                if e == 0:
                    continue
                pe = p**e
                cof = mm // pe
                r = int(xp[j]) % pe
                add = r if cof == 1 else _crt_pair(r, pe, 0, cof)
                solution[j] = (solution[j] + add) % mm
        # verify (cheap, and guards the p-free corner cases)
        for row, b, mm in zip(self.rows, rhs, self.row_moduli):
            if (sum(c * x for c, x in zip(row, solution)) - b) % mm != 0:
                return None
        return tuple(solution)


def solve_congruence(rows, row_moduli, col_moduli, rhs) -> Vector | None:
    """One solution x of rows . x = rhs (mod row_moduli), x in prod
    Z/col_moduli, or None when the system is inconsistent."""
    return CongruenceSolver(rows, row_moduli, col_moduli).solve(rhs)


def congruence_kernel_int(rows, row_moduli, col_moduli) -> list[Vector]:
    """Pure-integer reference implementation of :func:`congruence_kernel`."""
    n = len(col_moduli)
    m = len(rows)
    # x solves  rows.x = diag(row_moduli).y  for some integer y
    # <=>  (x, y) in the left kernel of [rows^T ; -diag]
    stacked = [tuple(rows[i][j] for i in range(m)) for j in range(n)]
    for i in range(m):
        stacked.append(tuple(-row_moduli[i] if r == i else 0 for r in range(m)))
    kern = lattice.row_kernel(stacked)
    gens = [lattice.vec_mod(row[:n], col_moduli) for row in kern]
    return [g for g in gens if any(g)]
