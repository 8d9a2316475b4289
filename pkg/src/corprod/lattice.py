"""Exact integer matrix and lattice arithmetic.

Conventions used throughout the package:

* matrices are tuples of row tuples with Python int entries;
* row vectors of a matrix generate a lattice (sublattice of Z^n);
* homomorphism matrices act on column vectors, so composition is
  ordinary matrix multiplication.

Everything here is exact; no floating point is used anywhere.
"""

from __future__ import annotations

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def freeze(rows) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_matrix(m: int, n: int) -> Matrix:
    return tuple((0,) * n for _ in range(m))


def transpose(mat) -> Matrix:
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    return tuple(tuple(mat[i][j] for i in range(rows)) for j in range(cols))


def mat_mul(a, b) -> Matrix:
    if a and b:
        assert len(a[0]) == len(b), "shape mismatch"
    bt = transpose(b) if b else ()
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a, v) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat(v, a) -> Vector:
    cols = len(a[0]) if a else 0
    return tuple(sum(v[i] * a[i][j] for i in range(len(a))) for j in range(cols))


def vec_add(u, v) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c: int, v) -> Vector:
    return tuple(c * x for x in v)


def vec_mod(v, moduli) -> Vector:
    return tuple(x % m if m else x for x, m in zip(v, moduli))


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


# ---------------------------------------------------------------------------
# Hermite normal form (row style)
# ---------------------------------------------------------------------------


def hnf(rows, ncols: int | None = None) -> Matrix:
    """Canonical row Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows in staircase shape with positive pivots and
    entries above each pivot reduced into [0, pivot).  Two generating sets
    span the same lattice iff their HNFs are equal.
    """
    work = [list(r) for r in rows if not is_zero_vector(r)]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivot_row = 0
    for col in range(ncols):
        idx = None
        for i in range(pivot_row, len(work)):
            if work[i][col] != 0:
                idx = i
                break
        if idx is None:
            continue
        work[pivot_row], work[idx] = work[idx], work[pivot_row]
        for i in range(pivot_row + 1, len(work)):
            # rotating Euclid on the pair of column entries
            while work[i][col] != 0:
                q = work[pivot_row][col] // work[i][col]
                reduced = [x - q * y for x, y in zip(work[pivot_row], work[i])]
                work[pivot_row], work[i] = work[i], reduced
        if work[pivot_row][col] < 0:
            work[pivot_row] = [-x for x in work[pivot_row]]
        p = work[pivot_row][col]
        for i in range(pivot_row):
            q = work[i][col] // p
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[pivot_row])]
        pivot_row += 1
        work = work[:pivot_row] + [r for r in work[pivot_row:] if not is_zero_vector(r)]
        if pivot_row == len(work):
            break
    return freeze(work[:pivot_row])


def hnf_pivots(h: Matrix) -> tuple[int, ...]:
    """Pivot column of each row of an HNF matrix."""
    out = []
    for row in h:
        for j, x in enumerate(row):
            if x != 0:
                out.append(j)
                break
    return tuple(out)


def reduce_mod_lattice(h: Matrix, vec) -> Vector:
    """Reduce ``vec`` modulo the lattice with HNF basis ``h``.

    The result is zero iff ``vec`` lies in the lattice.
    """
    v = list(vec)
    pivots = hnf_pivots(h)
    for row, p in zip(h, pivots):
        q = v[p] // row[p]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def in_rowspan(h: Matrix, vec) -> bool:
    return is_zero_vector(reduce_mod_lattice(h, vec))


def solve_against_basis(basis: Matrix, vec) -> Vector | None:
    """Solve ``y . basis = vec`` in integers for a staircase basis.

    Returns None when no integer solution exists.
    """
    pivots = hnf_pivots(basis)
    v = list(vec)
    y = [0] * len(basis)
    for i, (row, p) in enumerate(zip(basis, pivots)):
        if v[p] % row[p] != 0:
            return None
        q = v[p] // row[p]
        y[i] = q
        if q:
            v = [x - q * r for x, r in zip(v, row)]
    if not is_zero_vector(v):
        return None
    return tuple(y)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(mat) -> tuple[tuple[int, ...], Matrix, Matrix]:
    """Smith normal form ``U . M . V = diag(s1, ..)`` with s1 | s2 | ...

    Returns ``(diagonal, U, V)`` where the diagonal is padded to
    ``min(m, n)`` entries (possibly zero) and U, V are unimodular.
    """
    d, u, v, _ = snf_transforms(mat)
    return d, u, v


def snf_transforms(mat) -> tuple[tuple[int, ...], Matrix, Matrix, Matrix]:
    """Like :func:`smith_normal_form` but also returns the inverse of V."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [list(row) for row in mat]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_sub(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_sub(j, i, q):  # col_j -= q * col_i
        for r in range(m):
            a[r][j] -= q * a[r][i]
        for r in range(n):
            v[r][j] -= q * v[r][i]
        vinv[i] = [x + q * y for x, y in zip(vinv[i], vinv[j])]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in range(len(a)):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    rank = min(m, n)
    t = 0
    while t < rank:
        # locate smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            row_swap(t, bi)
        if bj != t:
            col_swap(t, bj)
        # clear row and column t
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_sub(i, t, q)
                    if a[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_sub(j, t, q)
                    if a[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
        # enforce divisibility of the remaining block by the pivot
        p = a[t][t]
        if p != 0:
            fixed = True
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p != 0:
                        # fold row i into row t and restart the pivot
                        row_sub(t, i, -1)
                        fixed = False
                        break
                if not fixed:
                    break
            if not fixed:
                continue
        if a[t][t] < 0:
            row_negate(t)
        t += 1

    diag = tuple(a[i][i] for i in range(rank))
    return diag, freeze(u), freeze(v), freeze(vinv)


def snf_diagonal(mat) -> tuple[int, ...]:
    """Just the Smith diagonal, nonzero entries first then zeros."""
    d, _, _ = smith_normal_form(mat)
    return d


def row_kernel(mat) -> Matrix:
    """Basis of the left kernel {x : x . M = 0} as rows."""
    m = len(mat)
    if m == 0:
        return ()
    d, u, _, _ = snf_transforms(mat)
    out = []
    for i in range(m):
        if i >= len(d) or d[i] == 0:
            out.append(u[i])
    return freeze(out)


def factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine at desk scale."""
    if n <= 0:
        raise ValueError("factorint expects a positive integer")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_of_diagonal(moduli) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of a direct sum of Z/m factors.

    Zeros are not allowed; entries equal to 1 are dropped.
    """
    per_prime: dict[int, list[int]] = {}
    for m in moduli:
        if m == 1:
            continue
        for p, e in factorint(m).items():
            per_prime.setdefault(p, []).append(e)
    if not per_prime:
        return ()
    length = max(len(v) for v in per_prime.values())
    factors = [1] * length
    for p, exps in per_prime.items():
        exps = [0] * (length - len(exps)) + sorted(exps)
        for i, e in enumerate(exps):
            factors[i] *= p**e
    return tuple(f for f in factors if f > 1)
