"""Smith/Hermite normal form properties, with exhaustive transform checks."""

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from corprod import lattice

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


def det(m):
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += (-1 if inv % 2 else 1) * prod
    return total


def test_snf_examples():
    d, u, v = lattice.smith_normal_form(((2, 0), (0, 3)))
    assert d == (1, 6)
    assert lattice.mat_mul(lattice.mat_mul(u, ((2, 0), (0, 3))), v) == ((1, 0), (0, 6))
    assert lattice.smith_normal_form(((1, 0), (0, 1)))[0] == (1, 1)
    assert lattice.smith_normal_form(((0, 0), (0, 0)))[0] == (0, 0)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_transform_properties(rows):
    m = lattice.freeze(rows)
    d, u, v, vinv = lattice.snf_transforms(m)
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    product = lattice.mat_mul(lattice.mat_mul(u, m), v)
    for i in range(len(m)):
        for j in range(len(m[0])):
            want = d[i] if i == j and i < len(d) else 0
            assert product[i][j] == want
    nonzero = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert lattice.mat_mul(v, vinv) == lattice.identity_matrix(len(m[0]))


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_row_kernel(rows):
    m = lattice.freeze(rows)
    for row in lattice.row_kernel(m):
        assert all(x == 0 for x in lattice.vec_mat(row, m))


@settings(max_examples=100, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_hnf_canonical(rows, rnd):
    m = [tuple(r) for r in rows]
    h1 = lattice.hnf(m, len(rows[0]))
    shuffled = m[:]
    rnd.shuffle(shuffled)
    extra = [tuple(a + b for a, b in zip(m[0], m[-1]))]
    h2 = lattice.hnf(shuffled + extra, len(rows[0]))
    assert h1 == h2
    for row in m:
        assert lattice.in_rowspan(h1, row)


def test_invariant_factors_of_diagonal():
    assert lattice.invariant_factors_of_diagonal([2, 3]) == (6,)
    assert lattice.invariant_factors_of_diagonal([2, 4, 3]) == (2, 12)
    assert lattice.invariant_factors_of_diagonal([1, 1]) == ()
    assert lattice.invariant_factors_of_diagonal([2, 2, 2]) == (2, 2, 2)
    assert lattice.invariant_factors_of_diagonal([4, 6]) == (2, 12)


def test_factorint():
    assert lattice.factorint(1) == {}
    assert lattice.factorint(12) == {2: 2, 3: 1}
    assert lattice.factorint(27) == {3: 3}
