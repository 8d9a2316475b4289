"""Schreier rewriting sanity: edge words, factor sets, conjugation."""

import itertools
import random

from corprod import groups as gr
from corprod.presentation import free_presentation


def conj_by_element(pres, gelt, vec):
    """Conjugate an abelianized-kernel vector by a coset representative."""
    out = [0] * pres.rank
    w = pres.coset_word[gelt]
    for e, c in enumerate(vec):
        if c:
            word = w + pres.edge_word(e) + tuple(-x for x in reversed(w))
            r = pres.rewrite(word)
            out = [a + c * b for a, b in zip(out, r)]
    return tuple(out)


def test_presentation_invariants(zoo):
    rng = random.Random(7)
    for g in [zoo["C2"], zoo["C6"], zoo["D4"], zoo["Q8"], zoo["S3"], zoo["Heis27"], gr.trivial_group()]:
        pres = free_presentation(g)
        n, k = g.order, len(pres.gens)
        assert pres.rank == n * k - (n - 1)
        for e in range(pres.rank):
            unit = tuple(1 if i == e else 0 for i in range(pres.rank))
            assert pres.rewrite(pres.edge_word(e)) == unit
        # the factor-set identity in the abelianized kernel:
        # g.(h,k) + (g,hk) = (g,h) + (gh,k)
        triples = list(itertools.product(range(n), repeat=3))
        rng.shuffle(triples)
        for x, y, z in triples[:25]:
            lhs = conj_by_element(pres, x, pres.pair_vector(y, z))
            lhs = tuple(a + b for a, b in zip(lhs, pres.pair_vector(x, g.mul(y, z))))
            rhs = tuple(
                a + b
                for a, b in zip(pres.pair_vector(x, y), pres.pair_vector(g.mul(x, y), z))
            )
            assert lhs == rhs


def test_normalization(zoo):
    g = zoo["D4"]
    pres = free_presentation(g)
    for x in range(g.order):
        assert pres.pair_vector(g.identity, x) == (0,) * pres.rank
        assert pres.pair_vector(x, g.identity) == (0,) * pres.rank
