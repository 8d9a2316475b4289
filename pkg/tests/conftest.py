import random

import pytest

from corprod import groups as gr
from corprod.abelian import FiniteAbelianGroup


@pytest.fixture(scope="session")
def zoo():
    return {
        "C2": gr.cyclic_group(2),
        "C3": gr.cyclic_group(3),
        "C4": gr.cyclic_group(4),
        "C6": gr.cyclic_group(6),
        "C9": gr.cyclic_group(9),
        "V4": gr.abelian_group_from_factors((2, 2)),
        "C2xC4": gr.abelian_group_from_factors((2, 4)),
        "S3": gr.symmetric_group(3),
        "D4": gr.dihedral_group(4),
        "Q8": gr.quaternion_group(),
        "Heis27": gr.heisenberg_group(3),
    }


@pytest.fixture
def rng():
    return random.Random(20250809)


def negation_action(group, coeff: FiniteAbelianGroup, generator: int):
    """Action through the order-2 character sending ``generator`` to -1."""
    from corprod.cohomology import module_from_generator_matrices

    neg = tuple(
        tuple(-1 if i == j else 0 for j in range(coeff.rank))
        for i in range(coeff.rank)
    )
    return module_from_generator_matrices(group, coeff, {generator: neg})
