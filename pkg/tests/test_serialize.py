"""Spec-file parsing: roundtrips and corruption fuzzing.

Every corrupted document must either parse or fail with SpecFileError;
nothing else may leak out of the parsers.
"""

import copy
import random

import pytest

from corprod import serialize
from corprod.errors import SpecFileError

VALID_FAMILY = {
    "prime_set": [2, 3],
    "exceptional": {
        "a": {"group": {"kind": "cyclic", "n": 4}, "subgroup_generators": [2]},
        "b": {
            "group": {"kind": "perm", "degree": 3, "generators": [[1, 2, 0]]},
            "subgroup_generators": [],
        },
    },
    "tail": {"group": {"kind": "cyclic", "n": 3}, "subgroup_generators": [1]},
}

VALID_MODULE = {
    "coeff": {"kind": "ab", "factors": [6]},
    "actions": {"a": [{"element": 1, "matrix": [[-1]]}]},
}

VALID_TOWER = {
    "levels": [
        {
            "prime_set": [2],
            "exceptional": {
                "a": {"group": {"kind": "cyclic", "n": 2}, "subgroup_generators": [1]}
            },
        },
        {
            "prime_set": [2],
            "exceptional": {
                "a": {"group": {"kind": "cyclic", "n": 2}, "subgroup_generators": [1]}
            },
        },
    ],
    "transitions": [{"index_map": {"a": "a"}, "fiber_maps": {"a": [0, 1]}}],
}

VALID_TOPO = {
    "open_sets": [
        {
            "exceptional_parts": {"a": [0, 1]},
            "tail_default": [0, 1, 2],
            "contains_star": True,
        }
    ]
}

JUNK = [None, -1, 0, 3.5, "x", [], {}, [[]], {"kind": "?"}, 10**9, [0, 0], True, [7], [[7, 0], [0, 7]], {"a": 1}]


def corrupt(doc, rng):
    doc = copy.deepcopy(doc)
    node = doc
    while isinstance(node, (dict, list)) and node and rng.random() < 0.8:
        key = rng.choice(sorted(node)) if isinstance(node, dict) else rng.randrange(len(node))
        if rng.random() < 0.4:
            node[key] = rng.choice(JUNK)
            return doc
        node = node[key]
    if isinstance(node, dict):
        node[rng.choice(["kind", "n", "zzz"])] = rng.choice(JUNK)
    return doc


def test_valid_documents_parse():
    spec = serialize.parse_family(VALID_FAMILY)
    assert spec.names == ("a", "b") and spec.tail is not None
    module = serialize.parse_module(VALID_MODULE, spec)
    assert module.coeff.factors == (6,)
    assert module.action_for("a") is not None
    assert module.action_for("b") is None
    tower = serialize.parse_tower(VALID_TOWER)
    assert len(tower.levels) == 2
    sets = serialize.parse_open_sets(VALID_TOPO, spec)
    assert len(sets) == 1 and sets[0].contains_star


def test_trivial_action_listing_collapses_to_none():
    spec = serialize.parse_family(VALID_FAMILY)
    doc = {
        "coeff": {"kind": "ab", "factors": [6]},
        "actions": {"a": [{"element": 1, "matrix": [[1]]}]},
    }
    module = serialize.parse_module(doc, spec)
    assert module.action_for("a") is None


@pytest.mark.parametrize(
    "name,doc",
    [
        ("family", VALID_FAMILY),
        ("module", VALID_MODULE),
        ("tower", VALID_TOWER),
        ("topo", VALID_TOPO),
    ],
)
def test_corrupted_documents_never_crash(name, doc):
    rng = random.Random(hash(name) & 0xFFFF)
    spec = serialize.parse_family(VALID_FAMILY)
    parse = {
        "family": serialize.parse_family,
        "module": lambda d: serialize.parse_module(d, spec),
        "tower": serialize.parse_tower,
        "topo": lambda d: serialize.parse_open_sets(d, spec),
    }[name]
    for _ in range(400):
        bad = corrupt(doc, rng)
        try:
            parse(bad)
        except SpecFileError:
            pass


def test_digest_stability():
    d1 = serialize.canonical_digest(VALID_FAMILY)
    d2 = serialize.canonical_digest(copy.deepcopy(VALID_FAMILY))
    assert d1 == d2 and len(d1) == 12
