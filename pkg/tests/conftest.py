import os

import pytest
from hypothesis import HealthCheck, settings

from consecwqo.core import make_structure
from consecwqo.kinds import Kind

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])

ALL_KINDS = [
    Kind.of("graph"),
    Kind.of("simple_graph"),
    Kind.of("digraph"),
    Kind.of("tournament"),
    Kind.of("relational", [1, 2]),
    Kind.of("word", alphabet="ab"),
    Kind.of("linear_order"),
    Kind.of("permutation"),
    Kind.of("equivalence"),
    Kind.of("poset"),
]
BOUNTIFUL_KINDS = ALL_KINDS[:5]


def kind_id(k):
    return k.name if k.name != "relational" else "relational" + "".join(map(str, k.arities))


@pytest.fixture(params=[False, True], ids=["numpy", "numba"])
def backend(request, monkeypatch):
    monkeypatch.setenv("CONSECWQO_DISABLE_NUMBA", "0" if request.param else "1")
    return request.param


WORDS = Kind.of("word", alphabet="ab")


def words(*ws):
    return [WORDS.word(w) for w in ws]


def digraph(n, edges):
    return make_structure(n, [edges], (2,))
settings.register_profile("thorough", max_examples=2000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_basis(k, rng, max_len=2, max_size=None):
    """A seeded random basis of members of length at most ``max_len``."""
    from consecwqo.kinds import enumerate_structures
    pool = [s for n in range(1, max_len + 1) for s in enumerate_structures(k, n)]
    size = rng.randint(0, len(pool) if max_size is None else min(max_size, len(pool)))
    return rng.sample(pool, size)
