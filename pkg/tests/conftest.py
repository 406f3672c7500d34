import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pantsfn.families import chain_graph, genus_two_graph, one_holed_torus_graph, random_surface, tree_graph
from pantsfn.pants_surface import build_base

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_GRAPHS = {
    "genus2": genus_two_graph(),
    "torus": one_holed_torus_graph(),
    "chain3": chain_graph(3),
    "tree4": tree_graph(4),
}

lengths = st.floats(min_value=1e-3, max_value=3.0)
log_lengths = st.floats(min_value=math.log(1e-3), max_value=math.log(3.0)).map(math.exp)
twists = st.floats(min_value=-5.0, max_value=5.0)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
graph_names = st.sampled_from(sorted(SMALL_GRAPHS))


def surface_from(name, seed, lo=1e-3, hi=1.0):
    return random_surface(SMALL_GRAPHS[name], lo, hi, np.random.default_rng(seed))


@pytest.fixture
def genus2():
    return build_base(genus_two_graph(), [2.0, 2.0, 2.0], 2.0)


@pytest.fixture
def chain4():
    g = chain_graph(4)
    return build_base(g, [1.0] * len(g.cuffs), 1.0)
