from __future__ import annotations

import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from noness import Network, parse_enewick, random_tree_child

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def tree_child_networks(draw, min_leaves: int = 1, max_leaves: int = 8, max_reticulations: int = 5) -> Network:
    n = draw(st.integers(min_leaves, max_leaves))
    k = draw(st.integers(0, min(max_reticulations, max(n - 1, 0))))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tree_child(n, k, random.Random(seed))


def net(text: str) -> Network:
    return parse_enewick(text)
