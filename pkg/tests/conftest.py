from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from frechetgraph.graph import Graph, GraphSample, complete_graph, empty_graph, num_pairs, path_graph


@pytest.fixture
def K3():
    return complete_graph(3)


@pytest.fixture
def E3():
    return empty_graph(3)


@pytest.fixture
def P3():
    return path_graph(3)


@st.composite
def graphs(draw, n=None, min_n=1, max_n=8):
    if n is None:
        n = draw(st.integers(min_n, max_n))
    bits = draw(st.integers(0, (1 << num_pairs(n)) - 1))
    return Graph(n, bits)


@st.composite
def samples(draw, min_n=1, max_n=5, min_N=1, max_N=9):
    n = draw(st.integers(min_n, max_n))
    N = draw(st.integers(min_N, max_N))
    return GraphSample([draw(graphs(n=n)) for _ in range(N)])


def random_graph(n: int, rng: np.random.Generator, p: float = 0.5) -> Graph:
    return Graph.from_bitarray(n, rng.random(num_pairs(n)) < p)
