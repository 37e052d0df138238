"""Shared fixtures: small canonical graphs and seeded random corpora."""

import itertools

import numpy as np
import pytest

import twistrank as tr


@pytest.fixture
def triangle_pos():
    """Triangle with all-positive edges."""
    return tr.load_graph([(0, 1, 1), (1, 2, 1), (0, 2, 1)])


@pytest.fixture
def triangle_one_neg():
    """Triangle with a single negative edge (0, 2)."""
    return tr.load_graph([(0, 1, 1), (1, 2, 1), (0, 2, -1)])


@pytest.fixture
def star_two_neg():
    """Star on 5 nodes, center 0, spokes to 1..4, two negative spokes."""
    return tr.load_graph([(0, 1, 1), (0, 2, 1), (0, 3, -1), (0, 4, -1)])


@pytest.fixture
def path3():
    """Path 0 - 1 - 2 with one positive and one negative edge."""
    return tr.load_graph([(0, 1, 1), (1, 2, -1)])


def random_signed_graph(rng, n_min=4, n_max=12, attr_dim=2, edge_prob=0.45, neg_prob=0.3):
    """A small random graph guaranteed to carry both edge signs."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        edges = []
        for u in range(n):
            for w in range(u + 1, n):
                if rng.random() < edge_prob:
                    sign = -1 if rng.random() < neg_prob else 1
                    edges.append((u, w, sign))
        signs = {s for _, _, s in edges}
        if len(edges) >= 3 and signs == {1, -1}:
            break
    attrs = None
    if attr_dim:
        attrs = [(u, rng.uniform(0.0, 1.0, attr_dim)) for u in range(n)]
    return tr.load_graph(edges, attrs)


def signed_corpus(count=100, attr_dim=2, seed0=1000):
    """Seeded corpus of (graph, advertisement vector) pairs."""
    out = []
    for i in range(count):
        rng = np.random.default_rng(seed0 + i)
        g = random_signed_graph(rng, attr_dim=attr_dim)
        z = rng.uniform(0.1, 1.0, attr_dim) if attr_dim else None
        out.append((g, z))
    return out


@pytest.fixture(scope="session")
def corpus100():
    return signed_corpus(100)


@pytest.fixture(scope="session")
def paper_scale_graph():
    """Synthetic graph matching the blog-network sign statistics.

    863 nodes; the lexicographically first 15225 node pairs are positive
    edges and the next 1425 are negative, for 16650 edges total.
    """
    pairs = itertools.islice(itertools.combinations(range(863), 2), 15225 + 1425)
    edges = [
        (u, w, 1 if i < 15225 else -1) for i, (u, w) in enumerate(pairs)
    ]
    return tr.load_graph(edges)


def endpoint_oracle(g, cfg, max_paths=tr.sampling.DEFAULT_PATH_BUDGET):
    """Brute-force pair masses: tilted enumeration grouped by endpoints."""
    _, dist = tr.twist(g, cfg, max_paths)
    grouped = {}
    for path, prob in dist:
        key = (path.nodes[0], path.nodes[-1])
        grouped[key] = grouped.get(key, 0.0) + prob
    return grouped


def max_pair_deviation(a, b):
    return max(
        (abs(a.get(key, 0.0) - b.get(key, 0.0)) for key in set(a) | set(b)),
        default=0.0,
    )
