"""Base (untwisted) path-sampling distributions.

Three samplers are provided: uniform selection of a directed edge, an
ergodic Markov chain (PageRank-style) over node sequences, and the short
random walk that picks a start node proportionally to degree and then walks
one or two steps.  The short walk is the distribution the centralities are
built on; exhaustive enumeration of its support doubles as the oracle
substrate for every twisted quantity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConvergenceError, EnumerationBudgetError, GraphError
from .graph import AttributedGraph

DEFAULT_PATH_BUDGET = 20_000_000


@dataclass(frozen=True)
class WalkPath:
    """A concrete walk of length 1 or 2 with its base probability mass."""

    nodes: tuple[int, ...]
    base_prob: float

    def reversed(self) -> "WalkPath":
        return WalkPath(self.nodes[::-1], self.base_prob)


@dataclass(frozen=True)
class WalkConfig:
    """Mixing weights of the short random walk.

    ``beta1`` is the probability of walking one step, ``beta2`` of walking
    two; they must be nonnegative and sum to 1.
    """

    beta1: float = 1.0
    beta2: float = 0.0

    def __post_init__(self):
        if self.beta1 < 0 or self.beta2 < 0:
            raise ValueError("beta1 and beta2 must be nonnegative")
        if abs(self.beta1 + self.beta2 - 1.0) > 1e-12:
            raise ValueError(
                f"beta1 + beta2 must equal 1, got {self.beta1} + {self.beta2}"
            )


@dataclass(frozen=True)
class PageRankConfig:
    """Power-iteration settings for the teleporting random surfer."""

    damping: float = 0.85
    tolerance: float = 1e-10
    max_iters: int = 10_000

    def __post_init__(self):
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must lie in [0, 1)")


def uniform_edge_prob(g: AttributedGraph, r: WalkPath | Sequence[int]) -> float:
    """Probability of a length-1 path under uniform directed-edge sampling.

    The symmetrized graph has ``2 m`` directed edges, so every present edge
    has mass ``1 / (2 m)``; absent pairs have mass 0.
    """
    nodes = _nodes_of(r)
    if len(nodes) != 2:
        raise ValueError("uniform edge sampling is defined for length-1 paths only")
    u, w = nodes
    if g.m == 0 or u == w or not g.has_edge(u, w):
        return 0.0
    return 1.0 / (2 * g.m)


def pagerank_stationary(g: AttributedGraph, cfg: PageRankConfig = PageRankConfig()) -> np.ndarray:
    """Stationary distribution of the teleporting walk, by power iteration.

    Solves pi[u] = (1 - damping)/n + damping * sum_w A[w, u]/deg(w) * pi[w]
    to within ``cfg.tolerance`` (max-norm residual of one more iteration).
    Nodes of degree 0 are a hard error when ``damping > 0``, since the
    transition kernel divides by the out-degree.
    """
    n = g.n
    if n == 0:
        raise GraphError("empty graph has no stationary distribution")
    if n == 1:
        return np.ones(1)
    if cfg.damping == 0.0:
        return np.full(n, 1.0 / n)
    degrees = np.array([g.degree(u) for u in range(n)], dtype=float)
    if np.any(degrees == 0):
        bad = int(np.argmin(degrees))
        raise GraphError(
            f"node {bad} has degree 0; the transition kernel is undefined for damping > 0"
        )
    flat = np.concatenate([g.neighbors(u) for u in range(n)])
    offsets = np.zeros(n, dtype=np.int64)
    np.cumsum(degrees[:-1].astype(np.int64), out=offsets[1:])

    x = np.full(n, 1.0 / n)
    base = (1.0 - cfg.damping) / n
    for _ in range(cfg.max_iters):
        contrib = (x / degrees)[flat]
        x_new = base + cfg.damping * np.add.reduceat(contrib, offsets)
        residual = float(np.max(np.abs(x_new - x)))
        x = x_new
        if residual <= cfg.tolerance:
            return x
    raise ConvergenceError(
        f"power iteration did not converge in {cfg.max_iters} iterations", residual
    )


def transition_matrix(g: AttributedGraph, damping: float) -> np.ndarray:
    """Dense row-stochastic transition matrix of the teleporting walk.

    Intended for small graphs (direct solves, oracles); the power iteration
    above never materializes it.
    """
    n = g.n
    P = np.full((n, n), (1.0 - damping) / n)
    for u in range(n):
        nb = g.neighbors(u)
        if nb.size:
            P[u, nb] += damping / nb.size
        elif damping > 0:
            raise GraphError(f"node {u} has degree 0; transition row is undefined")
    return P


def markov_path_prob(
    pi: np.ndarray,
    transitions: np.ndarray,
    r: Sequence[int],
    *,
    row_sum_tol: float = 1e-9,
) -> float:
    """Probability that a stationary chain traverses the node sequence ``r``.

    Equals ``pi[r[0]]`` times the product of the step transition
    probabilities.  A zero-probability step yields 0, not an error.  For a
    reversible chain this is invariant under reversing ``r``.
    """
    pi = np.asarray(pi, dtype=float)
    transitions = np.asarray(transitions, dtype=float)
    bad = np.max(np.abs(transitions.sum(axis=1) - 1.0))
    if bad > row_sum_tol:
        raise ValueError(f"transition rows must sum to 1 (max deviation {bad:.3e})")
    nodes = _nodes_of(r)
    if len(nodes) == 0:
        raise ValueError("path must contain at least one node")
    prob = float(pi[nodes[0]])
    for a, b in zip(nodes, nodes[1:]):
        prob *= float(transitions[a, b])
        if prob == 0.0:
            return 0.0
    return prob


def base_walk_prob(g: AttributedGraph, cfg: WalkConfig, r: WalkPath | Sequence[int]) -> float:
    """Mass of a length-1 or length-2 path under the short random walk.

    Length 1: beta1 / (2 m) if the edge exists.  Length 2: beta2 / (2 m)
    divided by the degree of the middle node, if both edges exist.  The
    formula is symmetric under path reversal.
    """
    nodes = _nodes_of(r)
    if len(nodes) == 2:
        u1, u2 = nodes
        if g.m == 0 or u1 == u2 or not g.has_edge(u1, u2):
            return 0.0
        return cfg.beta1 / (2 * g.m)
    if len(nodes) == 3:
        u1, u2, u3 = nodes
        if g.m == 0 or u1 == u2 or u2 == u3:
            return 0.0
        if not (g.has_edge(u1, u2) and g.has_edge(u2, u3)):
            return 0.0
        return cfg.beta2 / (2 * g.m * g.degree(u2))
    raise ValueError(f"walk paths have 2 or 3 nodes, got {len(nodes)}")


def path_count(g: AttributedGraph, cfg: WalkConfig) -> int:
    """Number of paths :func:`enumerate_paths` would yield."""
    count = 0
    if cfg.beta1 > 0:
        count += 2 * g.m
    if cfg.beta2 > 0:
        count += sum(g.degree(u) ** 2 for u in range(g.n))
    return count


def enumerate_paths(
    g: AttributedGraph,
    cfg: WalkConfig,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> Iterator[WalkPath]:
    """Yield every ordered walk of positive mass exactly once.

    Length-1 paths are the ``2 m`` directed edges (emitted when
    ``beta1 > 0``); length-2 paths run over every ordered neighbor pair of
    every middle node, backtracking included (emitted when ``beta2 > 0``).
    The emitted masses sum to 1.  Raises before yielding anything if the
    enumeration would exceed ``max_paths``.
    """
    if g.m == 0:
        raise GraphError("cannot enumerate paths of an edgeless graph")
    required = path_count(g, cfg)
    if required > max_paths:
        raise EnumerationBudgetError(required, max_paths)
    return _iter_paths(g, cfg)


def _iter_paths(g: AttributedGraph, cfg: WalkConfig) -> Iterator[WalkPath]:
    two_m = 2 * g.m
    if cfg.beta1 > 0:
        p1 = cfg.beta1 / two_m
        for u in range(g.n):
            for w in g.neighbors(u):
                yield WalkPath((u, int(w)), p1)
    if cfg.beta2 > 0:
        for v in range(g.n):
            nb = g.neighbors(v)
            if nb.size == 0:
                continue
            p2 = cfg.beta2 / (two_m * nb.size)
            for u in nb:
                for w in nb:
                    yield WalkPath((int(u), v, int(w)), p2)


def _nodes_of(r: WalkPath | Sequence[int] | Iterable[int]) -> tuple[int, ...]:
    if isinstance(r, WalkPath):
        return r.nodes
    return tuple(int(x) for x in r)
