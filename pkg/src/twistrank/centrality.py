"""Twisted endpoint-pair distributions and the centralities they induce.

The bivariate distribution assigns to every ordered node pair (u, w) the
total tilted mass of the walks that start at u and end at w; its start
marginal is the centrality score.  The assembly here runs directly over the
adjacency structure (edges plus wedges through each middle node), which is
algebraically the same endpoint grouping the path enumeration produces but
vectorized per node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EnumerationBudgetError, GraphError
from .graph import AttributedGraph, GraphStats, stats
from .sampling import DEFAULT_PATH_BUDGET, WalkConfig, path_count
from .twisting import (
    MinInnerProduct,
    SignMin,
    SignProduct,
    TwistConfig,
    solve_theta_closed,
    solve_theta_numeric,
)

CENTRALITY_KINDS = ("influence", "trust", "advertisement")


@dataclass(frozen=True, eq=False)
class BivariateDistribution:
    """Sparse probability mass over ordered node pairs.

    Only pairs connected by a walk of length 1 or 2 carry mass.  Pairs are
    stored as sorted ``u * n + w`` codes with aligned masses.
    """

    n: int
    codes: np.ndarray
    masses: np.ndarray

    def pair_mass(self, u: int, w: int) -> float:
        code = u * self.n + w
        i = int(np.searchsorted(self.codes, code))
        if i < self.codes.size and self.codes[i] == code:
            return float(self.masses[i])
        return 0.0

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def to_dict(self) -> dict[tuple[int, int], float]:
        return {
            (int(c) // self.n, int(c) % self.n): float(m)
            for c, m in zip(self.codes, self.masses)
        }

    def start_marginal(self) -> np.ndarray:
        return np.bincount(self.codes // self.n, weights=self.masses, minlength=self.n)

    def end_marginal(self) -> np.ndarray:
        return np.bincount(self.codes % self.n, weights=self.masses, minlength=self.n)


@dataclass(frozen=True, eq=False)
class CentralityRanking:
    """Normalized per-node scores plus a deterministic ranking order.

    Ties are broken by ascending node id, so repeated runs produce identical
    orders.
    """

    scores: np.ndarray
    order: np.ndarray

    @classmethod
    def from_scores(cls, scores) -> "CentralityRanking":
        scores = np.asarray(scores, dtype=float)
        order = np.lexsort((np.arange(scores.size), -scores))
        return cls(scores=scores, order=order)

    def top(self, k: int) -> list[int]:
        return [int(u) for u in self.order[: max(0, k)]]


def bivariate(
    g: AttributedGraph,
    cfg: TwistConfig,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> BivariateDistribution:
    """Tilted mass of every ordered node pair, assembled structurally.

    For each pair the mass is C * [exp(theta * f(u, w)) * beta1 / (2 m) when
    the edge exists, plus the sum over middle nodes v of
    exp(theta * f(u, v, w)) * beta2 / (2 m * deg(v))].  Exponents are shifted
    by their maximum before exponentiation, so the normalization survives
    large |theta|.
    """
    if g.m == 0:
        raise GraphError("cannot build a pair distribution on an edgeless graph")
    required = path_count(g, cfg.walk)
    if required > max_paths:
        raise EnumerationBudgetError(required, max_paths)
    theta = cfg.theta_vector()
    if theta.size != 1:
        raise ValueError("pair distributions are defined for scalar-temperature measures")
    th = float(theta[0])

    measure = cfg.measure
    if isinstance(measure, SignProduct):
        codes, exps, wts = _sign_terms(g, cfg.walk, th, np.multiply)
    elif isinstance(measure, SignMin):
        codes, exps, wts = _sign_terms(g, cfg.walk, th, np.minimum)
    elif isinstance(measure, MinInnerProduct):
        codes, exps, wts = _min_inner_terms(g, cfg.walk, th, measure)
    else:
        raise TypeError(
            f"no structural pair assembly for measure {type(measure).__name__}; "
            "group the twisted path masses by endpoints instead"
        )

    shift = exps.max()
    unnorm = np.exp(exps - shift) * wts
    total = unnorm.sum()
    uniq, inverse = np.unique(codes, return_inverse=True)
    masses = np.bincount(inverse, weights=unnorm, minlength=uniq.size) / total
    return BivariateDistribution(n=g.n, codes=uniq, masses=masses)


def _sign_terms(g, walk, theta, combine):
    n = g.n
    inv_2m = 1.0 / (2 * g.m)
    codes, exps, wts = [], [], []
    if walk.beta1 > 0:
        for u in range(n):
            nb = g.neighbors(u)
            if nb.size == 0:
                continue
            s = g.neighbor_signs(u).astype(float)
            codes.append(u * n + nb)
            exps.append(theta * s)
            wts.append(np.full(nb.size, walk.beta1 * inv_2m))
    if walk.beta2 > 0:
        for v in range(n):
            nb = g.neighbors(v)
            k = nb.size
            if k == 0:
                continue
            s = g.neighbor_signs(v).astype(float)
            codes.append((nb[:, None] * n + nb[None, :]).ravel())
            exps.append(theta * combine(s[:, None], s[None, :]).ravel())
            wts.append(np.full(k * k, walk.beta2 * inv_2m / k))
    return np.concatenate(codes), np.concatenate(exps), np.concatenate(wts)


def _min_inner_terms(g, walk, theta, measure):
    if g.attr_dim != measure.scores.size:
        raise GraphError(
            f"score vector has dimension {measure.scores.size} but node "
            f"attributes have dimension {g.attr_dim}"
        )
    n = g.n
    inv_2m = 1.0 / (2 * g.m)
    zh = g.node_attrs @ measure.scores
    codes, exps, wts = [], [], []
    if walk.beta1 > 0:
        for u in range(n):
            nb = g.neighbors(u)
            if nb.size == 0:
                continue
            codes.append(u * n + nb)
            exps.append(theta * np.minimum(zh[u], zh[nb]))
            wts.append(np.full(nb.size, walk.beta1 * inv_2m))
    if walk.beta2 > 0:
        for v in range(n):
            nb = g.neighbors(v)
            k = nb.size
            if k == 0:
                continue
            znb = zh[nb]
            pairf = np.minimum(np.minimum(znb[:, None], znb[None, :]), zh[v])
            codes.append((nb[:, None] * n + nb[None, :]).ravel())
            exps.append(theta * pairf.ravel())
            wts.append(np.full(k * k, walk.beta2 * inv_2m / k))
    return np.concatenate(codes), np.concatenate(exps), np.concatenate(wts)


def marginal(b: BivariateDistribution, side: str = "start") -> CentralityRanking:
    """Start or end marginal of a pair distribution, as a ranking.

    For the symmetric built-in measures the two sides coincide.
    """
    if side == "start":
        scores = b.start_marginal()
    elif side == "end":
        scores = b.end_marginal()
    else:
        raise ValueError(f"side must be 'start' or 'end', got {side!r}")
    return CentralityRanking.from_scores(scores)


def influence_closed_form(graph_stats: GraphStats, theta: float) -> CentralityRanking:
    """Single-step influence scores without any enumeration.

    When only length-1 walks are sampled, the sign-product tilt has the
    closed form score(u) = (k_u+ e^theta + k_u- e^-theta) /
    (2 (m+ e^theta + m- e^-theta)).  At theta = 0 this collapses to
    degree / (2 m).
    """
    if graph_stats.m == 0:
        raise GraphError("closed-form scores are undefined on an edgeless graph")
    # exp(theta) overflows past ~709; shifting by |theta| cancels in the ratio.
    ep = np.exp(theta - abs(theta))
    en = np.exp(-theta - abs(theta))
    denom = 2.0 * (graph_stats.m_pos * ep + graph_stats.m_neg * en)
    scores = (graph_stats.pos_degree * ep + graph_stats.neg_degree * en) / denom
    return CentralityRanking.from_scores(scores)


def resolve_theta(
    g: AttributedGraph,
    kind: str,
    *,
    theta: float | None = None,
    gamma: float | None = None,
    walk: WalkConfig | None = None,
    ad_vector=None,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> float:
    """Resolve the temperature for a centrality run.

    Exactly one of ``theta`` and ``gamma`` must be given.  A gamma target is
    inverted through the closed form when only length-1 walks are sampled
    with a sign measure, and numerically otherwise.
    """
    if (theta is None) == (gamma is None):
        raise ValueError("exactly one of theta and gamma must be given")
    if theta is not None:
        return float(theta)
    walk = walk or WalkConfig()
    measure = measure_for(kind, ad_vector)
    if walk.beta2 == 0 and isinstance(measure, (SignProduct, SignMin)):
        return solve_theta_closed(stats(g), float(gamma))
    solved = solve_theta_numeric(g, measure, walk, float(gamma), max_paths=max_paths)
    return float(solved)


def centrality(
    g: AttributedGraph,
    kind: str,
    *,
    theta: float | None = None,
    gamma: float | None = None,
    walk: WalkConfig | None = None,
    ad_vector=None,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> CentralityRanking:
    """Compute an influence, trust, or advertisement centrality ranking.

    Dispatches the path measure for ``kind``, resolves the temperature from
    ``theta`` or ``gamma``, builds the pair distribution, and returns its
    start marginal.
    """
    walk = walk or WalkConfig()
    resolved = resolve_theta(
        g, kind, theta=theta, gamma=gamma, walk=walk, ad_vector=ad_vector,
        max_paths=max_paths,
    )
    measure = measure_for(kind, ad_vector)
    b = bivariate(g, TwistConfig(measure=measure, theta=resolved, walk=walk), max_paths)
    return marginal(b, "start")


def measure_for(kind: str, ad_vector=None):
    """Path measure backing a centrality kind."""
    key = kind.lower()
    if key == "influence":
        return SignProduct()
    if key == "trust":
        return SignMin()
    if key in ("advertisement", "ad"):
        if ad_vector is None:
            raise ValueError("advertisement centrality requires a score vector")
        return MinInnerProduct(ad_vector)
    raise ValueError(f"unknown centrality kind {kind!r}; expected one of {CENTRALITY_KINDS}")
