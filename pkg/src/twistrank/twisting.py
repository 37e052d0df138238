"""Exponential change of measure over sampled paths.

Given a base path distribution p0 and a path measure f, the tilted
distribution p(r) = C * exp(theta . f(r)) * p0(r) is the closest
distribution to p0 in Kullback-Leibler divergence among those whose mean
path measure hits a prescribed target.  This module evaluates path
measures, computes the tilt in the log domain, exposes the free energy
F = log(1/C) and its gradient (the mean measure), and solves for the
temperature theta that achieves a target mean, either in closed form for
the single-step sign-product regime or numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import ConvergenceError, GraphError, SolveError
from .graph import AttributedGraph, GraphStats
from .sampling import DEFAULT_PATH_BUDGET, WalkConfig, WalkPath, enumerate_paths


class SignProduct:
    """Product of the edge signs along a path; always +1 or -1.

    A length-2 path through two negative edges evaluates to +1, which is the
    friend-of-friend / enemy-of-enemy propagation rule behind influence
    scoring.
    """

    dim = 1

    def evaluate(self, graph: AttributedGraph, nodes) -> float:
        value = 1
        for a, b in zip(nodes, nodes[1:]):
            value *= graph.sign(a, b)
        return float(value)


class SignMin:
    """Minimum edge sign along a path: -1 unless every traversed edge is positive.

    A path counts as fully trusted only when it is a chain of positive
    edges, so one negative edge poisons the whole walk.
    """

    dim = 1

    def evaluate(self, graph: AttributedGraph, nodes) -> float:
        return float(min(graph.sign(a, b) for a, b in zip(nodes, nodes[1:])))


class MinInnerProduct:
    """Minimum, over the path's nodes, of the inner product with a score vector.

    The score vector plays the role of an advertisement profile over topics;
    a walk is only as receptive as its least receptive node.
    """

    dim = 1

    def __init__(self, scores):
        self.scores = np.asarray(scores, dtype=float)
        if self.scores.ndim != 1 or self.scores.size == 0:
            raise ValueError("score vector must be a nonempty one-dimensional array")

    def evaluate(self, graph: AttributedGraph, nodes) -> float:
        attrs = graph.node_attrs
        if attrs.shape[1] != self.scores.size:
            raise GraphError(
                f"score vector has dimension {self.scores.size} but node "
                f"attributes have dimension {attrs.shape[1]}"
            )
        return float(min(attrs[u] @ self.scores for u in nodes))


@dataclass(frozen=True)
class TwistConfig:
    """One tilted sampled graph: a measure, a temperature, and a walk mix."""

    measure: object
    theta: float | np.ndarray
    walk: WalkConfig = field(default_factory=WalkConfig)

    def theta_vector(self) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if not np.all(np.isfinite(theta)):
            raise ValueError("theta must be finite")
        dim = getattr(self.measure, "dim", 1)
        if theta.size != dim:
            raise ValueError(f"theta has dimension {theta.size}, measure expects {dim}")
        return theta


@dataclass(frozen=True)
class TwistResult:
    """Normalization and summary statistics of one tilt.

    ``free_energy`` is log(1/C) = -log_c; ``mean_measure`` is the average
    path measure under the tilted distribution, which equals the gradient of
    the free energy in theta.
    """

    log_c: float
    free_energy: float
    mean_measure: float | np.ndarray


@dataclass(frozen=True)
class _PathTable:
    """Enumerated support with per-path measures and log base masses."""

    paths: tuple[WalkPath, ...]
    f: np.ndarray       # shape (N, dim)
    logp0: np.ndarray   # shape (N,)


def _build_table(g, measure, walk, max_paths) -> _PathTable:
    paths = tuple(enumerate_paths(g, walk, max_paths))
    dim = getattr(measure, "dim", 1)
    f = np.empty((len(paths), dim), dtype=float)
    logp0 = np.empty(len(paths), dtype=float)
    for i, p in enumerate(paths):
        f[i] = measure.evaluate(g, p.nodes)
        logp0[i] = math.log(p.base_prob)
    return _PathTable(paths=paths, f=f, logp0=logp0)


def _tilt(table: _PathTable, theta: np.ndarray) -> tuple[float, np.ndarray]:
    logw = table.f @ theta + table.logp0
    log_z = float(logsumexp(logw))
    return log_z, np.exp(logw - log_z)


def twist(
    g: AttributedGraph,
    cfg: TwistConfig,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> tuple[TwistResult, list[tuple[WalkPath, float]]]:
    """Tilt the base walk distribution by exp(theta . f).

    Returns the normalization summary and the per-path tilted masses, which
    sum to 1.  All accumulation happens in the log domain, so large
    |theta * f| values do not overflow.
    """
    theta = cfg.theta_vector()
    table = _build_table(g, cfg.measure, cfg.walk, max_paths)
    log_z, probs = _tilt(table, theta)
    mean = probs @ table.f
    result = TwistResult(
        log_c=-log_z,
        free_energy=log_z,
        mean_measure=float(mean[0]) if mean.size == 1 else mean,
    )
    return result, list(zip(table.paths, probs.tolist()))


def free_energy_gradient(
    g: AttributedGraph,
    cfg: TwistConfig,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> float | np.ndarray:
    """Mean path measure under the tilted distribution.

    This equals the gradient of the free energy at theta, so it is the
    quantity matched against a target mean when solving for theta.
    """
    theta = cfg.theta_vector()
    table = _build_table(g, cfg.measure, cfg.walk, max_paths)
    _, probs = _tilt(table, theta)
    mean = probs @ table.f
    return float(mean[0]) if mean.size == 1 else mean


def kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    """Kullback-Leibler divergence sum(p * log(p / q)) over a shared support."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    mask = p > 0
    return float(np.sum(p[mask] * (np.log(p[mask]) - np.log(q[mask]))))


def achievable_range(
    g: AttributedGraph,
    measure,
    walk: WalkConfig,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise (min, max) of the measure over the enumerated support.

    Any target mean strictly inside this box is achievable by some finite
    temperature; values on or outside the boundary are not.
    """
    table = _build_table(g, measure, walk, max_paths)
    return table.f.min(axis=0), table.f.max(axis=0)


def solve_theta_closed(graph_stats: GraphStats, gamma: float) -> float:
    """Closed-form temperature for the single-step sign-product regime.

    With only length-1 walks, the mean sign under the tilt is
    (m+ e^theta - m- e^-theta) / (m+ e^theta + m- e^-theta); inverting it
    gives theta = ln sqrt(m- (1 + gamma) / (m+ (1 - gamma))).  Requires both
    positive and negative edges, otherwise the mean sign is constant and no
    finite temperature exists.
    """
    if not -1.0 < gamma < 1.0:
        raise SolveError(f"target mean sign must lie strictly in (-1, 1), got {gamma}")
    if graph_stats.m_pos == 0 or graph_stats.m_neg == 0:
        raise SolveError(
            "closed-form temperature needs both positive and negative edges "
            f"(m+ = {graph_stats.m_pos}, m- = {graph_stats.m_neg})"
        )
    return 0.5 * math.log(
        graph_stats.m_neg * (1.0 + gamma) / (graph_stats.m_pos * (1.0 - gamma))
    )


def solve_theta_numeric(
    g: AttributedGraph,
    measure,
    walk: WalkConfig,
    gamma: float | np.ndarray,
    *,
    tol: float = 1e-11,
    max_iter: int = 200,
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> float | np.ndarray:
    """Solve grad F(theta) = gamma by Newton iteration on the mean measure.

    The Hessian of the free energy is the covariance of the measure under
    the tilt, so the scalar gradient is monotone and admits a bisection
    fallback; the vector case uses damped Newton steps.  The target must lie
    strictly inside the achievable range (see :func:`achievable_range`).
    Convergence is declared when the gradient matches gamma within ``tol``
    in the max norm, followed by one polishing step.
    """
    table = _build_table(g, measure, walk, max_paths)
    gamma_vec = np.atleast_1d(np.asarray(gamma, dtype=float))
    dim = table.f.shape[1]
    if gamma_vec.size != dim:
        raise SolveError(f"target has dimension {gamma_vec.size}, measure expects {dim}")
    fmin, fmax = table.f.min(axis=0), table.f.max(axis=0)
    degenerate = fmin == fmax
    if np.any(degenerate):
        comp = int(np.argmax(degenerate))
        raise SolveError(
            f"measure component {comp} is constant ({fmin[comp]}) on the support; "
            "the mean cannot be steered and the Hessian is singular"
        )
    if np.any(gamma_vec <= fmin) or np.any(gamma_vec >= fmax):
        raise SolveError(
            f"target mean {np.asarray(gamma)} is outside the achievable range "
            f"({fmin.tolist()}, {fmax.tolist()}) (open interval, componentwise)"
        )
    if dim == 1:
        theta = _solve_scalar(table, float(gamma_vec[0]), tol, max_iter)
        return theta
    return _solve_vector(table, gamma_vec, tol, max_iter)


def _scalar_grad_var(table: _PathTable, theta: float) -> tuple[float, float]:
    f = table.f[:, 0]
    logw = theta * f + table.logp0
    log_z = float(logsumexp(logw))
    p = np.exp(logw - log_z)
    grad = float(p @ f)
    var = float(p @ (f - grad) ** 2)
    return grad, var


def _solve_scalar(table: _PathTable, gamma: float, tol: float, max_iter: int) -> float:
    def residual(t: float) -> tuple[float, float]:
        grad, var = _scalar_grad_var(table, t)
        return grad - gamma, var

    theta = 0.0
    r, var = residual(theta)
    if abs(r) <= tol:
        return _polish_scalar(table, gamma, theta, r, var)

    # Bracket the root: the gradient is nondecreasing in theta.
    lo, hi = -1.0, 1.0
    r_lo, _ = residual(lo)
    while r_lo > 0.0:
        lo *= 2.0
        if lo < -1e6:
            raise ConvergenceError("failed to bracket the temperature from below", r_lo)
        r_lo, _ = residual(lo)
    r_hi, _ = residual(hi)
    while r_hi < 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise ConvergenceError("failed to bracket the temperature from above", r_hi)
        r_hi, _ = residual(hi)

    if r > 0.0:
        hi = min(hi, theta)
    else:
        lo = max(lo, theta)

    for _ in range(max_iter):
        candidate = theta - r / var if var > 0.0 else None
        if candidate is None or not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        theta = candidate
        r, var = residual(theta)
        if abs(r) <= tol:
            return _polish_scalar(table, gamma, theta, r, var)
        if r > 0.0:
            hi = theta
        else:
            lo = theta
        if hi - lo <= 1e-16 * max(1.0, abs(theta)):
            break
    if abs(r) <= tol:
        return _polish_scalar(table, gamma, theta, r, var)
    raise ConvergenceError("temperature solve did not converge", abs(r))


def _polish_scalar(table, gamma, theta, r, var) -> float:
    # One extra Newton step tightens the residual to machine precision,
    # which keeps theta accurate even where the gradient saturates.
    if var > 0.0 and r != 0.0:
        candidate = theta - r / var
        grad2, _ = _scalar_grad_var(table, candidate)
        if abs(grad2 - gamma) < abs(r):
            return candidate
    return theta


def _solve_vector(table: _PathTable, gamma: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    theta = np.zeros(gamma.size)

    def state(t: np.ndarray):
        _, p = _tilt(table, t)
        grad = p @ table.f
        centered = table.f - grad
        cov = centered.T @ (centered * p[:, None])
        return grad - gamma, cov

    r, cov = state(theta)
    norm = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        if norm <= tol:
            return _polish_vector(table, gamma, theta, r, cov, norm)
        try:
            step = np.linalg.solve(cov, -r)
        except np.linalg.LinAlgError:
            raise SolveError(
                "singular Hessian: the measure components are linearly "
                "dependent on the support"
            ) from None
        scale = 1.0
        while scale >= 2.0**-40:
            cand = theta + scale * step
            r_cand, cov_cand = state(cand)
            cand_norm = float(np.max(np.abs(r_cand)))
            if cand_norm < norm:
                theta, r, cov, norm = cand, r_cand, cov_cand, cand_norm
                break
            scale /= 2.0
        else:
            raise ConvergenceError("Newton step stalled before reaching tolerance", norm)
    if norm <= tol:
        return _polish_vector(table, gamma, theta, r, cov, norm)
    raise ConvergenceError("temperature solve did not converge", norm)


def _polish_vector(table, gamma, theta, r, cov, norm) -> np.ndarray:
    try:
        cand = theta + np.linalg.solve(cov, -r)
    except np.linalg.LinAlgError:
        return theta
    _, p = _tilt(table, cand)
    r2 = p @ table.f - gamma
    if float(np.max(np.abs(r2))) < norm:
        return cand
    return theta
