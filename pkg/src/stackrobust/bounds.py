"""Tail bounds on empirical distributions and the KL divergence they rest on.

Divergences are in nats and every exponential is base e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .exceptions import EmptyRegion, Infeasible
from .game import check_strategy, simplex_polytope
from .polytope import HPolytope, lp_solve
from .rng import stream

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class TailBound:
    value: float
    valid: bool
    condition: str

    def to_dict(self) -> dict:
        return {"value": self.value, "valid": self.valid, "condition": self.condition}


@dataclass(frozen=True, eq=False)
class SanovBound(TailBound):
    divergence: float = math.inf
    minimizer: np.ndarray | None = None

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["divergence"] = self.divergence
        out["minimizer"] = None if self.minimizer is None else self.minimizer.tolist()
        return out


def _clamp(v: float) -> float:
    return float(min(1.0, max(0.0, v)))


def kl_divergence(q, x) -> float:
    q = np.asarray(q, dtype=float)
    x = np.asarray(x, dtype=float)
    pos = q > 0
    if (x[pos] <= 0).any():
        return math.inf
    return float(np.sum(q[pos] * np.log(q[pos] / x[pos])))


def hoeffding_tail(N: int, gap: float) -> TailBound:
    if gap < 0:
        raise ValueError("gap must be non-negative")
    return TailBound(_clamp(math.exp(-2.0 * N * gap * gap)), True, "always")


def devroye_tail(N: int, delta: float, m: int) -> TailBound:
    """Bound on ``P(|empirical - x|_1 >= delta)`` after ``N`` draws on ``m`` outcomes."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    threshold = math.sqrt(20.0 * m / N)
    value = 3.0 * math.exp(-N * delta * delta / 25.0)
    return TailBound(_clamp(value), delta >= threshold, f"delta >= sqrt(20 m / N) = {threshold:.6g}")


def _full_constraints(region: HPolytope, m: int, off_support: np.ndarray):
    """Region rows rewritten over the full simplex vector ``q``.

    Returns ``(G, h)`` for ``G q <= h`` including non-negativity and the
    off-support zeros; the sum-to-one equality is handled separately.
    """
    lift = np.hstack([region.normals, np.zeros((len(region), 1))])
    rows = [lift, -np.eye(m)]
    offs = [region.offsets, np.zeros(m)]
    if off_support.size:
        rows.append(np.eye(m)[off_support])
        offs.append(np.zeros(off_support.size))
    return np.vstack(rows), np.concatenate(offs)


def _vertex(objective, G, h, m) -> np.ndarray:
    # Eliminate the last coordinate through the sum-to-one equality.
    red = HPolytope(G[:, :-1] - G[:, -1:], h - G[:, -1])
    y, _ = lp_solve(objective, red)
    return np.append(y, 1.0 - y.sum())


def sanov_region_bound(x, region: HPolytope, N: int, restarts: int = 20, seed: int = 0) -> SanovBound:
    """``(N+1)^m exp(-N inf KL(q || x))`` with the infimum over ``q`` in ``region``.

    ``region`` lives in reduced coordinates (all but the last weight).  The
    convex minimisation runs SLSQP from ``restarts`` feasible starts mixing
    the region's centroid with random vertices.
    """
    x = check_strategy(x)
    m = x.size
    if region.dim != m - 1:
        raise ValueError(f"region dimension {region.dim} does not match m - 1 = {m - 1}")
    condition = "always"
    feasible = region.intersect(simplex_polytope(m - 1))
    try:
        _vertex(np.zeros(m - 1), *_full_constraints(feasible, m, np.zeros(0, dtype=int)), m)
    except Infeasible:
        raise EmptyRegion("region does not meet the simplex") from None
    G, h = _full_constraints(feasible, m, np.flatnonzero(x <= 0))

    rng = stream(seed, 0)
    try:
        vertices = [_vertex(rng.standard_normal(m - 1), G, h, m) for _ in range(max(restarts, 1))]
    except Infeasible:
        # Every point of the region charges an outcome that x never produces.
        return SanovBound(0.0, True, condition, math.inf, None)
    centre = np.mean(vertices, axis=0)

    support = x > 0
    logx = np.log(np.where(support, x, 1.0))

    def objective(q):
        qs = np.maximum(q[support], 0.0)
        return float(np.sum(np.where(qs > 0, qs * (np.log(np.maximum(qs, _LOG_FLOOR)) - logx[support]), 0.0)))

    def gradient(q):
        g = np.zeros(m)
        g[support] = np.log(np.maximum(q[support], 1e-15)) - logx[support] + 1.0
        return g

    cons = [
        {"type": "ineq", "fun": lambda q: h - G @ q, "jac": lambda q: -G},
        {"type": "eq", "fun": lambda q: np.array([q.sum() - 1.0]), "jac": lambda q: np.ones((1, m))},
    ]
    feasible_tol = 1e-8 * (1.0 + np.abs(h))
    best_q, best_val = centre, objective(centre)
    for v in vertices:
        weight = rng.uniform()
        start = weight * centre + (1.0 - weight) * v
        for cand in (start, v):
            val = objective(cand)
            if val < best_val and (G @ cand <= h + feasible_tol).all():
                best_q, best_val = cand, val
        res = minimize(objective, start, jac=gradient, constraints=cons, method="SLSQP",
                       options={"ftol": 1e-15, "maxiter": 500})
        q = res.x
        if (G @ q <= h + feasible_tol).all() and abs(q.sum() - 1.0) <= 1e-8:
            val = objective(q)
            if val < best_val:
                best_q, best_val = q, val

    divergence = max(best_val, 0.0)
    log_value = m * math.log(N + 1.0) - N * divergence
    value = 1.0 if log_value >= 0 else math.exp(log_value)
    return SanovBound(_clamp(value), True, condition, divergence, np.asarray(best_q, dtype=float))
