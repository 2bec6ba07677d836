"""Optimal commitment under exact observation.

One LP per follower response: maximise the leader's payoff over the closed
region where that response is a follower best response, then keep the best
region.  The optimum sits at a vertex of its region; the rows tight there
are the local constraints the robust construction retreats from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import EmptyActiveSet, Infeasible, NoFeasibleResponse
from .game import (
    NormalFormGame,
    best_response_region,
    follower_best_set,
    from_reduced,
    ideal_payoff,
    reduce_game,
    to_reduced,
)
from .polytope import HPolytope, lp_solve


def default_act_tol(game: NormalFormGame) -> float:
    return 1e-7 * (1.0 + np.abs(game.follower_payoffs).max())


@dataclass(frozen=True, eq=False)
class StackelbergSolution:
    commitment: np.ndarray
    response: int
    value: float
    region: HPolytope | None = None
    active_rows: tuple[int, ...] = ()

    @property
    def reduced_commitment(self) -> np.ndarray:
        return to_reduced(self.commitment)

    @property
    def active_normals(self) -> np.ndarray:
        if self.region is None:
            return np.zeros((0, 0))
        return self.region.normals[list(self.active_rows)].reshape(len(self.active_rows), self.region.dim)

    @property
    def active_offsets(self) -> np.ndarray:
        if self.region is None:
            return np.zeros(0)
        return self.region.offsets[list(self.active_rows)]

    @property
    def is_pure(self) -> bool:
        return bool(np.isclose(self.commitment.max(), 1.0, rtol=0.0, atol=1e-9))

    def to_dict(self) -> dict:
        labels = [self.region.labels[i] for i in self.active_rows] if self.region is not None else []
        return {
            "commitment": self.commitment.tolist(),
            "response": self.response,
            "value": self.value,
            "active_rows": labels,
        }


def solve_region_lp(game: NormalFormGame, j: int, region: HPolytope | None = None):
    """Best leader payoff over the closure of response ``j``'s region.

    Returns ``(x, value)`` with ``x`` a full simplex point, or ``None`` when
    the region is empty.
    """
    if region is None:
        region = best_response_region(game, j)
    red = reduce_game(game)
    try:
        y, value = lp_solve(red.leader_dirs[:, j], region)
    except Infeasible:
        return None
    return from_reduced(y), value + float(red.leader_offsets[j])


def active_constraints(region: HPolytope, y, act_tol: float) -> np.ndarray:
    """Indices of region rows tight at ``y``.

    Raises :class:`EmptyActiveSet` if ``y`` is strictly interior.
    """
    gap = np.abs(region.normals @ np.asarray(y, dtype=float) - region.offsets)
    rows = np.flatnonzero(gap <= act_tol * (1.0 + np.abs(region.offsets)))
    if rows.size == 0:
        raise EmptyActiveSet("no constraint is tight at the given point")
    return rows


def solve_stackelberg(game: NormalFormGame, act_tol: float | None = None) -> StackelbergSolution:
    if game.m == 1:
        x = np.ones(1)
        j = follower_best_set(game, x).leader_favored
        return StackelbergSolution(x, j, float(game.leader_payoffs[0, j]))

    best = None
    for j in range(game.n):
        region = best_response_region(game, j)
        found = solve_region_lp(game, j, region)
        if found is None:
            continue
        x, value = found
        if best is None or value > best[2] + 1e-9 * (1.0 + abs(best[2])):
            best = (j, x, value, region)
    if best is None:
        raise NoFeasibleResponse("no follower response has a non-empty region")

    j, x, value, region = best
    tol = default_act_tol(game) if act_tol is None else act_tol
    try:
        rows = active_constraints(region, to_reduced(x), tol)
    except EmptyActiveSet:
        rows = np.zeros(0, dtype=int)
    return StackelbergSolution(
        commitment=x,
        response=j,
        value=value,
        region=region,
        active_rows=tuple(int(r) for r in rows),
    )


def commitment_advantage_floor(game: NormalFormGame) -> float:
    """Best payoff the leader gets from committing to a pure strategy."""
    return max(ideal_payoff(game, np.eye(game.m)[i]) for i in range(game.m))
