"""Commitments that stay optimal when the follower only sees samples.

Starting from the Stackelberg vertex ``y*`` (reduced coordinates), the
commitment moves along a direction ``d`` on which every tight row loosens
at unit rate, so after a step ``delta`` each active slack equals ``delta``.
The step shrinks with ``N`` so the payoff loss vanishes while the chance
of the follower misreading the commitment decays exponentially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateVertex, EmptyActiveSet, InvalidExponent, NullspaceEscape, OutOfRange
from .game import NormalFormGame, from_reduced, payoff_extremes
from .observation import _check_N
from .polytope import HPolytope
from .stackelberg import StackelbergSolution, solve_stackelberg

DEFAULT_P = 0.25
_RESIDUAL_TOL = 1e-8
_GLOB_SHRINK = 0.99
_FALLBACK_FACTOR = 0.5


@dataclass(frozen=True, eq=False)
class RobustCommitment:
    commitment: np.ndarray
    delta: float
    direction: np.ndarray
    l1_step: float
    delta_glob: float
    delta_z: float
    epsilon: float
    epsilon_valid: bool
    p_exponent: float
    N: int
    stackelberg: StackelbergSolution
    gap_bound: float
    status: str = "ok"

    def to_dict(self) -> dict:
        return {
            "commitment": self.commitment.tolist(),
            "delta": self.delta,
            "direction": self.direction.tolist(),
            "l1_step": self.l1_step,
            "delta_glob": self.delta_glob,
            "delta_Z": self.delta_z,
            "epsilon": self.epsilon,
            "epsilon_valid": self.epsilon_valid,
            "p_exponent": self.p_exponent,
            "N": self.N,
            "response": self.stackelberg.response,
            "stackelberg_commitment": self.stackelberg.commitment.tolist(),
            "stackelberg_value": self.stackelberg.value,
            "gap_bound": self.gap_bound,
            "status": self.status,
        }


def deviation_direction(B_act) -> np.ndarray:
    """Minimum-norm ``d`` with ``B_act @ d = -1``.

    Raises :class:`DegenerateVertex` when the system is inconsistent.
    """
    B = np.atleast_2d(np.asarray(B_act, dtype=float))
    if B.shape[0] == 0:
        raise EmptyActiveSet("no active rows to retreat from")
    target = -np.ones(B.shape[0])
    d = np.linalg.lstsq(B, target, rcond=None)[0]
    residual = np.abs(B @ d - target).max()
    if residual > _RESIDUAL_TOL:
        raise DegenerateVertex(f"active rows admit no uniform retreat (residual {residual:.3g})")
    return d


def commit_at_delta(y_star, d, delta: float, delta_glob: float | None = None) -> np.ndarray:
    if delta < 0 or (delta_glob is not None and delta > delta_glob + 1e-12):
        raise OutOfRange(f"step {delta!r} outside [0, {delta_glob!r}]")
    return np.asarray(y_star, dtype=float) + delta * np.asarray(d, dtype=float)


def _inactive(region: HPolytope, active_rows) -> np.ndarray:
    mask = np.ones(len(region), dtype=bool)
    mask[list(active_rows)] = False
    return np.flatnonzero(mask)


def max_feasible_delta(region: HPolytope, y_star, d, active_rows=()) -> float:
    """Largest step along ``d`` that stays inside ``region``.

    Rows listed in ``active_rows`` are skipped; with no ascending row the
    step is capped at 1.
    """
    rows = _inactive(region, active_rows)
    rate = region.normals[rows] @ d
    slack = region.slacks(y_star)[rows]
    up = rate > 0
    if not up.any():
        return 1.0
    return float(max((np.maximum(slack[up], 0.0) / rate[up]).min(), 0.0))


def compute_z(region: HPolytope, B_act, y_star, d, delta_glob: float, active_rows=()) -> float:
    """Largest step whose ellipsoid ``{z : |B_act (z - y)| <= delta}`` fits in the region.

    The support of that set along a row ``r`` is ``delta * |pinv(B_act).T @ r|``
    when ``r`` lies in the row space of ``B_act``; anything else makes the set
    unbounded in that direction and raises :class:`NullspaceEscape`.
    """
    B = np.atleast_2d(np.asarray(B_act, dtype=float))
    pinv = np.linalg.pinv(B)
    rows = _inactive(region, active_rows)
    R = region.normals[rows]
    outside = R - R @ (pinv @ B)  # residual after projecting onto the row space
    norms = np.linalg.norm(R, axis=1)
    if (np.linalg.norm(outside, axis=1) > 1e-8 * np.maximum(norms, 1e-300)).any():
        raise NullspaceEscape("a region row leaves the row space of the active rows")
    spread = np.linalg.norm(R @ pinv, axis=1)
    rate = R @ d + spread
    slack = region.slacks(y_star)[rows]
    limit = rate > 0
    if not limit.any():
        return float(delta_glob)
    return float(min(max((np.maximum(slack[limit], 0.0) / rate[limit]).min(), 0.0), delta_glob))


def _check_p(p: float) -> float:
    if not 0.0 < p < 0.5:
        raise InvalidExponent(f"exponent must lie in (0, 1/2), got {p!r}")
    return float(p)


def delta_schedule(N: int, p: float, delta_z: float, delta_glob: float, m: int) -> float:
    N = _check_N(N)
    p = _check_p(p)
    shrink = (m / N) ** p
    base = delta_z if delta_z > 0 else _FALLBACK_FACTOR * delta_glob
    return float(min(base * shrink, _GLOB_SHRINK * delta_glob))


def response_preservation_bound(B_act, delta: float, N: int, m: int) -> tuple[float, bool]:
    """Certificate on the chance the sampled best response differs from the target one."""
    if delta <= 0:
        return 1.0, False
    sigma = float(np.linalg.norm(np.atleast_2d(np.asarray(B_act, dtype=float)), 2))
    eps = min(1.0, 3.0 * np.exp(-N * delta**2 / (25.0 * sigma**2)))
    return float(eps), bool(N >= 20.0 * m * sigma**2 / delta**2)


def payoff_gap_bound(game: NormalFormGame, l1_step: float, eps: float, f_star: float) -> float:
    f_min, f_max = payoff_extremes(game)
    return float(2.0 * (1.0 - eps) * f_max * l1_step + eps * (f_star - f_min))


def _make(game, solution, N, p, **fields) -> RobustCommitment:
    gap = payoff_gap_bound(game, fields["l1_step"], fields["epsilon"], solution.value)
    return RobustCommitment(stackelberg=solution, N=N, p_exponent=p, gap_bound=gap, **fields)


def _unmoved(game, solution, N, p, status, eps, valid) -> RobustCommitment:
    dim = max(game.m - 1, 0)
    return _make(
        game,
        solution,
        N,
        p,
        commitment=solution.commitment.copy(),
        delta=0.0,
        direction=np.zeros(dim),
        l1_step=0.0,
        delta_glob=0.0,
        delta_z=0.0,
        epsilon=eps,
        epsilon_valid=valid,
        status=status,
    )


def build_robust_commitment(
    game: NormalFormGame,
    N: int,
    p: float = DEFAULT_P,
    solution: StackelbergSolution | None = None,
) -> RobustCommitment:
    """Retreat from the Stackelberg vertex by the ``N``-dependent step.

    Pure Stackelberg commitments are returned unchanged: samples of a pure
    strategy reveal it exactly.  Vertices with no usable retreat direction
    are also returned unchanged, with an explanatory ``status``.
    """
    N = _check_N(N)
    p = _check_p(p)
    if solution is None:
        solution = solve_stackelberg(game)
    if solution.is_pure or game.m == 1:
        return _unmoved(game, solution, N, p, "pure", 0.0, True)
    if not solution.active_rows:
        return _unmoved(game, solution, N, p, "empty_active_set", 1.0, False)

    region = solution.region
    B_act = solution.active_normals
    y_star = solution.reduced_commitment
    try:
        d = deviation_direction(B_act)
    except DegenerateVertex:
        return _unmoved(game, solution, N, p, "degenerate_vertex", 1.0, False)

    delta_glob = max_feasible_delta(region, y_star, d, solution.active_rows)
    status = "ok"
    try:
        delta_z = compute_z(region, B_act, y_star, d, delta_glob, solution.active_rows)
    except NullspaceEscape:
        delta_z, status = 0.0, "nullspace_escape"
    delta = delta_schedule(N, p, delta_z, delta_glob, game.m)
    y = commit_at_delta(y_star, d, delta, delta_glob)
    eps, valid = response_preservation_bound(B_act, delta, N, game.m)
    valid = valid and status == "ok" and 0.0 < delta <= delta_z
    return _make(
        game,
        solution,
        N,
        p,
        commitment=from_reduced(y),
        delta=delta,
        direction=d,
        l1_step=float(np.abs(y - y_star).sum()),
        delta_glob=delta_glob,
        delta_z=delta_z,
        epsilon=eps,
        epsilon_valid=valid,
        status=status,
    )
