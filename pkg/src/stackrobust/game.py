"""Normal-form leader/follower games and follower best-response logic.

Conventions
-----------
Payoff matrices are indexed ``A[i, j]``: ``i`` is the leader's pure strategy
(row), ``j`` the follower's pure response (column).  Response indices are
0-based throughout the package.

Reduced coordinates drop the last leader strategy: a mixed strategy
``x`` in the m-simplex is represented by ``y = x[:m-1]``, which ranges over
``{y >= 0, sum(y) <= 1}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DimensionTooSmall, GameError, GameLoadError, InvalidStrategy
from .polytope import HPolytope

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class NormalFormGame:
    """Finite two-player game given by leader and follower payoff matrices."""

    leader_payoffs: np.ndarray
    follower_payoffs: np.ndarray
    name: str = "game"

    def __post_init__(self):
        A = np.array(self.leader_payoffs, dtype=float)
        B = np.array(self.follower_payoffs, dtype=float)
        if A.ndim != 2 or B.ndim != 2:
            raise GameError("payoff matrices must be two-dimensional")
        if A.shape != B.shape:
            raise GameError(f"payoff shapes differ: {A.shape} vs {B.shape}")
        if A.shape[0] < 1 or A.shape[1] < 1:
            raise GameError("a game needs at least one strategy per player")
        if not (np.isfinite(A).all() and np.isfinite(B).all()):
            raise GameError("payoffs must be finite")
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "leader_payoffs", A)
        object.__setattr__(self, "follower_payoffs", B)

    @property
    def m(self) -> int:
        return self.leader_payoffs.shape[0]

    @property
    def n(self) -> int:
        return self.leader_payoffs.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.leader_payoffs.shape

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "leader_payoffs": self.leader_payoffs.tolist(),
            "follower_payoffs": self.follower_payoffs.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> NormalFormGame:
        try:
            return cls(
                leader_payoffs=data["leader_payoffs"],
                follower_payoffs=data["follower_payoffs"],
                name=str(data.get("name", "game")),
            )
        except KeyError as exc:
            raise GameLoadError(f"missing field {exc.args[0]!r}") from exc
        except (TypeError, ValueError) as exc:
            if isinstance(exc, GameError):
                raise GameLoadError(str(exc)) from exc
            raise GameLoadError(f"invalid payoff data: {exc}") from exc

    def __eq__(self, other):
        if not isinstance(other, NormalFormGame):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.leader_payoffs, other.leader_payoffs)
            and np.array_equal(self.follower_payoffs, other.follower_payoffs)
        )

    __hash__ = None


def load_game(path) -> NormalFormGame:
    """Read a game from the JSON file format."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise GameLoadError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GameLoadError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise GameLoadError(f"{path}: expected a JSON object")
    return NormalFormGame.from_dict(data)


def save_game(game: NormalFormGame, path) -> None:
    Path(path).write_text(json.dumps(game.to_dict(), indent=2) + "\n")


def check_strategy(x, m: int | None = None, tol: float = SIMPLEX_TOL) -> np.ndarray:
    """Validate a point of the simplex and return a clean float copy.

    Entries may undershoot zero and the sum may miss one by ``tol``; the
    result is clamped to [0, 1] and renormalised.
    """
    x = np.array(x, dtype=float).ravel()
    if m is not None and x.shape[0] != m:
        raise InvalidStrategy(f"expected {m} weights, got {x.shape[0]}")
    if x.size == 0 or not np.isfinite(x).all():
        raise InvalidStrategy("weights must be finite and non-empty")
    if x.min() < -tol or abs(x.sum() - 1.0) > tol:
        raise InvalidStrategy(f"not a probability vector: {x}")
    x = np.clip(x, 0.0, 1.0)
    return x / x.sum()


def as_mixed(game: NormalFormGame, x) -> np.ndarray:
    """Accept either a full m-vector or, for 2 x n games, the scalar p."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 and game.m == 2:
        arr = np.array([float(arr), 1.0 - float(arr)])
    return check_strategy(arr, game.m)


def default_tie_tol(game: NormalFormGame) -> float:
    return 1e-9 * (1.0 + np.abs(game.follower_payoffs).max())


def _leader_tie_tol(game: NormalFormGame) -> float:
    return 1e-9 * (1.0 + np.abs(game.leader_payoffs).max())


@dataclass(frozen=True)
class BestResponseSet:
    best: tuple[int, ...]
    leader_favored: int

    @property
    def alternates(self) -> tuple[int, ...]:
        return tuple(j for j in self.best if j != self.leader_favored)


def leader_favored_responses(game: NormalFormGame, X, tie_tol: float | None = None) -> np.ndarray:
    """Leader-favoured best response for each row of ``X``.

    ``X`` is a (k, m) array of simplex points.  Among the follower's
    best responses (within ``tie_tol``) the one with the highest leader
    payoff wins; remaining ties go to the lowest index.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    tol = default_tie_tol(game) if tie_tol is None else tie_tol
    follower = X @ game.follower_payoffs
    best = follower >= follower.max(axis=1, keepdims=True) - tol
    leader = np.where(best, X @ game.leader_payoffs, -np.inf)
    ltol = _leader_tie_tol(game)
    top = leader >= leader.max(axis=1, keepdims=True) - ltol
    return np.argmax(top, axis=1)


def follower_best_set(game: NormalFormGame, x, tie_tol: float | None = None) -> BestResponseSet:
    x = as_mixed(game, x)
    tol = default_tie_tol(game) if tie_tol is None else tie_tol
    follower = x @ game.follower_payoffs
    best = np.flatnonzero(follower >= follower.max() - tol)
    favored = int(leader_favored_responses(game, x[None, :], tol)[0])
    return BestResponseSet(best=tuple(int(j) for j in best), leader_favored=favored)


def ideal_payoff(game: NormalFormGame, x) -> float:
    """Leader payoff when the follower sees ``x`` exactly."""
    x = as_mixed(game, x)
    j = follower_best_set(game, x).leader_favored
    return float(x @ game.leader_payoffs[:, j])


def payoff_extremes(game: NormalFormGame) -> tuple[float, float]:
    """Return ``(f_min, f_max)``, the extreme entries of the leader matrix."""
    A = game.leader_payoffs
    return float(A.min()), float(A.max())


@dataclass(frozen=True)
class ReducedGame:
    """Affine payoff representation over reduced coordinates.

    Column ``j`` satisfies ``y @ leader_dirs[:, j] + leader_offsets[j] ==
    x @ A[:, j]`` for ``y = x[:-1]``; likewise for the follower.
    """

    leader_dirs: np.ndarray
    leader_offsets: np.ndarray
    follower_dirs: np.ndarray
    follower_offsets: np.ndarray


def reduce_game(game: NormalFormGame) -> ReducedGame:
    if game.m < 2:
        raise DimensionTooSmall("reduced coordinates need at least two leader strategies")
    A, B = game.leader_payoffs, game.follower_payoffs
    return ReducedGame(
        leader_dirs=A[:-1] - A[-1],
        leader_offsets=A[-1].copy(),
        follower_dirs=B[:-1] - B[-1],
        follower_offsets=B[-1].copy(),
    )


def to_reduced(x) -> np.ndarray:
    return np.asarray(x, dtype=float)[:-1].copy()


def from_reduced(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    x = np.append(y, 1.0 - y.sum())
    x = np.clip(x, 0.0, 1.0)
    return x / x.sum()


def simplex_polytope(dim: int) -> HPolytope:
    """``{y >= 0, sum(y) <= 1}`` in ``dim`` reduced coordinates."""
    normals = np.vstack([-np.eye(dim), np.ones((1, dim))])
    offsets = np.append(np.zeros(dim), 1.0)
    labels = tuple(f"nonneg:{i}" for i in range(dim)) + ("simplex",)
    return HPolytope(normals, offsets, labels)


def best_response_region(game: NormalFormGame, j: int) -> HPolytope:
    """Closed region of reduced commitments where response ``j`` is a follower best response.

    Boundaries where the follower is indifferent are included; which
    response actually gets played there is decided by
    :func:`follower_best_set`.
    """
    if not 0 <= j < game.n:
        raise IndexError(f"response {j} out of range for n={game.n}")
    red = reduce_game(game)
    rows, offs, labels = [], [], []
    for k in range(game.n):
        if k == j:
            continue
        rows.append(red.follower_dirs[:, k] - red.follower_dirs[:, j])
        offs.append(red.follower_offsets[j] - red.follower_offsets[k])
        labels.append(f"response:{k}")
    indiff = HPolytope(np.array(rows).reshape(-1, game.m - 1), np.array(offs), tuple(labels))
    return indiff.intersect(simplex_polytope(game.m - 1)).drop_vacuous()
