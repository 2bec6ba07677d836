"""Example games and the random security-game ensemble.

The three 2 x n examples are rebuilt from their ideal leader payoff lines.
Leader columns follow directly from the lines ``f(p; j)``; follower columns
are one choice (fixed here) that puts the region boundaries at ``p = 1/2``
and, for the third game, ``p = 5/7``.  :func:`verify_example` checks a game
against the piecewise description on a grid.

Security games use the usual one-resource convention: the defender covers
target ``i``, the attacker hits target ``j``.  A covered attack pays the
defender its reward and the attacker its penalty; an uncovered one pays the
defender its penalty and the attacker its reward.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidId
from .game import NormalFormGame, ideal_payoff
from .rng import stream

_EXAMPLES = {
    # f(p;1) = p, f(p;2) = 1 - p, f(p;3) = 3 - 4p; zero-sum.
    1: np.array([[1.0, 0.0, -1.0], [0.0, 1.0, 3.0]]),
    # f(p;1) = p, f(p;2) = -p.
    2: np.array([[1.0, -1.0], [0.0, 0.0]]),
    # f(p;1) = p, f(p;2) = 1/2 - p, f(p;3) = 3 - 4p.
    3: np.array([[1.0, -0.5, -1.0], [0.0, 0.5, 3.0]]),
}

# Follower utilities u_j(p) = B[0, j] p + B[1, j] (1 - p).
# Game 2: u_1 = 0, u_2 = p - 1/2.
# Game 3: u_1 = 0, u_2 = p - 1/2, u_3 = 2p - 17/14 (meets u_2 at p = 5/7).
_FOLLOWERS = {
    2: np.array([[0.0, 0.5], [0.0, -0.5]]),
    3: np.array([[0.0, 0.5, 11.0 / 14.0], [0.0, -0.5, -17.0 / 14.0]]),
}


def _piecewise_ideal(example_id: int, p: float) -> float:
    if example_id == 1:
        return min(p, 1.0 - p, 3.0 - 4.0 * p)
    if example_id == 2:
        return p if p <= 0.5 else -p
    if p <= 0.5:
        return p
    return 0.5 - p if p <= 5.0 / 7.0 else 3.0 - 4.0 * p


def example_game(example_id: int, verify: bool = True) -> NormalFormGame:
    if example_id not in _EXAMPLES:
        raise InvalidId(f"unknown example {example_id!r}; choose 1, 2 or 3")
    A = _EXAMPLES[example_id]
    B = -A if example_id == 1 else _FOLLOWERS[example_id]
    game = NormalFormGame(A, B, name=f"example-{example_id}")
    if verify:
        verify_example(game, example_id)
    return game


def verify_example(game: NormalFormGame, example_id: int, points: int = 1000) -> None:
    """Compare ``ideal_payoff`` with the piecewise form on a uniform grid.

    Grid points lying exactly on a region boundary are skipped: there the
    leader-favouring tie rule decides, not the piecewise formula.
    """
    boundaries = {1: (0.5, 2.0 / 3.0), 2: (0.5,), 3: (0.5, 5.0 / 7.0)}[example_id]
    for p in np.linspace(0.0, 1.0, points + 1):
        if any(abs(p - b) < 1e-12 for b in boundaries):
            continue
        expected = _piecewise_ideal(example_id, p)
        got = ideal_payoff(game, np.array([p, 1.0 - p]))
        if abs(got - expected) > 1e-9:
            raise AssertionError(f"example {example_id}: f_inf({p}) = {got}, expected {expected}")


@dataclass(frozen=True, eq=False)
class SecurityGameParams:
    defender_rewards: np.ndarray
    defender_penalties: np.ndarray
    attacker_rewards: np.ndarray
    attacker_penalties: np.ndarray
    seed: int = 0

    @property
    def targets(self) -> int:
        return len(self.defender_rewards)

    @classmethod
    def draw(cls, targets: int, seed: int, index: int = 0) -> SecurityGameParams:
        if targets < 2:
            raise ValueError("a security game needs at least two targets")
        rng = stream(seed, index)
        return cls(
            defender_rewards=rng.uniform(0.0, 1.0, targets),
            defender_penalties=rng.uniform(-1.0, 0.0, targets),
            attacker_rewards=rng.uniform(0.0, 1.0, targets),
            attacker_penalties=rng.uniform(-1.0, 0.0, targets),
            seed=seed,
        )

    def to_game(self, name: str | None = None) -> NormalFormGame:
        covered = np.eye(self.targets, dtype=bool)
        A = np.where(covered, self.defender_rewards[None, :], self.defender_penalties[None, :])
        B = np.where(covered, self.attacker_penalties[None, :], self.attacker_rewards[None, :])
        return NormalFormGame(A, B, name=name or f"security-{self.targets}x{self.targets}")


def random_security_game(targets: int, seed: int, index: int = 0) -> NormalFormGame:
    """Draw one security game from stream ``(seed, index)``."""
    params = SecurityGameParams.draw(targets, seed, index)
    return params.to_game(name=f"security-{targets}x{targets}-s{seed}-k{index}")


def generate_ensemble(count: int, targets: int, master_seed: int) -> list[NormalFormGame]:
    if count < 0:
        raise ValueError("count must be non-negative")
    return [random_security_game(targets, master_seed, k) for k in range(count)]
