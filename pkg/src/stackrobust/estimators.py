"""Estimator-style wrappers over the functional core.

A game is not a dataset, so the fit here is ``fit(A, B)`` with the two
payoff matrices taking the places of ``X`` and ``y``.  ``predict`` maps leader
mixtures to the follower's leader-favoured best response.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .game import NormalFormGame, leader_favored_responses
from .observation import expected_payoff
from .robust import DEFAULT_P, build_robust_commitment
from .stackelberg import solve_stackelberg


def check_game(A, B=None) -> NormalFormGame:
    """Accept a game object or a pair of payoff matrices of equal shape."""
    if isinstance(A, NormalFormGame):
        return A
    A = check_array(A, dtype=float, ensure_2d=True)
    B = check_array(B, dtype=float, ensure_2d=True)
    if A.shape != B.shape:
        raise ValueError(f"payoff shapes differ: {A.shape} vs {B.shape}")
    return NormalFormGame(A, B)


class StackelbergLeader(BaseEstimator):
    """Leader commitment under exact observation of the mixture."""

    def __init__(self, act_tol: float | None = None):
        self.act_tol = act_tol

    def fit(self, A, B=None):
        self.game_ = check_game(A, B)
        self.solution_ = solve_stackelberg(self.game_, act_tol=self.act_tol)
        self.commitment_ = self.solution_.commitment
        self.response_ = self.solution_.response
        self.value_ = self.solution_.value
        self.n_features_in_ = self.game_.m
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "game_")
        X = check_array(X, dtype=float)
        return leader_favored_responses(self.game_, X)

    def score(self, X, y=None) -> float:
        """Mean leader payoff at the rows of ``X`` against exact best responses."""
        check_is_fitted(self, "game_")
        X = check_array(X, dtype=float)
        responses = self.predict(X)
        return float(np.mean(np.einsum("ki,ik->k", X, self.game_.leader_payoffs[:, responses])))

    def expected_payoff(self, N: int, method: str = "auto", trials: int = 2000, seed: int = 0) -> float:
        check_is_fitted(self, "commitment_")
        return expected_payoff(self.game_, self.commitment_, N, method, trials, seed).mean


class RobustLeader(StackelbergLeader):
    """Commitment retreated into its region for a follower that sees ``n_observations`` plays."""

    def __init__(self, n_observations: int = 100, p_exponent: float = DEFAULT_P, act_tol: float | None = None):
        super().__init__(act_tol=act_tol)
        self.n_observations = n_observations
        self.p_exponent = p_exponent

    def fit(self, A, B=None):
        super().fit(A, B)
        self.robust_ = build_robust_commitment(self.game_, self.n_observations, self.p_exponent, self.solution_)
        self.commitment_ = self.robust_.commitment
        self.delta_ = self.robust_.delta
        self.epsilon_ = self.robust_.epsilon
        return self

    def expected_payoff(self, N: int | None = None, method: str = "auto", trials: int = 2000, seed: int = 0) -> float:
        return super().expected_payoff(self.n_observations if N is None else N, method, trials, seed)


__all__ = ["RobustLeader", "StackelbergLeader", "check_game"]
