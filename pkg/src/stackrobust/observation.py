"""Leader payoff when the follower best-responds to N observed plays.

The follower's response depends only on the count vector, never on the
hidden commitment, so all exact computations go through an
:class:`OutcomeTable`: every count vector for a given ``(game, N)`` together
with its response and log multinomial coefficient.  Probabilities for a
particular commitment are then one matrix-vector product away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln
from scipy.stats import binom

from .exceptions import EnumerationTooLarge, InvalidN, InvalidTrials, WrongDimension
from .game import NormalFormGame, as_mixed, follower_best_set, leader_favored_responses
from .rng import stream

DEFAULT_ENUM_LIMIT = 10**7
_CHUNK = 1 << 18


@dataclass(frozen=True)
class PayoffEstimate:
    mean: float
    stderr: float
    method: str
    trials: int
    N: int

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "method": self.method, "trials": self.trials, "N": self.N}


def _check_N(N) -> int:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise InvalidN(f"N must be a positive integer, got {N!r}")
    return int(N)


def count_vectors(N: int, m: int) -> int:
    return math.comb(N + m - 1, m - 1)


@lru_cache(maxsize=None)
def _small_compositions(n: int, parts: int) -> np.ndarray:
    out = _build_compositions(n, parts)
    out.setflags(write=False)
    return out


def _build_compositions(n: int, parts: int) -> np.ndarray:
    if parts == 1:
        return np.array([[n]], dtype=np.int32)
    blocks = []
    for first in range(n, -1, -1):
        rest = compositions(n - first, parts - 1)
        block = np.empty((rest.shape[0], parts), dtype=np.int32)
        block[:, 0] = first
        block[:, 1:] = rest
        blocks.append(block)
    return np.concatenate(blocks)


def compositions(n: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``n``."""
    if parts <= 3:
        return _small_compositions(n, parts)
    return _build_compositions(n, parts)


class OutcomeTable:
    """All empirical outcomes of ``N`` draws and the follower's response to each."""

    def __init__(self, game: NormalFormGame, N: int, enum_limit: int = DEFAULT_ENUM_LIMIT):
        N = _check_N(N)
        size = count_vectors(N, game.m)
        if size > enum_limit:
            raise EnumerationTooLarge(
                f"{size} count vectors for m={game.m}, N={N} exceeds limit {enum_limit}; use Monte Carlo"
            )
        self.game = game
        self.N = N
        self.counts = compositions(N, game.m)
        self.responses = np.empty(len(self.counts), dtype=np.int64)
        for start in range(0, len(self.counts), _CHUNK):
            block = self.counts[start : start + _CHUNK]
            self.responses[start : start + len(block)] = leader_favored_responses(game, block / N)
        lg = gammaln(np.arange(N + 1) + 1.0)
        self.log_coef = lg[N] - lg[self.counts].sum(axis=1)

    def __len__(self) -> int:
        return self.counts.shape[0]

    def probabilities(self, x) -> np.ndarray:
        x = as_mixed(self.game, x)
        support = x > 0
        logp = self.log_coef + self.counts[:, support] @ np.log(x[support])
        if not support.all():
            logp[self.counts[:, ~support].any(axis=1)] = -np.inf
        probs = np.exp(logp)
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-9:
            raise ArithmeticError(f"multinomial masses sum to {total!r}")
        return probs

    def response_distribution(self, x) -> np.ndarray:
        probs = self.probabilities(x)
        return np.bincount(self.responses, weights=probs, minlength=self.game.n)

    def expected_payoff(self, x) -> float:
        x = as_mixed(self.game, x)
        return float(self.response_distribution(x) @ (x @ self.game.leader_payoffs))


def empirical_response(game: NormalFormGame, counts) -> int:
    counts = np.asarray(counts)
    if counts.shape != (game.m,) or (counts < 0).any() or counts.sum() < 1:
        raise ValueError(f"invalid count vector {counts!r}")
    return follower_best_set(game, counts / counts.sum()).leader_favored


def response_distribution(game: NormalFormGame, x, N: int, enum_limit: int = DEFAULT_ENUM_LIMIT) -> np.ndarray:
    """Probability of each follower response after ``N`` observations of ``x``."""
    return OutcomeTable(game, N, enum_limit).response_distribution(x)


def exact_expected_payoff(
    game: NormalFormGame, x, N: int, enum_limit: int = DEFAULT_ENUM_LIMIT, table: OutcomeTable | None = None
) -> PayoffEstimate:
    N = _check_N(N)
    if table is None:
        table = OutcomeTable(game, N, enum_limit)
    return PayoffEstimate(table.expected_payoff(x), 0.0, "exact", 0, N)


def mc_sample_responses(game: NormalFormGame, x, N: int, trials: int, seed: int) -> np.ndarray:
    """Follower response in each of ``trials`` simulated histories.

    Trial ``t`` draws its counts from stream ``(seed, t)``.
    """
    x = as_mixed(game, x)
    counts = np.empty((trials, game.m), dtype=np.int64)
    for t in range(trials):
        counts[t] = stream(seed, t).multinomial(N, x)
    return leader_favored_responses(game, counts / N)


def mc_expected_payoff(game: NormalFormGame, x, N: int, trials: int, seed: int) -> PayoffEstimate:
    N = _check_N(N)
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise InvalidTrials(f"trials must be a positive integer, got {trials!r}")
    x = as_mixed(game, x)
    payoffs = (x @ game.leader_payoffs)[mc_sample_responses(game, x, N, int(trials), seed)]
    stderr = float(payoffs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return PayoffEstimate(float(payoffs.mean()), stderr, "monte_carlo", int(trials), N)


def expected_payoff(
    game: NormalFormGame,
    x,
    N: int,
    method: str = "auto",
    trials: int = 2000,
    seed: int = 0,
    enum_limit: int = DEFAULT_ENUM_LIMIT,
) -> PayoffEstimate:
    """Dispatch to exact enumeration or Monte Carlo; ``auto`` picks exact when it fits."""
    if method == "auto":
        method = "exact" if count_vectors(_check_N(N), game.m) <= enum_limit else "mc"
    if method == "exact":
        return exact_expected_payoff(game, x, N, enum_limit)
    if method in ("mc", "monte_carlo"):
        return mc_expected_payoff(game, x, N, trials, seed)
    raise ValueError(f"unknown evaluation method {method!r}")


class BinomialPayoff:
    """``f_N(p)`` for a 2 x n game, vectorised over ``p``."""

    def __init__(self, game: NormalFormGame, N: int):
        if game.m != 2:
            raise WrongDimension(f"2 x n game required, got m={game.m}")
        self.game = game
        self.N = _check_N(N)
        k = np.arange(self.N + 1)
        emp = np.column_stack([k, self.N - k]) / self.N
        self.responses = leader_favored_responses(game, emp)
        self._k = k

    def _pmf(self, p):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        return p, binom.pmf(self._k[None, :], self.N, p[:, None])

    def response_distribution(self, p) -> np.ndarray:
        """Row ``i`` holds the response probabilities at ``p[i]``."""
        _, pmf = self._pmf(p)
        out = np.zeros((pmf.shape[0], self.game.n))
        for j in range(self.game.n):
            out[:, j] = pmf[:, self.responses == j].sum(axis=1)
        return out

    def __call__(self, p):
        p, pmf = self._pmf(p)
        cols = self.game.leader_payoffs[:, self.responses]
        payoff = p[:, None] * cols[0][None, :] + (1.0 - p[:, None]) * cols[1][None, :]
        return (pmf * payoff).sum(axis=1)


def _golden_max(f, lo: float, hi: float, iters: int) -> tuple[float, float]:
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - ratio * (b - a), a + ratio * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def brute_force_optimum_2xn(
    game: NormalFormGame, N: int, grid_points: int = 2000, refine_iters: int = 60
) -> tuple[float, float]:
    """Grid search over ``p`` followed by golden-section refinement.

    Returns ``(p_star, f_star)``, the best commitment found and its exact
    payoff.  This is a lower bound on the true optimum, tight up to the
    grid resolution.
    """
    f = BinomialPayoff(game, N)
    grid = np.linspace(0.0, 1.0, grid_points + 1)
    values = f(grid)
    i = int(np.argmax(values))
    best_p, best_f = float(grid[i]), float(values[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points)]
    p, fp = _golden_max(lambda q: float(f(q)[0]), lo, hi, refine_iters)
    if fp > best_f:
        best_p, best_f = float(p), float(fp)
    return best_p, best_f
