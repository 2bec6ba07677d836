import numpy as np
import pytest

from stackrobust import example_game, generate_ensemble, ideal_payoff, random_security_game, solve_stackelberg
from stackrobust.ensembles import SecurityGameParams, verify_example
from stackrobust.exceptions import InvalidId


def test_unknown_id():
    with pytest.raises(InvalidId):
        example_game(4)


@pytest.mark.invariant
def test_example1_zero_sum():
    g = example_game(1)
    assert (g.leader_payoffs + g.follower_payoffs == 0).all()


@pytest.mark.parametrize("eid", [1, 2, 3])
def test_examples_verify(eid):
    verify_example(example_game(eid, verify=False), eid)


def test_verify_catches_wrong_game():
    with pytest.raises(AssertionError):
        verify_example(example_game(3, verify=False), 2)


def test_example1_peak():
    g = example_game(1)
    ps = np.linspace(0, 1, 1001)
    vals = [ideal_payoff(g, [p, 1 - p]) for p in ps]
    assert max(vals) == pytest.approx(0.5) and ps[int(np.argmax(vals))] == pytest.approx(0.5)


@pytest.mark.invariant
def test_security_structure():
    g = random_security_game(5, 9)
    A, B = g.leader_payoffs, g.follower_payoffs
    off = ~np.eye(5, dtype=bool)
    assert (np.diag(A) >= 0).all() and (A[off] <= 0).all() and (np.abs(A) <= 1).all()
    assert (np.diag(B) <= 0).all() and (B[off] >= 0).all()
    for j in range(5):
        col = np.delete(A[:, j], j)
        assert np.all(col == col[0])


def test_params_ranges():
    p = SecurityGameParams.draw(6, 3)
    assert p.targets == 6
    assert (p.defender_rewards >= 0).all() and (p.defender_rewards <= 1).all()
    assert (p.attacker_penalties <= 0).all() and (p.attacker_penalties >= -1).all()


@pytest.mark.invariant
def test_determinism():
    assert random_security_game(5, 1) == random_security_game(5, 1)
    assert not np.array_equal(random_security_game(5, 1).leader_payoffs, random_security_game(5, 2).leader_payoffs)
    a, b = generate_ensemble(10, 5, 42), generate_ensemble(10, 5, 42)
    assert all(x == y for x, y in zip(a, b))


@pytest.mark.invariant
def test_order_independent():
    full = generate_ensemble(10, 5, 42)
    assert random_security_game(5, 42, 7) == full[7]


def test_empty_ensemble():
    assert generate_ensemble(0, 5, 1) == []


def test_ensemble_mostly_mixed():
    games = generate_ensemble(50, 5, 20240601)
    mixed = sum(int((solve_stackelberg(g).commitment > 1e-9).sum() >= 2) for g in games)
    assert mixed >= 40
