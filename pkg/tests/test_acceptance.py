"""Acceptance criteria 1-9, one test each, at the stated tolerances and time limits.

Each test records a pass/fail line that the terminal summary prints.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import binom

from conftest import grid_simplex, random_game
from stackrobust import (
    build_robust_commitment,
    example_game,
    exact_expected_payoff,
    generate_ensemble,
    kl_divergence,
    solve_stackelberg,
)
from stackrobust.experiment import SweepConfig, run_sweep
from stackrobust.game import leader_favored_responses
from stackrobust.observation import BinomialPayoff, OutcomeTable, brute_force_optimum_2xn, mc_sample_responses
from stackrobust.rng import derive_seed

ROOT = Path(__file__).resolve().parent.parent
MASTER_SEED = 20240601


def _finish(record, k, passed, detail, elapsed, limit):
    timely = elapsed < limit
    record(k, passed and timely, f"{detail}; {elapsed:.3g}s (limit {limit:g}s)")
    assert passed, detail
    assert timely, f"took {elapsed:.3g}s, limit {limit}s"


def test_criterion_1_example1_single_draw(acceptance):
    g = example_game(1)
    exact_expected_payoff(g, [0.5, 0.5], 1)  # warm caches
    times, value = [], None
    for _ in range(5):
        t0 = time.perf_counter()
        value = exact_expected_payoff(g, [0.5, 0.5], 1).mean
        times.append(time.perf_counter() - t0)
    ok = abs(value - 0.75) <= 1e-12
    _finish(acceptance, 1, ok, f"f_1(1/2) = {value!r}", min(times), 1e-3)


def test_criterion_2_zero_sum_decay(acceptance):
    t0 = time.perf_counter()
    g = example_game(1)
    kl = kl_divergence([2 / 3, 1 / 3], [0.5, 0.5])
    worst_floor, worst_slack = math.inf, math.inf
    for N in range(1, 101):
        f = OutcomeTable(g, N).expected_payoff([0.5, 0.5])
        worst_floor = min(worst_floor, f - 0.5)
        worst_slack = min(worst_slack, math.exp(-N * kl) - (f - 0.5))
    elapsed = time.perf_counter() - t0
    ok = worst_floor >= 0 and worst_slack >= 0 and abs(kl - 0.0566) < 1e-4
    _finish(acceptance, 2, ok, f"min f_N-1/2 = {worst_floor:.3g}, min bound slack = {worst_slack:.3g}", elapsed, 1.0)


def test_criterion_3_example2_collapse(acceptance):
    t0 = time.perf_counter()
    g = example_game(2)
    worst = max(abs(OutcomeTable(g, N).expected_payoff([0.5, 0.5])) for N in range(1, 100, 2))
    rc = build_robust_commitment(g, 100, 0.25)
    robust = exact_expected_payoff(g, rc.commitment, 100).mean
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and robust >= 0.35 and abs(rc.commitment[0] - 0.406) < 5e-4
    _finish(acceptance, 3, ok, f"max |f_N(1/2)| odd N = {worst:.3g}; robust p = {rc.commitment[0]:.4f}, "
            f"f_100 = {robust:.4f}", elapsed, 1.0)


def test_criterion_4_example3_below_half(acceptance):
    t0 = time.perf_counter()
    g = example_game(3)
    above, worst_err = [], 0.0
    for N in range(8, 61):
        f = OutcomeTable(g, N).expected_payoff([0.5, 0.5])
        if f >= 0.5:
            above.append(N)
        if N % 2:
            k_min = math.ceil(5 * N / 7 - 1e-12)
            tail = sum(binom.pmf(k, N, 0.5) for k in range(k_min, N + 1))
            worst_err = max(worst_err, abs(f - (0.25 + tail)))
    elapsed = time.perf_counter() - t0
    ok = not above and worst_err <= 1e-12
    _finish(acceptance, 4, ok, f"N with f_N >= 1/2: {above}; odd-N formula error {worst_err:.3g}", elapsed, 1.0)


def test_criterion_5_stackelberg_solver(acceptance):
    t0 = time.perf_counter()
    bad = []
    for eid in (1, 2, 3):
        s = solve_stackelberg(example_game(eid))
        if abs(s.value - 0.5) > 1e-6 or abs(s.commitment[0] - 0.5) > 1e-6:
            bad.append(f"example {eid}")
    rng = np.random.default_rng(MASTER_SEED)
    grid = grid_simplex(3, 140)  # 10011 points
    shortfall = -math.inf
    for _ in range(100):
        g = random_game(rng, 3, 3)
        value = solve_stackelberg(g).value
        resp = leader_favored_responses(g, grid)
        grid_max = float(np.max(np.einsum("ki,ik->k", grid, g.leader_payoffs[:, resp])))
        shortfall = max(shortfall, grid_max - value)
    elapsed = time.perf_counter() - t0
    ok = not bad and shortfall <= 1e-6
    _finish(acceptance, 5, ok, f"example failures {bad}; max grid excess over LP {shortfall:.3g}", elapsed, 10.0)


@pytest.fixture(scope="module")
def security_ensemble():
    games = generate_ensemble(50, 5, MASTER_SEED)
    return games, [solve_stackelberg(g) for g in games]


def test_criterion_6_certificates(acceptance, security_ensemble):
    t0 = time.perf_counter()
    games, sols = security_ensemble
    exact_N = [25, 50, 100]
    mc_N = [10**e for e in range(3, 19)]
    trials = 2000
    checked = {"exact": 0, "mc": 0}
    failures = []
    for gi, (g, s) in enumerate(zip(games, sols)):
        lead = g.leader_payoffs
        for ni, N in enumerate(exact_N + mc_N):
            rc = build_robust_commitment(g, N, 0.25, s)
            if not rc.epsilon_valid:
                continue
            x = rc.commitment
            payoff = x @ lead
            if N in exact_N:
                dist = OutcomeTable(g, N).response_distribution(x)
                miss, f_N = 1.0 - dist[s.response], float(dist @ payoff)
                miss_slack = gap_slack = 0.0
                checked["exact"] += 1
            else:
                resp = mc_sample_responses(g, x, N, trials, derive_seed(MASTER_SEED, gi, ni))
                vals = payoff[resp]
                miss, f_N = float(np.mean(resp != s.response)), float(vals.mean())
                miss_slack = 4 * math.sqrt(miss * (1 - miss) / trials)
                gap_slack = 4 * float(vals.std(ddof=1) / math.sqrt(trials))
                checked["mc"] += 1
            if miss > rc.epsilon + miss_slack:
                failures.append((gi, N, "misresponse", miss, rc.epsilon))
            if s.value - f_N > rc.gap_bound + gap_slack:
                failures.append((gi, N, "gap", s.value - f_N, rc.gap_bound))
    elapsed = time.perf_counter() - t0
    total = checked["exact"] + checked["mc"]
    ok = not failures and total > 0
    detail = f"valid cells checked: {checked['exact']} exact (N<=100), {checked['mc']} MC (N=1e3..1e18); failures {failures[:5]}"
    _finish(acceptance, 6, ok, detail, elapsed, 300.0)


def test_criterion_7_security_ensemble(acceptance):
    t0 = time.perf_counter()
    config = SweepConfig.load(ROOT / "configs" / "security_sweep.json")
    assert config.games == [{"ensemble": {"count": 50, "targets": 5, "seed": MASTER_SEED}}]
    rows = run_sweep(config)
    assert not [r for r in rows if r.error]
    Ns = config.N_values
    gap = np.array([np.mean([r.f_star_inf - r.f_N_robust for r in rows if r.N == N]) for N in Ns])
    robust_100 = np.mean([r.f_N_robust for r in rows if r.N == 100])
    plain_100 = np.mean([r.f_N_stackelberg for r in rows if r.N == 100])
    slope = float(np.polyfit(np.log(Ns), np.log(gap), 1)[0])
    monotone = bool(np.all(np.diff(gap) <= 0))
    elapsed = time.perf_counter() - t0
    beats = robust_100 > plain_100
    in_range = -0.75 <= slope <= -0.15
    ok = beats and monotone and in_range
    detail = (f"N=100 robust {robust_100:.4f} vs Stackelberg {plain_100:.4f}; mean gaps {np.round(gap, 4).tolist()} "
              f"monotone={monotone}; log-log slope {slope:.3f} (need [-0.75, -0.15])")
    _finish(acceptance, 7, ok, detail, elapsed, 600.0)


def test_criterion_8_brute_force_trend(acceptance):
    t0 = time.perf_counter()
    Ns = [16, 32, 64, 128, 256]
    notes, ok = [], True
    for eid in (2, 3):
        g = example_game(eid)
        f_inf = solve_stackelberg(g).value
        diff = np.array([brute_force_optimum_2xn(g, N)[1] - f_inf for N in Ns])
        size = np.abs(diff)
        scaled = size * np.sqrt(Ns)
        shrinking = bool(np.all(np.diff(size) <= 1e-12))
        bounded = bool(np.all(scaled <= 3 * scaled[0]))
        signed = bool(np.all(np.diff(diff) <= 1e-12))
        ok &= shrinking and bounded
        notes.append(f"ex{eid}: f*_N-f*_inf {np.round(diff, 4).tolist()}, |.| non-increasing={shrinking}, "
                     f"sqrt(N)|.| <= 3x first={bounded}, signed non-increasing={signed}")
    elapsed = time.perf_counter() - t0
    _finish(acceptance, 8, ok, "; ".join(notes), elapsed, 60.0)


def test_criterion_9_invariant_suites(acceptance):
    t0 = time.perf_counter()
    res = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-m", "invariant", "-p", "no:cacheprovider",
         "--ignore", str(Path(__file__)), str(ROOT / "tests")],
        capture_output=True, text=True, cwd=ROOT,
    )
    elapsed = time.perf_counter() - t0
    lines = res.stdout.strip().splitlines()
    failed = [ln.split(" - ")[0].replace("FAILED ", "") for ln in lines if ln.startswith("FAILED")]
    summary = lines[-1] if lines else res.stderr[-200:]
    _finish(acceptance, 9, res.returncode == 0, f"{summary}; failing: {failed}", elapsed, 300.0)
