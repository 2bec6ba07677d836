"""Leader commitments in Stackelberg games when the follower learns from samples."""

from .bounds import SanovBound, TailBound, devroye_tail, hoeffding_tail, kl_divergence, sanov_region_bound
from .ensembles import SecurityGameParams, example_game, generate_ensemble, random_security_game, verify_example
from .estimators import RobustLeader, StackelbergLeader, check_game
from .exceptions import *  # noqa: F401,F403
from .experiment import SweepConfig, SweepRow, emit_report, run_sweep
from .game import (
    BestResponseSet,
    NormalFormGame,
    best_response_region,
    follower_best_set,
    ideal_payoff,
    load_game,
    save_game,
)
from .observation import (
    OutcomeTable,
    PayoffEstimate,
    brute_force_optimum_2xn,
    exact_expected_payoff,
    expected_payoff,
    mc_expected_payoff,
    response_distribution,
)
from .polytope import HPolytope, chebyshev_center, lp_solve
from .robust import (
    RobustCommitment,
    build_robust_commitment,
    commit_at_delta,
    compute_z,
    delta_schedule,
    deviation_direction,
    max_feasible_delta,
    payoff_gap_bound,
    response_preservation_bound,
)
from .stackelberg import StackelbergSolution, active_constraints, solve_stackelberg

__version__ = "0.1.0"
