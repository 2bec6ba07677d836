"""Command-line entry point.

Exit codes: 0 on success, 2 for bad input or configuration, 3 when a
solver fails.  Results are printed as JSON unless a report file is named.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .ensembles import example_game, generate_ensemble
from .exceptions import SolverError, StackRobustError
from .experiment import SweepConfig, emit_report, render_report, run_sweep
from .game import load_game, save_game
from .observation import brute_force_optimum_2xn, expected_payoff
from .robust import DEFAULT_P, build_robust_commitment
from .stackelberg import solve_stackelberg

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def _game(ref: str):
    # "example:2" is shorthand for a built-in example.
    if ref.startswith("example:"):
        return example_game(int(ref.split(":", 1)[1]))
    return load_game(ref)


def _weights(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated numbers, got {text!r}") from None


def _print(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_solve(args) -> None:
    game = _game(args.game)
    _print({"game": game.name, **solve_stackelberg(game).to_dict()})


def cmd_eval(args) -> None:
    game = _game(args.game)
    method = "exact" if args.exact else "mc" if args.mc else "auto"
    est = expected_payoff(game, args.x, args.N, method=method, trials=args.trials, seed=args.seed)
    _print({"game": game.name, "x": args.x.tolist(), **est.to_dict()})


def cmd_robust(args) -> None:
    game = _game(args.game)
    _print({"game": game.name, **build_robust_commitment(game, args.N, args.p).to_dict()})


def cmd_brute(args) -> None:
    game = _game(args.game)
    p, value = brute_force_optimum_2xn(game, args.N, args.grid)
    _print({"game": game.name, "N": args.N, "p": p, "commitment": [p, 1.0 - p], "value": value})


def cmd_sweep(args) -> None:
    config = SweepConfig.load(args.config)
    rows = run_sweep(config)
    out = args.out or config.output
    if out:
        emit_report(rows, config.format, out)
    else:
        sys.stdout.write(render_report(rows, config.format))


def cmd_ensemble(args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for game in generate_ensemble(args.count, args.targets, args.seed):
        path = out / f"{game.name}.json"
        save_game(game, path)
        written.append(str(path))
    _print({"count": len(written), "files": written})


def cmd_examples(args) -> None:
    game = example_game(args.id)
    _print({**game.to_dict(), "stackelberg": solve_stackelberg(game).to_dict()})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stackrobust", description="Leader commitments under sampled observation.")
    sub = parser.add_subparsers(dest="command", required=True)
    game_help = "game JSON file, or example:ID"

    p = sub.add_parser("solve", help="optimal commitment under exact observation")
    p.add_argument("game", help=game_help)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="expected leader payoff after N observations")
    p.add_argument("game", help=game_help)
    p.add_argument("--x", type=_weights, required=True, help="leader mixture, comma separated")
    p.add_argument("--N", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="enumerate all outcomes")
    mode.add_argument("--mc", action="store_true", help="Monte Carlo estimate")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("robust", help="commitment retreated for N observations")
    p.add_argument("game", help=game_help)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=float, default=DEFAULT_P, help="shrink exponent in (0, 1/2)")
    p.set_defaults(func=cmd_robust)

    p = sub.add_parser("brute", help="best commitment for N observations (2 x n games)")
    p.add_argument("game", help=game_help)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--grid", type=int, default=2000)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="override the config's output path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ensemble", help="write random security games as JSON files")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--targets", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("examples", help="show a built-in example game")
    p.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (StackRobustError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
