"""Batch sweeps over games and sample sizes, and their flat-file reports."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .ensembles import example_game, generate_ensemble
from .exceptions import ConfigError, StackRobustError
from .game import NormalFormGame, load_game
from .observation import DEFAULT_ENUM_LIMIT, OutcomeTable, brute_force_optimum_2xn, count_vectors, mc_expected_payoff
from .robust import DEFAULT_P, _check_p, build_robust_commitment
from .rng import derive_seed
from .stackelberg import StackelbergSolution, solve_stackelberg

THREADS_ENV = "STACKROBUST_THREADS"
_METHODS = ("exact", "mc", "auto")


@dataclass(frozen=True)
class EvalSettings:
    method: str = "auto"
    trials: int = 2000
    enum_limit: int = DEFAULT_ENUM_LIMIT


@dataclass(frozen=True)
class SweepConfig:
    games: list
    N_values: list
    p_exponent: float = DEFAULT_P
    eval: EvalSettings = field(default_factory=EvalSettings)
    seed: int = 0
    output: str | None = None
    format: str = "csv"
    brute_grid: int = 0
    base_dir: str = "."

    def __post_init__(self):
        if not self.games:
            raise ConfigError("at least one game source is required")
        if not self.N_values:
            raise ConfigError("N_values must be non-empty")
        for N in self.N_values:
            if isinstance(N, bool) or not isinstance(N, int) or N < 1:
                raise ConfigError(f"N values must be positive integers, got {N!r}")
        try:
            _check_p(self.p_exponent)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.eval.method not in _METHODS:
            raise ConfigError(f"eval method must be one of {_METHODS}, got {self.eval.method!r}")
        if self.eval.trials < 2 or self.eval.enum_limit < 1:
            raise ConfigError("trials must be at least 2 and enum_limit positive")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")

    @classmethod
    def from_dict(cls, data: dict, base_dir: str = ".") -> SweepConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"games", "N_values", "p_exponent", "eval", "seed", "output", "format", "brute_grid"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        ev = data.get("eval", {})
        if isinstance(ev, str):
            ev = {"method": ev}
        try:
            settings = EvalSettings(**ev)
            return cls(
                games=list(data.get("games", [])),
                N_values=list(data.get("N_values", [])),
                p_exponent=float(data.get("p_exponent", DEFAULT_P)),
                eval=settings,
                seed=int(data.get("seed", 0)),
                output=data.get("output"),
                format=data.get("format", "csv"),
                brute_grid=int(data.get("brute_grid", 0)),
                base_dir=base_dir,
            )
        except TypeError as exc:
            raise ConfigError(f"malformed config: {exc}") from exc

    @classmethod
    def load(cls, path) -> SweepConfig:
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data, base_dir=str(path.parent))


@dataclass
class SweepRow:
    game_id: str
    N: int
    f_star_inf: float = math.nan
    f_N_stackelberg: float = math.nan
    f_N_robust: float = math.nan
    delta: float = math.nan
    l1_step: float = math.nan
    epsilon: float = math.nan
    epsilon_valid: bool = False
    gap_bound: float = math.nan
    f_N_brute: float | None = None
    stderr_stackelberg: float = 0.0
    stderr_robust: float = 0.0
    method: str = ""
    status: str = ""
    error: str = ""


def resolve_games(sources, base_dir: str = ".") -> list[NormalFormGame]:
    """Expand game sources into concrete games.

    A source is ``{"example": id}``, ``{"file": path}`` or
    ``{"ensemble": {"count": K, "targets": M, "seed": S}}``.
    """
    games: list[NormalFormGame] = []
    for src in sources:
        if not isinstance(src, dict) or len(src) != 1:
            raise ConfigError(f"bad game source {src!r}")
        (kind, value), = src.items()
        if kind == "example":
            try:
                games.append(example_game(int(value)))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        elif kind == "file":
            path = Path(value)
            games.append(load_game(path if path.is_absolute() else Path(base_dir) / path))
        elif kind == "ensemble":
            try:
                games.extend(generate_ensemble(int(value["count"]), int(value["targets"]), int(value.get("seed", 0))))
            except (KeyError, TypeError) as exc:
                raise ConfigError(f"ensemble source needs count and targets: {value!r}") from exc
        else:
            raise ConfigError(f"unknown game source kind {kind!r}")
    return games


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    default = os.cpu_count() or 1
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def _evaluate_pair(game, xs, N, settings: EvalSettings, seed: int):
    method = settings.method
    if method == "auto":
        method = "exact" if count_vectors(N, game.m) <= settings.enum_limit else "mc"
    if method == "exact":
        table = OutcomeTable(game, N, settings.enum_limit)
        return [(table.expected_payoff(x), 0.0) for x in xs], "exact"
    out = []
    for x in xs:
        est = mc_expected_payoff(game, x, N, settings.trials, seed)
        out.append((est.mean, est.stderr))
    return out, "monte_carlo"


def run_cell(game: NormalFormGame, solution: StackelbergSolution, N: int, config: SweepConfig, seed: int) -> SweepRow:
    row = SweepRow(game_id=game.name, N=N, f_star_inf=solution.value)
    try:
        rc = build_robust_commitment(game, N, config.p_exponent, solution)
        row.delta, row.l1_step = rc.delta, rc.l1_step
        row.epsilon, row.epsilon_valid, row.gap_bound = rc.epsilon, rc.epsilon_valid, rc.gap_bound
        row.status = rc.status
        values, row.method = _evaluate_pair(game, [solution.commitment, rc.commitment], N, config.eval, seed)
        (row.f_N_stackelberg, row.stderr_stackelberg), (row.f_N_robust, row.stderr_robust) = values
        if config.brute_grid and game.m == 2:
            row.f_N_brute = brute_force_optimum_2xn(game, N, config.brute_grid)[1]
    except StackRobustError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """One row per (game, N), ordered by game then N regardless of thread timing."""
    games = resolve_games(config.games, config.base_dir)
    solutions: list[StackelbergSolution | Exception] = []
    for g in games:
        try:
            solutions.append(solve_stackelberg(g))
        except StackRobustError as exc:
            solutions.append(exc)

    def task(gi: int, ni: int) -> SweepRow:
        game, sol, N = games[gi], solutions[gi], config.N_values[ni]
        if isinstance(sol, Exception):
            return SweepRow(game_id=game.name, N=N, error=f"{type(sol).__name__}: {sol}")
        return run_cell(game, sol, N, config, derive_seed(config.seed, gi, ni))

    cells = [(gi, ni) for gi in range(len(games)) for ni in range(len(config.N_values))]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(lambda c: task(*c), cells))


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.12g" % v
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render_report(rows: list[SweepRow], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: _json_value(v) for k, v in asdict(r).items()} for r in rows], indent=2) + "\n"
    if fmt != "csv":
        raise ConfigError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(SweepRow)]
    writer.writerow(names)
    for r in rows:
        writer.writerow([_csv_value(getattr(r, n)) for n in names])
    return buf.getvalue()


def emit_report(rows: list[SweepRow], fmt: str, path) -> None:
    """Write the report atomically: a temporary sibling file renamed into place."""
    if not rows:
        raise ValueError("no rows to write")
    text = render_report(rows, fmt)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
