import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from stackrobust import NormalFormGame

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def record(criterion: int, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS[criterion] = (passed, detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")


def random_game(rng: np.random.Generator, m: int, n: int, name: str = "random") -> NormalFormGame:
    return NormalFormGame(rng.uniform(-1, 1, (m, n)), rng.uniform(-1, 1, (m, n)), name=name)


@st.composite
def games(draw, max_m: int = 4, max_n: int = 4, min_m: int = 2):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_game(np.random.default_rng(seed), m, n)


@st.composite
def simplex_points(draw, m: int):
    w = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=m, max_size=m)))
    if w.sum() <= 1e-6:
        w = np.ones(m)
    return w / w.sum()


def grid_simplex(m: int, steps: int) -> np.ndarray:
    from stackrobust.observation import compositions

    return compositions(steps, m) / steps
