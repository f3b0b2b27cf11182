import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dalmas.conditions import Atom, ProbeUniverse  # noqa: E402
from dalmas.waste import probe_universe  # noqa: E402

AGENTS = ("a", "b", "c")


def _toy_eval(name, agents, s):
    idx = [AGENTS.index(a) for a in agents]
    if name == "p":
        return bool(s >> idx[0] & 1)
    if name == "q":
        return (s + idx[0]) % 3 == 0
    if name == "u":
        return (s // 4 + idx[0]) % 2 == 0
    if name == "r":
        return (idx[0] + 2 * idx[1] + s) % 4 < 2
    raise KeyError(name)


def make_toy_universe(n_agents=3, n_states=16):
    return ProbeUniverse(AGENTS[:n_agents], range(n_states), {"p": 1, "q": 1, "u": 1, "r": 2}, _toy_eval)


@pytest.fixture(scope="session")
def toy():
    return make_toy_universe()


@pytest.fixture(scope="session")
def pqr():
    return Atom("p", 1), Atom("q", 1), Atom("r", 2)


@pytest.fixture(scope="session")
def grid_probe():
    return probe_universe(5, 5, 2)


@pytest.fixture(scope="session")
def small_grid_probe():
    return probe_universe(4, 4, 2)


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
