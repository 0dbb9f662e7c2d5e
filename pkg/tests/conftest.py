import pytest

from ahasp.chain import DualChain
from ahasp.generate import GenSpec, generate
from ahasp.model import Fleet, Instance, TaskSpec, TimingParams

EXAMPLE_PLUS = (0, 5, 4, 2, 0, 6, 1, 3, 7)
EXAMPLE_MINUS = (0, 5, 1, 4, 7, 0, 6, 3, 2)


def line_instance(n_tasks=7, m_plus=2, m_minus=2, n_pos=10, due=10_000.0, handling=20.0):
    """Positions on a line 6 m apart; task i goes from i-1 to n_pos-i."""
    dist = [[abs(a - b) * 6.0 for b in range(n_pos)] for a in range(n_pos)]
    tasks = [
        TaskSpec(i, (i - 1) % n_pos, (n_pos - i) % n_pos, due, handling) for i in range(1, n_tasks + 1)
    ]
    fleet = Fleet(tuple(range(m_plus)), tuple(range(n_pos - m_minus, n_pos)))
    return Instance(tasks=tasks, fleet=fleet, dist=dist, timing=TimingParams(), name="line")


@pytest.fixture
def example_chain():
    return DualChain.from_permutation(EXAMPLE_PLUS, EXAMPLE_MINUS)


@pytest.fixture
def example_instance():
    return line_instance(8)


@pytest.fixture
def small_instance():
    return generate(GenSpec(n=6, m_plus=2, m_minus=3, seed=11))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
