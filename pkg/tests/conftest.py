import numpy as np
import pytest

from latinia.channel import draw_channel
from latinia.latin import build_schemes


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def ch3():
    return draw_channel(3, seed=11, draw_index=0)


@pytest.fixture
def ch4():
    return draw_channel(4, seed=11, draw_index=0)


@pytest.fixture
def schemes3():
    return build_schemes(3, 'all')


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# One line per acceptance criterion, echoed in the terminal summary so the
# verdicts survive output capture.
ACCEPTANCE = []


@pytest.fixture
def verdict():
    def record(number, title, ok, detail=''):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE.append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section('acceptance criteria')
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
