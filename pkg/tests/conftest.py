import cmath
import random

import pytest

_LINES = []


def _report(number, title, ok, detail=""):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    _LINES.append(line)
    print(line)
    return ok


@pytest.fixture
def acceptance():
    return _report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)


# theta-characteristic rows: (L, Phi3^* L before reduction, Phi3^* L reduced)
SPIN_TABLE = [
    ("Q1", "Q5", "Q5"),
    ("Q2", "Q6", "Q6"),
    ("Q3", "Q1", "Q1"),
    ("Q4", "Q2", "Q2"),
    ("Q5", "Q3", "Q3"),
    ("Q6", "Q4", "Q4"),
    ("Q2+Q3-Q1", "Q6+Q1-Q5", "Q5+Q6-Q1"),
    ("Q2+Q4-Q1", "Q6+Q2-Q5", "Q3+Q4-Q1"),
    ("Q2+Q5-Q1", "Q6+Q3-Q5", "Q2+Q4-Q1"),
    ("Q2+Q6-Q1", "Q6+Q4-Q5", "Q2+Q3-Q1"),
    ("Q3+Q4-Q1", "Q1+Q2-Q5", "Q2+Q5-Q1"),
    ("Q3+Q5-Q1", "Q1+Q3-Q5", "Q3+Q5-Q1"),
    ("Q3+Q6-Q1", "Q1+Q4-Q5", "Q4+Q5-Q1"),
    ("Q4+Q5-Q1", "Q2+Q3-Q5", "Q4+Q6-Q1"),
    ("Q4+Q6-Q1", "Q2+Q4-Q5", "Q3+Q6-Q1"),
    ("Q5+Q6-Q1", "Q3+Q4-Q5", "Q2+Q6-Q1"),
]


@pytest.fixture
def spin_rows():
    return SPIN_TABLE


def random_params(rng, on_circle=False):
    """(zeta, A, G) with |A| <= 1 and 0.2 <= |G| <= 5."""
    A = cmath.rect(rng.uniform(0, 1), rng.uniform(0, 2 * cmath.pi))
    G = cmath.rect(rng.uniform(0.2, 5), rng.uniform(0, 2 * cmath.pi))
    if on_circle:
        while True:
            zeta = cmath.exp(1j * rng.uniform(0, 2 * cmath.pi))
            if min(abs(zeta - 1), abs(zeta + 1)) > 1e-3:
                break
    else:
        zeta = cmath.rect(rng.uniform(0.3, 2), rng.uniform(0, 2 * cmath.pi))
    return zeta, A, G


@pytest.fixture
def param_sampler():
    def sample(seed, n, on_circle=False):
        rng = random.Random(seed)
        return [random_params(rng, on_circle) for _ in range(n)]
    return sample


@pytest.fixture
def draw_params():
    """The raw sampler, for tests that manage their own random.Random."""
    return random_params
