import os
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

from hesscay.ec import get_fixture

settings.register_profile("default", deadline=None, max_examples=100)
settings.register_profile("fast", deadline=None, max_examples=20)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"
FIXTURES = DATA / "fixtures.json"

# exact-identity certification: random rational specialisations of this height
HEIGHT = 10**4
N_RANDOM = 20


def random_rational(rng, height=HEIGHT, nonzero=False):
    while True:
        q = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if q or not nonzero:
            return q


def random_ab(rng, n=N_RANDOM, height=HEIGHT, need_b=False):
    """n pairs (A, B) of random rationals with A * (4A^3 + 27B^2) != 0."""
    out = []
    while len(out) < n:
        A, B = random_rational(rng, height), random_rational(rng, height)
        if A and 4 * A**3 + 27 * B**2 and (B or not need_b):
            out.append((A, B))
    return out


def grid_ab(degree):
    """(D+1) x (D+1) grid of positive integers; a polynomial of degree <= D in each
    variable vanishing on it is zero.  All grid points have A*delta > 0."""
    return [(Fraction(a), Fraction(b)) for a in range(1, degree + 2) for b in range(1, degree + 2)]


@pytest.fixture
def rng():
    return random.Random(20240531)


@pytest.fixture(scope="session")
def fixture_first():
    return get_fixture("first", FIXTURES)


@pytest.fixture(scope="session")
def fixture_k1():
    return get_fixture("k1", FIXTURES)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:  # pragma: no cover
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
