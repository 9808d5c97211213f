import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from testideals import Ideal, MonomialOrder, RingContext

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

PRIMES = (2, 3, 5, 7)

# PASS/FAIL lines from the acceptance module, printed after the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
VARS = ("x", "y", "z")


@pytest.fixture
def R2():
    return RingContext(7, ("x", "y"))


@pytest.fixture
def R3():
    return RingContext(7, ("x", "y", "z"))


def random_poly(rng: random.Random, R: RingContext, max_deg: int = 3, max_terms: int = 3):
    f = R.zero()
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * R.nvars
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(R.nvars)] += 1
        f = f + R.monomial(e).scale(rng.randint(1, R.p - 1))
    return f


@st.composite
def rings(draw, primes=PRIMES, max_vars=3, orders=("grevlex", "lex")):
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(1, max_vars))
    kind = draw(st.sampled_from(orders))
    return RingContext(p, VARS[:n], MonomialOrder(kind))


@st.composite
def polys(draw, R: RingContext, max_deg: int = 3, max_terms: int = 3, nonzero: bool = False):
    terms = {}
    n_terms = draw(st.integers(1 if nonzero else 0, max_terms))
    for _ in range(n_terms):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(R.nvars))
        terms[e] = draw(st.integers(1, R.p - 1))
    f = R.from_dict(terms)
    if nonzero and not f:
        f = R.gens()[0]
    return f


@st.composite
def ideals(draw, R: RingContext, max_gens: int = 3, max_deg: int = 3, max_terms: int = 3):
    k = draw(st.integers(1, max_gens))
    return Ideal(R, [draw(polys(R, max_deg, max_terms, nonzero=True)) for _ in range(k)])


@st.composite
def ring_and_ideal(draw, primes=PRIMES, max_vars=3, max_gens=3, max_deg=3):
    R = draw(rings(primes, max_vars, orders=("grevlex",)))
    return R, draw(ideals(R, max_gens, max_deg))
