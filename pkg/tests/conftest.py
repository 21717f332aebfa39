import numpy as np
import pytest

from optamg.blocksys import build_block
from optamg.eigsolve import generalized_eig
from optamg.matgen import advdiff_2d, poisson_2d, random_nonsym
from optamg.smoother import kaczmarz_smoother

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def poisson4():
    a = poisson_2d(4)
    sm = kaczmarz_smoother(a)
    return a, sm, generalized_eig(a, sm.m_sym)


@pytest.fixture(scope="session")
def block_adv8():
    bs = build_block(advdiff_2d(8))
    sm = kaczmarz_smoother(bs.block)
    return bs, sm, generalized_eig(bs.block, sm.m_sym)


@pytest.fixture(scope="session")
def block_random8():
    bs = build_block(random_nonsym(8, 0.3, 11))
    sm = kaczmarz_smoother(bs.block)
    return bs, sm, generalized_eig(bs.block, sm.m_sym)
